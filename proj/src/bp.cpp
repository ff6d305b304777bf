#include "spqcnn/bp.hpp"

#include "spqcnn/error.hpp"
#include "spqcnn/presets.hpp"
#include "spqcnn/statevector.hpp"

#include <cmath>

namespace spqcnn {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

} // namespace

BpPoint bp_point(const CircuitIR& circuit, int samples, Rng& rng) {
    if (samples < 2) throw DimensionError("at least two samples required");
    if (circuit.n > 12) throw CapacityError("dense scan capped at 12 qubits");
    const int n = circuit.n;
    const int pairs = n * (n - 1) / 2;

    std::vector<double> sum_c(n, 0.0), sum_c2(n, 0.0);
    std::vector<double> sum_cc(pairs, 0.0), sum_cc2(pairs, 0.0);
    double sum_mean = 0.0, sum_mean2 = 0.0;

    std::vector<double> theta(circuit.n_slots);
    std::vector<double> c(n);
    for (int s = 0; s < samples; ++s) {
        for (auto& t : theta) t = rng.uniform(0.0, kTwoPi);
        StateVector psi(n);
        apply_circuit(psi, circuit, theta);
        double mean = 0.0;
        for (int q = 0; q < n; ++q) {
            c[q] = pauli_expectation(psi, q, Pauli::X);
            sum_c[q] += c[q];
            sum_c2[q] += c[q] * c[q];
            mean += c[q];
        }
        mean /= double(n);
        sum_mean += mean;
        sum_mean2 += mean * mean;
        int p = 0;
        for (int j = 0; j < n; ++j) {
            for (int k = j + 1; k < n; ++k, ++p) {
                const double v = c[j] * c[k];
                sum_cc[p] += v;
                sum_cc2[p] += v * v;
            }
        }
    }

    auto standard_error = [samples](double sum, double sum2) {
        const double mean = sum / samples;
        const double var = std::max(0.0, sum2 / samples - mean * mean) * double(samples) / double(samples - 1);
        return std::sqrt(var / samples);
    };

    BpPoint pt;
    pt.n = n;
    pt.samples = samples;
    for (int q = 0; q < n; ++q) {
        pt.mean_c.push_back(sum_c[q] / samples);
        pt.se_c.push_back(standard_error(sum_c[q], sum_c2[q]));
        if (pt.se_c[q] > 0.0)
            pt.max_mean_sigmas = std::max(pt.max_mean_sigmas, std::abs(pt.mean_c[q]) / pt.se_c[q]);
    }
    for (int p = 0; p < pairs; ++p) {
        pt.mean_cc.push_back(sum_cc[p] / samples);
        pt.se_cc.push_back(standard_error(sum_cc[p], sum_cc2[p]));
        if (pt.se_cc[p] > 0.0)
            pt.max_cross_sigmas = std::max(pt.max_cross_sigmas, std::abs(pt.mean_cc[p]) / pt.se_cc[p]);
    }
    const double mc = sum_mean / samples;
    pt.var_c = std::max(0.0, sum_mean2 / samples - mc * mc) * double(samples) / double(samples - 1);
    return pt;
}

BpScan bp_scan(int samples, uint64_t seed) {
    auto ring_circuit = [](int n, int layers) {
        const SplitPlan plan = ring_halving_plan(n, layers);
        return with_final_rotations(build_ring_ansatz(plan, std::vector<int>(size_t(layers), 1)));
    };
    BpScan scan;
    Rng rng_small = Rng::keyed(seed, "bp", 4);
    Rng rng_large = Rng::keyed(seed, "bp", 8);
    scan.small = bp_point(ring_circuit(4, 3), samples, rng_small);
    scan.large = bp_point(ring_circuit(8, 4), samples, rng_large);
    // Var ~ n^-c through the two points: n doubles, so c = log2(ratio).
    scan.fitted_exponent = std::log2(scan.small.var_c / scan.large.var_c);
    return scan;
}

} // namespace spqcnn
