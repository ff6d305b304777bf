#include "spqcnn/shot_engine.hpp"

#include "spqcnn/error.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace spqcnn {

namespace {

// Per-qubit coefficient of the (single) term on each qubit.
std::vector<double> term_coefficients(const Observable& o, int n) {
    std::vector<double> c(n, 0.0);
    std::vector<bool> seen(n, false);
    for (const auto& t : o.terms) {
        if (t.qubit < 0 || t.qubit >= n) throw IndexError("observable qubit out of range");
        if (seen[t.qubit]) throw ConstructionError("one term per qubit expected");
        seen[t.qubit] = true;
        c[t.qubit] = t.coeff;
    }
    return c;
}

// P(outcome -1) per qubit, i.e. the measured bit being set, from a
// basis-rotated state.
std::vector<double> set_bit_probabilities(const StateVector& rotated) {
    std::vector<double> p(rotated.n(), 0.0);
    for (size_t i = 0; i < rotated.dim(); ++i) {
        double w = std::norm(rotated.amp(i));
        if (w == 0.0) continue;
        for (int q = 0; q < rotated.n(); ++q)
            if (i & (size_t(1) << q)) p[q] += w;
    }
    return p;
}

ShotEstimate randomized_from_probabilities(const std::vector<double>& p_set, const std::vector<double>& coeff,
                                           double scale, int n, int shots, Rng& rng) {
    if (shots < 1) throw DimensionError("at least one shot required");
    double acc = 0.0;
    for (int s = 0; s < shots; ++s) {
        int q = int(rng.uniform_int(uint64_t(n)));
        double outcome = rng.uniform() < p_set[q] ? -1.0 : 1.0;
        acc += double(n) * coeff[q] * outcome;
    }
    ShotEstimate est;
    est.mean = scale * acc / shots;
    est.shots = shots;
    est.per_qubit_outcomes_used = 1;
    return est;
}

} // namespace

ShotEstimate estimate_sp(const StateVector& state_out, const Observable& o, int shots, Rng& rng) {
    if (shots < 1) throw DimensionError("at least one shot required");
    const int n = state_out.n();
    auto coeff = term_coefficients(o, n);
    auto cdf = measurement_cdf(rotate_to_measurement_basis(state_out, o));
    const double scale = o.scale(n);

    double acc = 0.0;
    for (int s = 0; s < shots; ++s) {
        size_t idx = sample_bitstring(cdf, rng.uniform());
        double value = 0.0;
        for (const auto& t : o.terms) value += t.coeff * ((idx >> t.qubit) & 1 ? -1.0 : 1.0);
        acc += value;
    }
    ShotEstimate est;
    est.mean = scale * acc / shots;
    est.shots = shots;
    est.per_qubit_outcomes_used = int(o.terms.size());
    return est;
}

ShotEstimate estimate_randomized(const CircuitIR& circuit, const std::vector<double>& theta, const StateVector& input,
                                 const Observable& o, int shots, Rng& rng, bool via_lightcones) {
    const int n = circuit.n;
    auto coeff = term_coefficients(o, n);
    const double scale = o.scale(n);

    std::vector<double> p_set(n, 0.0);
    if (via_lightcones) {
        for (int q = 0; q < n; ++q) {
            StateVector psi = input;
            apply_circuit(psi, backward_lightcone(circuit, q), theta);
            p_set[q] = set_bit_probabilities(rotate_to_measurement_basis(psi, o))[q];
        }
    } else {
        StateVector psi = input;
        apply_circuit(psi, circuit, theta);
        p_set = set_bit_probabilities(rotate_to_measurement_basis(psi, o));
    }
    return randomized_from_probabilities(p_set, coeff, scale, n, shots, rng);
}

EfficiencyReport efficiency_ratio(const CircuitIR& circuit, const std::vector<double>& theta, const StateVector& input,
                                  const Observable& o, int shots_per_batch, int batches, Rng& rng) {
    if (batches < 2) throw DimensionError("at least two batches required");
    const int n = circuit.n;
    auto coeff = term_coefficients(o, n);
    const double scale = o.scale(n);

    StateVector out = input;
    apply_circuit(out, circuit, theta);
    auto rotated = rotate_to_measurement_basis(out, o);
    auto cdf = measurement_cdf(rotated);
    auto p_set = set_bit_probabilities(rotated);

    std::vector<double> sp_means(batches), rand_means(batches);
    for (int b = 0; b < batches; ++b) {
        double acc = 0.0;
        for (int s = 0; s < shots_per_batch; ++s) {
            size_t idx = sample_bitstring(cdf, rng.uniform());
            double value = 0.0;
            for (const auto& t : o.terms) value += t.coeff * ((idx >> t.qubit) & 1 ? -1.0 : 1.0);
            acc += value;
        }
        sp_means[b] = scale * acc / shots_per_batch;
        rand_means[b] = randomized_from_probabilities(p_set, coeff, scale, n, shots_per_batch, rng).mean;
    }

    auto sample_variance = [](const std::vector<double>& xs) {
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= double(xs.size());
        double acc = 0.0;
        for (double x : xs) acc += (x - mean) * (x - mean);
        return acc / double(xs.size() - 1);
    };

    EfficiencyReport rep;
    rep.v_sp = sample_variance(sp_means);
    rep.v_rand = sample_variance(rand_means);
    rep.batches = batches;
    rep.shots_per_batch = shots_per_batch;
    rep.sp_means = std::move(sp_means);
    rep.rand_means = std::move(rand_means);
    if (rep.v_sp > 0.0) {
        rep.r = rep.v_rand / rep.v_sp;
    } else {
        rep.r = std::numeric_limits<double>::infinity();
        rep.r_infinite = true;
    }
    return rep;
}

} // namespace spqcnn
