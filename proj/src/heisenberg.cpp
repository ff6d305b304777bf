#include "spqcnn/heisenberg.hpp"

#include "spqcnn/error.hpp"

#include <cmath>
#include <complex>

namespace spqcnn {

namespace {

using cd = std::complex<double>;

constexpr double kHalfPi = 1.57079632679489661923;

} // namespace

HeisenbergSpec HeisenbergSpec::cube(int mu) {
    if (mu != 1 && mu != 2) throw ConstructionError("class index must be 1 or 2");
    HeisenbergSpec spec;
    spec.mu = mu;
    spec.bonds = {
        {0, 1, BondClass::A}, {1, 3, BondClass::A}, {3, 2, BondClass::A}, {2, 0, BondClass::A},
        {4, 5, BondClass::C}, {5, 7, BondClass::C}, {7, 6, BondClass::C}, {6, 4, BondClass::C},
        {0, 4, BondClass::B}, {1, 5, BondClass::B}, {2, 6, BondClass::B}, {3, 7, BondClass::B},
    };
    return spec;
}

double HeisenbergSpec::coupling(BondClass cls) const {
    switch (cls) {
    case BondClass::A: return j_a;
    case BondClass::B: return mu == 1 ? j_b : -j_b;
    case BondClass::C: return j_c;
    }
    return 0.0;
}

Eigen::MatrixXcd build_hamiltonian(const HeisenbergSpec& spec) {
    int n = 0;
    for (const auto& b : spec.bonds) n = std::max({n, b.j + 1, b.k + 1});
    const size_t dim = size_t(1) << n;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& b : spec.bonds) {
        if (b.j == b.k) throw ConstructionError("bond endpoints must differ");
        const double coupling = spec.coupling(b.cls);
        const size_t mj = size_t(1) << b.j;
        const size_t mk = size_t(1) << b.k;
        for (size_t c = 0; c < dim; ++c) {
            const size_t flipped = c ^ mj ^ mk;
            // X_j X_k: pure bit flips.
            h(flipped, c) += coupling;
            // Y_j Y_k: flips with i factors (Y|0> = i|1>, Y|1> = -i|0>).
            const cd yj = (c & mj) ? cd(0, -1) : cd(0, 1);
            const cd yk = (c & mk) ? cd(0, -1) : cd(0, 1);
            h(flipped, c) += coupling * yj * yk;
            // Z_j Z_k: diagonal signs.
            const double zj = (c & mj) ? -1.0 : 1.0;
            const double zk = (c & mk) ? -1.0 : 1.0;
            h(c, c) += coupling * zj * zk;
        }
    }
    return h;
}

GroundState ground_state(const Eigen::MatrixXcd& h, double gap_tol) {
    if (h.rows() != h.cols()) throw DimensionError("hamiltonian must be square");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) throw ConstructionError("eigensolver failed");
    const auto& evals = solver.eigenvalues();
    GroundState gs;
    gs.energy = evals(0);
    gs.gap = evals(1) - evals(0);
    if (gs.gap < gap_tol) throw DegeneracyError("ground state is degenerate within tolerance");

    Eigen::VectorXcd v = solver.eigenvectors().col(0);
    // Deterministic global phase: largest-magnitude amplitude real positive.
    size_t imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::norm(v(i)) > best) {
            best = std::norm(v(i));
            imax = size_t(i);
        }
    }
    const cd phase = v(imax) / std::abs(v(imax));
    v /= phase;
    v.normalize();
    gs.state = StateVector::from_amplitudes(std::vector<cd>(v.data(), v.data() + v.size()));
    return gs;
}

NoisyState sample_noisy_state(const StateVector& base, double gamma, Rng& rng) {
    if (gamma < 0.0) throw ConstructionError("noise level must be nonnegative");
    NoisyState out;
    out.state = base;
    const double sigma = gamma * kHalfPi;
    for (int q = 0; q < base.n(); ++q) {
        const auto axis = rng.sphere();
        const double eps = sigma * rng.normal();
        out.axes.push_back(axis);
        out.angles.push_back(eps);
        const double c = std::cos(eps);
        const double s = std::sin(eps);
        // cos(eps) I + i sin(eps) (n . sigma)
        const std::array<cd, 4> m = {
            cd(c, s * axis[2]),
            cd(s * axis[1], s * axis[0]),
            cd(-s * axis[1], s * axis[0]),
            cd(c, -s * axis[2]),
        };
        out.state.apply_1q(q, m);
    }
    return out;
}

std::vector<NoisyState> make_dataset(const StateVector& psi1, const StateVector& psi2, int n_t, double gamma,
                                     Rng& rng) {
    if (n_t < 1) throw DimensionError("at least one pair required");
    std::vector<NoisyState> data;
    data.reserve(size_t(2 * n_t));
    for (int i = 0; i < n_t; ++i) {
        auto s = sample_noisy_state(psi1, gamma, rng);
        s.label = 1;
        data.push_back(std::move(s));
    }
    for (int i = 0; i < n_t; ++i) {
        auto s = sample_noisy_state(psi2, gamma, rng);
        s.label = 0;
        data.push_back(std::move(s));
    }
    return data;
}

TaskStates demo_ground_states(double gap_tol) {
    TaskStates ts;
    auto g1 = ground_state(build_hamiltonian(HeisenbergSpec::cube(1)), gap_tol);
    auto g2 = ground_state(build_hamiltonian(HeisenbergSpec::cube(2)), gap_tol);
    ts.psi1 = std::move(g1.state);
    ts.psi2 = std::move(g2.state);
    ts.gap1 = g1.gap;
    ts.gap2 = g2.gap;
    return ts;
}

std::vector<NoisyState> make_dataset(int n_t, double gamma, uint64_t seed) {
    auto ts = demo_ground_states();
    Rng rng = Rng::keyed(seed, "dataset");
    return make_dataset(ts.psi1, ts.psi2, n_t, gamma, rng);
}

} // namespace spqcnn
