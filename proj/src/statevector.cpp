#include "spqcnn/statevector.hpp"

#include "spqcnn/error.hpp"

#include <algorithm>
#include <cmath>

namespace spqcnn {

namespace {
constexpr int kMaxQubits = 20;
using cd = std::complex<double>;
} // namespace

StateVector::StateVector(int n) : n_(n) {
    if (n < 1 || n > kMaxQubits) throw CapacityError("qubit count outside supported range");
    amps_.assign(size_t(1) << n, cd(0.0, 0.0));
    amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<cd> amps) {
    int n = 0;
    while ((size_t(1) << n) < amps.size()) ++n;
    if ((size_t(1) << n) != amps.size() || n < 1 || n > kMaxQubits)
        throw DimensionError("amplitude count is not a supported power of two");
    StateVector s(n);
    s.amps_ = std::move(amps);
    return s;
}

double StateVector::norm_sq() const {
    double acc = 0.0;
    for (const auto& a : amps_) acc += std::norm(a);
    return acc;
}

void StateVector::apply_rx(int q, double angle) {
    if (q < 0 || q >= n_) throw IndexError("qubit index out of range");
    const double c = std::cos(angle), s = std::sin(angle);
    const cd mis(0.0, -s);
    const size_t mask = size_t(1) << q;
    for (size_t i = 0; i < amps_.size(); ++i) {
        if (i & mask) continue;
        cd a0 = amps_[i], a1 = amps_[i | mask];
        amps_[i] = c * a0 + mis * a1;
        amps_[i | mask] = c * a1 + mis * a0;
    }
}

void StateVector::apply_rz(int q, double angle) {
    if (q < 0 || q >= n_) throw IndexError("qubit index out of range");
    const cd p0 = std::polar(1.0, -angle), p1 = std::polar(1.0, angle);
    const size_t mask = size_t(1) << q;
    for (size_t i = 0; i < amps_.size(); ++i) amps_[i] *= (i & mask) ? p1 : p0;
}

void StateVector::apply_rzz(int q0, int q1, double angle) {
    if (q0 < 0 || q0 >= n_ || q1 < 0 || q1 >= n_ || q0 == q1)
        throw IndexError("two distinct in-range qubits required");
    const cd even = std::polar(1.0, -angle), odd = std::polar(1.0, angle);
    const size_t m0 = size_t(1) << q0, m1 = size_t(1) << q1;
    for (size_t i = 0; i < amps_.size(); ++i) {
        bool parity = bool(i & m0) != bool(i & m1);
        amps_[i] *= parity ? odd : even;
    }
}

void StateVector::apply_h(int q) {
    static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    apply_1q(q, {cd(inv_sqrt2), cd(inv_sqrt2), cd(inv_sqrt2), cd(-inv_sqrt2)});
}

void StateVector::apply_1q(int q, const std::array<cd, 4>& m) {
    if (q < 0 || q >= n_) throw IndexError("qubit index out of range");
    const size_t mask = size_t(1) << q;
    for (size_t i = 0; i < amps_.size(); ++i) {
        if (i & mask) continue;
        cd a0 = amps_[i], a1 = amps_[i | mask];
        amps_[i] = m[0] * a0 + m[1] * a1;
        amps_[i | mask] = m[2] * a0 + m[3] * a1;
    }
}

void StateVector::apply_permutation(const Permutation& g) {
    if (g.n() != n_) throw DimensionError("permutation size mismatch");
    if (g.is_identity()) return;
    std::vector<cd> out(amps_.size());
    for (size_t i = 0; i < amps_.size(); ++i) {
        size_t j = 0;
        for (int b = 0; b < n_; ++b)
            if (i & (size_t(1) << b)) j |= size_t(1) << g(b);
        out[j] = amps_[i];
    }
    amps_ = std::move(out);
}

void apply_gate(StateVector& state, const Gate& gate, double angle) {
    switch (gate.kind) {
        case GateKind::RX: state.apply_rx(gate.q0, angle); break;
        case GateKind::RZ: state.apply_rz(gate.q0, angle); break;
        case GateKind::RZZ: state.apply_rzz(gate.q0, gate.q1, angle); break;
    }
}

void apply_circuit(StateVector& state, const CircuitIR& circuit, const std::vector<double>& theta,
                   const std::vector<std::pair<int, double>>* gate_shift) {
    if (int(theta.size()) != circuit.n_slots) throw DimensionError("parameter count does not match slot count");
    if (state.n() != circuit.n) throw DimensionError("state size does not match circuit");
    for (int p = 0; p < int(circuit.gates.size()); ++p) {
        const Gate& g = circuit.gates[p];
        double angle = g.sign * theta[g.slot];
        if (gate_shift)
            for (const auto& [pos, delta] : *gate_shift)
                if (pos == p) angle += delta;
        apply_gate(state, g, angle);
    }
}

double pauli_expectation(const StateVector& state, int q, Pauli p) {
    if (q < 0 || q >= state.n()) throw IndexError("qubit index out of range");
    const auto& a = state.amplitudes();
    const size_t mask = size_t(1) << q;
    double acc = 0.0;
    switch (p) {
        case Pauli::Z:
            for (size_t i = 0; i < a.size(); ++i) acc += (i & mask) ? -std::norm(a[i]) : std::norm(a[i]);
            break;
        case Pauli::X:
            for (size_t i = 0; i < a.size(); ++i)
                if (!(i & mask)) acc += 2.0 * std::real(std::conj(a[i]) * a[i | mask]);
            break;
        case Pauli::Y:
            for (size_t i = 0; i < a.size(); ++i)
                if (!(i & mask)) acc += 2.0 * std::imag(std::conj(a[i]) * a[i | mask]);
            break;
    }
    return acc;
}

double exact_expectation(const StateVector& state, const Observable& o) {
    double acc = 0.0;
    for (const auto& t : o.terms) acc += t.coeff * pauli_expectation(state, t.qubit, t.pauli);
    return acc * o.scale(state.n());
}

Eigen::MatrixXcd dense_unitary(const CircuitIR& circuit, const std::vector<double>& theta, int layer) {
    if (circuit.n > 12) throw CapacityError("dense unitary limited to 12 qubits");
    if (int(theta.size()) != circuit.n_slots) throw DimensionError("parameter count does not match slot count");
    const size_t dim = size_t(1) << circuit.n;
    Eigen::MatrixXcd u(dim, dim);
    for (size_t col = 0; col < dim; ++col) {
        StateVector basis(circuit.n);
        basis.amp(0) = 0.0;
        basis.amp(col) = 1.0;
        for (const auto& g : circuit.gates) {
            if (layer >= 0 && g.layer != layer) continue;
            apply_gate(basis, g, g.sign * theta[g.slot]);
        }
        for (size_t row = 0; row < dim; ++row) u(row, col) = basis.amp(row);
    }
    return u;
}

Eigen::MatrixXcd permutation_unitary(const Permutation& g) {
    if (g.n() > 12) throw CapacityError("dense unitary limited to 12 qubits");
    const size_t dim = size_t(1) << g.n();
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
    for (size_t i = 0; i < dim; ++i) {
        size_t j = 0;
        for (int b = 0; b < g.n(); ++b)
            if (i & (size_t(1) << b)) j |= size_t(1) << g(b);
        u(j, i) = 1.0;
    }
    return u;
}

StateVector rotate_to_measurement_basis(const StateVector& state, const Observable& o) {
    std::vector<int> basis(state.n(), -1);
    for (const auto& t : o.terms) {
        int want = int(t.pauli);
        if (basis[t.qubit] >= 0 && basis[t.qubit] != want)
            throw ConstructionError("conflicting measurement bases on one qubit");
        basis[t.qubit] = want;
    }
    StateVector rotated = state;
    for (int q = 0; q < state.n(); ++q) {
        if (basis[q] == int(Pauli::X)) {
            rotated.apply_h(q);
        } else if (basis[q] == int(Pauli::Y)) {
            rotated.apply_1q(q, {cd(1.0), cd(0.0), cd(0.0), cd(0.0, -1.0)}); // S^dag
            rotated.apply_h(q);
        }
    }
    return rotated;
}

std::vector<double> measurement_cdf(StateVector rotated) {
    std::vector<double> cdf(rotated.dim());
    double acc = 0.0;
    for (size_t i = 0; i < rotated.dim(); ++i) {
        acc += std::norm(rotated.amp(i));
        cdf[i] = acc;
    }
    if (!cdf.empty()) cdf.back() = std::max(cdf.back(), 1.0); // guard the top edge
    return cdf;
}

size_t sample_bitstring(const std::vector<double>& cdf, double u) {
    auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) return cdf.size() - 1;
    return size_t(it - cdf.begin());
}

} // namespace spqcnn
