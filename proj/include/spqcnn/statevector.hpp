#pragma once

#include "spqcnn/circuit.hpp"
#include "spqcnn/perm.hpp"

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace spqcnn {

// Dense 2^n state, qubit q = bit q of the amplitude index.
class StateVector {
  public:
    StateVector() = default;
    explicit StateVector(int n); // |0...0>
    static StateVector from_amplitudes(std::vector<std::complex<double>> amps);

    int n() const { return n_; }
    size_t dim() const { return amps_.size(); }
    const std::vector<std::complex<double>>& amplitudes() const { return amps_; }
    std::complex<double>& amp(size_t i) { return amps_[i]; }
    const std::complex<double>& amp(size_t i) const { return amps_[i]; }

    double norm_sq() const;

    void apply_rx(int q, double angle);            // e^{-i angle X}
    void apply_rz(int q, double angle);            // e^{-i angle Z}
    void apply_rzz(int q0, int q1, double angle);  // e^{-i angle ZZ}
    void apply_h(int q);
    void apply_1q(int q, const std::array<std::complex<double>, 4>& m); // row-major 2x2
    void apply_permutation(const Permutation& g);  // out bit g(j) = in bit j

  private:
    int n_ = 0;
    std::vector<std::complex<double>> amps_;
};

void apply_gate(StateVector& state, const Gate& gate, double angle);

// Applies the circuit with shared slots resolved; gate_shift, when given,
// adds an extra angle to specific gate positions (the parameter-shift
// overlay).
void apply_circuit(StateVector& state, const CircuitIR& circuit, const std::vector<double>& theta,
                   const std::vector<std::pair<int, double>>* gate_shift = nullptr);

double pauli_expectation(const StateVector& state, int q, Pauli p);
double exact_expectation(const StateVector& state, const Observable& o);

// Dense unitary of the whole circuit (layer = -1) or of one layer's gates.
Eigen::MatrixXcd dense_unitary(const CircuitIR& circuit, const std::vector<double>& theta, int layer = -1);

Eigen::MatrixXcd permutation_unitary(const Permutation& g);

// Cumulative probability table of the state in the measurement basis implied
// by the observable (X/Y terms are rotated to Z); sample_bitstring draws one
// basis index from it.
std::vector<double> measurement_cdf(StateVector rotated); // consumes a pre-rotated copy
StateVector rotate_to_measurement_basis(const StateVector& state, const Observable& o);
size_t sample_bitstring(const std::vector<double>& cdf, double u);

} // namespace spqcnn
