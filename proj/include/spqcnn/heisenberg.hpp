#pragma once

#include "spqcnn/rng.hpp"
#include "spqcnn/statevector.hpp"

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace spqcnn {

enum class BondClass { A, B, C };

struct Bond {
    int j = 0;
    int k = 0;
    BondClass cls = BondClass::A;
};

// Antiferromagnetic Heisenberg model on the 2x2x2 cube with bond-dependent
// couplings: A = top-face cycle, C = bottom-face cycle, B = verticals. The
// two task classes differ only in the sign of the vertical coupling.
struct HeisenbergSpec {
    std::vector<Bond> bonds;
    double j_a = 1.0;
    double j_b = 1.5;
    double j_c = 1.3;
    int mu = 1; // class index; mu = 2 flips the B coupling sign

    static HeisenbergSpec cube(int mu);
    double coupling(BondClass cls) const;
};

// Sum over bonds of J (X_j X_k + Y_j Y_k + Z_j Z_k), dense 2^n x 2^n.
Eigen::MatrixXcd build_hamiltonian(const HeisenbergSpec& spec);

struct GroundState {
    StateVector state;
    double energy = 0.0;
    double gap = 0.0; // E1 - E0
};

// Lowest eigenpair of a Hermitian matrix; the global phase is fixed by
// making the largest-magnitude amplitude real positive.
GroundState ground_state(const Eigen::MatrixXcd& h, double gap_tol = 1e-8);

struct NoisyState {
    StateVector state;
    int label = 0;
    std::vector<std::array<double, 3>> axes;
    std::vector<double> angles;
};

// Per qubit: axis uniform on the sphere, angle from N(0, (gamma pi/2)^2),
// applied as e^{+i eps (n . sigma)} = cos(eps) I + i sin(eps) (n . sigma).
// Draw order per qubit: axis, then angle, qubits ascending.
NoisyState sample_noisy_state(const StateVector& base, double gamma, Rng& rng);

// Ground states of the two demo Hamiltonians.
struct TaskStates {
    StateVector psi1;
    StateVector psi2;
    double gap1 = 0.0;
    double gap2 = 0.0;
};
TaskStates demo_ground_states(double gap_tol = 1e-8);

// n_t noisy samples of psi1 labeled 1, then n_t of psi2 labeled 0.
std::vector<NoisyState> make_dataset(const StateVector& psi1, const StateVector& psi2, int n_t, double gamma,
                                     Rng& rng);
// Convenience over the demo ground states with a keyed stream.
std::vector<NoisyState> make_dataset(int n_t, double gamma, uint64_t seed);

} // namespace spqcnn
