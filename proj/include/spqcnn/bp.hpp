#pragma once

#include "spqcnn/circuit.hpp"
#include "spqcnn/rng.hpp"

#include <vector>

namespace spqcnn {

// Monte Carlo statistics of C_j = <X_j> and C = (1/n) sum_j C_j over
// uniformly random parameters on a fixed circuit from the zero state.
struct BpPoint {
    int n = 0;
    int samples = 0;
    std::vector<double> mean_c;    // E[C_j] per qubit
    std::vector<double> se_c;      // Monte Carlo standard error per qubit
    double max_mean_sigmas = 0.0;  // max_j |E[C_j]| / se
    // Upper-triangle cross moments E[C_j C_k], j < k, row-major.
    std::vector<double> mean_cc;
    std::vector<double> se_cc;
    double max_cross_sigmas = 0.0;
    double var_c = 0.0; // Var[C]
};

struct BpScan {
    BpPoint small; // n = 4
    BpPoint large; // n = 8
    double fitted_exponent = 0.0; // c in Var ~ n^-c from the two points
};

// samples draws of theta ~ U[0, 2pi) per slot; exact expectations.
BpPoint bp_point(const CircuitIR& circuit, int samples, Rng& rng);

// Ring circuits with halving plans and tail rotations at n = 4 (3 layers)
// and n = 8 (4 layers), depth 1 per layer.
BpScan bp_scan(int samples, uint64_t seed);

} // namespace spqcnn
