#pragma once

#include "spqcnn/circuit.hpp"
#include "spqcnn/rng.hpp"
#include "spqcnn/statevector.hpp"

#include <vector>

namespace spqcnn {

struct ShotEstimate {
    double mean = 0.0;
    int shots = 0;
    int per_qubit_outcomes_used = 0; // outcomes consumed per shot
};

struct EfficiencyReport {
    double v_sp = 0.0;
    double v_rand = 0.0;
    double r = 0.0; // v_rand / v_sp; infinity flagged when v_sp is 0
    bool r_infinite = false;
    int batches = 0;
    int shots_per_batch = 0;
    std::vector<double> sp_means;   // per-batch estimates
    std::vector<double> rand_means;
};

// Full-bitstring readout: every shot samples all qubits in the observable's
// basis and uses every term's outcome.
ShotEstimate estimate_sp(const StateVector& state_out, const Observable& o, int shots, Rng& rng);

// One random qubit per shot: the per-shot value is n * c_i * outcome_i
// (zero-coefficient qubits contribute zero), whose mean is unbiased for the
// same expectation. via_lightcones evolves the backward-lightcone subcircuit
// of the drawn qubit instead of the precomputed output state (the slow
// cross-check path).
ShotEstimate estimate_randomized(const CircuitIR& circuit, const std::vector<double>& theta, const StateVector& input,
                                 const Observable& o, int shots, Rng& rng, bool via_lightcones = false);

// Empirical batch variances of the two estimators on one fixed circuit
// output; r is their ratio.
EfficiencyReport efficiency_ratio(const CircuitIR& circuit, const std::vector<double>& theta, const StateVector& input,
                                  const Observable& o, int shots_per_batch, int batches, Rng& rng);

} // namespace spqcnn
