#pragma once

#include "spqcnn/circuit.hpp"
#include "spqcnn/rng.hpp"
#include "spqcnn/statevector.hpp"

#include <memory>
#include <set>
#include <vector>

namespace spqcnn {

// The smallest piece of one slot that can be two-point shifted in a single
// circuit pair: the k-th occurrence of the slot inside each branch that
// carries it, taken across all branches of the slot's layer. Occurrences
// with equal k live in disjoint branches, so shifting them together keeps
// every single-qubit readout exact (each qubit's lightcone crosses at most
// one of them); occurrences with different k inside one branch must shift
// separately. Tail rotations form singleton units.
struct ShiftUnit {
    int slot = 0;
    int occurrence = 0; // within-branch index k
    int layer = 0;
    std::vector<int> positions; // gate positions shifted together
    std::set<int> affected;     // union of the owning branches' qubits
};

// Units evaluated in one circuit pair; members have disjoint affected sets,
// so per-qubit readouts attribute cleanly to exactly one unit.
struct ShiftGroup {
    std::vector<int> units; // indices into the unit list
    std::set<int> affected;
};

struct ShotLedger {
    int circuits = 0;
    long long total_shots = 0;
    std::vector<int> shots_per_circuit; // index 0 = unshifted circuit
};

struct GradientEstimate {
    std::vector<double> gradient; // d<O>/d theta, one entry per slot
    double observable = 0.0;      // <O> at the unshifted parameters
    ShotLedger ledger;
};

enum class GradientMode { Sp, Randomized };

std::vector<ShiftUnit> enumerate_shift_units(const CircuitIR& circuit);

// Greedy first-fit packing in (layer, slot, occurrence) order; a unit joins
// the first group whose affected set it does not intersect.
std::vector<ShiftGroup> pack_shift_groups(const std::vector<ShiftUnit>& units);
std::vector<ShiftGroup> pack_shift_groups(const CircuitIR& circuit);

// Exact derivative of <O> with respect to one slot: the sum over every gate
// carrying the slot of sign * (f(a + pi/4) - f(a - pi/4)), each term from
// its own full-circuit pair. The slow reference path.
double shift_gradient_exact(const CircuitIR& circuit, const std::vector<double>& theta, const StateVector& input,
                            const Observable& o, int slot);

// Shared evaluation plan for exact and shot-sampled gradients: shift units
// are packed into groups, each group costs one circuit pair, and per-qubit
// readouts restricted to each unit's affected set recover the per-slot
// derivatives. The compiled circuit and the packing are built once.
class GradientEngine {
  public:
    GradientEngine(const CircuitIR& circuit, Observable o);
    ~GradientEngine();
    GradientEngine(const GradientEngine&) = delete;
    GradientEngine& operator=(const GradientEngine&) = delete;

    const std::vector<ShiftUnit>& units() const;
    const std::vector<ShiftGroup>& groups(GradientMode mode) const;
    // 1 + 2 * group count: the circuits one evaluation runs.
    int circuit_count(GradientMode mode) const;

    GradientEstimate exact(const std::vector<double>& theta, const StateVector& input) const;

    // total_shot_budget is spread over the circuits as floor(budget / count)
    // each, the first (budget mod count) circuits taking one extra; the
    // unshifted circuit comes first and supplies the <O> estimate. Sp mode
    // reads full bitstrings per shot; randomized mode reads one uniformly
    // drawn qubit per shot and runs one circuit pair per unit (no packing).
    GradientEstimate sampled(const std::vector<double>& theta, const StateVector& input, long long total_shot_budget,
                             Rng& rng, GradientMode mode) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// One-shot conveniences wrapping a temporary engine.
GradientEstimate gradient_exact(const CircuitIR& circuit, const std::vector<double>& theta, const StateVector& input,
                                const Observable& o);
GradientEstimate estimate_gradient(const CircuitIR& circuit, const std::vector<double>& theta,
                                   const StateVector& input, const Observable& o, long long total_shot_budget,
                                   Rng& rng, GradientMode mode);

} // namespace spqcnn
