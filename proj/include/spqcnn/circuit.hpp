#pragma once

#include "spqcnn/split_plan.hpp"

#include <array>
#include <set>
#include <vector>

namespace spqcnn {

enum class GateKind { RX, RZ, RZZ };

enum class Pauli { X, Y, Z };

// One rotation gate e^{-i a P} with a = sign * theta[slot]. Every gate is
// owned by one branch of one plan layer; gates appended after the plan's
// layers (the per-qubit tail rotations) carry layer = layer count and
// branch = -1.
struct Gate {
    GateKind kind = GateKind::RX;
    int q0 = 0;
    int q1 = -1; // second qubit, RZZ only
    int slot = 0;
    double sign = 1.0;
    int layer = 0;
    int branch = 0;

    bool is_two_qubit() const { return kind == GateKind::RZZ; }
};

struct ObservableTerm {
    int qubit = 0;
    Pauli pauli = Pauli::X;
    double coeff = 1.0;
};

// Weighted sum of single-qubit Pauli terms, optionally divided by the qubit
// count.
struct Observable {
    std::vector<ObservableTerm> terms;
    bool normalize_by_n = false;

    static Observable sum_x(int n, bool normalized = false);
    double scale(int n) const { return normalize_by_n ? 1.0 / n : 1.0; }
};

struct CircuitIR {
    int n = 0;
    int n_slots = 0;
    SplitPlan plan;
    std::vector<Gate> gates; // application order

    int plan_layer_count() const { return int(plan.layers.size()); }
    // Sharing table: gate positions per slot.
    std::vector<std::vector<int>> slot_positions() const;
    // Branch index of the layer-l branch containing qubit q, -1 if none.
    int branch_of(int layer, int q) const;
};

// Qubit indices relabeled by g on every gate; slots, signs and tags are kept.
// Conjugating a branch seed by a coset representative is how sharing is
// propagated across branches.
std::vector<Gate> conjugate_branch(const std::vector<Gate>& gates, const Permutation& g);

// Closes the gate list under every h in H, acting within the given branch,
// and identifies slots along H-orbits of gate positions (k-th gate of a
// (kind, qubit set) class maps to the k-th gate of the image class). Grows
// the list as needed; a gate whose image leaves the branch is an error.
std::vector<Gate> symmetrize_seed(const std::vector<Gate>& gates, const FiniteGroup& H, const std::set<int>& branch);

// Subcircuit whose gates can influence qubit i: the nested branch chain
// containing i, plus any tail rotation on i itself.
CircuitIR backward_lightcone(const CircuitIR& circuit, int i);

// Same gate list with every gate given a fresh slot (parameter sharing
// removed); the non-equivariant variant.
CircuitIR strip_sharing(const CircuitIR& circuit);

// The three-layer cube ansatz on the 8-qubit demo plan: layer 1 couples all
// twelve cube bonds with three shared bond angles and two per-face rotation
// triples; layers 2 and 3 act branch-locally with slots shared across
// conjugate branches. depths[l] repeats layer l's depth unit.
CircuitIR build_d4_ansatz(const SplitPlan& plan, const std::array<int, 3>& depths);

// Translation-invariant ansatz on a ring plan from ring_halving_plan: per
// layer and depth unit, one shared rotation triple on every qubit and one
// shared bond angle on every intra-branch neighbor pair.
CircuitIR build_ring_ansatz(const SplitPlan& plan, const std::vector<int>& depths);

// Appends the per-qubit tail layer e^{-i alpha_j X_j} e^{-i beta_j Z_j} with
// fresh slots; returns the slot ranges via alpha_slots/beta_slots.
CircuitIR with_final_rotations(const CircuitIR& circuit, std::vector<int>* alpha_slots = nullptr,
                               std::vector<int>* beta_slots = nullptr);

// R-block plus two-qubit gate count (an RX,RZ,RX triple on one qubit counts
// once); the gate count the shot-budget formula uses.
int block_gate_count(const CircuitIR& circuit);

} // namespace spqcnn
