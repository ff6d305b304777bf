#pragma once

#include "spqcnn/group.hpp"

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace spqcnn {

// One layer's (H_lambda, P_lambda) pairs. Branches are generated per coset of
// each H_lambda acting on its P_lambda.
struct LayerEntry {
    FiniteGroup subgroup;
    std::set<int> subset;
};

struct LayerSpec {
    std::vector<LayerEntry> entries;
};

struct Branch {
    std::set<int> qubits;
    int layer = 0;       // 0-based layer index
    int lambda = 0;      // 0-based entry index
    int coset_index = 0; // 0-based canonical coset index
};

struct PlanLayer {
    std::optional<LayerSpec> spec; // absent for hand-written branch lists
    std::vector<Branch> branches;
};

struct SplitPlan {
    int n = 0;
    FiniteGroup group;
    std::vector<PlanLayer> layers; // layer 0 is the shallowest
};

// One requirement check outcome; witness is empty when the check passes.
struct ValidationEntry {
    int layer = 0;
    std::string requirement; // g_invariance | partition_disjoint | partition_cover | no_merge | coset_consistency
    bool pass = true;
    std::string witness;
};

struct ValidationReport {
    bool pass = true;
    std::vector<ValidationEntry> entries;
    std::string summary() const;
};

// One branch per coset of each entry's subgroup; branch qubits are the coset
// image of the entry's subset.
std::vector<Branch> build_branches(const FiniteGroup& G, const LayerSpec& spec, int layer_index = 0);

// Checks every splitting requirement on every layer and reports all
// violations with witnesses: branch-family G-invariance, per-layer partition
// (disjoint + covering), no merging between adjacent layers, and coset
// consistency for layers that carry their (H, P) provenance.
ValidationReport validate_plan(const SplitPlan& plan);

struct MergeOp {
    int lambda_a = 0, lambda_b = 0;
};
struct EnlargeOp {
    int lambda = 0;
    FiniteGroup to;
};
using RefineOp = std::variant<MergeOp, EnlargeOp>;

// Applies merge/enlarge steps to the deeper layer's spec, producing the
// shallower layer's spec. Merging requires equal subgroups, enlarging a
// supergroup. Op indices refer to the entry list as it stands when the op is
// applied; a merge erases the higher-indexed entry.
LayerSpec refine_layer(const LayerSpec& spec_next, const std::vector<RefineOp>& ops);

// A candidate (H, q) pairing for seeding the final layer.
struct SeedCandidate {
    FiniteGroup subgroup;
    int qubit = 0;
};

// Final-layer spec whose combined subset holds one well-behaved qubit per
// G-orbit. With no explicit candidates, picks the minimal qubit of each orbit
// and the single subgroup generated by all their stabilizers (one entry).
// Explicit candidates are honored orbit by orbit (first well-behaved
// candidate in input order wins), one entry per orbit.
LayerSpec seed_final_layer(const FiniteGroup& G, const std::vector<SeedCandidate>& candidates = {});

// Builds an L-layer plan backward from the given final-layer spec by
// refine_layer steps, ending at a single branch (H = G) in the shallowest
// layer. Each backward step merges equal-subgroup entries if any exist;
// otherwise it enlarges every entry to its largest proper supergroup within
// G (largest first so the single-branch layer is reached soonest).
SplitPlan plan_from_seed(const FiniteGroup& G, int L, const LayerSpec& seed);

// plan_from_seed over the default seed_final_layer(G).
SplitPlan auto_split(const FiniteGroup& G, int L);

} // namespace spqcnn
