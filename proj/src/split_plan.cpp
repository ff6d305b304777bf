#include "spqcnn/split_plan.hpp"

#include "spqcnn/error.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace spqcnn {

namespace {

std::string set_to_string(const std::set<int>& s) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (int q : s) {
        if (!first) os << ',';
        os << q;
        first = false;
    }
    os << '}';
    return os.str();
}

std::string perm_to_string(const Permutation& g) {
    std::ostringstream os;
    os << '[';
    for (int i = 0; i < g.n(); ++i) {
        if (i) os << ',';
        os << g(i);
    }
    os << ']';
    return os.str();
}

std::vector<std::set<int>> sorted_family(const std::vector<Branch>& branches) {
    std::vector<std::set<int>> fam;
    fam.reserve(branches.size());
    for (const auto& b : branches) fam.push_back(b.qubits);
    std::sort(fam.begin(), fam.end());
    return fam;
}

} // namespace

std::string ValidationReport::summary() const {
    std::ostringstream os;
    for (const auto& e : entries) {
        os << "layer " << e.layer << ' ' << e.requirement << ": " << (e.pass ? "pass" : "FAIL");
        if (!e.pass && !e.witness.empty()) os << " (" << e.witness << ')';
        os << '\n';
    }
    os << (pass ? "plan valid" : "plan invalid") << '\n';
    return os.str();
}

std::vector<Branch> build_branches(const FiniteGroup& G, const LayerSpec& spec, int layer_index) {
    std::vector<Branch> out;
    for (int lambda = 0; lambda < int(spec.entries.size()); ++lambda) {
        const auto& entry = spec.entries[lambda];
        if (!entry.subgroup.is_subgroup_of(G))
            throw ContainmentError("layer entry subgroup is not contained in the ambient group");
        for (int q : entry.subset)
            if (q < 0 || q >= G.n()) throw IndexError("subset qubit out of range");
        auto cosets = left_cosets(G, entry.subgroup);
        for (int ci = 0; ci < int(cosets.size()); ++ci) {
            Branch b;
            b.layer = layer_index;
            b.lambda = lambda;
            b.coset_index = ci;
            for (const auto& g : cosets[ci].members)
                for (int q : entry.subset) b.qubits.insert(g(q));
            out.push_back(std::move(b));
        }
    }
    return out;
}

ValidationReport validate_plan(const SplitPlan& plan) {
    ValidationReport report;
    auto add = [&](int layer, const std::string& req, bool pass, const std::string& witness) {
        report.entries.push_back({layer, req, pass, witness});
        if (!pass) report.pass = false;
    };

    if (plan.group.n() != plan.n) {
        add(-1, "well_formed", false, "group acts on a different qubit count than the plan");
        return report;
    }
    if (plan.layers.empty()) {
        add(-1, "well_formed", false, "plan has no layers");
        return report;
    }

    const int L = int(plan.layers.size());
    for (int l = 0; l < L; ++l) {
        const auto& branches = plan.layers[l].branches;
        if (branches.empty()) {
            add(l, "well_formed", false, "layer has no branches");
            continue;
        }

        // Disjointness: no qubit owned by two branches of the same layer.
        {
            bool pass = true;
            std::string witness;
            std::map<int, int> owner;
            for (int bi = 0; bi < int(branches.size()) && pass; ++bi) {
                for (int q : branches[bi].qubits) {
                    if (q < 0 || q >= plan.n) {
                        pass = false;
                        witness = "qubit " + std::to_string(q) + " out of range";
                        break;
                    }
                    auto [it, inserted] = owner.emplace(q, bi);
                    if (!inserted) {
                        pass = false;
                        witness = "qubit " + std::to_string(q) + " lies in both " +
                                  set_to_string(branches[it->second].qubits) + " and " +
                                  set_to_string(branches[bi].qubits);
                        break;
                    }
                }
            }
            add(l, "partition_disjoint", pass, witness);
        }

        // Covering: every qubit owned by some branch.
        {
            std::set<int> covered;
            for (const auto& b : branches) covered.insert(b.qubits.begin(), b.qubits.end());
            bool pass = true;
            std::string witness;
            for (int q = 0; q < plan.n; ++q)
                if (!covered.count(q)) {
                    pass = false;
                    witness = "qubit " + std::to_string(q) + " is in no branch";
                    break;
                }
            add(l, "partition_cover", pass, witness);
        }

        // Invariance: each group element permutes the branch family.
        {
            auto family = sorted_family(branches);
            bool pass = true;
            std::string witness;
            for (const auto& g : plan.group.elements()) {
                std::vector<std::set<int>> image;
                image.reserve(family.size());
                for (const auto& q : family) image.push_back(apply_to_set(g, q));
                std::sort(image.begin(), image.end());
                if (image != family) {
                    pass = false;
                    for (const auto& q : family) {
                        auto img = apply_to_set(g, q);
                        if (!std::binary_search(family.begin(), family.end(), img)) {
                            witness = "g = " + perm_to_string(g) + " maps branch " + set_to_string(q) +
                                      " to " + set_to_string(img) + ", which is not a branch";
                            break;
                        }
                    }
                    break;
                }
            }
            add(l, "g_invariance", pass, witness);
        }

        // No merging: a deeper branch never straddles two shallower branches.
        if (l > 0) {
            const auto& shallow = plan.layers[l - 1].branches;
            bool pass = true;
            std::string witness;
            for (const auto& d : branches) {
                const std::set<int>* first_home = nullptr;
                for (const auto& s : shallow) {
                    bool hits = std::any_of(d.qubits.begin(), d.qubits.end(),
                                            [&](int q) { return s.qubits.count(q) > 0; });
                    if (!hits) continue;
                    if (first_home) {
                        pass = false;
                        witness = "branch " + set_to_string(d.qubits) + " straddles " +
                                  set_to_string(*first_home) + " and " + set_to_string(s.qubits);
                        break;
                    }
                    first_home = &s.qubits;
                }
                if (!pass) break;
            }
            add(l, "no_merge", pass, witness);
        }

        // Stored branches agree with the ones their (H, P) entries generate.
        if (plan.layers[l].spec) {
            bool pass = true;
            std::string witness;
            try {
                auto rebuilt = build_branches(plan.group, *plan.layers[l].spec, l);
                auto key = [](const Branch& b) { return std::tuple(b.lambda, b.coset_index, b.qubits); };
                auto stored = branches;
                auto sort_by_key = [&](std::vector<Branch>& v) {
                    std::sort(v.begin(), v.end(), [&](const Branch& a, const Branch& b) { return key(a) < key(b); });
                };
                sort_by_key(stored);
                sort_by_key(rebuilt);
                if (stored.size() != rebuilt.size()) {
                    pass = false;
                    witness = "entry cosets generate " + std::to_string(rebuilt.size()) + " branches, layer stores " +
                              std::to_string(stored.size());
                } else {
                    for (size_t i = 0; i < stored.size(); ++i)
                        if (key(stored[i]) != key(rebuilt[i])) {
                            pass = false;
                            witness = "stored branch " + set_to_string(stored[i].qubits) +
                                      " does not match the generated branch " + set_to_string(rebuilt[i].qubits);
                            break;
                        }
                }
            } catch (const std::exception& e) {
                pass = false;
                witness = e.what();
            }
            add(l, "coset_consistency", pass, witness);
        }
    }
    return report;
}

LayerSpec refine_layer(const LayerSpec& spec_next, const std::vector<RefineOp>& ops) {
    LayerSpec cur = spec_next;
    for (const auto& op : ops) {
        if (std::holds_alternative<MergeOp>(op)) {
            auto m = std::get<MergeOp>(op);
            int a = std::min(m.lambda_a, m.lambda_b);
            int b = std::max(m.lambda_a, m.lambda_b);
            if (a < 0 || b >= int(cur.entries.size()) || a == b)
                throw IndexError("merge entry index out of range");
            if (!(cur.entries[a].subgroup == cur.entries[b].subgroup))
                throw ConstructionError("merge requires equal subgroups");
            cur.entries[a].subset.insert(cur.entries[b].subset.begin(), cur.entries[b].subset.end());
            cur.entries.erase(cur.entries.begin() + b);
        } else {
            auto e = std::get<EnlargeOp>(op);
            if (e.lambda < 0 || e.lambda >= int(cur.entries.size()))
                throw IndexError("enlarge entry index out of range");
            if (!cur.entries[e.lambda].subgroup.is_subgroup_of(e.to))
                throw ConstructionError("enlarge requires a supergroup of the current subgroup");
            cur.entries[e.lambda].subgroup = e.to;
        }
    }
    return cur;
}

LayerSpec seed_final_layer(const FiniteGroup& G, const std::vector<SeedCandidate>& candidates) {
    if (G.n() <= 0) throw ConstructionError("seed needs a group acting on at least one qubit");

    std::vector<std::set<int>> orbits;
    std::vector<bool> seen(G.n(), false);
    for (int q = 0; q < G.n(); ++q) {
        if (seen[q]) continue;
        auto orb = orbit(G, q);
        for (int x : orb) seen[x] = true;
        orbits.push_back(std::move(orb));
    }

    LayerSpec spec;
    if (candidates.empty()) {
        std::set<int> reps;
        std::vector<Permutation> gens;
        for (const auto& orb : orbits) {
            int rep = *orb.begin();
            reps.insert(rep);
            const FiniteGroup stab = stabilizer(G, rep);
            for (const auto& g : stab.elements()) gens.push_back(g);
        }
        spec.entries.push_back({generate_group(gens, G.n()), std::move(reps)});
        return spec;
    }

    for (const auto& orb : orbits) {
        bool found = false;
        bool saw_candidate = false;
        for (const auto& cand : candidates) {
            if (!orb.count(cand.qubit)) continue;
            saw_candidate = true;
            if (!cand.subgroup.is_subgroup_of(G))
                throw ContainmentError("seed candidate subgroup is not contained in the group");
            if (!is_well_behaved(cand.qubit, cand.subgroup, G)) continue;
            spec.entries.push_back({cand.subgroup, {cand.qubit}});
            found = true;
            break;
        }
        if (!found) {
            std::string why = saw_candidate ? "no well-behaved candidate" : "no candidate";
            throw ConstructionError(why + " for the orbit " + set_to_string(orb));
        }
    }
    return spec;
}

namespace {

// One backward step: merge equal-subgroup entries when possible, otherwise
// enlarge every entry to its largest proper supergroup within G.
LayerSpec backward_step(const FiniteGroup& G, const std::vector<FiniteGroup>& subgroups, const LayerSpec& next) {
    LayerSpec cur = next;
    bool merged = false;
    for (;;) {
        int a = -1, b = -1;
        for (int i = 0; i < int(cur.entries.size()) && a < 0; ++i)
            for (int j = i + 1; j < int(cur.entries.size()); ++j)
                if (cur.entries[i].subgroup == cur.entries[j].subgroup) {
                    a = i;
                    b = j;
                    break;
                }
        if (a < 0) break;
        cur = refine_layer(cur, {MergeOp{a, b}});
        merged = true;
    }
    if (merged) return cur;

    std::vector<RefineOp> ops;
    for (int i = 0; i < int(cur.entries.size()); ++i) {
        const auto& H = cur.entries[i].subgroup;
        const FiniteGroup* best = nullptr;
        for (const auto& S : subgroups) {
            if (S.order() <= H.order() || S.order() >= G.order()) continue;
            if (!H.is_subgroup_of(S)) continue;
            if (!best || S.order() > best->order()) best = &S;
        }
        if (best) ops.push_back(EnlargeOp{i, *best});
    }
    return refine_layer(cur, ops);
}

} // namespace

SplitPlan plan_from_seed(const FiniteGroup& G, int L, const LayerSpec& seed) {
    if (L < 1) throw ConstructionError("layer count must be at least 1");
    if (seed.entries.empty()) throw ConstructionError("seed layer has no entries");

    std::set<int> all_subsets;
    for (const auto& e : seed.entries) all_subsets.insert(e.subset.begin(), e.subset.end());

    std::vector<LayerSpec> specs(L);
    if (L >= 2) {
        specs[L - 1] = seed;
        auto subgroups = all_subgroups(G);
        for (int l = L - 2; l >= 1; --l) specs[l] = backward_step(G, subgroups, specs[l + 1]);
    }
    specs[0].entries.push_back({G, all_subsets});

    SplitPlan plan;
    plan.n = G.n();
    plan.group = G;
    plan.layers.resize(L);
    for (int l = 0; l < L; ++l) {
        plan.layers[l].spec = specs[l];
        plan.layers[l].branches = build_branches(G, specs[l], l);
    }
    return plan;
}

SplitPlan auto_split(const FiniteGroup& G, int L) { return plan_from_seed(G, L, seed_final_layer(G)); }

} // namespace spqcnn
