#include "spqcnn/circuit.hpp"

#include "spqcnn/error.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace spqcnn {

Observable Observable::sum_x(int n, bool normalized) {
    Observable o;
    o.normalize_by_n = normalized;
    for (int q = 0; q < n; ++q) o.terms.push_back({q, Pauli::X, 1.0});
    return o;
}

std::vector<std::vector<int>> CircuitIR::slot_positions() const {
    std::vector<std::vector<int>> table(n_slots);
    for (int p = 0; p < int(gates.size()); ++p) {
        const auto& g = gates[p];
        if (g.slot < 0 || g.slot >= n_slots) throw IndexError("gate slot out of range");
        table[g.slot].push_back(p);
    }
    return table;
}

int CircuitIR::branch_of(int layer, int q) const {
    if (layer < 0 || layer >= plan_layer_count()) return -1;
    const auto& branches = plan.layers[layer].branches;
    for (int b = 0; b < int(branches.size()); ++b)
        if (branches[b].qubits.count(q)) return b;
    return -1;
}

std::vector<Gate> conjugate_branch(const std::vector<Gate>& gates, const Permutation& g) {
    std::vector<Gate> out = gates;
    for (auto& gate : out) {
        gate.q0 = g(gate.q0);
        if (gate.q1 >= 0) gate.q1 = g(gate.q1);
    }
    return out;
}

namespace {

// (kind, unordered qubit pair) class of a gate; RZZ is symmetric in its two
// qubits.
std::tuple<GateKind, int, int> gate_class(const Gate& g) {
    if (g.is_two_qubit()) return {g.kind, std::min(g.q0, g.q1), std::max(g.q0, g.q1)};
    return {g.kind, g.q0, -1};
}

int occurrence_index(const std::vector<Gate>& w, int p) {
    auto key = gate_class(w[p]);
    int occ = 0;
    for (int q = 0; q < p; ++q)
        if (gate_class(w[q]) == key) ++occ;
    return occ;
}

int find_occurrence(const std::vector<Gate>& w, const std::tuple<GateKind, int, int>& key, int occ) {
    int seen = 0;
    for (int p = 0; p < int(w.size()); ++p)
        if (gate_class(w[p]) == key) {
            if (seen == occ) return p;
            ++seen;
        }
    return -1;
}

} // namespace

std::vector<Gate> symmetrize_seed(const std::vector<Gate>& gates, const FiniteGroup& H, const std::set<int>& branch) {
    for (const auto& g : gates)
        if (!branch.count(g.q0) || (g.q1 >= 0 && !branch.count(g.q1)))
            throw ContainmentError("seed gate acts outside its branch");

    std::vector<Gate> w = gates;

    // union-find over slot ids, smallest id wins
    std::map<int, int> parent;
    auto find = [&](int s) {
        parent.try_emplace(s, s);
        while (parent[s] != s) s = parent[s] = parent[parent[s]];
        return s;
    };
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a > b) std::swap(a, b);
        parent[b] = a;
        return true;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& h : H.elements()) {
            for (int p = 0; p < int(w.size()); ++p) {
                Gate img = w[p];
                img.q0 = h(img.q0);
                if (img.q1 >= 0) img.q1 = h(img.q1);
                if (!branch.count(img.q0) || (img.q1 >= 0 && !branch.count(img.q1)))
                    throw ContainmentError("symmetry image of a seed gate leaves the branch");
                int occ = occurrence_index(w, p);
                int tp = find_occurrence(w, gate_class(img), occ);
                if (tp < 0) {
                    w.push_back(img);
                    tp = int(w.size()) - 1;
                    changed = true;
                }
                if (unite(w[p].slot, w[tp].slot)) changed = true;
            }
        }
    }
    for (auto& g : w) g.slot = find(g.slot);
    return w;
}

CircuitIR backward_lightcone(const CircuitIR& circuit, int i) {
    if (i < 0 || i >= circuit.n) throw IndexError("lightcone qubit out of range");
    const int L = circuit.plan_layer_count();
    std::vector<int> chain(L);
    for (int l = 0; l < L; ++l) {
        chain[l] = circuit.branch_of(l, i);
        if (chain[l] < 0) throw ConstructionError("qubit is not covered by every layer");
    }
    CircuitIR out = circuit;
    out.gates.clear();
    for (const auto& g : circuit.gates) {
        if (g.layer < L) {
            if (g.branch == chain[g.layer]) out.gates.push_back(g);
        } else if (g.q0 == i) {
            out.gates.push_back(g);
        }
    }
    return out;
}

CircuitIR strip_sharing(const CircuitIR& circuit) {
    CircuitIR out = circuit;
    for (int p = 0; p < int(out.gates.size()); ++p) out.gates[p].slot = p;
    out.n_slots = int(out.gates.size());
    return out;
}

int block_gate_count(const CircuitIR& circuit) {
    // Tail rotations are excluded: the count covers the plan-owned gates, an
    // RX,RZ,RX triple on one qubit counting as a single block.
    int single = 0, twoq = 0;
    for (const auto& g : circuit.gates) {
        if (g.layer >= circuit.plan_layer_count()) continue;
        (g.is_two_qubit() ? twoq : single)++;
    }
    if (single % 3 != 0) throw ConstructionError("single-qubit gates do not form whole rotation blocks");
    return single / 3 + twoq;
}

} // namespace spqcnn
