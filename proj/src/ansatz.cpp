#include "spqcnn/circuit.hpp"

#include "spqcnn/error.hpp"

#include <algorithm>
#include <map>

namespace spqcnn {

namespace {

// Cube site order: 0..3 the top face read row-major, 4..7 below them.
const std::vector<int> kCubeC4Images = {1, 3, 0, 2, 5, 7, 4, 6};

void emit_block(std::vector<Gate>& gates, int q, const std::array<int, 3>& slots, int layer, int branch) {
    gates.push_back({GateKind::RX, q, -1, slots[0], 1.0, layer, branch});
    gates.push_back({GateKind::RZ, q, -1, slots[1], 1.0, layer, branch});
    gates.push_back({GateKind::RX, q, -1, slots[2], 1.0, layer, branch});
}

void emit_bond(std::vector<Gate>& gates, int a, int b, int slot, int layer, int branch) {
    gates.push_back({GateKind::RZZ, std::min(a, b), std::max(a, b), slot, 1.0, layer, branch});
}

int find_branch(const SplitPlan& plan, int layer, const std::set<int>& qubits) {
    const auto& branches = plan.layers[layer].branches;
    for (int b = 0; b < int(branches.size()); ++b)
        if (branches[b].qubits == qubits) return b;
    return -1;
}

} // namespace

CircuitIR build_d4_ansatz(const SplitPlan& plan, const std::array<int, 3>& depths) {
    if (plan.n != 8 || plan.layers.size() != 3) throw ConstructionError("ansatz needs the 3-layer 8-qubit cube plan");
    for (int d : depths)
        if (d < 1) throw ConstructionError("depth counts must be positive");

    const int b_whole = find_branch(plan, 0, {0, 1, 2, 3, 4, 5, 6, 7});
    const int b_top = find_branch(plan, 1, {0, 3, 5, 6});
    const int b_bot = find_branch(plan, 1, {1, 2, 4, 7});
    const int p_03 = find_branch(plan, 2, {0, 3});
    const int p_12 = find_branch(plan, 2, {1, 2});
    const int p_56 = find_branch(plan, 2, {5, 6});
    const int p_47 = find_branch(plan, 2, {4, 7});
    if (b_whole < 0 || b_top < 0 || b_bot < 0 || p_03 < 0 || p_12 < 0 || p_56 < 0 || p_47 < 0)
        throw ConstructionError("plan branches do not match the cube ansatz layout");

    const Permutation c4(kCubeC4Images);

    CircuitIR c;
    c.n = 8;
    c.plan = plan;
    int s = 0;
    auto triple = [&]() {
        std::array<int, 3> t = {s, s + 1, s + 2};
        s += 3;
        return t;
    };

    for (int rep = 0; rep < depths[0]; ++rep) {
        auto a_top = triple(), a_bot = triple();
        int d_a = s++, d_c = s++, d_b = s++;
        for (int q = 0; q < 4; ++q) emit_block(c.gates, q, a_top, 0, b_whole);
        for (int q = 4; q < 8; ++q) emit_block(c.gates, q, a_bot, 0, b_whole);
        for (auto [a, b] : {std::pair{0, 1}, {1, 3}, {3, 2}, {2, 0}}) emit_bond(c.gates, a, b, d_a, 0, b_whole);
        for (auto [a, b] : {std::pair{4, 5}, {5, 7}, {7, 6}, {6, 4}}) emit_bond(c.gates, a, b, d_c, 0, b_whole);
        for (auto [a, b] : {std::pair{0, 4}, {1, 5}, {2, 6}, {3, 7}}) emit_bond(c.gates, a, b, d_b, 0, b_whole);
    }

    for (int rep = 0; rep < depths[1]; ++rep) {
        auto a_03 = triple(), a_56 = triple();
        int d_p = s++;
        std::vector<Gate> seed;
        emit_block(seed, 0, a_03, 1, b_top);
        emit_block(seed, 3, a_03, 1, b_top);
        emit_block(seed, 5, a_56, 1, b_top);
        emit_block(seed, 6, a_56, 1, b_top);
        for (auto [a, b] : {std::pair{0, 5}, {5, 3}, {3, 6}, {6, 0}}) emit_bond(seed, a, b, d_p, 1, b_top);
        auto conj = conjugate_branch(seed, c4);
        for (auto& g : conj) g.branch = b_bot;
        c.gates.insert(c.gates.end(), seed.begin(), seed.end());
        c.gates.insert(c.gates.end(), conj.begin(), conj.end());
    }

    for (int rep = 0; rep < depths[2]; ++rep) {
        auto a_03 = triple();
        int d_03 = s++;
        auto a_56 = triple();
        int d_56 = s++;
        std::vector<Gate> seed_top, seed_bot;
        emit_block(seed_top, 0, a_03, 2, p_03);
        emit_block(seed_top, 3, a_03, 2, p_03);
        emit_bond(seed_top, 0, 3, d_03, 2, p_03);
        emit_block(seed_bot, 5, a_56, 2, p_56);
        emit_block(seed_bot, 6, a_56, 2, p_56);
        emit_bond(seed_bot, 5, 6, d_56, 2, p_56);
        auto conj_top = conjugate_branch(seed_top, c4);
        for (auto& g : conj_top) g.branch = p_12;
        auto conj_bot = conjugate_branch(seed_bot, c4);
        for (auto& g : conj_bot) g.branch = p_47;
        c.gates.insert(c.gates.end(), seed_top.begin(), seed_top.end());
        c.gates.insert(c.gates.end(), conj_top.begin(), conj_top.end());
        c.gates.insert(c.gates.end(), seed_bot.begin(), seed_bot.end());
        c.gates.insert(c.gates.end(), conj_bot.begin(), conj_bot.end());
    }

    c.n_slots = s;
    return c;
}

CircuitIR build_ring_ansatz(const SplitPlan& plan, const std::vector<int>& depths) {
    const int L = int(plan.layers.size());
    if (int(depths.size()) != L) throw ConstructionError("one depth count per layer expected");
    CircuitIR c;
    c.n = plan.n;
    c.plan = plan;
    int s = 0;
    for (int l = 0; l < L; ++l) {
        if (depths[l] < 1) throw ConstructionError("depth counts must be positive");
        if (!plan.layers[l].spec || plan.layers[l].spec->entries.size() != 1)
            throw ConstructionError("ring ansatz needs single-entry layer specs");
        const auto& H = plan.layers[l].spec->entries[0].subgroup;
        const auto& branches = plan.layers[l].branches;
        const auto& seed_branch = branches[0].qubits;
        const int stride = int(branches.size()); // branch l is an arithmetic progression with this step
        auto cosets = left_cosets(plan.group, H);

        for (int rep = 0; rep < depths[l]; ++rep) {
            std::vector<Gate> seed;
            int q0 = *seed_branch.begin();
            emit_block(seed, q0, {s, s + 1, s + 2}, l, 0);
            s += 3;
            if (seed_branch.size() >= 2) {
                int partner = (q0 + stride) % plan.n;
                emit_bond(seed, q0, partner, s++, l, 0);
            }
            seed = symmetrize_seed(seed, H, seed_branch);
            for (int ci = 0; ci < int(cosets.size()); ++ci) {
                auto gates = ci == 0 ? seed : conjugate_branch(seed, cosets[ci].representative);
                for (auto& g : gates) g.branch = c.branch_of(l, g.q0);
                c.gates.insert(c.gates.end(), gates.begin(), gates.end());
            }
        }
    }

    // compact slot ids in first-use order
    std::map<int, int> remap;
    for (auto& g : c.gates) {
        auto [it, fresh] = remap.try_emplace(g.slot, int(remap.size()));
        g.slot = it->second;
    }
    c.n_slots = int(remap.size());
    return c;
}

CircuitIR with_final_rotations(const CircuitIR& circuit, std::vector<int>* alpha_slots, std::vector<int>* beta_slots) {
    CircuitIR out = circuit;
    const int tail_layer = circuit.plan_layer_count();
    if (alpha_slots) alpha_slots->clear();
    if (beta_slots) beta_slots->clear();
    for (int q = 0; q < circuit.n; ++q) {
        int beta = out.n_slots++, alpha = out.n_slots++;
        out.gates.push_back({GateKind::RZ, q, -1, beta, 1.0, tail_layer, -1});
        out.gates.push_back({GateKind::RX, q, -1, alpha, 1.0, tail_layer, -1});
        if (alpha_slots) alpha_slots->push_back(alpha);
        if (beta_slots) beta_slots->push_back(beta);
    }
    return out;
}

} // namespace spqcnn
