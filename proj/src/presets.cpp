#include "spqcnn/presets.hpp"

#include "spqcnn/error.hpp"

namespace spqcnn {

FiniteGroup d4_cube_group() {
    const Permutation c4({1, 3, 0, 2, 5, 7, 4, 6});
    const Permutation mirror({0, 2, 1, 3, 4, 6, 5, 7}); // swaps 1,2 and 5,6
    return generate_group({c4, mirror});
}

FiniteGroup d4_grid4x4_group() {
    std::vector<int> rot(16), mir(16);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            rot[4 * r + c] = 4 * c + (3 - r);
            mir[4 * r + c] = 4 * c + r;
        }
    }
    return generate_group({Permutation(rot), Permutation(mir)});
}

FiniteGroup translation_ring_group(int n) {
    if (n < 1) throw DimensionError("ring needs at least one qubit");
    std::vector<int> shift(n);
    for (int j = 0; j < n; ++j) shift[j] = (j + 1) % n;
    return generate_group({Permutation(shift)});
}

SplitPlan cube_demo_plan() {
    const FiniteGroup g = d4_cube_group();
    const Permutation c4({1, 3, 0, 2, 5, 7, 4, 6});
    const Permutation mirror({0, 2, 1, 3, 4, 6, 5, 7});
    const FiniteGroup h = generate_group({compose(c4, c4), mirror});
    return plan_from_seed(g, 3, seed_final_layer(g, {{h, 0}, {h, 5}}));
}

SplitPlan ring_halving_plan(int n, int layers) {
    if (n < 2 || (n & (n - 1)) != 0) throw ConstructionError("ring size must be a power of two");
    if (layers < 1) throw DimensionError("at least one layer required");
    const FiniteGroup g = translation_ring_group(n);

    SplitPlan plan;
    plan.n = n;
    plan.group = g;
    for (int l = 0; l < layers; ++l) {
        const int stride = 1 << l;
        FiniteGroup h;
        if (stride >= n) {
            h = generate_group({}, n);
        } else {
            std::vector<int> shift(n);
            for (int j = 0; j < n; ++j) shift[j] = (j + stride) % n;
            h = generate_group({Permutation(shift)});
        }
        LayerSpec spec;
        spec.entries.push_back({h, {0}});
        PlanLayer layer;
        layer.branches = build_branches(g, spec, l);
        layer.spec = std::move(spec);
        plan.layers.push_back(std::move(layer));
    }
    return plan;
}

SplitPlan ring_halves_fixture(int n) {
    if (n < 4 || n % 2 != 0) throw DimensionError("fixture needs an even ring of at least four qubits");
    SplitPlan plan;
    plan.n = n;
    plan.group = translation_ring_group(n);
    PlanLayer layer;
    Branch lower, upper;
    lower.layer = upper.layer = 0;
    lower.lambda = upper.lambda = 0;
    lower.coset_index = 0;
    upper.coset_index = 1;
    for (int q = 0; q < n / 2; ++q) lower.qubits.insert(q);
    for (int q = n / 2; q < n; ++q) upper.qubits.insert(q);
    layer.branches = {lower, upper};
    plan.layers.push_back(std::move(layer));
    return plan;
}

} // namespace spqcnn
