#include "spqcnn/group.hpp"

#include "spqcnn/error.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace spqcnn {

FiniteGroup::FiniteGroup(std::vector<Permutation> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw ConstructionError("a group needs at least the identity");
    n_ = elements_[0].n();
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
    for (const auto& g : elements_)
        if (g.n() != n_) throw DimensionError("group elements act on different qubit counts");
    if (!elements_[0].is_identity()) throw ConstructionError("identity element missing");
    for (const auto& g : elements_) {
        if (!contains(g.inverse())) throw ConstructionError("element inverse missing");
        for (const auto& h : elements_)
            if (!contains(compose(g, h))) throw ConstructionError("element set not closed");
    }
}

bool FiniteGroup::contains(const Permutation& g) const {
    return std::binary_search(elements_.begin(), elements_.end(), g);
}

bool FiniteGroup::is_subgroup_of(const FiniteGroup& G) const {
    if (n_ != G.n()) return false;
    for (const auto& h : elements_)
        if (!G.contains(h)) return false;
    return true;
}

FiniteGroup generate_group(const std::vector<Permutation>& generators, int n_if_empty) {
    if (generators.empty()) {
        if (n_if_empty < 1) throw ConstructionError("empty generator set without a qubit count");
        return FiniteGroup({Permutation::identity(n_if_empty)});
    }
    int n = generators[0].n();
    std::set<Permutation> closed{Permutation::identity(n)};
    std::vector<Permutation> frontier(closed.begin(), closed.end());
    while (!frontier.empty()) {
        std::vector<Permutation> next;
        for (const auto& g : frontier) {
            for (const auto& s : generators) {
                Permutation prod = compose(s, g);
                if (closed.insert(prod).second) next.push_back(prod);
            }
        }
        if (closed.size() > 20000) throw CapacityError("generated group exceeds 20000 elements");
        frontier = std::move(next);
    }
    return FiniteGroup(std::vector<Permutation>(closed.begin(), closed.end()));
}

namespace {

// Closure of a set of elements, as a sorted element vector.
std::vector<Permutation> close_elements(const std::vector<Permutation>& seed, int n) {
    std::set<Permutation> closed{Permutation::identity(n)};
    std::vector<Permutation> frontier(closed.begin(), closed.end());
    while (!frontier.empty()) {
        std::vector<Permutation> next;
        for (const auto& g : frontier)
            for (const auto& s : seed) {
                Permutation prod = compose(s, g);
                if (closed.insert(prod).second) next.push_back(prod);
            }
        frontier = std::move(next);
    }
    return {closed.begin(), closed.end()};
}

} // namespace

std::vector<FiniteGroup> all_subgroups(const FiniteGroup& G, int cap) {
    if (G.order() > cap)
        throw CapacityError("subgroup enumeration capped at order " + std::to_string(cap) +
                            ", group has order " + std::to_string(G.order()));
    // Cyclic subgroups seed the lattice; joins of known subgroups complete it.
    std::set<std::vector<Permutation>> found;
    found.insert({Permutation::identity(G.n())});
    for (const auto& g : G.elements()) found.insert(close_elements({g}, G.n()));
    for (;;) {
        std::set<std::vector<Permutation>> next = found;
        for (const auto& a : found)
            for (const auto& b : found) {
                std::vector<Permutation> seed = a;
                seed.insert(seed.end(), b.begin(), b.end());
                next.insert(close_elements(seed, G.n()));
            }
        if (next.size() == found.size()) break;
        found = std::move(next);
    }
    std::vector<FiniteGroup> out;
    for (const auto& els : found) out.emplace_back(els);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Coset> left_cosets(const FiniteGroup& G, const FiniteGroup& H) {
    if (!H.is_subgroup_of(G)) throw ContainmentError("H is not a subgroup of G");
    std::vector<Coset> out;
    std::set<Permutation> covered;
    for (const auto& g : G.elements()) { // canonical order makes reps minimal
        if (covered.count(g)) continue;
        Coset c;
        for (const auto& h : H.elements()) c.members.push_back(compose(g, h));
        std::sort(c.members.begin(), c.members.end());
        c.representative = c.members.front();
        covered.insert(c.members.begin(), c.members.end());
        out.push_back(std::move(c));
    }
    return out; // first coset is H: e is globally minimal, so H is found first
}

std::set<int> orbit(const FiniteGroup& G, int q) {
    if (q < 0 || q >= G.n()) throw IndexError("qubit index " + std::to_string(q) + " out of range");
    std::set<int> out;
    for (const auto& g : G.elements()) out.insert(g(q));
    return out;
}

FiniteGroup stabilizer(const FiniteGroup& G, int q) {
    std::vector<Permutation> els;
    for (const auto& g : G.elements())
        if (g(q) == q) els.push_back(g);
    return FiniteGroup(std::move(els));
}

bool is_well_behaved(int q, const FiniteGroup& H, const FiniteGroup& G) {
    if (!H.is_subgroup_of(G)) throw ContainmentError("H is not a subgroup of G");
    return int(orbit(G, q).size()) * H.order() == int(orbit(H, q).size()) * G.order();
}

bool is_g_independent(const FiniteGroup& G, const std::set<int>& P) {
    std::set<int> seen;
    for (int q : P) {
        std::set<int> orb = orbit(G, q);
        for (int x : orb)
            if (seen.count(x)) return false;
        seen.insert(orb.begin(), orb.end());
    }
    return true;
}

bool is_g_complete(const FiniteGroup& G, const std::set<int>& P) {
    std::set<int> covered;
    for (int q : P) {
        std::set<int> orb = orbit(G, q);
        covered.insert(orb.begin(), orb.end());
    }
    return int(covered.size()) == G.n();
}

} // namespace spqcnn
