#pragma once

#include "spqcnn/perm.hpp"

#include <set>
#include <vector>

namespace spqcnn {

// Finite permutation group on qubit indices. Elements are kept sorted in
// canonical (lexicographic) order; closure, identity and inverses are
// invariants checked at construction.
class FiniteGroup {
  public:
    FiniteGroup() = default;
    // Validates the group axioms on the given element set.
    explicit FiniteGroup(std::vector<Permutation> elements);

    int n() const { return n_; }
    int order() const { return int(elements_.size()); }
    const std::vector<Permutation>& elements() const { return elements_; }
    const Permutation& element(int i) const { return elements_[i]; }

    bool contains(const Permutation& g) const;
    bool is_subgroup_of(const FiniteGroup& G) const;

    bool operator==(const FiniteGroup& o) const { return elements_ == o.elements_; }
    // Order by (order, element listing): the sort used for subgroup lists.
    bool operator<(const FiniteGroup& o) const {
        if (order() != o.order()) return order() < o.order();
        return elements_ < o.elements_;
    }

  private:
    std::vector<Permutation> elements_; // sorted
    int n_ = 0;
};

struct Coset {
    Permutation representative; // minimal element of the coset
    std::vector<Permutation> members; // sorted; members == representative * H
};

// Smallest closed group containing the generators; empty set gives {e} (n
// must then be supplied).
FiniteGroup generate_group(const std::vector<Permutation>& generators, int n_if_empty = -1);

// Every subgroup exactly once, sorted by order then canonical element
// listing. Guarded by the enumeration cap (default 64).
std::vector<FiniteGroup> all_subgroups(const FiniteGroup& G, int cap = 64);

// Left cosets gH covering G; the first coset is H itself and each coset's
// representative is its minimal element.
std::vector<Coset> left_cosets(const FiniteGroup& G, const FiniteGroup& H);

// {g(q) | g in G}.
std::set<int> orbit(const FiniteGroup& G, int q);

// Elements of G fixing q.
FiniteGroup stabilizer(const FiniteGroup& G, int q);

// |G(q)| / |H(q)| == |G| / |H| (equivalently Stab_G(q) <= H).
bool is_well_behaved(int q, const FiniteGroup& H, const FiniteGroup& G);

// No two members of P share a G-orbit.
bool is_g_independent(const FiniteGroup& G, const std::set<int>& P);

// The G-orbits of P cover all qubits.
bool is_g_complete(const FiniteGroup& G, const std::set<int>& P);

} // namespace spqcnn
