#pragma once

#include <compare>
#include <cstdint>
#include <set>
#include <vector>

namespace spqcnn {

// Bijection on qubit indices 0..n-1. images[i] is where qubit i goes.
// Lexicographic order on the image sequence is the canonical order used for
// every deterministic listing in the library (the identity sorts first).
class Permutation {
  public:
    Permutation() = default;
    explicit Permutation(std::vector<int> images); // validates bijection

    static Permutation identity(int n);

    int n() const { return int(images_.size()); }
    int operator()(int i) const;
    const std::vector<int>& images() const { return images_; }

    Permutation inverse() const;
    bool is_identity() const;

    auto operator<=>(const Permutation& o) const { return images_ <=> o.images_; }
    bool operator==(const Permutation& o) const = default;

  private:
    std::vector<int> images_;
};

// result(i) = p(q(i)): q acts first.
Permutation compose(const Permutation& p, const Permutation& q);

// Elementwise image {g(q) | q in Q}; cardinality is preserved.
std::set<int> apply_to_set(const Permutation& g, const std::set<int>& Q);

} // namespace spqcnn
