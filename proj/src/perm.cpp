#include "spqcnn/perm.hpp"

#include "spqcnn/error.hpp"

#include <string>

namespace spqcnn {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
    std::vector<char> seen(images_.size(), 0);
    for (int v : images_) {
        if (v < 0 || v >= int(images_.size()) || seen[v])
            throw DimensionError("permutation images are not a bijection on [n]");
        seen[v] = 1;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> im(n);
    for (int i = 0; i < n; ++i) im[i] = i;
    return Permutation(std::move(im));
}

int Permutation::operator()(int i) const {
    if (i < 0 || i >= n()) throw IndexError("qubit index " + std::to_string(i) + " out of range");
    return images_[i];
}

Permutation Permutation::inverse() const {
    std::vector<int> im(images_.size());
    for (int i = 0; i < n(); ++i) im[images_[i]] = i;
    return Permutation(std::move(im));
}

bool Permutation::is_identity() const {
    for (int i = 0; i < n(); ++i)
        if (images_[i] != i) return false;
    return true;
}

Permutation compose(const Permutation& p, const Permutation& q) {
    if (p.n() != q.n()) throw DimensionError("composing permutations of different sizes");
    std::vector<int> im(p.n());
    for (int i = 0; i < p.n(); ++i) im[i] = p(q(i));
    return Permutation(std::move(im));
}

std::set<int> apply_to_set(const Permutation& g, const std::set<int>& Q) {
    std::set<int> out;
    for (int q : Q) out.insert(g(q));
    return out;
}

} // namespace spqcnn
