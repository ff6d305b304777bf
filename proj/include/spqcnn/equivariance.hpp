#pragma once

#include "spqcnn/circuit.hpp"
#include "spqcnn/group.hpp"

#include <string>
#include <vector>

namespace spqcnn {

struct EquivarianceReport {
    bool pass = true;
    double max_deviation = 0.0;
    int worst_layer = -1;
    Permutation worst_element;
};

// Dense check that every plan layer's unitary commutes with every U_g:
// max |U_g V U_g^dag - V| over layers and group elements, compared to tol.
// Tail rotations past the plan layers are not part of the check.
EquivarianceReport check_equivariance(const CircuitIR& circuit, const FiniteGroup& G, const std::vector<double>& theta,
                                      double tol);

} // namespace spqcnn
