#include "spqcnn/equivariance.hpp"

#include "spqcnn/statevector.hpp"

#include <cmath>

namespace spqcnn {

EquivarianceReport check_equivariance(const CircuitIR& circuit, const FiniteGroup& G, const std::vector<double>& theta,
                                      double tol) {
    EquivarianceReport report;
    const size_t dim = size_t(1) << circuit.n;
    for (int l = 0; l < circuit.plan_layer_count(); ++l) {
        Eigen::MatrixXcd v = dense_unitary(circuit, theta, l);
        for (const auto& g : G.elements()) {
            if (g.is_identity()) continue;
            // bitstring image: bit g(b) of pi(y) equals bit b of y
            std::vector<size_t> pre(dim); // pre[r] = pi^{-1}(r)
            {
                Permutation ginv = g.inverse();
                for (size_t i = 0; i < dim; ++i) {
                    size_t j = 0;
                    for (int b = 0; b < circuit.n; ++b)
                        if (i & (size_t(1) << b)) j |= size_t(1) << ginv(b);
                    pre[i] = j;
                }
            }
            double dev = 0.0;
            for (size_t r = 0; r < dim; ++r)
                for (size_t c = 0; c < dim; ++c) dev = std::max(dev, std::abs(v(pre[r], pre[c]) - v(r, c)));
            if (dev > report.max_deviation) {
                report.max_deviation = dev;
                report.worst_layer = l;
                report.worst_element = g;
            }
        }
    }
    report.pass = report.max_deviation <= tol;
    return report;
}

} // namespace spqcnn
