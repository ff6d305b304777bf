#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "spqcnn/bp.hpp"
#include "spqcnn/error.hpp"
#include "spqcnn/presets.hpp"
#include "spqcnn/rng.hpp"

#include <cmath>

using namespace spqcnn;

namespace {

CircuitIR ring_circuit(int n, int layers) {
    return with_final_rotations(build_ring_ansatz(ring_halving_plan(n, layers), std::vector<int>(size_t(layers), 1)));
}

} // namespace

TEST_CASE("single point statistics are well formed") {
    Rng rng(3);
    BpPoint pt = bp_point(ring_circuit(4, 3), 400, rng);
    CHECK(pt.n == 4);
    CHECK(pt.samples == 400);
    REQUIRE(pt.mean_c.size() == 4);
    REQUIRE(pt.se_c.size() == 4);
    REQUIRE(pt.mean_cc.size() == 6);
    REQUIRE(pt.se_cc.size() == 6);
    for (double se : pt.se_c) CHECK(se > 0.0);
    for (double se : pt.se_cc) CHECK(se > 0.0);
    for (double m : pt.mean_c) CHECK(std::abs(m) <= 1.0);
    CHECK(pt.var_c >= 0.0);
    CHECK(pt.var_c <= 1.0);

    // random angle averages of single x readouts concentrate near zero
    CHECK(pt.max_mean_sigmas < 6.0);
    CHECK(pt.max_cross_sigmas < 6.0);
}

TEST_CASE("points are reproducible per stream") {
    CircuitIR c = ring_circuit(4, 3);
    Rng a(7), b(7), d(8);
    BpPoint p1 = bp_point(c, 50, a);
    BpPoint p2 = bp_point(c, 50, b);
    BpPoint p3 = bp_point(c, 50, d);
    for (size_t q = 0; q < p1.mean_c.size(); ++q) CHECK(p1.mean_c[q] == p2.mean_c[q]);
    CHECK(p1.var_c == p2.var_c);
    CHECK(p1.var_c != p3.var_c);
}

TEST_CASE("scan compares the two ring sizes") {
    BpScan scan = bp_scan(600, 5);
    CHECK(scan.small.n == 4);
    CHECK(scan.large.n == 8);
    CHECK(scan.small.samples == 600);

    // the cost variance shrinks with size but stays polynomial: the fitted
    // decay exponent is far from the exponential 2n slope
    CHECK(scan.small.var_c > scan.large.var_c);
    CHECK(scan.fitted_exponent == doctest::Approx(std::log2(scan.small.var_c / scan.large.var_c)).epsilon(1e-12));
    CHECK(scan.fitted_exponent > 0.0);
    CHECK(scan.fitted_exponent < 4.0);

    BpScan again = bp_scan(600, 5);
    CHECK(again.small.var_c == scan.small.var_c);
    CHECK(again.large.var_c == scan.large.var_c);
    CHECK(again.fitted_exponent == scan.fitted_exponent);
}

TEST_CASE("scan input validation") {
    Rng rng(1);
    CHECK_THROWS_AS(bp_point(ring_circuit(4, 3), 1, rng), DimensionError);
    CHECK_THROWS_AS(bp_point(ring_circuit(16, 4), 10, rng), CapacityError);
}
