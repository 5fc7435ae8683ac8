#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kgtanh/eigensolve.hpp"
#include "kgtanh/norm.hpp"

using namespace kgtanh;
using model::PotentialParams;
using norm::Classification;

namespace {
const PotentialParams kFig2(0.86, 3.0, 1.0, 1.0, 1.0);
}

TEST_CASE("classification thresholds") {
    CHECK(norm::classify_state({0.7, 0.7, 0.0, 1e-4}) == Classification::particle);
    CHECK(norm::classify_state({-0.3, -0.3, 0.0, 1e-4}) == Classification::antiparticle);
    CHECK(norm::classify_state({5e-5, 1.0, -1.0, 1e-4}) == Classification::critical);
    // Quadratic scaling of the eigenfunction leaves the class unchanged.
    CHECK(norm::classify_state({0.7 * 9, 0.7 * 9, 0.0, 9e-4}) == Classification::particle);
}

TEST_CASE("weak well: single state near the edge has positive norm") {
    const PotentialParams p(0.0, 1.2, 1.0, 1.0, 1.0);
    const auto roots = eigensolve::scan_real_roots(p, 2000, -1.0, 1.0, nullptr);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] > 0.5);
    const auto n = norm::kg_norm(roots[0], p);
    CHECK(n.value > 0.0);
    CHECK(norm::classify_state(n) == Classification::particle);
    CHECK(n.value == doctest::Approx(n.interior_part + n.tail_part).epsilon(1e-12));
}

TEST_CASE("frozen norm values of the B=3.4 pair") {
    const PotentialParams p = kFig2.with_B(3.4);
    const auto lower = norm::kg_norm(-0.99669062977963385, p);
    const auto upper = norm::kg_norm(-0.77210606581287355, p);
    // 20-digit quadrature references.
    CHECK(lower.value == doctest::Approx(-1.581301).epsilon(2e-6));
    CHECK(upper.value == doctest::Approx(0.173197).epsilon(2e-6));
    CHECK(norm::classify_state(lower) == Classification::antiparticle);
    CHECK(norm::classify_state(upper) == Classification::particle);
}

TEST_CASE("norm vanishes at the coalescence point") {
    const double b_star = 3.45912448, e_star = -0.92878512;
    const auto n = norm::kg_norm(e_star, kFig2.with_B(b_star));
    CHECK(std::abs(n.value) <= n.zero_tolerance);
    CHECK(norm::classify_state(n) == Classification::critical);
}

TEST_CASE("opposite signs and shrinking magnitudes along the merging pair") {
    const double b_star = 3.45912448;
    double prev_up = 1e9, prev_lo = 1e9;
    for (double db : {8e-3, 4e-3, 2e-3, 1e-3, 5e-4}) {
        const PotentialParams p = kFig2.with_B(b_star - db);
        const auto roots = eigensolve::scan_real_roots(p, 6000, -1.0, -0.8, nullptr);
        REQUIRE(roots.size() == 2);
        const auto n_lo = norm::kg_norm(roots[0], p);
        const auto n_up = norm::kg_norm(roots[1], p);
        CHECK(n_lo.value < 0.0);
        CHECK(n_up.value > 0.0);
        CHECK(std::abs(n_lo.value) < prev_lo);
        CHECK(std::abs(n_up.value) < prev_up);
        prev_lo = std::abs(n_lo.value);
        prev_up = std::abs(n_up.value);
    }
}

TEST_CASE("continuity along a branch") {
    // Successive norms along the single branch differ by less than 10x the
    // local secant slope estimate.
    const double B0 = 3.00, dB = 0.02;
    std::vector<double> ns;
    for (int i = 0; i < 5; ++i) {
        const PotentialParams p = kFig2.with_B(B0 + i * dB);
        const auto roots = eigensolve::scan_real_roots(p, 1500, -1.0, 1.0, nullptr);
        REQUIRE(roots.size() == 1);
        ns.push_back(norm::kg_norm(roots[0], p).value);
    }
    for (size_t i = 2; i < ns.size(); ++i) {
        const double slope = std::abs(ns[i - 1] - ns[i - 2]);
        CHECK(std::abs(ns[i] - ns[i - 1]) <= 10.0 * std::max(slope, 1e-6));
    }
}

TEST_CASE("kg_norm rejects non-eigenvalues") {
    CHECK_THROWS_AS((void)norm::kg_norm(0.123, kFig2), NotAnEigenvalue);
}
