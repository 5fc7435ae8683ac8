#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kgtanh/eigensolve.hpp"
#include "kgtanh/model.hpp"

using namespace kgtanh;
using eigensolve::TerminalEvent;
using model::PotentialParams;

namespace {
const PotentialParams kFig2(0.86, 3.0, 1.0, 1.0, 1.0);
const PotentialParams kFig3(-11.0, 8.0, 10.0, 0.6, 1.0);

double analytic_well_mismatch(double E, double B, double a, double m) {
    const double kb = std::sqrt(m * m - E * E);
    const double K2 = (E + B) * (E + B) - m * m;
    if (K2 > 0.0) {
        const double K = std::sqrt(K2);
        return K * std::cos(K * a) / std::sin(K * a) + kb;
    }
    const double k = std::sqrt(-K2);
    return k * std::cosh(k * a) / std::sinh(k * a) + kb;
}

std::vector<double> analytic_well_roots(double B, double a, double m) {
    std::vector<double> out;
    const int n = 40000;
    double pe = -m + 1e-6, pg = analytic_well_mismatch(pe, B, a, m);
    for (int i = 1; i < n; ++i) {
        const double e = -m + 1e-6 + (2.0 * m - 2e-6) * i / (n - 1.0);
        const double g = analytic_well_mismatch(e, B, a, m);
        if (pg * g < 0.0 && std::abs(pg) < 50.0 && std::abs(g) < 50.0) {
            double lo = pe, hi = e, flo = pg;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = analytic_well_mismatch(mid, B, a, m);
                if (flo * fm <= 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            out.push_back(0.5 * (lo + hi));
        }
        pe = e;
        pg = g;
    }
    return out;
}
}  // namespace

TEST_CASE("free case: matching function has no zero and constant sign") {
    const PotentialParams p(0.0, 0.0, 1.0, 1.0, 1.0);
    CHECK(eigensolve::scan_real_roots(p, 1000, -1.0, 1.0, nullptr).empty());
    const double sign0 = eigensolve::matching_function(-0.999, p) > 0 ? 1.0 : -1.0;
    for (int i = 0; i < 1000; ++i) {
        const double e = -0.999 + 1.998 * i / 999.0;
        CHECK(sign0 * eigensolve::matching_function(e, p) > 0.0);
    }
}

TEST_CASE("square well: matching zeros equal the analytic transcendental roots") {
    const PotentialParams p(0.0, 5.0, 1.0, 1.0, 1.0);
    const auto mine = eigensolve::scan_real_roots(p, 1500, -1.0, 1.0, nullptr);
    const auto analytic = analytic_well_roots(5.0, 1.0, 1.0);
    REQUIRE(mine.size() == analytic.size());
    for (size_t i = 0; i < mine.size(); ++i)
        CHECK(std::abs(mine[i] - analytic[i]) < 1e-10);
}

TEST_CASE("deep-well root inventory (frozen references)") {
    // One state at B=3.0; the antiparticle partner exists only on
    // [3.36289, 3.45912].
    const auto r30 = eigensolve::scan_real_roots(kFig2, 1500, -1.0, 1.0, nullptr);
    REQUIRE(r30.size() == 1);
    CHECK(r30[0] == doctest::Approx(-0.27060479705045393).epsilon(1e-9));

    const auto r34 = eigensolve::scan_real_roots(kFig2.with_B(3.4), 1500, -1.0, 1.0, nullptr);
    REQUIRE(r34.size() == 2);
    CHECK(r34[0] == doctest::Approx(-0.99669062977963385).epsilon(1e-9));
    CHECK(r34[1] == doctest::Approx(-0.77210606581287355).epsilon(1e-9));

    const auto r80 = eigensolve::scan_real_roots(kFig3, 1500, -1.0, 1.0, nullptr);
    REQUIRE(r80.size() == 1);
    CHECK(r80[0] == doctest::Approx(0.42650248132846169).epsilon(1e-9));
}

TEST_CASE("weak well binds at most one state") {
    const PotentialParams p(0.0, 0.1, 1.0, 1.0, 1.0);
    CHECK(eigensolve::scan_real_roots(p, 2000, -1.0, 1.0, nullptr).size() <= 1);
}

TEST_CASE("find_bound_states fills norms and classifications") {
    const auto recs = eigensolve::find_bound_states(kFig2.with_B(3.4), 1500);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].classification == norm::Classification::antiparticle);
    CHECK(recs[1].classification == norm::Classification::particle);
    for (const auto& r : recs) {
        CHECK(r.residual <= 1e-8);
        CHECK(r.B == 3.4);
    }
    const auto deep = eigensolve::find_bound_states(kFig3, 1200);
    REQUIRE(!deep.empty());
    CHECK(deep[0].norm_value > 0.0);
    CHECK(deep[0].classification == norm::Classification::particle);
}

TEST_CASE("trace is consistent with cold-start root finding (square well)") {
    const PotentialParams p(0.0, 2.2, 1.0, 1.0, 1.0);
    const auto curves = eigensolve::trace_branch(p, 2.0, 2.4, 21, 800);
    REQUIRE(curves.size() == 1);
    CHECK(curves[0].terminal_event == TerminalEvent::range_end);
    int prev_sign = 0;
    double prev_e = 0.0;
    for (size_t i = 0; i < curves[0].points.size(); ++i) {
        const auto& [B, E] = curves[0].points[i];
        const auto cold =
            eigensolve::scan_real_roots(p.with_B(B), 800, -1.0, 1.0, nullptr);
        REQUIRE(cold.size() == 1);
        CHECK(std::abs(cold[0] - E) < 1e-9);
        if (i > 0) {
            const int sign = E > prev_e ? 1 : -1;
            if (prev_sign != 0) CHECK(sign == prev_sign);  // monotone branch
            prev_sign = sign;
        }
        prev_e = E;
    }
}

TEST_CASE("fold of the shallow-tanh regime") {
    const auto curves = eigensolve::trace_branch(kFig2, 3.30, 3.50, 41, 1200);
    REQUIRE(curves.size() == 2);
    for (const auto& c : curves) {
        REQUIRE(c.terminal_event == TerminalEvent::coalescence);
        REQUIRE(c.critical_B.has_value());
        CHECK(*c.critical_B == doctest::Approx(3.45912448).epsilon(5e-7));
        CHECK(*c.critical_E == doctest::Approx(-0.92878512).epsilon(1e-4));
    }
    // Monotone branches with opposite orientation below the fold.
    for (const auto& c : curves) {
        int sign = 0;
        for (size_t i = 1; i < c.points.size(); ++i) {
            const int s = c.points[i].second > c.points[i - 1].second ? 1 : -1;
            if (sign != 0) CHECK(s == sign);
            sign = s;
        }
    }
}

TEST_CASE("coalescence symmetry near the fold") {
    const double b_star = 3.45912448, e_star = -0.92878512;
    const auto pair = eigensolve::scan_real_roots(kFig2.with_B(b_star - 1e-3), 4000,
                                                  -0.99, -0.85, nullptr);
    REQUIRE(pair.size() == 2);
    const double spread = pair[1] - pair[0];
    CHECK(std::abs(pair[0] + pair[1] - 2.0 * e_star) <= 0.1 * spread);
}

TEST_CASE("find_critical_B: coalescence in the shallow regime") {
    const auto [b, e] =
        eigensolve::find_critical_B(kFig2, 3.30, 3.60, TerminalEvent::coalescence);
    CHECK(b == doctest::Approx(3.45912448).epsilon(5e-7));
    CHECK(e == doctest::Approx(-0.92878512).epsilon(1e-4));
}

TEST_CASE("find_critical_B: deep regime ends in a near-edge coalescence, not embedding") {
    const auto [b, e] =
        eigensolve::find_critical_B(kFig3, 6.99, 9.40, TerminalEvent::coalescence);
    CHECK(b == doctest::Approx(9.35074632).epsilon(5e-7));
    CHECK(e == doctest::Approx(-0.99611216).epsilon(1e-3));
    CHECK_THROWS_AS(
        (void)eigensolve::find_critical_B(kFig3, 6.99, 9.40, TerminalEvent::embedding),
        EventNotBracketed);
    CHECK_THROWS_AS(
        (void)eigensolve::find_critical_B(kFig2, 2.60, 3.20, TerminalEvent::coalescence),
        EventNotBracketed);
}

TEST_CASE("square-well continuum-edge event matches the analytic K cot(Ka) = 0 root") {
    // At E = -m the exterior decay vanishes and the edge condition is
    // du(a) = cos(K a) = 0, i.e. B = m + sqrt(m^2 + (pi/2a)^2). The slope
    // makes this an antiparticle emergence (the Schiff-Snyder scenario), so
    // no embedding event exists here either.
    const double analytic_B = 1.0 + std::sqrt(1.0 + 0.25 * M_PI * M_PI);
    double lo = 2.5, hi = 3.2;
    const auto edge = [&](double B) {
        const PotentialParams p(0.0, B, 1.0, 1.0, 1.0);
        return model::interior_state(1.0, -1.0 + 1e-9, p).du.real();
    };
    double flo = edge(lo);
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = edge(mid);
        if (flo * fm <= 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    CHECK(0.5 * (lo + hi) == doctest::Approx(analytic_B).epsilon(1e-8));
}

TEST_CASE("complex pair past the fold") {
    const double b_star = 3.45912448, e_star = -0.92878512;
    // Continuity at the merge point: tiny imaginary part right at B*.
    const auto [u0, l0] = eigensolve::track_complex_pair(kFig2, b_star + 1e-6, e_star);
    CHECK(std::abs(u0.imag()) <= 1e-3);
    CHECK(std::abs(std::conj(u0) - l0) <= 1e-8);

    const auto [up, lo] = eigensolve::track_complex_pair(kFig2, 3.6, e_star);
    CHECK(up.imag() > 1e-3);
    CHECK(std::abs(std::conj(up) - lo) <= 1e-8);
    CHECK(std::abs(eigensolve::matching_function(up, kFig2.with_B(3.6))) <= 1e-8);
    CHECK(std::abs(eigensolve::matching_function(lo, kFig2.with_B(3.6))) <= 1e-8);
}

TEST_CASE("matching function domain and context invariants") {
    CHECK_THROWS_AS((void)eigensolve::matching_function(1.5, kFig2), DomainError);
    const auto ctx = eigensolve::make_matching_context(Complex(0.4, 0.0), kFig2);
    CHECK(std::abs(ctx.kappa_b * ctx.kappa_b + ctx.E * ctx.E - Complex(1.0, 0.0)) < 1e-12);
    CHECK(ctx.kappa_b.real() >= 0.0);
}

TEST_CASE("grid warning on an unresolved near-fold pair") {
    // Just below the fold the two roots are ~5e-3 apart; a 150-point grid
    // (cell ~1.3e-2) cannot bracket them but the |W| dip is visible.
    Warnings w;
    const auto roots =
        eigensolve::scan_real_roots(kFig2.with_B(3.4591), 150, -1.0, 1.0, &w);
    if (roots.empty()) {
        CHECK(!w.empty());
    }
    // A fine rescan resolves the pair regardless.
    const auto fine =
        eigensolve::scan_real_roots(kFig2.with_B(3.4591), 6000, -1.0, 1.0, nullptr);
    CHECK(fine.size() == 2);
}
