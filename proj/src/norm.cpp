#include "kgtanh/norm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "kgtanh/eigensolve.hpp"

namespace kgtanh::norm {

namespace {

constexpr double kEigenvalueResidualTol = 1e-6;
constexpr double kQuadratureRelTol = 1e-10;
constexpr double kZeroToleranceFactor = 1e-4;

double simpson(double a, double fa, double fm, double b, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double fa, double m,
                        double fm, double b, double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, fa, flm, m, fm);
    const double right = simpson(m, fm, frm, b, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

const char* to_string(Classification c) {
    switch (c) {
        case Classification::particle: return "particle";
        case Classification::antiparticle: return "antiparticle";
        case Classification::critical: return "critical";
    }
    return "?";
}

NormResult kg_norm(double E, const model::PotentialParams& p) {
    const double residual = std::abs(eigensolve::matching_function(E, p));
    if (residual > kEigenvalueResidualTol) {
        std::ostringstream msg;
        msg << "kg_norm: |W(" << E << ")| = " << residual << " exceeds 1e-6";
        throw NotAnEigenvalue(msg.str());
    }

    const auto integrand = [&](double r) {
        const model::BoundaryData s = model::interior_state(r, E, p);
        const double u = s.u.real();
        return (E - model::potential(r, p)) * u * u;
    };

    // Panel boundaries: uniform quarters plus extra cuts near r = a where the
    // tanh edge concentrates variation for large lambda.
    std::vector<double> cuts = {0.0, 0.25 * p.a, 0.5 * p.a, 0.75 * p.a, p.a};
    for (double k : {4.0, 2.0, 1.0, 0.5}) {
        const double r = p.a - k / p.lambda;
        if (r > 0.0 && r < p.a) cuts.push_back(r);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double x, double y) { return std::abs(x - y) < 1e-13; }),
               cuts.end());

    double scale = 0.0;
    std::vector<double> fvals(cuts.size());
    for (size_t i = 0; i < cuts.size(); ++i) {
        fvals[i] = integrand(cuts[i]);
        scale = std::max(scale, std::abs(fvals[i]));
    }
    const double tol_total = kQuadratureRelTol * std::max(scale * p.a, 1e-30);

    double interior = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a_ = cuts[i], b_ = cuts[i + 1];
        const double m_ = 0.5 * (a_ + b_);
        const double fm = integrand(m_);
        const double whole = simpson(a_, fvals[i], fm, b_, fvals[i + 1]);
        interior += adaptive_simpson(integrand, a_, fvals[i], m_, fm, b_, fvals[i + 1], whole,
                                     tol_total * (b_ - a_) / p.a, 28);
    }

    const model::BoundaryData edge = model::interior_state(p.a, E, p);
    const double kappa_b = std::sqrt(p.m * p.m - E * E);
    const double ua = edge.u.real();
    const double tail = E * ua * ua / (2.0 * kappa_b);

    NormResult n;
    n.interior_part = interior;
    n.tail_part = tail;
    n.value = interior + tail;
    n.zero_tolerance =
        kZeroToleranceFactor * std::max(std::abs(interior), std::abs(tail));
    return n;
}

Classification classify_state(const NormResult& n) {
    if (n.value > n.zero_tolerance) return Classification::particle;
    if (n.value < -n.zero_tolerance) return Classification::antiparticle;
    return Classification::critical;
}

}  // namespace kgtanh::norm
