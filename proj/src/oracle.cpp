#include "kgtanh/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace kgtanh::oracle {

namespace {

struct State {
    Complex u;
    Complex v;  // du/dr
};

// V(r) evaluated locally: the oracle does not call model::potential by design.
double local_potential(double r, const model::PotentialParams& p) {
    if (r > p.a) return 0.0;
    return p.D * std::tanh(p.lambda * r) - p.B;
}

State rhs(double r, const State& y, Complex E, const model::PotentialParams& p) {
    const Complex ev = E - local_potential(r, p);
    return State{y.v, -(ev * ev - p.m * p.m) * y.u};
}

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

State axpy(const State& y, double h, const State& k) {
    return State{y.u + h * k.u, y.v + h * k.v};
}

}  // namespace

model::BoundaryData integrate_radial(Complex E, const model::PotentialParams& p,
                                     const model::BoundaryData& from, double r_end,
                                     const IntegratorConfig& cfg) {
    if (from.r == r_end) {
        throw DomainError("integrate_radial: need from.r != r_end");
    }
    const double dir = r_end > from.r ? 1.0 : -1.0;
    double r = from.r + dir * cfg.r_start_inset;
    State y{from.u, from.du};
    double h = (r_end - r) / 100.0;
    const double h_min = 1e-14 * p.a;
    int steps = 0;
    State k1 = rhs(r, y, E, p);
    while ((r_end - r) * dir > 0.0) {
        if (++steps > cfg.max_steps) {
            throw StepLimitExceeded("integrate_radial: step budget exhausted");
        }
        if (std::abs(h) > std::abs(r_end - r)) h = r_end - r;
        if (std::abs(h) < h_min) {
            std::ostringstream msg;
            msg << "integrate_radial: step collapsed to " << h << " at r = " << r;
            throw StiffnessSuspected(msg.str());
        }
        const State k2 = rhs(r + c2 * h, axpy(y, h * a21, k1), E, p);
        State tmp = y;
        tmp = axpy(tmp, h * a31, k1);
        tmp = axpy(tmp, h * a32, k2);
        const State k3 = rhs(r + c3 * h, tmp, E, p);
        tmp = y;
        tmp = axpy(tmp, h * a41, k1);
        tmp = axpy(tmp, h * a42, k2);
        tmp = axpy(tmp, h * a43, k3);
        const State k4 = rhs(r + c4 * h, tmp, E, p);
        tmp = y;
        tmp = axpy(tmp, h * a51, k1);
        tmp = axpy(tmp, h * a52, k2);
        tmp = axpy(tmp, h * a53, k3);
        tmp = axpy(tmp, h * a54, k4);
        const State k5 = rhs(r + c5 * h, tmp, E, p);
        tmp = y;
        tmp = axpy(tmp, h * a61, k1);
        tmp = axpy(tmp, h * a62, k2);
        tmp = axpy(tmp, h * a63, k3);
        tmp = axpy(tmp, h * a64, k4);
        tmp = axpy(tmp, h * a65, k5);
        const State k6 = rhs(r + h, tmp, E, p);
        State ynew = y;
        ynew = axpy(ynew, h * b1, k1);
        ynew = axpy(ynew, h * b3, k3);
        ynew = axpy(ynew, h * b4, k4);
        ynew = axpy(ynew, h * b5, k5);
        ynew = axpy(ynew, h * b6, k6);
        const State k7 = rhs(r + h, ynew, E, p);

        const Complex err_u =
            h * (e1 * k1.u + e3 * k3.u + e4 * k4.u + e5 * k5.u + e6 * k6.u + e7 * k7.u);
        const Complex err_v =
            h * (e1 * k1.v + e3 * k3.v + e4 * k4.v + e5 * k5.v + e6 * k6.v + e7 * k7.v);
        // One scalar scale for the whole state keeps the step control
        // invariant under rescaling of the initial data (the equation is
        // linear), while abs_tol still guards genuinely tiny solutions.
        const double ynorm = std::max({std::abs(y.u), std::abs(ynew.u), std::abs(y.v),
                                       std::abs(ynew.v)});
        const double sc = cfg.abs_tol + cfg.rel_tol * ynorm;
        const double err = std::sqrt(0.5 * (std::norm(err_u) + std::norm(err_v))) / sc;

        if (err <= 1.0) {
            r += h;
            y = ynew;
            k1 = k7;  // FSAL
        }
        const double factor =
            (err > 0.0) ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
        h *= factor;
    }
    return model::BoundaryData{y.u, y.v, r_end};
}

namespace {

// Exterior mismatch for shooting; independent twin of the closed-form path.
double shoot_mismatch(double E, const model::PotentialParams& p, const IntegratorConfig& cfg) {
    const model::BoundaryData start{Complex(0.0, 0.0), Complex(1.0, 0.0), 0.0};
    const model::BoundaryData end = integrate_radial(Complex(E, 0.0), p, start, p.a, cfg);
    const double kb = std::sqrt(p.m * p.m - E * E);
    const double u = end.u.real();
    const double du = end.du.real();
    return (du + kb * u) / std::max(std::abs(u), std::abs(du));
}

}  // namespace

std::vector<double> shoot_bound_states(const model::PotentialParams& p, int grid_points,
                                       const IntegratorConfig& cfg) {
    if (grid_points < 100) {
        throw DomainError("shoot_bound_states: grid_points must be >= 100");
    }
    const double eps = 1e-6 * p.m;
    const double lo = -p.m + eps;
    const double hi = p.m - eps;
    std::vector<double> roots;
    double e_prev = lo;
    double w_prev = shoot_mismatch(e_prev, p, cfg);
    for (int i = 1; i < grid_points; ++i) {
        const double e = lo + (hi - lo) * static_cast<double>(i) / (grid_points - 1);
        const double w = shoot_mismatch(e, p, cfg);
        if (w_prev == 0.0) {
            roots.push_back(e_prev);
        } else if (w_prev * w < 0.0) {
            double a_ = e_prev, b_ = e, fa = w_prev;
            while (b_ - a_ > 1e-10) {
                const double mid = 0.5 * (a_ + b_);
                const double fm = shoot_mismatch(mid, p, cfg);
                if (fa * fm <= 0.0) {
                    b_ = mid;
                } else {
                    a_ = mid;
                    fa = fm;
                }
            }
            roots.push_back(0.5 * (a_ + b_));
        }
        e_prev = e;
        w_prev = w;
    }
    return roots;
}

double shoot_phase_shift(double E, const model::PotentialParams& p,
                         const IntegratorConfig& cfg) {
    if (std::abs(E) <= p.m) {
        throw DomainError("shoot_phase_shift: |E| must exceed m");
    }
    const model::BoundaryData start{Complex(0.0, 0.0), Complex(1.0, 0.0), 0.0};
    const model::BoundaryData end = integrate_radial(Complex(E, 0.0), p, start, p.a, cfg);
    const double kc = std::sqrt(E * E - p.m * p.m);
    double delta = std::atan2(kc * end.u.real(), end.du.real()) - kc * p.a;
    constexpr double pi = 3.14159265358979323846;
    delta = std::remainder(delta, 2.0 * pi);
    if (delta <= -pi) delta += 2.0 * pi;
    return delta;
}

}  // namespace kgtanh::oracle
