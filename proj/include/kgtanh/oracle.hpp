#ifndef KGTANH_ORACLE_HPP
#define KGTANH_ORACLE_HPP

#include <vector>

#include "kgtanh/model.hpp"

namespace kgtanh::oracle {

// Independent ground truth: adaptive Runge-Kutta integration of the radial
// equation u'' + ((E-V)^2 - m^2) u = 0, never touching the hypergeometric
// closed form. Extraction logic (atan2, bracketing, the potential itself) is
// deliberately not shared with the closed-form path; only PotentialParams and
// BoundaryData are common.

struct IntegratorConfig {
    double rel_tol = 1e-11;
    double abs_tol = 1e-13;
    int max_steps = 2000000;
    double r_start_inset = 0.0;  // the equation is regular at r = 0

    IntegratorConfig() = default;
    IntegratorConfig(double rel, double abs, int steps, double inset = 0.0)
        : rel_tol(rel), abs_tol(abs), max_steps(steps), r_start_inset(inset) {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
            throw DomainError("IntegratorConfig: tolerances must be > 0");
        }
        if (max_steps < 1000) {
            throw DomainError("IntegratorConfig: max_steps must be >= 1000");
        }
    }
};

// Embedded Dormand-Prince 5(4) solution of the first-order system (u, du)
// from `from.r` to r_end. Complex trial energies are supported.
model::BoundaryData integrate_radial(Complex E, const model::PotentialParams& p,
                                     const model::BoundaryData& from, double r_end,
                                     const IntegratorConfig& cfg = IntegratorConfig());

// Bound-state eigenvalues by shooting: bracket sign changes of the exterior
// mismatch on a uniform grid over (-m+eps, m-eps), refine by bisection to
// |dE| <= 1e-10.
std::vector<double> shoot_bound_states(const model::PotentialParams& p, int grid_points,
                                       const IntegratorConfig& cfg = IntegratorConfig());

// Continuum phase shift at |E| > m via RK integration to r = a and the
// standing-wave atan2 extraction, reduced to (-pi, pi].
double shoot_phase_shift(double E, const model::PotentialParams& p,
                         const IntegratorConfig& cfg = IntegratorConfig());

}  // namespace kgtanh::oracle

#endif
