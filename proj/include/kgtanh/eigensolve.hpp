#ifndef KGTANH_EIGENSOLVE_HPP
#define KGTANH_EIGENSOLVE_HPP

#include <optional>
#include <utility>
#include <vector>

#include "kgtanh/model.hpp"
#include "kgtanh/norm.hpp"

namespace kgtanh::eigensolve {

// Trial energy, exterior decay constant and interior boundary data at r = a.
// kappa_b is the principal sqrt(m^2 - E^2), Re >= 0.
struct MatchingContext {
    Complex E;
    Complex kappa_b;
    model::BoundaryData boundary;
};

// A solved bound state.
struct StateRecord {
    double E;
    double B;  // depth at which it was found
    double norm_value;
    norm::Classification classification;
    double residual;  // |matching function| at the root
};

enum class TerminalEvent { coalescence, embedding, range_end };

const char* to_string(TerminalEvent e);

// One traced spectrum branch E(B).
struct BranchCurve {
    std::vector<std::pair<double, double>> points;  // (B, E), strictly ordered in B
    TerminalEvent terminal_event = TerminalEvent::range_end;
    std::optional<double> critical_B;
    std::optional<double> critical_E;
};

MatchingContext make_matching_context(Complex E, const model::PotentialParams& p);

// Wronskian-type mismatch between the interior solution and the decaying
// exterior, normalized for scale invariance:
//   W(E) = [du(a) + kappa_b u(a)] / max(|u(a)|, |du(a)|).
// Zeros of W are the eigenvalues. The real overload requires |E| < m, asserts
// the imaginary residual is below 1e-8 and discards it; DegenerateBasis is
// retried internally at E +- 1e-9 before surfacing.
double matching_function(double E, const model::PotentialParams& p);
Complex matching_function(Complex E, const model::PotentialParams& p);

// Root isolation on a uniform grid over (-m+eps, m-eps) with eps = 1e-6 m,
// bisection refinement to |dE| <= 1e-12, and norm/classification fill.
// Emits a GridTooCoarse warning when the |W| profile suggests an unresolved
// root pair.
std::vector<StateRecord> find_bound_states(const model::PotentialParams& p, int grid_points,
                                           Warnings* warnings = nullptr);

// Root energies only (no norm evaluation); E-window may be restricted.
std::vector<double> scan_real_roots(const model::PotentialParams& p, int grid_points,
                                    double E_lo, double E_hi, Warnings* warnings = nullptr);

// Sweeps B over [B_start, B_end], warm-starting and linking roots across
// steps by nearest energy. Branches flag their terminal event; critical_B is
// refined by bisection on the event to |dB| <= 1e-6.
std::vector<BranchCurve> trace_branch(const model::PotentialParams& p_base, double B_start,
                                      double B_end, int steps, int grid_points = 1200);

// Location of the single terminal event of the requested mode inside
// [B_lo, B_hi]. For embedding the returned E_star is -m by definition.
// Throws EventNotBracketed otherwise.
std::pair<double, double> find_critical_B(const model::PotentialParams& p_base, double B_lo,
                                          double B_hi, TerminalEvent mode);

// Post-critical conjugate eigenvalue pair, found by a complex secant/Newton
// iteration on the analytically continued matching function, seeded at
// seed_E +- i*1e-3. Throws NoConvergence after 200 iterations.
std::pair<Complex, Complex> track_complex_pair(const model::PotentialParams& p_base, double B,
                                               double seed_E);

}  // namespace kgtanh::eigensolve

#endif
