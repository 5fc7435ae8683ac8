#ifndef KGTANH_SCATTERING_HPP
#define KGTANH_SCATTERING_HPP

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "kgtanh/model.hpp"

namespace kgtanh::scattering {

// One sample of the continuum scan: energy, unwrapped phase shift (radians)
// and Wigner time delay tau = 2 d(delta)/dE.
struct PhasePoint {
    double E;
    double delta;
    double tau;
};

struct ResonanceInfo {
    double E_res;     // energy of maximal delay
    double width;     // 4 / tau_peak (Breit-Wigner)
    double tau_peak;
    double crossing;  // energy where the unwrapped delta crosses pi/2 mod pi
};

// Phase shift in the standing-wave convention sin(kappa_c r + delta):
//   delta = atan2(kappa_c u(a), du(a)) - kappa_c a,  reduced to (-pi, pi].
// Requires |E| > m (1 + 1e-9); throws DomainError inside the gap.
double phase_shift(double E, const model::PotentialParams& p);

// Adds integer multiples of pi to successive samples to minimize jumps; the
// first sample is anchored to (-pi/2, pi/2]. Samples must be ordered in E.
std::vector<std::pair<double, double>> unwrap_phase(
    const std::vector<std::pair<double, double>>& samples, Warnings* warnings = nullptr);

// tau = 2 d(delta)/dE by central differences on the locally-unwrapped phase
// of an arbitrary raw-phase callable, with Richardson control (h is halved
// until the (h, h/2) pair agrees to 1e-4 relative; DifferentiationUnstable
// beyond 1e-2).
double time_delay_of(const std::function<double(double)>& delta_raw, double E, double h);

// Same for the model phase shift. Requires |E| - m > 2h.
double wigner_time_delay(double E, const model::PotentialParams& p, double h = 1e-5);

// Scan helper for the CLI: (E, unwrapped delta, tau) on a uniform grid.
std::vector<PhasePoint> scan_phase(const model::PotentialParams& p, double E_lo, double E_hi,
                                   int points, Warnings* warnings = nullptr);

// Resonance detector on an arbitrary raw-phase callable: reports a resonance
// when the unwrapped phase crosses pi/2 (mod pi) with tau > 0 at the crossing
// AND tau has an interior local maximum consistent with the ResonanceInfo
// invariant |E_res - crossing| <= width. Monotone threshold rises (no
// interior tau peak) are rejected.
std::optional<ResonanceInfo> detect_resonance(const std::function<double(double)>& delta_raw,
                                              double E_lo, double E_hi, int grid_points);

// Model-facing wrapper; [E_lo, E_hi] must lie entirely within one continuum
// and grid_points must be >= 200.
std::optional<ResonanceInfo> find_resonance(const model::PotentialParams& p, double E_lo,
                                            double E_hi, int grid_points);

}  // namespace kgtanh::scattering

#endif
