#include "kgtanh/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kgtanh::scattering {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double kGapGuard = 1e-9;

double reduce_to_pi(double d) {
    d = std::remainder(d, 2.0 * pi);
    if (d <= -pi) d += 2.0 * pi;
    return d;
}

// Nearest representative of d (mod pi) to the anchor value.
double snap_mod_pi(double d, double anchor) {
    return d - pi * std::round((d - anchor) / pi);
}

double anchor_first(double d) {
    double out = d - pi * std::round(d / pi);
    if (out <= -0.5 * pi) out += pi;
    if (out > 0.5 * pi) out -= pi;  // boundary rounding
    if (out <= -0.5 * pi) out += pi;
    return out;
}

}  // namespace

double phase_shift(double E, const model::PotentialParams& p) {
    if (!(std::abs(E) > p.m * (1.0 + kGapGuard))) {
        throw DomainError("phase_shift: |E| must exceed m (1 + 1e-9)");
    }
    model::BoundaryData s{};
    try {
        s = model::interior_state(p.a, E, p);
    } catch (const DegenerateBasis&) {
        s = model::interior_state(p.a, E + 1e-9 * p.m, p);
    }
    const double kc = std::sqrt(E * E - p.m * p.m);
    const double d = std::atan2(kc * s.u.real(), s.du.real()) - kc * p.a;
    return reduce_to_pi(d);
}

std::vector<std::pair<double, double>> unwrap_phase(
    const std::vector<std::pair<double, double>>& samples, Warnings* warnings) {
    std::vector<std::pair<double, double>> out;
    out.reserve(samples.size());
    if (samples.empty()) return out;
    for (size_t i = 1; i < samples.size(); ++i) {
        if (!(samples[i].first > samples[i - 1].first)) {
            throw DomainError("unwrap_phase: samples must be strictly ordered in E");
        }
    }
    out.emplace_back(samples[0].first, anchor_first(samples[0].second));
    for (size_t i = 1; i < samples.size(); ++i) {
        const double prev = out.back().second;
        const double d = snap_mod_pi(samples[i].second, prev);
        if (warnings && std::abs(d - prev) >= 0.5 * pi * (1.0 - 1e-9)) {
            std::ostringstream msg;
            msg << "JumpTooLarge: minimized phase jump of " << std::abs(d - prev)
                << " at E = " << samples[i].first << " (grid too coarse)";
            warnings->push_back(msg.str());
        }
        out.emplace_back(samples[i].first, d);
    }
    return out;
}

double time_delay_of(const std::function<double(double)>& delta_raw, double E, double h) {
    if (!(h > 0.0)) throw DomainError("time_delay_of: h must be > 0");
    const auto estimate = [&](double hh) {
        const double d0 = anchor_first(delta_raw(E));
        const double dp = snap_mod_pi(delta_raw(E + hh), d0);
        const double dm = snap_mod_pi(delta_raw(E - hh), d0);
        return (dp - dm) / hh;  // = 2 * central difference of delta
    };
    double d1 = estimate(h);
    double d2 = estimate(0.5 * h);
    for (int it = 0; it < 24; ++it) {
        const double rel = std::abs(d1 - d2) / std::max(1.0, std::abs(d2));
        if (rel <= 1e-4) return (4.0 * d2 - d1) / 3.0;
        h *= 0.5;
        d1 = d2;
        d2 = estimate(0.5 * h);
    }
    const double rel = std::abs(d1 - d2) / std::max(1.0, std::abs(d2));
    if (rel <= 1e-2) return (4.0 * d2 - d1) / 3.0;
    std::ostringstream msg;
    msg << "time_delay_of: Richardson pair disagrees by " << rel << " at E = " << E;
    throw DifferentiationUnstable(msg.str());
}

double wigner_time_delay(double E, const model::PotentialParams& p, double h) {
    if (!(std::abs(E) - p.m > 2.0 * h)) {
        throw DomainError("wigner_time_delay: need |E| - m > 2h");
    }
    return time_delay_of([&](double e) { return phase_shift(e, p); }, E, h);
}

std::vector<PhasePoint> scan_phase(const model::PotentialParams& p, double E_lo, double E_hi,
                                   int points, Warnings* warnings) {
    if (points < 2) throw DomainError("scan_phase: points must be >= 2");
    std::vector<std::pair<double, double>> raw;
    raw.reserve(points);
    for (int i = 0; i < points; ++i) {
        const double e = E_lo + (E_hi - E_lo) * static_cast<double>(i) / (points - 1);
        raw.emplace_back(e, phase_shift(e, p));
    }
    const auto unwrapped = unwrap_phase(raw, warnings);
    std::vector<PhasePoint> out;
    out.reserve(points);
    for (const auto& [e, d] : unwrapped) {
        const double h = std::min(1e-5 * p.m, 0.25 * (std::abs(e) - p.m));
        out.push_back({e, d, wigner_time_delay(e, p, h)});
    }
    return out;
}

namespace {

// Golden-section maximizer; f assumed unimodal on [a, b] for the purpose of
// locating a candidate peak (validated afterwards).
double golden_max(const std::function<double(double)>& f, double a, double b, int iters) {
    const double gr = 0.6180339887498949;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

std::optional<ResonanceInfo> detect_resonance(const std::function<double(double)>& delta_raw,
                                              double E_lo, double E_hi, int grid_points) {
    if (grid_points < 8) throw DomainError("detect_resonance: grid too small");
    std::vector<std::pair<double, double>> raw;
    raw.reserve(grid_points);
    for (int i = 0; i < grid_points; ++i) {
        const double e = E_lo + (E_hi - E_lo) * static_cast<double>(i) / (grid_points - 1);
        raw.emplace_back(e, delta_raw(e));
    }
    const auto d = unwrap_phase(raw, nullptr);
    const double cell = (E_hi - E_lo) / (grid_points - 1);

    double dmin = d[0].second, dmax = d[0].second;
    for (const auto& [e, v] : d) {
        dmin = std::min(dmin, v);
        dmax = std::max(dmax, v);
    }
    const int kmin = static_cast<int>(std::ceil((dmin - 0.5 * pi) / pi));
    const int kmax = static_cast<int>(std::floor((dmax - 0.5 * pi) / pi));

    const double h0 = std::min(1e-5, cell / 16.0);
    const auto tau_at = [&](double e) { return time_delay_of(delta_raw, e, h0); };

    std::optional<ResonanceInfo> best;
    for (int k = kmin; k <= kmax; ++k) {
        const double level = 0.5 * pi + pi * k;
        for (int i = 0; i + 1 < grid_points; ++i) {
            const double g0 = d[i].second - level;
            const double g1 = d[i + 1].second - level;
            if (!(g0 * g1 < 0.0)) continue;

            // Refine the crossing with the locally-unwrapped phase.
            double a_ = d[i].first, b_ = d[i + 1].first;
            const auto local = [&](double e) {
                const double t = (e - a_) / std::max(b_ - a_, 1e-300);
                const double guess = d[i].second + t * (d[i + 1].second - d[i].second);
                return snap_mod_pi(delta_raw(e), guess);
            };
            double fa = g0;
            for (int it = 0; it < 60 && b_ - a_ > 1e-13; ++it) {
                const double mid = 0.5 * (a_ + b_);
                const double fm = local(mid) - level;
                if (fa * fm <= 0.0) {
                    b_ = mid;
                } else {
                    a_ = mid;
                    fa = fm;
                }
            }
            const double crossing = 0.5 * (a_ + b_);
            const double tau_c = tau_at(crossing);
            if (!(tau_c > 0.0)) continue;

            // Candidate peak window: a few grid cells or a few widths.
            const double w = std::max(4.0 * cell, 8.0 / tau_c);
            const double lo = std::max(E_lo, crossing - w);
            const double hi = std::min(E_hi, crossing + w);
            const double e_res = golden_max(tau_at, lo, hi, 48);
            // A genuine Breit-Wigner peak is interior; a monotone rise into a
            // continuum edge parks the maximizer at the scan boundary.
            const double edge_guard = std::max(cell, 0.02 * (hi - lo));
            if (e_res - E_lo < edge_guard || E_hi - e_res < edge_guard) continue;
            if ((e_res - lo < 1e-3 * (hi - lo) && lo > E_lo) ||
                (hi - e_res < 1e-3 * (hi - lo) && hi < E_hi)) {
                // Maximizer pinned to the search-window edge: no interior peak.
                continue;
            }
            const double tau_peak = tau_at(e_res);
            if (!(tau_peak > 0.0)) continue;
            const double width = 4.0 / tau_peak;
            if (std::abs(e_res - crossing) > width) continue;

            ResonanceInfo info{e_res, width, tau_peak, crossing};
            if (!best || info.tau_peak > best->tau_peak) best = info;
        }
    }
    return best;
}

std::optional<ResonanceInfo> find_resonance(const model::PotentialParams& p, double E_lo,
                                            double E_hi, int grid_points) {
    if (grid_points < 200) {
        throw DomainError("find_resonance: grid_points must be >= 200");
    }
    if (!(E_lo < E_hi)) throw DomainError("find_resonance: need E_lo < E_hi");
    const double edge = p.m * (1.0 + kGapGuard);
    const bool positive = E_lo > edge && E_hi > edge;
    const bool negative = E_lo < -edge && E_hi < -edge;
    if (!positive && !negative) {
        throw DomainError("find_resonance: [E_lo, E_hi] must lie within one continuum");
    }
    return detect_resonance([&](double e) { return phase_shift(e, p); }, E_lo, E_hi,
                            grid_points);
}

}  // namespace kgtanh::scattering
