#include "kgtanh/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kgtanh::eigensolve {

namespace {

constexpr double kWindowInset = 1e-6;          // in units of m
constexpr double kBisectTolE = 1e-12;
constexpr double kCriticalTolB = 1e-6;
constexpr double kImaginaryResidualTol = 1e-8;

Complex matching_raw(Complex E, const model::PotentialParams& p) {
    const MatchingContext ctx = make_matching_context(E, p);
    const Complex u = ctx.boundary.u;
    const Complex du = ctx.boundary.du;
    const double scale = std::max(std::abs(u), std::abs(du));
    return (du + ctx.kappa_b * u) / scale;
}

Complex matching_with_retry(Complex E, const model::PotentialParams& p) {
    try {
        return matching_raw(E, p);
    } catch (const DegenerateBasis&) {
    }
    try {
        return matching_raw(E + 1e-9, p);
    } catch (const DegenerateBasis&) {
    }
    return matching_raw(E - 1e-9, p);
}

}  // namespace

const char* to_string(TerminalEvent e) {
    switch (e) {
        case TerminalEvent::coalescence: return "coalescence";
        case TerminalEvent::embedding: return "embedding";
        case TerminalEvent::range_end: return "range_end";
    }
    return "?";
}

MatchingContext make_matching_context(Complex E, const model::PotentialParams& p) {
    MatchingContext ctx;
    ctx.E = E;
    ctx.kappa_b = std::sqrt(Complex(p.m * p.m, 0.0) - E * E);
    ctx.boundary = model::interior_state(p.a, E, p);
    return ctx;
}

double matching_function(double E, const model::PotentialParams& p) {
    if (!(std::abs(E) < p.m)) {
        throw DomainError("matching_function: |E| must be < m for real bound states");
    }
    const Complex w = matching_with_retry(Complex(E, 0.0), p);
    if (std::abs(w.imag()) > kImaginaryResidualTol * std::max(1.0, std::abs(w.real()))) {
        std::ostringstream msg;
        msg << "matching_function: imaginary residual " << w.imag() << " at E = " << E;
        throw NonConvergence(msg.str());
    }
    return w.real();
}

Complex matching_function(Complex E, const model::PotentialParams& p) {
    return matching_with_retry(E, p);
}

std::vector<double> scan_real_roots(const model::PotentialParams& p, int grid_points,
                                    double E_lo, double E_hi, Warnings* warnings) {
    if (grid_points < 100) {
        throw DomainError("scan_real_roots: grid_points must be >= 100");
    }
    const double inset = kWindowInset * p.m;
    const double lo = std::max(E_lo, -p.m + inset);
    const double hi = std::min(E_hi, p.m - inset);
    if (!(lo < hi)) return {};

    std::vector<double> es(grid_points);
    std::vector<double> ws(grid_points);
    for (int i = 0; i < grid_points; ++i) {
        es[i] = lo + (hi - lo) * static_cast<double>(i) / (grid_points - 1);
        ws[i] = matching_function(es[i], p);
    }

    std::vector<double> roots;
    for (int i = 0; i + 1 < grid_points; ++i) {
        if (ws[i] == 0.0) {
            roots.push_back(es[i]);
            continue;
        }
        if (ws[i] * ws[i + 1] < 0.0) {
            double a_ = es[i], b_ = es[i + 1], fa = ws[i];
            while (b_ - a_ > kBisectTolE) {
                const double mid = 0.5 * (a_ + b_);
                if (mid == a_ || mid == b_) break;
                const double fm = matching_function(mid, p);
                if (fa * fm <= 0.0) {
                    b_ = mid;
                } else {
                    a_ = mid;
                    fa = fm;
                }
            }
            roots.push_back(0.5 * (a_ + b_));
        }
    }
    if (ws.back() == 0.0) roots.push_back(es.back());

    // Post-hoc curvature check: a |W| local minimum without a sign change
    // whose parabolic fit dips below zero hints at a root pair inside two
    // grid cells.
    if (warnings) {
        for (int i = 1; i + 1 < grid_points; ++i) {
            if (ws[i - 1] * ws[i] <= 0.0 || ws[i] * ws[i + 1] <= 0.0) continue;
            if (std::abs(ws[i]) >= std::abs(ws[i - 1]) || std::abs(ws[i]) >= std::abs(ws[i + 1]))
                continue;
            const double curv = ws[i - 1] - 2.0 * ws[i] + ws[i + 1];
            if (curv == 0.0) continue;
            // Vertex value of the parabola through the three samples.
            const double slope = 0.5 * (ws[i + 1] - ws[i - 1]);
            const double vertex = ws[i] - slope * slope / (2.0 * curv);
            if (vertex * ws[i] < 0.0) {
                std::ostringstream msg;
                msg << "GridTooCoarse: possible unresolved root pair near E = " << es[i];
                warnings->push_back(msg.str());
            }
        }
    }

    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double x, double y) { return std::abs(x - y) < 1e-10; }),
                roots.end());
    return roots;
}

std::vector<StateRecord> find_bound_states(const model::PotentialParams& p, int grid_points,
                                           Warnings* warnings) {
    const std::vector<double> roots =
        scan_real_roots(p, grid_points, -p.m, p.m, warnings);
    std::vector<StateRecord> out;
    out.reserve(roots.size());
    for (double e : roots) {
        StateRecord rec;
        rec.E = e;
        rec.B = p.B;
        rec.residual = std::abs(matching_function(e, p));
        const norm::NormResult n = norm::kg_norm(e, p);
        rec.norm_value = n.value;
        rec.classification = norm::classify_state(n);
        out.push_back(rec);
    }
    return out;
}

namespace {

struct LiveBranch {
    std::vector<std::pair<double, double>> points;
    double last_step = 0.0;  // E change over the previous B step
    bool alive = true;
    TerminalEvent event = TerminalEvent::range_end;
    std::optional<double> critical_B;
    std::optional<double> critical_E;

    double last_E() const { return points.back().second; }
};

// Number of matching-function roots inside [e_lo, e_hi] on a local grid.
std::vector<double> local_roots(const model::PotentialParams& p, double e_lo, double e_hi,
                                int n) {
    return scan_real_roots(p, std::max(n, 100), e_lo, e_hi, nullptr);
}

// Bisection in B on a predicate "the root configuration still exists",
// returning the last B where it does (to tolerance kCriticalTolB).
template <typename Pred>
double refine_event_B(double B_ok, double B_gone, const Pred& exists) {
    while (std::abs(B_gone - B_ok) > kCriticalTolB) {
        const double mid = 0.5 * (B_ok + B_gone);
        if (mid == B_ok || mid == B_gone) break;
        if (exists(mid)) {
            B_ok = mid;
        } else {
            B_gone = mid;
        }
    }
    return 0.5 * (B_ok + B_gone);
}

}  // namespace

std::vector<BranchCurve> trace_branch(const model::PotentialParams& p_base, double B_start,
                                      double B_end, int steps, int grid_points) {
    if (steps < 2) throw DomainError("trace_branch: steps must be >= 2");
    if (!(B_start < B_end)) throw DomainError("trace_branch: need B_start < B_end");

    const double inset = kWindowInset * p_base.m;
    std::vector<LiveBranch> branches;
    double B_prev = B_start;

    for (int i = 0; i < steps; ++i) {
        const double B = B_start + (B_end - B_start) * static_cast<double>(i) / (steps - 1);
        const model::PotentialParams p = p_base.with_B(B);
        std::vector<double> roots = scan_real_roots(p, grid_points, -p.m, p.m, nullptr);

        // Greedy nearest-energy assignment with a step-size guard.
        std::vector<bool> root_used(roots.size(), false);
        std::vector<int> assigned(branches.size(), -1);
        struct Cand {
            double dist;
            int branch;
            int root;
        };
        std::vector<Cand> cands;
        for (int bi = 0; bi < static_cast<int>(branches.size()); ++bi) {
            if (!branches[bi].alive) continue;
            const double predicted = branches[bi].last_E() + branches[bi].last_step;
            // A branch seen only once has no slope history yet; near a
            // continuum-edge appearance E(B) accelerates quadratically, so
            // give it a generous first-step window.
            const double floor_allow =
                branches[bi].points.size() < 2 ? 0.15 * p_base.m : 0.02 * p_base.m;
            const double allowance =
                std::max({5.0 * std::abs(branches[bi].last_step), floor_allow, 1e-4});
            for (int ri = 0; ri < static_cast<int>(roots.size()); ++ri) {
                const double dist = std::abs(roots[ri] - predicted);
                if (dist <= allowance) cands.push_back({dist, bi, ri});
            }
        }
        std::sort(cands.begin(), cands.end(),
                  [](const Cand& x, const Cand& y) { return x.dist < y.dist; });
        for (const Cand& c : cands) {
            if (assigned[c.branch] >= 0 || root_used[c.root]) continue;
            assigned[c.branch] = c.root;
            root_used[c.root] = true;
        }

        // Terminal events for live branches that lost their root.
        std::vector<int> lost;
        for (int bi = 0; bi < static_cast<int>(branches.size()); ++bi) {
            if (branches[bi].alive && assigned[bi] < 0) lost.push_back(bi);
        }

        // Coalescence: a converging pair losing both roots in the same step.
        std::vector<bool> handled(branches.size(), false);
        for (size_t li = 0; li < lost.size(); ++li) {
            for (size_t lj = li + 1; lj < lost.size(); ++lj) {
                const int bi = lost[li], bj = lost[lj];
                if (handled[bi] || handled[bj]) continue;
                LiveBranch& b1 = branches[bi];
                LiveBranch& b2 = branches[bj];
                const double gap = std::abs(b1.last_E() - b2.last_E());
                const double guard =
                    10.0 * (std::abs(b1.last_step) + std::abs(b2.last_step)) + 1e-3;
                if (gap > guard) continue;
                // Bisection on "the root pair still exists", with the search
                // window tightened around the latest resolved pair so the
                // local grid keeps resolving the shrinking separation.
                double pair_lo = std::min(b1.last_E(), b2.last_E());
                double pair_hi = std::max(b1.last_E(), b2.last_E());
                const auto probe = [&](double Bq, double* lo_out, double* hi_out) {
                    const double sep = std::max(pair_hi - pair_lo, 1e-7);
                    const double w_lo = pair_lo - 3.0 * sep - 1e-4;
                    const double w_hi = pair_hi + 3.0 * sep + 1e-4;
                    const std::vector<double> rs =
                        local_roots(p_base.with_B(Bq), w_lo, w_hi, 1200);
                    if (rs.size() < 2) return false;
                    *lo_out = rs.front();
                    *hi_out = rs.back();
                    return true;
                };
                {
                    double l, h;
                    if (!probe(B_prev, &l, &h)) continue;
                    pair_lo = l;
                    pair_hi = h;
                }
                double B_ok = B_prev, B_gone = B;
                while (std::abs(B_gone - B_ok) > kCriticalTolB) {
                    const double mid = 0.5 * (B_ok + B_gone);
                    if (mid == B_ok || mid == B_gone) break;
                    double l, h;
                    if (probe(mid, &l, &h)) {
                        B_ok = mid;
                        pair_lo = l;
                        pair_hi = h;
                    } else {
                        B_gone = mid;
                    }
                }
                const double B_star = 0.5 * (B_ok + B_gone);
                const double E_star = 0.5 * (pair_lo + pair_hi);
                for (int bk : {bi, bj}) {
                    branches[bk].alive = false;
                    branches[bk].event = TerminalEvent::coalescence;
                    branches[bk].critical_B = B_star;
                    branches[bk].critical_E = E_star;
                }
                handled[bi] = handled[bj] = true;
            }
        }

        // Solo losses: the partner of a fold may live and die entirely inside
        // one B step (near-edge coalescences), so refine on the root structure
        // itself and classify from the final configuration.
        for (int bi : lost) {
            if (handled[bi]) continue;
            LiveBranch& b = branches[bi];
            const double reach =
                std::max({5.0 * std::abs(b.last_step), 0.05 * p_base.m, 1e-3});
            double w_lo = b.last_E() - reach;
            double w_hi = std::min(b.last_E() + reach, p_base.m - inset);
            const bool near_bottom = w_lo <= -p_base.m + inset + reach;
            if (near_bottom) w_lo = -p_base.m + inset;

            std::vector<double> last_seen;
            const auto probe = [&](double Bq) {
                double lo = w_lo, hi = w_hi;
                if (!last_seen.empty()) {
                    const double span =
                        std::max(last_seen.back() - last_seen.front(), 1e-7);
                    lo = std::max(w_lo, last_seen.front() - 3.0 * span - 1e-4);
                    hi = std::min(w_hi, last_seen.back() + 3.0 * span + 1e-4);
                    if (near_bottom) lo = w_lo;
                }
                std::vector<double> rs = local_roots(p_base.with_B(Bq), lo, hi, 1200);
                if (rs.empty()) return false;
                last_seen = std::move(rs);
                return true;
            };
            if (!probe(B_prev)) {
                std::ostringstream msg;
                msg << "BranchLost: root near E = " << b.last_E()
                    << " disappeared between B = " << B_prev << " and B = " << B
                    << " without a terminal event";
                throw BranchLost(msg.str());
            }
            double B_ok = B_prev, B_gone = B;
            while (std::abs(B_gone - B_ok) > kCriticalTolB) {
                const double mid = 0.5 * (B_ok + B_gone);
                if (mid == B_ok || mid == B_gone) break;
                if (probe(mid)) {
                    B_ok = mid;
                } else {
                    B_gone = mid;
                }
            }
            b.alive = false;
            b.critical_B = 0.5 * (B_ok + B_gone);
            if (last_seen.size() >= 2) {
                // A partner emerged and merged below step resolution.
                b.event = TerminalEvent::coalescence;
                b.critical_E = 0.5 * (last_seen.front() + last_seen.back());
            } else if (near_bottom &&
                       last_seen.front() <= -p_base.m + inset + 1e-4) {
                b.event = TerminalEvent::embedding;
                b.critical_E = -p_base.m;
            } else {
                std::ostringstream msg;
                msg << "BranchLost: root near E = " << last_seen.front()
                    << " vanished at B = " << *b.critical_B
                    << " away from any terminal event";
                throw BranchLost(msg.str());
            }
            handled[bi] = true;
        }

        // Extend assigned branches, then open new ones for unclaimed roots.
        for (int bi = 0; bi < static_cast<int>(branches.size()); ++bi) {
            if (assigned[bi] < 0) continue;
            LiveBranch& b = branches[bi];
            const double e = roots[assigned[bi]];
            b.last_step = e - b.last_E();
            b.points.emplace_back(B, e);
        }
        for (int ri = 0; ri < static_cast<int>(roots.size()); ++ri) {
            if (root_used[ri]) continue;
            LiveBranch nb;
            nb.points.emplace_back(B, roots[ri]);
            branches.push_back(std::move(nb));
        }
        B_prev = B;
    }

    std::vector<BranchCurve> out;
    out.reserve(branches.size());
    for (LiveBranch& b : branches) {
        BranchCurve c;
        c.points = std::move(b.points);
        c.terminal_event = b.event;
        c.critical_B = b.critical_B;
        c.critical_E = b.critical_E;
        out.push_back(std::move(c));
    }
    return out;
}

std::pair<double, double> find_critical_B(const model::PotentialParams& p_base, double B_lo,
                                          double B_hi, TerminalEvent mode) {
    if (mode == TerminalEvent::range_end) {
        throw DomainError("find_critical_B: mode must be coalescence or embedding");
    }
    const std::vector<BranchCurve> curves = trace_branch(p_base, B_lo, B_hi, 64);
    std::vector<std::pair<double, double>> events;
    for (const BranchCurve& c : curves) {
        if (c.terminal_event != mode || !c.critical_B) continue;
        bool duplicate = false;
        for (const auto& ev : events) {
            if (std::abs(ev.first - *c.critical_B) < 1e-4) duplicate = true;
        }
        if (!duplicate) events.emplace_back(*c.critical_B, *c.critical_E);
    }
    if (events.size() != 1) {
        std::ostringstream msg;
        msg << "find_critical_B: expected exactly one " << to_string(mode) << " event in ["
            << B_lo << ", " << B_hi << "], found " << events.size();
        throw EventNotBracketed(msg.str());
    }
    return events.front();
}

std::pair<Complex, Complex> track_complex_pair(const model::PotentialParams& p_base, double B,
                                               double seed_E) {
    const model::PotentialParams p = p_base.with_B(B);
    const auto newton = [&](Complex e0) {
        Complex e = e0;
        for (int it = 0; it < 200; ++it) {
            const Complex w = matching_function(e, p);
            if (std::abs(w) <= 1e-8) return e;
            const double h = 1e-7 * std::max(1.0, std::abs(e));
            const Complex dw =
                (matching_function(e + h, p) - matching_function(e - h, p)) / (2.0 * h);
            if (std::abs(dw) == 0.0) break;
            Complex step = -w / dw;
            const double cap = 0.1 * std::max(1.0, std::abs(e));
            if (std::abs(step) > cap) step *= cap / std::abs(step);
            e += step;
        }
        throw NoConvergence("track_complex_pair: Newton iteration did not reach |W| <= 1e-8");
    };
    const Complex upper = newton(Complex(seed_E, 1e-3));
    const Complex lower = newton(Complex(seed_E, -1e-3));
    if (std::abs(std::conj(upper) - lower) > 1e-8) {
        throw NoConvergence("track_complex_pair: roots are not conjugate to 1e-8");
    }
    return {upper, lower};
}

}  // namespace kgtanh::eigensolve
