#include "relaxcycle/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace relaxcycle {

namespace {

constexpr double pi = std::numbers::pi;

void check_s(double s) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw DomainError("equilibria: s must be > 0, got " + std::to_string(s));
    }
}

// Newton polish; refines, never relocates. Near a fold p' vanishes at the
// double root and a raw Newton step can fly to a different root, so any
// polish that drifts far from the closed-form estimate is discarded.
double polish_root(const EquilibriumCubic& p, double x0) {
    double x = x0;
    for (int i = 0; i < 4; ++i) {
        const double f = p.eval(x);
        const double df = p.deriv(x);
        if (df == 0.0) break;
        const double step = f / df;
        if (!std::isfinite(step)) break;
        x -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    if (std::abs(x - x0) > 0.05 * (1.0 + std::abs(x0))) return x0;
    return x;
}

double bisect_root(const EquilibriumCubic& p, double lo, double hi) {
    double flo = p.eval(lo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = p.eval(mid);
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

// Sign-change scan over a log-spaced grid on (0, n_hi], used when the closed
// form degenerates. Tangency roots (even multiplicity) are not crossings and
// stay invisible to the scan.
std::vector<double> scan_positive_roots(const EquilibriumCubic& p, double n_hi) {
    constexpr int grid = 4096;
    std::vector<double> roots;
    double prev_n = n_hi * 1e-12;
    double prev_f = p.eval(prev_n);
    for (int i = 1; i <= grid; ++i) {
        const double n = n_hi * std::pow(1e12, static_cast<double>(i) / grid - 1.0);
        const double f = p.eval(n);
        if ((prev_f < 0.0) != (f < 0.0)) {
            roots.push_back(bisect_root(p, prev_n, n));
        }
        prev_n = n;
        prev_f = f;
    }
    return roots;
}

// Real roots of the monic cubic, ascending. The equilibrium cubic has
// c0 < 0 < c1, which forces every real root to be positive.
std::vector<double> cubic_real_roots(const EquilibriumCubic& p, double n_hi) {
    // depressed form: x = y - c2/3, y^3 + q y + w = 0
    const double a = p.c2;
    const double q = p.c1 - a * a / 3.0;
    const double w = a * (2.0 * a * a / 27.0 - p.c1 / 3.0) + p.c0;
    const double disc = -4.0 * q * q * q - 27.0 * w * w;

    const double scale = std::max({1.0, std::abs(a), std::abs(p.c1), std::abs(p.c0)});

    std::vector<double> roots;
    if (disc > 0.0) {
        // three real roots (trigonometric form; disc > 0 implies q < 0)
        const double m = 2.0 * std::sqrt(-q / 3.0);
        const double arg = std::clamp(3.0 * w / (q * m), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int j = 0; j < 3; ++j) {
            const double y = m * std::cos(theta - 2.0 * pi * j / 3.0);
            roots.push_back(polish_root(p, y - a / 3.0));
        }
    } else if (disc < 0.0) {
        // one real root (Cardano); polish absorbs the cancellation error
        const double half_w = 0.5 * w;
        const double rad = std::sqrt(half_w * half_w + q * q * q / 27.0);
        const double y = std::cbrt(-half_w + rad) + std::cbrt(-half_w - rad);
        roots.push_back(polish_root(p, y - a / 3.0));
    } else {
        return scan_positive_roots(p, n_hi); // exact double/triple root
    }

    std::sort(roots.begin(), roots.end());
    for (double x : roots) {
        if (!std::isfinite(x) || std::abs(p.eval(x)) > 1e-6 * scale) {
            return scan_positive_roots(p, n_hi);
        }
    }
    return roots;
}

double relative_gap(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

// nearest stable root by relative distance; nullopt when no root is stable
std::optional<double> nearest_stable(const EquilibriumSet& es, double n_prev) {
    std::optional<double> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& eq : es.roots) {
        if (!eq.stable) continue;
        const double d =
            std::abs(eq.n - n_prev) / std::max(std::abs(eq.n), std::abs(n_prev));
        if (d < best_d) {
            best_d = d;
            best = eq.n;
        }
    }
    return best;
}

constexpr double branch_jump_threshold = 0.5; // relative distance

bool branch_continues(double n_prev, double n_next) {
    return std::abs(n_next - n_prev) / std::max(std::abs(n_next), std::abs(n_prev)) <=
           branch_jump_threshold;
}

} // namespace

const char* to_string(Branch branch) {
    return branch == Branch::low ? "low" : "high";
}

EquilibriumCubic equilibrium_polynomial(const ModelParams& params, double s) {
    params.validate();
    check_s(s);
    const double ks = params.k * s;
    const double eta2s2 = params.eta * params.eta * s * s;
    return EquilibriumCubic{-ks, eta2s2 + params.b * ks / params.r, -eta2s2 * ks};
}

EquilibriumSet budworm_equilibria(const ModelParams& params, double s) {
    const EquilibriumCubic p = equilibrium_polynomial(params, s);

    // p(kS) = B k^2 S^2 / r > 0 and p' > 0 beyond, so roots live in (0, kS).
    const std::vector<double> raw = cubic_real_roots(p, params.k * s);

    EquilibriumSet out;
    out.s = s;

    std::vector<double> kept;
    for (double x : raw) {
        if (!(x > 0.0)) continue;
        if (!kept.empty() && relative_gap(kept.back(), x) < 1e-11) {
            out.near_fold = true; // numerically coincident pair: collapse it
            continue;
        }
        kept.push_back(x);
    }
    if (kept.empty()) {
        throw NumericalError("degenerate",
                             "budworm_equilibria: no positive root recovered at s = " +
                                 std::to_string(s));
    }
    for (std::size_t i = 0; i + 1 < kept.size(); ++i) {
        if (relative_gap(kept[i], kept[i + 1]) < near_fold_gap) out.near_fold = true;
    }

    for (double x : kept) {
        out.roots.push_back(Equilibrium{x, p.deriv(x) > 0.0});
    }
    return out;
}

namespace {

// Inside the bistable window (or exactly on a fold) there is more than one
// positive equilibrium.
bool in_window(const ModelParams& params, double s) {
    return budworm_equilibria(params, s).roots.size() >= 2;
}

double bisect_window_edge(const ModelParams& params, double lo, double hi,
                          double* width_out) {
    const bool inside_lo = in_window(params, lo);
    while (hi - lo > 1e-9 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (in_window(params, mid) == inside_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (width_out) *width_out = hi - lo;
    return 0.5 * (lo + hi);
}

} // namespace

std::optional<FoldPair> fold_points(const ModelParams& params, double s_lo, double s_hi,
                                    int grid_points) {
    params.validate();
    if (!(s_lo > 0.0) || !(s_hi > s_lo)) {
        throw ValidationError("fold_points: require 0 < s_lo < s_hi");
    }
    if (grid_points < 8) {
        throw ValidationError("fold_points: grid_points must be >= 8");
    }

    const double ratio = s_hi / s_lo;
    std::vector<double> grid(static_cast<std::size_t>(grid_points));
    for (int i = 0; i < grid_points; ++i) {
        grid[static_cast<std::size_t>(i)] =
            s_lo * std::pow(ratio, static_cast<double>(i) / (grid_points - 1));
    }
    grid.front() = s_lo;
    grid.back() = s_hi;

    struct Transition {
        double lo, hi;
        bool entering; // false->true: entering the multi-root window
    };
    std::vector<Transition> transitions;
    bool prev = in_window(params, grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const bool cur = in_window(params, grid[i]);
        if (cur != prev) {
            transitions.push_back(Transition{grid[i - 1], grid[i], cur});
            prev = cur;
        }
    }

    if (transitions.empty()) return std::nullopt;
    if (transitions.size() != 2 || !transitions[0].entering || transitions[1].entering) {
        std::string where;
        for (const auto& tr : transitions) {
            where += std::string(tr.entering ? " 1->3 in [" : " 3->1 in [") +
                     std::to_string(tr.lo) + ", " + std::to_string(tr.hi) + "]";
        }
        throw NumericalError("ambiguous",
                             "fold_points: expected exactly one 1->3 and one 3->1 "
                             "transition in the range, found" +
                                 where + "; widen or split the range");
    }

    double w_minus = 0.0;
    double w_plus = 0.0;
    const double s_minus =
        bisect_window_edge(params, transitions[0].lo, transitions[0].hi, &w_minus);
    const double s_plus =
        bisect_window_edge(params, transitions[1].lo, transitions[1].hi, &w_plus);
    return FoldPair{s_minus, s_plus, std::max(w_minus, w_plus)};
}

HysteresisTrace quasi_static_sweep(const ModelParams& params,
                                   std::span<const double> schedule,
                                   std::optional<Branch> initial_branch) {
    params.validate();
    if (schedule.empty()) {
        throw ValidationError("quasi_static_sweep: empty schedule");
    }
    for (double s : schedule) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw ValidationError("quasi_static_sweep: schedule values must be > 0");
        }
    }

    HysteresisTrace trace;
    trace.schedule.assign(schedule.begin(), schedule.end());
    trace.branch_n.reserve(schedule.size());

    const EquilibriumSet first = budworm_equilibria(params, schedule[0]);
    std::vector<double> stable_roots;
    for (const auto& eq : first.roots) {
        if (eq.stable) stable_roots.push_back(eq.n);
    }

    double n_cur;
    if (stable_roots.size() == 1) {
        n_cur = stable_roots.front();
    } else if (stable_roots.empty()) {
        n_cur = first.roots.back().n; // start exactly on a fold: take the survivor
    } else if (initial_branch.has_value()) {
        n_cur = *initial_branch == Branch::low ? stable_roots.front() : stable_roots.back();
    } else {
        throw ValidationError(
            "quasi_static_sweep: schedule starts inside the bistable window; "
            "pass the initial branch explicitly");
    }
    trace.branch_n.push_back(n_cur);

    for (std::size_t i = 1; i < schedule.size(); ++i) {
        const EquilibriumSet es = budworm_equilibria(params, schedule[i]);
        double n_next = nearest_stable(es, n_cur).value_or(es.roots.back().n);

        if (!branch_continues(n_cur, n_next)) {
            // The occupied branch died in (s_prev, s_i]: bisect for the last S
            // where continuation still finds a nearby stable root.
            double s_alive = schedule[i - 1];
            double n_alive = n_cur;
            double s_dead = schedule[i];
            while (std::abs(s_dead - s_alive) > 1e-9 * std::max(s_dead, s_alive)) {
                const double s_mid = 0.5 * (s_alive + s_dead);
                const auto cand = nearest_stable(budworm_equilibria(params, s_mid), n_alive);
                if (cand && branch_continues(n_alive, *cand)) {
                    s_alive = s_mid;
                    n_alive = *cand;
                } else {
                    s_dead = s_mid;
                }
            }
            const bool upward = n_next > n_cur;
            trace.jumps.push_back(JumpEvent{0.5 * (s_alive + s_dead),
                                            upward ? Branch::low : Branch::high,
                                            upward ? Branch::high : Branch::low});
        }
        n_cur = n_next;
        trace.branch_n.push_back(n_cur);
    }
    return trace;
}

std::vector<double> piecewise_linear_schedule(std::span<const double> waypoints,
                                              int samples_per_segment) {
    if (waypoints.size() < 2) {
        throw ValidationError("schedule: need at least 2 waypoints");
    }
    if (samples_per_segment < 1) {
        throw ValidationError("schedule: samples_per_segment must be >= 1");
    }
    std::vector<double> out;
    out.reserve((waypoints.size() - 1) * static_cast<std::size_t>(samples_per_segment) + 1);
    out.push_back(waypoints[0]);
    for (std::size_t seg = 0; seg + 1 < waypoints.size(); ++seg) {
        for (int j = 1; j <= samples_per_segment; ++j) {
            const double u = static_cast<double>(j) / samples_per_segment;
            out.push_back(waypoints[seg] + u * (waypoints[seg + 1] - waypoints[seg]));
        }
    }
    return out;
}

std::vector<DiagramRow> branch_diagram(const ModelParams& params,
                                       std::span<const double> s_grid) {
    params.validate();
    std::vector<DiagramRow> rows;
    for (double s : s_grid) {
        try {
            const EquilibriumSet es = budworm_equilibria(params, s);
            DiagramRow zero;
            zero.s = s;
            zero.n = 0.0;
            zero.stable = es.zero_stable;
            zero.is_zero = true;
            rows.push_back(zero);
            for (const auto& eq : es.roots) {
                DiagramRow row;
                row.s = s;
                row.n = eq.n;
                row.stable = eq.stable;
                rows.push_back(row);
            }
        } catch (const DomainError& ex) {
            DiagramRow row;
            row.s = s;
            row.error = ex.what();
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace relaxcycle
