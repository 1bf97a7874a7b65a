#include "relaxcycle/cycle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace relaxcycle {

namespace {

struct Extrema {
    double n_min = std::numeric_limits<double>::infinity();
    double n_max = -std::numeric_limits<double>::infinity();
    double e_min = std::numeric_limits<double>::infinity();
    double e_max = -std::numeric_limits<double>::infinity();

    void absorb(const Vec2& y) {
        n_min = std::min(n_min, y[0]);
        n_max = std::max(n_max, y[0]);
        e_min = std::min(e_min, y[1]);
        e_max = std::max(e_max, y[1]);
    }
    double n_range() const { return n_max - n_min; }
    double e_range() const { return e_max - e_min; }
};

// distance between two states in coordinates normalized by the running ranges
double normalized_distance(const Vec2& a, const Vec2& b, const Extrema& ext) {
    const double dn = (a[0] - b[0]) / std::max(ext.n_range(), 1e-300);
    const double de = (a[1] - b[1]) / std::max(ext.e_range(), 1e-300);
    return std::hypot(dn, de);
}

void append_chunk(Trajectory& all, const Trajectory& chunk) {
    // chunk starts where `all` ended; skip the duplicated node
    const std::size_t skip = all.times.empty() ? 0 : 1;
    all.times.insert(all.times.end(), chunk.times.begin() + skip, chunk.times.end());
    all.states.insert(all.states.end(), chunk.states.begin() + skip, chunk.states.end());
    all.derivs.insert(all.derivs.end(), chunk.derivs.begin() + skip, chunk.derivs.end());
    all.accepted += chunk.accepted;
    all.rejected += chunk.rejected;
}

// refine the upward crossing of n = level inside step [lo, hi] by bisection
// on the Hermite interpolant
double refine_crossing(const Trajectory& traj, std::size_t lo, double level) {
    double ta = traj.times[lo];
    double tb = traj.times[lo + 1];
    for (int i = 0; i < 100 && tb - ta > 1e-13 * std::max(1.0, std::abs(tb)); ++i) {
        const double tm = 0.5 * (ta + tb);
        if (sample_one(traj, tm)[0] < level) {
            ta = tm;
        } else {
            tb = tm;
        }
    }
    return 0.5 * (ta + tb);
}

} // namespace

const char* to_string(Orientation o) {
    return o == Orientation::clockwise ? "clockwise" : "counterclockwise";
}

LimitCycle find_limit_cycle(const ModelParams& params, const StateNE& y0,
                            const IntegratorSettings& settings, int max_periods,
                            int transient_crossings) {
    params.validate();
    settings.validate();
    if (params.b_drift != 0.0 || params.smax_drift != 0.0) {
        throw ValidationError("find_limit_cycle: drift rates must be zero; "
                              "the cycle is undefined under drift");
    }
    if (!(y0.e > 0.0) || !(y0.n >= 0.0)) {
        throw DomainError("find_limit_cycle: initial state requires n >= 0, e > 0");
    }
    if (max_periods < 1) {
        throw ValidationError("find_limit_cycle: max_periods must be >= 1");
    }
    if (transient_crossings < 0) {
        throw ValidationError("find_limit_cycle: transient_crossings must be >= 0");
    }

    const auto rhs = [&params](double t, const Vec2& y) {
        const Derivatives d = rhs_eroei(params, StateNE{y[0], y[1], t});
        return Vec2{d.dn, d.dslow};
    };

    // Chunks on the slow timescale: long enough to make progress, short
    // enough to notice contraction to a fixed point early.
    const double chunk_len = std::max(1.0, 0.25 / params.rho);
    const long max_chunks = 64L * std::max(16L, static_cast<long>(max_periods));

    Trajectory all;
    all.chart = Chart::ne;
    Extrema ext;
    Vec2 y = {y0.n, y0.e};
    double t = y0.t;
    ext.absorb(y);

    struct Crossing {
        double t;
        Vec2 y;
    };
    std::vector<Crossing> crossings;
    std::size_t scanned = 0; // orbit step index up to which crossings were detected

    for (long chunk = 0; chunk < max_chunks; ++chunk) {
        const Trajectory piece = integrate(rhs, y, t, t + chunk_len, settings);
        if (!piece.ok()) {
            throw NumericalError(to_string(piece.status),
                                 "find_limit_cycle: integration failed: " + piece.error);
        }

        Extrema chunk_ext;
        for (const auto& state : piece.states) chunk_ext.absorb(state);
        if (std::hypot(chunk_ext.n_range(), chunk_ext.e_range()) < 1e-8) {
            throw NumericalError("fixed_point",
                                 "find_limit_cycle: trajectory contracted to a point near "
                                 "(n, e) = (" +
                                     std::to_string(y[0]) + ", " + std::to_string(y[1]) +
                                     "); no cycle");
        }

        append_chunk(all, piece);
        for (const auto& state : piece.states) ext.absorb(state);
        y = all.states.back();
        t = all.times.back();

        // section level from the running extrema, frozen for this scan
        const double level = std::sqrt(std::max(ext.n_min, 1e-300) * ext.n_max);

        for (; scanned + 1 < all.times.size(); ++scanned) {
            const double n_a = all.states[scanned][0];
            const double n_b = all.states[scanned + 1][0];
            if (!(n_a < level && n_b >= level)) continue;

            const double tc = refine_crossing(all, scanned, level);
            const Vec2 yc = sample_one(all, tc);
            crossings.push_back(Crossing{tc, yc});

            const int idx = static_cast<int>(crossings.size());
            if (idx > transient_crossings + 1) {
                const Crossing& prev = crossings[crossings.size() - 2];
                const double residual = normalized_distance(yc, prev.y, ext);
                if (residual < 1e-6) {
                    LimitCycle cycle;
                    cycle.params = params;
                    cycle.period = tc - prev.t;
                    cycle.residual = residual;
                    cycle.orbit.reserve(orbit_samples);
                    for (std::size_t i = 0; i < orbit_samples; ++i) {
                        const double ti =
                            prev.t + cycle.period * static_cast<double>(i) /
                                         (orbit_samples - 1);
                        const Vec2 yi = sample_one(all, std::min(ti, tc));
                        cycle.orbit.push_back(StateNE{yi[0], yi[1], ti});
                    }
                    return cycle;
                }
            }
            if (idx >= max_periods) {
                throw NumericalError(
                    "budget", "find_limit_cycle: no convergence after " +
                                  std::to_string(idx) + " section crossings (max_periods = " +
                                  std::to_string(max_periods) + ")");
            }
        }
    }
    throw NumericalError("budget",
                         "find_limit_cycle: section never crossed within the time budget");
}

std::vector<PhaseSegment> segment_phases(const LimitCycle& cycle, double theta,
                                         std::size_t min_len) {
    if (!(theta > 1.0)) {
        throw ValidationError("segment_phases: theta must be > 1");
    }
    if (min_len < 1) {
        throw ValidationError("segment_phases: min_len must be >= 1");
    }
    if (cycle.orbit.size() < 8 || !(cycle.period > 0.0)) {
        throw ValidationError("segment_phases: orbit too short");
    }

    const std::size_t m = cycle.orbit.size() - 1; // unique samples; last closes the loop
    double n_min = cycle.orbit[0].n, n_max = n_min;
    double e_min = cycle.orbit[0].e, e_max = e_min;
    for (std::size_t i = 0; i < m; ++i) {
        n_min = std::min(n_min, cycle.orbit[i].n);
        n_max = std::max(n_max, cycle.orbit[i].n);
        e_min = std::min(e_min, cycle.orbit[i].e);
        e_max = std::max(e_max, cycle.orbit[i].e);
    }
    const double n_range = n_max - n_min;
    const double e_range = e_max - e_min;
    if (std::max(n_range, e_range) < 1e-12) {
        throw NumericalError("degenerate", "segment_phases: orbit has no extent");
    }
    const double n_den = n_range > 1e-12 ? n_range : 1.0;
    const double e_den = e_range > 1e-12 ? e_range : 1.0;

    // centered circular differences on the uniform time grid
    const double dt = cycle.period / static_cast<double>(cycle.orbit.size() - 1);
    std::vector<double> speed_n(m);
    std::vector<double> speed_e(m);
    std::vector<char> fast(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t prev = (i + m - 1) % m;
        const std::size_t next = (i + 1) % m;
        speed_n[i] = std::abs(cycle.orbit[next].n - cycle.orbit[prev].n) / (2.0 * dt) / n_den;
        speed_e[i] = std::abs(cycle.orbit[next].e - cycle.orbit[prev].e) / (2.0 * dt) / e_den;
        fast[i] = speed_n[i] > theta * speed_e[i] ? 1 : 0;
    }

    // circular run-length encoding
    struct Run {
        char kind;
        std::size_t begin;
        std::size_t count;
    };
    auto collect_runs = [m](const std::vector<char>& kinds) {
        std::vector<Run> runs;
        std::size_t start = 0;
        // rotate to a boundary so every run is contiguous
        while (start < m && kinds[start] == kinds[(start + m - 1) % m]) ++start;
        if (start == m) {
            runs.push_back(Run{kinds[0], 0, m}); // uniform orbit: single run
            return runs;
        }
        std::size_t i = start;
        do {
            Run run{kinds[i], i, 0};
            while (run.count < m && kinds[(run.begin + run.count) % m] == run.kind) {
                ++run.count;
            }
            runs.push_back(run);
            i = (run.begin + run.count) % m;
        } while (i != start);
        return runs;
    };

    std::vector<char> kinds(fast);
    std::vector<Run> runs = collect_runs(kinds);
    // absorb short runs into their larger neighbor, shortest first
    while (runs.size() > 1) {
        std::size_t shortest = runs.size();
        for (std::size_t i = 0; i < runs.size(); ++i) {
            if (runs[i].count < min_len &&
                (shortest == runs.size() || runs[i].count < runs[shortest].count)) {
                shortest = i;
            }
        }
        if (shortest == runs.size()) break;
        const Run& victim = runs[shortest];
        const Run& before = runs[(shortest + runs.size() - 1) % runs.size()];
        const Run& after = runs[(shortest + 1) % runs.size()];
        const char new_kind = before.count >= after.count ? before.kind : after.kind;
        for (std::size_t j = 0; j < victim.count; ++j) {
            kinds[(victim.begin + j) % m] = new_kind;
        }
        runs = collect_runs(kinds);
    }

    std::vector<PhaseSegment> segments;
    segments.reserve(runs.size());
    for (const Run& run : runs) {
        double sum_n = 0.0;
        double sum_e = 0.0;
        for (std::size_t j = 0; j < run.count; ++j) {
            const std::size_t i = (run.begin + j) % m;
            sum_n += speed_n[i];
            sum_e += speed_e[i];
        }
        segments.push_back(PhaseSegment{run.kind ? Pace::fast : Pace::slow, run.begin,
                                        run.count, sum_n / std::max(sum_e, 1e-300)});
    }
    // present in traversal order starting from the segment containing sample 0
    std::size_t first = 0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const std::size_t end = segments[i].begin + segments[i].count;
        const bool wraps = end > m;
        if (segments[i].begin == 0 || wraps) {
            first = i;
            break;
        }
    }
    std::rotate(segments.begin(), segments.begin() + static_cast<std::ptrdiff_t>(first),
                segments.end());
    return segments;
}

Orientation orientation(const LimitCycle& cycle) {
    if (cycle.orbit.size() < 3) {
        throw ValidationError("orientation: orbit too short");
    }
    const std::size_t m = cycle.orbit.size() - 1;
    double area2 = 0.0; // twice the signed area, E as abscissa
    double e_min = cycle.orbit[0].e, e_max = e_min;
    double n_min = cycle.orbit[0].n, n_max = n_min;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& a = cycle.orbit[i];
        const auto& b = cycle.orbit[(i + 1) % m];
        area2 += a.e * b.n - b.e * a.n;
        e_min = std::min(e_min, a.e);
        e_max = std::max(e_max, a.e);
        n_min = std::min(n_min, a.n);
        n_max = std::max(n_max, a.n);
    }
    const double scale = std::max((e_max - e_min) * (n_max - n_min), 1e-300);
    if (std::abs(area2) <= 1e-12 * scale) {
        throw NumericalError("degenerate", "orientation: orbit encloses no area");
    }
    return area2 < 0.0 ? Orientation::clockwise : Orientation::counterclockwise;
}

} // namespace relaxcycle
