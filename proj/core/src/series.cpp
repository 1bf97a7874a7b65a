#include "relaxcycle/series.hpp"

#include <algorithm>
#include <cmath>

namespace relaxcycle {

namespace {

struct Range {
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    void absorb(double v) {
        min = std::min(min, v);
        max = std::max(max, v);
    }
    double span() const { return max - min; }
    // zero-span coordinates never move, so any positive denominator works
    double den() const { return span() > 0.0 ? span() : 1.0; }
};

} // namespace

PhasePolyline phase_polyline(std::span<const SeriesRow> rows, double theta) {
    if (rows.size() < 2) {
        throw ValidationError("phase_polyline: need at least 2 rows, got " +
                              std::to_string(rows.size()));
    }
    if (!(theta > 0.0)) {
        throw ValidationError("phase_polyline: theta must be > 0");
    }

    Range prod;
    Range price;
    for (const auto& row : rows) {
        prod.absorb(row.production);
        price.absorb(row.price);
    }
    if (prod.span() <= 0.0 && price.span() <= 0.0) {
        throw NumericalError("degenerate",
                             "phase_polyline: production and price are both constant");
    }

    PhasePolyline poly;
    poly.x_axis = AxisMeta{"production", prod.min, prod.max};
    poly.y_axis = AxisMeta{"price", price.min, price.max};
    poly.vertices.reserve(rows.size());
    for (const auto& row : rows) {
        poly.vertices.push_back({row.production, row.price});
    }
    poly.edge_speed.reserve(rows.size() - 1);
    poly.edge_pace.reserve(rows.size() - 1);
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const double dx = (rows[i + 1].production - rows[i].production) / prod.den();
        const double dy = (rows[i + 1].price - rows[i].price) / price.den();
        const double dt = rows[i + 1].year - rows[i].year;
        poly.edge_speed.push_back(std::hypot(dx, dy) / dt);
        poly.edge_pace.push_back(std::abs(dy) > theta * std::abs(dx) ? Pace::fast
                                                                     : Pace::slow);
    }
    return poly;
}

PhasePolyline orbit_polyline(const LimitCycle& cycle,
                             std::span<const PhaseSegment> segments) {
    if (cycle.orbit.size() < 2) {
        throw ValidationError("orbit_polyline: orbit too short");
    }
    const std::size_t m = cycle.orbit.size() - 1; // unique samples

    std::vector<Pace> sample_pace(m, Pace::slow);
    for (const auto& seg : segments) {
        for (std::size_t j = 0; j < seg.count; ++j) {
            sample_pace[(seg.begin + j) % m] = seg.kind;
        }
    }

    Range e_rng;
    Range n_rng;
    for (const auto& s : cycle.orbit) {
        e_rng.absorb(s.e);
        n_rng.absorb(s.n);
    }

    PhasePolyline poly;
    poly.x_axis = AxisMeta{"eroei", e_rng.min, e_rng.max};
    poly.y_axis = AxisMeta{"price", n_rng.min, n_rng.max};
    poly.vertices.reserve(cycle.orbit.size());
    for (const auto& s : cycle.orbit) {
        poly.vertices.push_back({s.e, s.n});
    }
    const double dt = cycle.period / static_cast<double>(m);
    for (std::size_t i = 0; i + 1 < cycle.orbit.size(); ++i) {
        const double dx = (poly.vertices[i + 1][0] - poly.vertices[i][0]) / e_rng.den();
        const double dy = (poly.vertices[i + 1][1] - poly.vertices[i][1]) / n_rng.den();
        poly.edge_speed.push_back(std::hypot(dx, dy) / dt);
        poly.edge_pace.push_back(sample_pace[i % m]);
    }
    return poly;
}

PhasePolyline trajectory_polyline(const Trajectory& traj, double theta) {
    if (traj.states.size() < 2) {
        throw ValidationError("trajectory_polyline: trajectory too short");
    }
    Range slow_rng;
    Range n_rng;
    for (const auto& y : traj.states) {
        n_rng.absorb(y[0]);
        slow_rng.absorb(y[1]);
    }
    if (slow_rng.span() <= 0.0 && n_rng.span() <= 0.0) {
        throw NumericalError("degenerate", "trajectory_polyline: trajectory is a point");
    }

    PhasePolyline poly;
    poly.x_axis = AxisMeta{traj.chart == Chart::ne ? "eroei" : "s", slow_rng.min,
                           slow_rng.max};
    poly.y_axis = AxisMeta{"price", n_rng.min, n_rng.max};
    poly.vertices.reserve(traj.states.size());
    for (const auto& y : traj.states) {
        poly.vertices.push_back({y[1], y[0]});
    }
    for (std::size_t i = 0; i + 1 < traj.states.size(); ++i) {
        const double dx = (poly.vertices[i + 1][0] - poly.vertices[i][0]) / slow_rng.den();
        const double dy = (poly.vertices[i + 1][1] - poly.vertices[i][1]) / n_rng.den();
        const double dt = traj.times[i + 1] - traj.times[i];
        poly.edge_speed.push_back(std::hypot(dx, dy) / std::max(dt, 1e-300));
        poly.edge_pace.push_back(std::abs(dy) > theta * std::abs(dx) ? Pace::fast
                                                                     : Pace::slow);
    }
    return poly;
}

} // namespace relaxcycle
