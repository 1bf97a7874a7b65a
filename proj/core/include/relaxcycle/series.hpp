#ifndef RELAXCYCLE_SERIES_HPP
#define RELAXCYCLE_SERIES_HPP

#include <array>
#include <span>
#include <string>
#include <vector>

#include "relaxcycle/cycle.hpp"
#include "relaxcycle/integrator.hpp"
#include "relaxcycle/model.hpp"

namespace relaxcycle {

// One row of a user-supplied historical series.
struct SeriesRow {
    int year;
    double production;
    double price;
};

struct AxisMeta {
    std::string label;
    double min = 0.0;
    double max = 1.0;
};

// Ordered trajectory in some (x, y) plane with per-edge speed and pace
// annotation; the unit consumed by the SVG renderer.
struct PhasePolyline {
    std::vector<std::array<double, 2>> vertices;
    std::vector<double> edge_speed; // range-normalized displacement per x-unit of time
    std::vector<Pace> edge_pace;
    AxisMeta x_axis;
    AxisMeta y_axis;
};

// Builds the annotated production-price polyline: x = production, y = price.
// Both coordinates are normalized by their series range before the speed and
// pace computation, so labels are invariant under unit changes. An edge is
// fast when its normalized price change exceeds theta times its normalized
// production change. Requires >= 2 rows; throws NumericalError("degenerate")
// when the series never moves in either coordinate.
PhasePolyline phase_polyline(std::span<const SeriesRow> rows, double theta = 2.0);

// Projects one period of a limit cycle onto the (E, N) plane, taking edge
// pace from the segmentation.
PhasePolyline orbit_polyline(const LimitCycle& cycle,
                             std::span<const PhaseSegment> segments);

// Projects an integrated trajectory onto the (slow, N) plane with the same
// normalized-ratio pace rule used for historical series.
PhasePolyline trajectory_polyline(const Trajectory& traj, double theta = 10.0);

} // namespace relaxcycle

#endif
