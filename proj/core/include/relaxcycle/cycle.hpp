#ifndef RELAXCYCLE_CYCLE_HPP
#define RELAXCYCLE_CYCLE_HPP

#include <vector>

#include "relaxcycle/integrator.hpp"
#include "relaxcycle/model.hpp"

namespace relaxcycle {

// One period of the converged orbit in the NE chart, resampled to
// orbit_samples uniformly spaced times with the closing point included
// (orbit.front() and orbit.back() coincide within the residual).
struct LimitCycle {
    std::vector<StateNE> orbit;
    double period = 0.0;
    double residual = 0.0; // normalized distance between the last two section states
    ModelParams params;
};

inline constexpr std::size_t orbit_samples = 2048;

// Locates the stable limit cycle by integrating, discarding a transient of
// section crossings, and testing successive upward crossings of the Poincare
// section N = geometric mean of the running N extrema. Converged when
// consecutive crossing states differ by < 1e-6 in range-normalized
// coordinates.
//
// Throws ValidationError when drift rates are nonzero (the cycle is undefined
// under drift), NumericalError("fixed_point") when the trajectory contracts
// to a point, NumericalError("budget") after max_periods crossings without
// convergence, and propagates integrator failures as NumericalError.
LimitCycle find_limit_cycle(const ModelParams& params, const StateNE& y0,
                            const IntegratorSettings& settings = {},
                            int max_periods = 200, int transient_crossings = 10);

// Contiguous run of orbit samples classified fast or slow. Index arithmetic
// is circular over the orbit's unique samples (orbit_samples - 1 of them;
// the closing duplicate is excluded): begin + count may wrap past the end.
struct PhaseSegment {
    Pace kind;
    std::size_t begin;
    std::size_t count;
    double mean_speed_ratio; // mean |dN'| over mean |dE'|, range-normalized
};

// Splits the orbit into alternating fast/slow segments: a sample is fast when
// its range-normalized price speed exceeds theta times its range-normalized
// EROEI speed. Runs shorter than min_len merge into their neighbors.
// Derivatives come from centered circular differences, so synthetic orbits
// work as well as model output. Requires theta > 1 and min_len >= 1.
std::vector<PhaseSegment> segment_phases(const LimitCycle& cycle, double theta = 10.0,
                                         std::size_t min_len = 16);

enum class Orientation { clockwise, counterclockwise };

const char* to_string(Orientation o);

// Sign of the shoelace area of the orbit polygon with E as abscissa and N as
// ordinate; negative area means clockwise traversal.
Orientation orientation(const LimitCycle& cycle);

} // namespace relaxcycle

#endif
