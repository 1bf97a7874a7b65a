#ifndef RELAXCYCLE_EQUILIBRIA_HPP
#define RELAXCYCLE_EQUILIBRIA_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relaxcycle/model.hpp"

namespace relaxcycle {

// Monic cubic p(N) = N^3 + c2 N^2 + c1 N + c0 whose positive roots are the
// positive equilibria of the N-equation at fixed S, with
// sign(dN/dt) = -sign(p(N)) for N > 0.
struct EquilibriumCubic {
    double c2;
    double c1;
    double c0;

    double eval(double n) const { return ((n + c2) * n + c1) * n + c0; }
    double deriv(double n) const { return (3.0 * n + 2.0 * c2) * n + c1; }
};

// p(N) = N^3 - kS N^2 + (eta^2 S^2 + B k S / r) N - k eta^2 S^3.
// Drift is not applied: the quasi-static analysis is a t = 0 snapshot.
// DomainError when s <= 0.
EquilibriumCubic equilibrium_polynomial(const ModelParams& params, double s);

struct Equilibrium {
    double n;
    bool stable;
};

// Positive equilibria at fixed S, ascending, plus the always-present N = 0
// equilibrium (unstable for any r > 0). Stability of a root follows the sign
// of p'(N): dN/dt crosses from + to - where p crosses from - to +.
struct EquilibriumSet {
    double s = 0.0;
    std::vector<Equilibrium> roots; // ascending in n; 0 < size <= 3
    bool includes_zero = true;
    bool zero_stable = false;
    bool near_fold = false; // two roots closer than near_fold_gap
};

// Absolute gap (scaled by max(1, N)) under which two roots trigger the
// near-fold warning.
inline constexpr double near_fold_gap = 1e-8;

// Closed-form cubic roots polished by Newton to ~1e-12 relative, with a
// bisection fallback for near-degenerate cubics. DomainError when s <= 0.
EquilibriumSet budworm_equilibria(const ModelParams& params, double s);

// Critical foliage values bracketing the bistable window.
struct FoldPair {
    double s_minus;
    double s_plus;
    double bracket_width; // refinement tolerance achieved
};

// Scans a geometric grid of S counting positive equilibria, then bisects each
// 1<->3 transition to width <= 1e-9 * S. Returns nullopt when the count is
// constant over the range. Throws ValidationError for a bad range and
// NumericalError("ambiguous") when the transition pattern is not exactly
// one 1->3 followed by one 3->1.
std::optional<FoldPair> fold_points(const ModelParams& params, double s_lo, double s_hi,
                                    int grid_points = 512);

enum class Branch { low, high };

const char* to_string(Branch branch);

struct JumpEvent {
    double s; // refined S of the fold where the occupied branch vanished
    Branch from;
    Branch to;
};

// Result of walking an imposed S schedule while tracking the occupied stable
// equilibrium: the quasi-static outbreak/collapse cycle.
struct HysteresisTrace {
    std::vector<double> schedule;
    std::vector<double> branch_n; // matches schedule
    std::vector<JumpEvent> jumps;
};

// Walks the schedule occupying the stable root nearest the previous N.
// When the occupied branch ceases to exist the trace jumps to the remaining
// stable branch and the fold S is refined by bisection. If the schedule
// starts inside the bistable window the initial branch must be given
// explicitly; otherwise ValidationError.
HysteresisTrace quasi_static_sweep(const ModelParams& params,
                                   std::span<const double> schedule,
                                   std::optional<Branch> initial_branch = std::nullopt);

// Uniformly sampled piecewise-linear path through the given waypoints.
std::vector<double> piecewise_linear_schedule(std::span<const double> waypoints,
                                              int samples_per_segment);

// One equilibrium of the branch diagram; rows with a nonempty error carry no
// n/stable payload.
struct DiagramRow {
    double s = 0.0;
    double n = 0.0;
    bool stable = false;
    bool is_zero = false;
    std::string error;
};

// budworm_equilibria at every grid point, flattened to rows (zero equilibrium
// included). Domain errors annotate the offending row instead of throwing.
std::vector<DiagramRow> branch_diagram(const ModelParams& params,
                                       std::span<const double> s_grid);

} // namespace relaxcycle

#endif
