#ifndef RELAXCYCLE_SWEEP_HPP
#define RELAXCYCLE_SWEEP_HPP

#include <optional>
#include <string>
#include <vector>

#include "relaxcycle/csv.hpp"
#include "relaxcycle/cycle.hpp"
#include "relaxcycle/equilibria.hpp"
#include "relaxcycle/integrator.hpp"
#include "relaxcycle/model.hpp"

namespace relaxcycle {

enum class SweepAnalysis { equilibria, folds, cycle };

const char* to_string(SweepAnalysis analysis);

// Names accepted as swept parameters: r, k, b, eta, rho, s_max, eps,
// b_drift, smax_drift.
bool is_model_param_name(const std::string& name);
void set_model_param(ModelParams& params, const std::string& name, double value);

// One- or two-parameter sweep over value grids, running the same analysis at
// every point.
struct SweepSpec {
    ModelParams base;
    std::vector<std::string> names;         // 1 or 2 swept parameter names
    std::vector<std::vector<double>> grids; // matching value grids, sorted

    SweepAnalysis analysis = SweepAnalysis::equilibria;

    double s = 1.0;          // equilibria: the fixed S to analyze
    double s_lo = 0.05;      // folds: scan range
    double s_hi = 5.0;
    int fold_grid_points = 512;

    std::optional<StateNE> cycle_y0; // cycle: start state; derived from s_max if unset
    IntegratorSettings solver;
    int max_periods = 200;

    void validate() const;
};

// One output record; fields not produced by the analysis stay NaN (rendered
// as empty CSV cells). status is a short comma-free code: ok, no_folds, or
// the failure category (invalid, domain_error, fixed_point, budget, ...).
struct SweepRow {
    double v1 = 0.0;
    double v2 = std::numeric_limits<double>::quiet_NaN();
    double root_count = std::numeric_limits<double>::quiet_NaN();
    double s_minus = std::numeric_limits<double>::quiet_NaN();
    double s_plus = std::numeric_limits<double>::quiet_NaN();
    double period = std::numeric_limits<double>::quiet_NaN();
    double n_min = std::numeric_limits<double>::quiet_NaN();
    double n_max = std::numeric_limits<double>::quiet_NaN();
    std::string status = "ok";
};

// Evaluates every grid point (optionally across threads), assembling rows in
// grid order regardless of execution order. Individual failures become
// status codes; only an invalid spec throws.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int threads = 1);

CsvTable sweep_table(const SweepSpec& spec, const std::vector<SweepRow>& rows);

} // namespace relaxcycle

#endif
