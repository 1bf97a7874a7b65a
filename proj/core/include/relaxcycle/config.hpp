#ifndef RELAXCYCLE_CONFIG_HPP
#define RELAXCYCLE_CONFIG_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "relaxcycle/integrator.hpp"
#include "relaxcycle/model.hpp"

namespace relaxcycle {

struct CycleOptions {
    double theta = 10.0; // fast/slow speed-ratio threshold
    int min_len = 16;    // shortest surviving segment, in orbit samples
};

// Everything a run needs: model constants, solver settings, segmentation
// thresholds. Built from defaults, then a config file, then command-line
// overrides, in that order of precedence.
struct RunConfig {
    ModelParams model;
    IntegratorSettings solver;
    CycleOptions cycle;

    void validate() const;
};

// Accepted keys:
//   model.r model.k model.b model.eta model.rho model.s_max model.eps
//   model.b_drift model.smax_drift
//   solver.rel_tol solver.abs_tol solver.h_min solver.h_max solver.max_steps
//   cycle.theta cycle.min_len
// Unknown keys and unparsable values raise ValidationError naming the key.
void apply_config_value(RunConfig& config, std::string_view key, std::string_view value);

// Plain key=value file, one pair per line; blank lines and lines starting
// with '#' are skipped. Parse errors name the line number. A missing file
// raises IoError with the path.
RunConfig parse_config_file(const std::filesystem::path& path);
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

} // namespace relaxcycle

#endif
