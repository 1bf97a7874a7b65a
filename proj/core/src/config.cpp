#include "relaxcycle/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

namespace relaxcycle {

void RunConfig::validate() const {
    model.validate();
    solver.validate();
    if (!(cycle.theta > 1.0)) {
        throw ValidationError("cycle.theta must be > 1");
    }
    if (cycle.min_len < 1) {
        throw ValidationError("cycle.min_len must be >= 1");
    }
}

namespace {

double parse_double_value(std::string_view key, std::string_view text) {
    double out = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(out)) {
        throw ValidationError("invalid value '" + std::string(text) + "' for key " +
                              std::string(key));
    }
    return out;
}

long parse_long_value(std::string_view key, std::string_view text) {
    long out = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc() || res.ptr != end) {
        throw ValidationError("invalid value '" + std::string(text) + "' for key " +
                              std::string(key));
    }
    return out;
}

std::string_view trim(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
        text.remove_prefix(1);
    }
    while (!text.empty() &&
           (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    return text;
}

} // namespace

void apply_config_value(RunConfig& config, std::string_view key, std::string_view value) {
    if (key == "model.r") config.model.r = parse_double_value(key, value);
    else if (key == "model.k") config.model.k = parse_double_value(key, value);
    else if (key == "model.b") config.model.b = parse_double_value(key, value);
    else if (key == "model.eta") config.model.eta = parse_double_value(key, value);
    else if (key == "model.rho") config.model.rho = parse_double_value(key, value);
    else if (key == "model.s_max") config.model.s_max = parse_double_value(key, value);
    else if (key == "model.eps") config.model.eps = parse_double_value(key, value);
    else if (key == "model.b_drift") config.model.b_drift = parse_double_value(key, value);
    else if (key == "model.smax_drift")
        config.model.smax_drift = parse_double_value(key, value);
    else if (key == "solver.rel_tol") config.solver.rel_tol = parse_double_value(key, value);
    else if (key == "solver.abs_tol") config.solver.abs_tol = parse_double_value(key, value);
    else if (key == "solver.h_min") config.solver.h_min = parse_double_value(key, value);
    else if (key == "solver.h_max") config.solver.h_max = parse_double_value(key, value);
    else if (key == "solver.max_steps")
        config.solver.max_steps = parse_long_value(key, value);
    else if (key == "cycle.theta") config.cycle.theta = parse_double_value(key, value);
    else if (key == "cycle.min_len")
        config.cycle.min_len = static_cast<int>(parse_long_value(key, value));
    else {
        throw ValidationError("unknown config key '" + std::string(key) + "'");
    }

    // h_init is not exposed; keep it inside the user-chosen bracket
    config.solver.h_init =
        std::clamp(config.solver.h_init, config.solver.h_min, config.solver.h_max);
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("config: cannot open " + path.string());
    }
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string_view::npos) {
            throw ValidationError("config: " + path.string() + ":" +
                                  std::to_string(line_no) + ": expected key=value, got '" +
                                  std::string(stripped) + "'");
        }
        const std::string_view key = trim(stripped.substr(0, eq));
        const std::string_view value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw ValidationError("config: " + path.string() + ":" +
                                  std::to_string(line_no) + ": empty key");
        }
        try {
            apply_config_value(config, key, value);
        } catch (const ValidationError& ex) {
            throw ValidationError("config: " + path.string() + ":" +
                                  std::to_string(line_no) + ": " + ex.what());
        }
    }
}

RunConfig parse_config_file(const std::filesystem::path& path) {
    RunConfig config;
    apply_config_file(config, path);
    return config;
}

} // namespace relaxcycle
