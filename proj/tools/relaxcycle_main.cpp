// relaxcycle: simulation and quasi-static analysis of a fast-slow
// price/EROEI predator-prey model, with CSV/SVG emission.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relaxcycle/config.hpp"
#include "relaxcycle/csv.hpp"
#include "relaxcycle/cycle.hpp"
#include "relaxcycle/equilibria.hpp"
#include "relaxcycle/errors.hpp"
#include "relaxcycle/integrator.hpp"
#include "relaxcycle/model.hpp"
#include "relaxcycle/series.hpp"
#include "relaxcycle/svg.hpp"
#include "relaxcycle/sweep.hpp"
#include "relaxcycle/toy_market.hpp"

namespace {

using namespace relaxcycle;

const char* const config_keys[] = {
    "model.r",        "model.k",       "model.b",        "model.eta",
    "model.rho",      "model.s_max",   "model.eps",      "model.b_drift",
    "model.smax_drift", "solver.rel_tol", "solver.abs_tol", "solver.h_min",
    "solver.h_max",   "solver.max_steps", "cycle.theta",  "cycle.min_len",
};

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> handles;
};

void add_common(CLI::App* sub, CommonOpts& opts) {
    sub->add_option("--config", opts.config_path,
                    "key=value config file applied before flag overrides");
    sub->add_option("--out", opts.out_path,
                    "write the primary output here instead of standard output");
    for (const char* key : config_keys) {
        opts.values[key];
        opts.handles[key] =
            sub->add_option("--" + std::string(key), opts.values[key],
                            std::string("override config key ") + key);
    }
}

RunConfig build_config(const CommonOpts& opts) {
    RunConfig cfg;
    if (!opts.config_path.empty()) {
        apply_config_file(cfg, opts.config_path);
    }
    for (const char* key : config_keys) {
        const auto handle = opts.handles.find(key);
        if (handle != opts.handles.end() && handle->second->count() > 0) {
            apply_config_value(cfg, key, opts.values.at(key));
        }
    }
    cfg.validate();
    return cfg;
}

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + out_path + " for writing");
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) {
        throw IoError("write failed for " + out_path);
    }
}

void emit_table(const CsvTable& table, const std::string& out_path) {
    emit_text(to_csv_string(table), out_path);
}

// "lo:hi" -> pair
std::pair<double, double> parse_range(const std::string& text, const char* flag) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ValidationError(std::string(flag) + ": expected lo:hi, got '" + text + "'");
    }
    try {
        const double lo = std::stod(text.substr(0, colon));
        const double hi = std::stod(text.substr(colon + 1));
        return {lo, hi};
    } catch (const std::exception&) {
        throw ValidationError(std::string(flag) + ": expected numbers in lo:hi, got '" +
                              text + "'");
    }
}

// "lo:hi:count" or "lo:hi:count:log"
std::vector<double> parse_grid(const std::string& text, const char* flag) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto colon = text.find(':', start);
        if (colon == std::string::npos) {
            parts.push_back(text.substr(start));
            break;
        }
        parts.push_back(text.substr(start, colon - start));
        start = colon + 1;
    }
    if (parts.size() != 3 && parts.size() != 4) {
        throw ValidationError(std::string(flag) +
                              ": expected lo:hi:count[:log], got '" + text + "'");
    }
    const bool log_spaced = parts.size() == 4;
    if (log_spaced && parts[3] != "log") {
        throw ValidationError(std::string(flag) + ": fourth field must be 'log'");
    }
    double lo = 0.0, hi = 0.0;
    long count = 0;
    try {
        lo = std::stod(parts[0]);
        hi = std::stod(parts[1]);
        count = std::stol(parts[2]);
    } catch (const std::exception&) {
        throw ValidationError(std::string(flag) + ": bad grid '" + text + "'");
    }
    if (count < 1 || hi < lo) {
        throw ValidationError(std::string(flag) + ": need count >= 1 and hi >= lo");
    }
    if (log_spaced && !(lo > 0.0)) {
        throw ValidationError(std::string(flag) + ": log spacing needs lo > 0");
    }
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        grid.push_back(lo);
        return grid;
    }
    for (long i = 0; i < count; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(count - 1);
        grid.push_back(log_spaced ? lo * std::pow(hi / lo, u) : lo + u * (hi - lo));
    }
    return grid;
}

struct SimulateArgs {
    CommonOpts common;
    std::string chart = "ne";
    double n0 = 0.2;
    double slow0 = 3.0; // e0 in the NE chart, s0 in the NS chart
    bool slow0_set = false;
    double t0 = 0.0;
    double t1 = 500.0;
    std::string svg_path;
};

int cmd_simulate(const SimulateArgs& args) {
    const RunConfig cfg = build_config(args.common);
    if (args.chart != "ns" && args.chart != "ne") {
        throw ValidationError("simulate: --chart must be ns or ne");
    }
    const bool ne = args.chart == "ne";
    const double slow0 = args.slow0_set ? args.slow0 : (ne ? 3.0 : 1.0 / 3.0);

    Trajectory traj;
    if (ne) {
        const auto rhs = [&cfg](double t, const Vec2& y) {
            const Derivatives d = rhs_eroei(cfg.model, StateNE{y[0], y[1], t});
            return Vec2{d.dn, d.dslow};
        };
        traj = integrate(rhs, Vec2{args.n0, slow0}, args.t0, args.t1, cfg.solver);
        traj.chart = Chart::ne;
    } else {
        const auto rhs = [&cfg](double t, const Vec2& y) {
            const Derivatives d = rhs_budworm(cfg.model, StateNS{y[0], y[1], t});
            return Vec2{d.dn, d.dslow};
        };
        traj = integrate(rhs, Vec2{args.n0, slow0}, args.t0, args.t1, cfg.solver);
        traj.chart = Chart::ns;
    }

    emit_table(to_table(traj), args.common.out_path);
    if (!args.svg_path.empty() && traj.times.size() >= 2) {
        emit_text(render_svg(trajectory_polyline(traj, cfg.cycle.theta)), args.svg_path);
    }
    std::cerr << "simulate: " << traj.accepted << " steps accepted, " << traj.rejected
              << " rejected\n";
    if (!traj.ok()) {
        std::cerr << "simulate: FAILED (" << to_string(traj.status) << "): " << traj.error
                  << "; partial trajectory written\n";
        return 2;
    }
    return 0;
}

struct EquilibriaArgs {
    CommonOpts common;
    double s = 1.0;
};

int cmd_equilibria(const EquilibriaArgs& args) {
    const RunConfig cfg = build_config(args.common);
    emit_table(to_table(budworm_equilibria(cfg.model, args.s)), args.common.out_path);
    return 0;
}

struct FoldsArgs {
    CommonOpts common;
    std::string s_range = "0.05:5";
    int grid_points = 512;
};

int cmd_folds(const FoldsArgs& args) {
    const RunConfig cfg = build_config(args.common);
    const auto [lo, hi] = parse_range(args.s_range, "--s-range");
    const auto folds = fold_points(cfg.model, lo, hi, args.grid_points);

    CsvTable table;
    table.header = {"s_minus", "s_plus", "bracket_width"};
    if (folds) {
        table.rows.push_back({format_double(folds->s_minus), format_double(folds->s_plus),
                              format_double(folds->bracket_width)});
    } else {
        std::cerr << "folds: root count constant over [" << lo << ", " << hi
                  << "]; no folds\n";
    }
    emit_table(table, args.common.out_path);
    return 0;
}

struct DiagramArgs {
    CommonOpts common;
    std::string s_grid = "0.1:2:64";
};

int cmd_diagram(const DiagramArgs& args) {
    const RunConfig cfg = build_config(args.common);
    const auto grid = parse_grid(args.s_grid, "--s-grid");
    emit_table(to_table(branch_diagram(cfg.model, grid)), args.common.out_path);
    return 0;
}

struct SweepArgs {
    CommonOpts common;
    std::string param;
    std::string grid;
    std::string param2;
    std::string grid2;
    std::string analysis = "equilibria";
    double s = 1.0;
    std::string s_range = "0.05:5";
    int grid_points = 512;
    double n0 = 0.0;
    double e0 = 0.0;
    int max_periods = 200;
    int threads = 1;
};

int cmd_sweep(const SweepArgs& args) {
    const RunConfig cfg = build_config(args.common);

    SweepSpec spec;
    spec.base = cfg.model;
    spec.solver = cfg.solver;
    spec.names.push_back(args.param);
    spec.grids.push_back(parse_grid(args.grid, "--grid"));
    if (!args.param2.empty()) {
        spec.names.push_back(args.param2);
        spec.grids.push_back(parse_grid(args.grid2, "--grid2"));
    }
    if (args.analysis == "equilibria") {
        spec.analysis = SweepAnalysis::equilibria;
    } else if (args.analysis == "folds") {
        spec.analysis = SweepAnalysis::folds;
    } else if (args.analysis == "cycle") {
        spec.analysis = SweepAnalysis::cycle;
    } else {
        throw ValidationError("sweep: --analysis must be equilibria, folds or cycle");
    }
    spec.s = args.s;
    std::tie(spec.s_lo, spec.s_hi) = parse_range(args.s_range, "--s-range");
    spec.fold_grid_points = args.grid_points;
    spec.max_periods = args.max_periods;
    if (args.n0 > 0.0 && args.e0 > 0.0) {
        spec.cycle_y0 = StateNE{args.n0, args.e0, 0.0};
    }

    const auto rows = run_sweep(spec, args.threads);
    emit_table(sweep_table(spec, rows), args.common.out_path);
    return 0;
}

struct CycleArgs {
    CommonOpts common;
    double n0 = 0.2;
    double e0 = 3.0;
    int max_periods = 200;
    int transient = 10;
    std::string svg_path;
    std::string segments_path;
};

int cmd_cycle(const CycleArgs& args) {
    const RunConfig cfg = build_config(args.common);
    const LimitCycle cycle = find_limit_cycle(cfg.model, StateNE{args.n0, args.e0, 0.0},
                                              cfg.solver, args.max_periods, args.transient);
    const auto segments = segment_phases(cycle, cfg.cycle.theta,
                                         static_cast<std::size_t>(cfg.cycle.min_len));
    const Orientation orient = orientation(cycle);

    std::size_t fast_samples = 0;
    for (const auto& seg : segments) {
        if (seg.kind == Pace::fast) fast_samples += seg.count;
    }
    CsvTable summary;
    summary.header = {"period", "residual", "orientation", "segments", "fast_fraction"};
    summary.rows.push_back(
        {format_double(cycle.period), format_double(cycle.residual), to_string(orient),
         std::to_string(segments.size()),
         format_double(static_cast<double>(fast_samples) /
                       static_cast<double>(cycle.orbit.size() - 1))});

    emit_table(to_table(cycle), args.common.out_path);
    if (args.common.out_path.empty()) {
        std::cerr << to_csv_string(summary); // orbit already owns stdout
    } else {
        std::fputs(to_csv_string(summary).c_str(), stdout);
    }
    if (!args.segments_path.empty()) {
        emit_text(to_csv_string(to_table(segments)), args.segments_path);
    }
    if (!args.svg_path.empty()) {
        emit_text(render_svg(orbit_polyline(cycle, segments)), args.svg_path);
    }
    return 0;
}

struct ToyArgs {
    CommonOpts common;
    ToyMarketConfig config;
    double d0 = 0.0;
};

int cmd_toy(const ToyArgs& args) {
    build_config(args.common); // the toy model ignores it, but bad input still errors
    emit_table(to_table(toy_two_well(args.config, args.d0)), args.common.out_path);
    return 0;
}

struct PhaseplotArgs {
    CommonOpts common;
    std::string in_path;
    double theta = 2.0;
    std::string csv_path;
    std::string title;
};

int cmd_phaseplot(const PhaseplotArgs& args) {
    const auto rows = read_series_csv_file(args.in_path);
    const PhasePolyline poly = phase_polyline(rows, args.theta);
    SvgStyle style;
    style.title = args.title;
    emit_text(render_svg(poly, style), args.common.out_path);
    if (!args.csv_path.empty()) {
        emit_text(to_csv_string(to_table(poly)), args.csv_path);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"relaxation-cycle toolkit: price/EROEI fast-slow dynamics"};
    app.require_subcommand(1);

    SimulateArgs simulate_args;
    auto* simulate = app.add_subcommand(
        "simulate", "integrate the two-variable system and emit the trajectory");
    add_common(simulate, simulate_args.common);
    simulate->add_option("--chart", simulate_args.chart, "state chart: ns or ne")
        ->check(CLI::IsMember({"ns", "ne"}));
    simulate->add_option("--n0", simulate_args.n0, "initial price/population");
    simulate
        ->add_option("--slow0", simulate_args.slow0,
                     "initial slow variable (e in the ne chart, s in ns)")
        ->each([&simulate_args](const std::string&) { simulate_args.slow0_set = true; });
    simulate->add_option("--t0", simulate_args.t0, "start time");
    simulate->add_option("--t1", simulate_args.t1, "end time");
    simulate->add_option("--svg", simulate_args.svg_path, "also render a phase-plot SVG");

    EquilibriaArgs equilibria_args;
    auto* equilibria = app.add_subcommand(
        "equilibria", "positive equilibria of the fast equation at fixed S");
    add_common(equilibria, equilibria_args.common);
    equilibria->add_option("--s", equilibria_args.s, "foliage / 1-over-EROEI value")
        ->required();

    FoldsArgs folds_args;
    auto* folds = app.add_subcommand("folds", "critical S values bounding bistability");
    add_common(folds, folds_args.common);
    folds->add_option("--s-range", folds_args.s_range, "scan range lo:hi");
    folds->add_option("--grid-points", folds_args.grid_points,
                      "points of the geometric scan grid");

    DiagramArgs diagram_args;
    auto* diagram = app.add_subcommand("diagram", "equilibrium branch diagram over S");
    add_common(diagram, diagram_args.common);
    diagram->add_option("--s-grid", diagram_args.s_grid, "grid spec lo:hi:count[:log]");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "run an analysis over a parameter grid");
    add_common(sweep, sweep_args.common);
    sweep->add_option("--param", sweep_args.param, "swept model parameter")->required();
    sweep->add_option("--grid", sweep_args.grid, "grid spec lo:hi:count[:log]")->required();
    sweep->add_option("--param2", sweep_args.param2, "second swept parameter");
    sweep->add_option("--grid2", sweep_args.grid2, "grid spec for --param2");
    sweep->add_option("--analysis", sweep_args.analysis, "equilibria, folds or cycle")
        ->check(CLI::IsMember({"equilibria", "folds", "cycle"}));
    sweep->add_option("--s", sweep_args.s, "S value for the equilibria analysis");
    sweep->add_option("--s-range", sweep_args.s_range, "S range for the folds analysis");
    sweep->add_option("--grid-points", sweep_args.grid_points, "fold scan grid points");
    sweep->add_option("--n0", sweep_args.n0, "cycle search: initial n");
    sweep->add_option("--e0", sweep_args.e0, "cycle search: initial e");
    sweep->add_option("--max-periods", sweep_args.max_periods,
                      "cycle search crossing budget");
    sweep->add_option("--threads", sweep_args.threads, "worker threads");

    CycleArgs cycle_args;
    auto* cycle = app.add_subcommand(
        "cycle", "find the limit cycle, segment it and report its orientation");
    add_common(cycle, cycle_args.common);
    cycle->add_option("--n0", cycle_args.n0, "initial price");
    cycle->add_option("--e0", cycle_args.e0, "initial EROEI");
    cycle->add_option("--max-periods", cycle_args.max_periods, "crossing budget");
    cycle->add_option("--transient", cycle_args.transient,
                      "section crossings discarded before convergence tests");
    cycle->add_option("--svg", cycle_args.svg_path, "render the orbit to this SVG file");
    cycle->add_option("--segments-out", cycle_args.segments_path,
                      "write the fast/slow segment table here");

    ToyArgs toy_args;
    auto* toy = app.add_subcommand("toy", "discrete two-well market cycle");
    add_common(toy, toy_args.common);
    toy->add_option("--cap1", toy_args.config.cap1, "tier-1 capacity");
    toy->add_option("--p1", toy_args.config.p1, "tier-1 price");
    toy->add_option("--p2", toy_args.config.p2, "tier-2 price");
    toy->add_option("--up", toy_args.config.demand_up, "demand increment at low price");
    toy->add_option("--down", toy_args.config.demand_down, "demand decrement at high price");
    toy->add_option("--steps", toy_args.config.steps, "trajectory length");
    toy->add_option("--d0", toy_args.d0, "initial demand");

    PhaseplotArgs phaseplot_args;
    auto* phaseplot = app.add_subcommand(
        "phaseplot", "annotate a historical year,production,price series");
    add_common(phaseplot, phaseplot_args.common);
    phaseplot->add_option("--in", phaseplot_args.in_path, "input series CSV")->required();
    phaseplot->add_option("--theta", phaseplot_args.theta,
                          "fast/slow threshold on normalized edge slopes");
    phaseplot->add_option("--csv", phaseplot_args.csv_path,
                          "also write the annotated edge table here");
    phaseplot->add_option("--title", phaseplot_args.title, "plot caption");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(simulate_args);
        if (equilibria->parsed()) return cmd_equilibria(equilibria_args);
        if (folds->parsed()) return cmd_folds(folds_args);
        if (diagram->parsed()) return cmd_diagram(diagram_args);
        if (sweep->parsed()) return cmd_sweep(sweep_args);
        if (cycle->parsed()) return cmd_cycle(cycle_args);
        if (toy->parsed()) return cmd_toy(toy_args);
        if (phaseplot->parsed()) return cmd_phaseplot(phaseplot_args);
        std::cerr << "no subcommand\n";
        return 1;
    } catch (const ValidationError& ex) { // covers DomainError
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    } catch (const IoError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    } catch (const NumericalError& ex) {
        std::cerr << "numerical failure (" << ex.code() << "): " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "unexpected failure: " << ex.what() << "\n";
        return 2;
    }
}
