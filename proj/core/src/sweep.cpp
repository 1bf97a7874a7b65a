#include "relaxcycle/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace relaxcycle {

const char* to_string(SweepAnalysis analysis) {
    switch (analysis) {
        case SweepAnalysis::equilibria: return "equilibria";
        case SweepAnalysis::folds: return "folds";
        case SweepAnalysis::cycle: return "cycle";
    }
    return "unknown";
}

namespace {

const char* const param_names[] = {"r",     "k",   "b",       "eta",       "rho",
                                   "s_max", "eps", "b_drift", "smax_drift"};

} // namespace

bool is_model_param_name(const std::string& name) {
    for (const char* candidate : param_names) {
        if (name == candidate) return true;
    }
    return false;
}

void set_model_param(ModelParams& params, const std::string& name, double value) {
    if (name == "r") params.r = value;
    else if (name == "k") params.k = value;
    else if (name == "b") params.b = value;
    else if (name == "eta") params.eta = value;
    else if (name == "rho") params.rho = value;
    else if (name == "s_max") params.s_max = value;
    else if (name == "eps") params.eps = value;
    else if (name == "b_drift") params.b_drift = value;
    else if (name == "smax_drift") params.smax_drift = value;
    else throw ValidationError("unknown model parameter '" + name + "'");
}

void SweepSpec::validate() const {
    base.validate();
    if (names.empty() || names.size() > 2) {
        throw ValidationError("sweep: one or two swept parameters required");
    }
    if (names.size() != grids.size()) {
        throw ValidationError("sweep: every swept parameter needs a value grid");
    }
    if (names.size() == 2 && names[0] == names[1]) {
        throw ValidationError("sweep: swept parameters must differ");
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!is_model_param_name(names[i])) {
            throw ValidationError("sweep: unknown parameter '" + names[i] + "'");
        }
        if (grids[i].empty()) {
            throw ValidationError("sweep: empty grid for '" + names[i] + "'");
        }
        if (!std::is_sorted(grids[i].begin(), grids[i].end())) {
            throw ValidationError("sweep: grid for '" + names[i] + "' must be sorted");
        }
    }
    if (analysis == SweepAnalysis::equilibria && !(s > 0.0)) {
        throw ValidationError("sweep: equilibria analysis needs s > 0");
    }
    if (analysis == SweepAnalysis::folds && !(s_lo > 0.0 && s_hi > s_lo)) {
        throw ValidationError("sweep: folds analysis needs 0 < s_lo < s_hi");
    }
    if (analysis == SweepAnalysis::cycle) {
        solver.validate();
        if (max_periods < 1) {
            throw ValidationError("sweep: max_periods must be >= 1");
        }
    }
}

namespace {

SweepRow evaluate_point(const SweepSpec& spec, double v1, double v2, bool two_params) {
    SweepRow row;
    row.v1 = v1;
    if (two_params) row.v2 = v2;

    ModelParams params = spec.base;
    try {
        set_model_param(params, spec.names[0], v1);
        if (two_params) set_model_param(params, spec.names[1], v2);
        params.validate();

        switch (spec.analysis) {
            case SweepAnalysis::equilibria: {
                const EquilibriumSet es = budworm_equilibria(params, spec.s);
                row.root_count = static_cast<double>(es.roots.size());
                row.n_min = es.roots.front().n;
                row.n_max = es.roots.back().n;
                break;
            }
            case SweepAnalysis::folds: {
                const auto folds =
                    fold_points(params, spec.s_lo, spec.s_hi, spec.fold_grid_points);
                if (folds) {
                    row.s_minus = folds->s_minus;
                    row.s_plus = folds->s_plus;
                } else {
                    row.status = "no_folds";
                }
                break;
            }
            case SweepAnalysis::cycle: {
                const StateNE y0 = spec.cycle_y0.value_or(
                    StateNE{0.2, 3.6 / params.s_max, 0.0});
                const LimitCycle cycle =
                    find_limit_cycle(params, y0, spec.solver, spec.max_periods);
                row.period = cycle.period;
                double lo = cycle.orbit.front().n;
                double hi = lo;
                for (const auto& st : cycle.orbit) {
                    lo = std::min(lo, st.n);
                    hi = std::max(hi, st.n);
                }
                row.n_min = lo;
                row.n_max = hi;
                break;
            }
        }
    } catch (const DomainError&) {
        row.status = "domain_error";
    } catch (const ValidationError&) {
        row.status = "invalid";
    } catch (const NumericalError& ex) {
        row.status = ex.code();
    }
    return row;
}

} // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int threads) {
    spec.validate();
    if (threads < 1) {
        throw ValidationError("sweep: threads must be >= 1");
    }

    const bool two_params = spec.names.size() == 2;
    const std::vector<double>& outer = spec.grids[0];
    const std::vector<double> inner =
        two_params ? spec.grids[1] : std::vector<double>{0.0};

    const std::size_t total = outer.size() * inner.size();
    std::vector<SweepRow> rows(total);

    auto worker = [&](std::size_t first, std::size_t stride) {
        for (std::size_t idx = first; idx < total; idx += stride) {
            const double v1 = outer[idx / inner.size()];
            const double v2 = inner[idx % inner.size()];
            rows[idx] = evaluate_point(spec, v1, v2, two_params);
        }
    };

    const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(threads), total);
    if (nthreads <= 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (std::size_t i = 0; i < nthreads; ++i) {
            pool.emplace_back(worker, i, nthreads);
        }
        for (auto& th : pool) th.join();
    }
    return rows;
}

CsvTable sweep_table(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
    CsvTable table;
    table.header.push_back(spec.names[0]);
    if (spec.names.size() == 2) table.header.push_back(spec.names[1]);
    table.header.insert(table.header.end(), {"root_count", "s_minus", "s_plus", "period",
                                             "n_min", "n_max", "status"});

    auto cell = [](double v) { return std::isnan(v) ? std::string() : format_double(v); };
    for (const auto& row : rows) {
        std::vector<std::string> cells;
        cells.push_back(format_double(row.v1));
        if (spec.names.size() == 2) cells.push_back(format_double(row.v2));
        cells.push_back(cell(row.root_count));
        cells.push_back(cell(row.s_minus));
        cells.push_back(cell(row.s_plus));
        cells.push_back(cell(row.period));
        cells.push_back(cell(row.n_min));
        cells.push_back(cell(row.n_max));
        cells.push_back(row.status);
        table.rows.push_back(std::move(cells));
    }
    return table;
}

} // namespace relaxcycle
