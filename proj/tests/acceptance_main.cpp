// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Needs RELAXCYCLE_BIN, RELAXCYCLE_DATA and RELAXCYCLE_CONFIGS in
// the environment (ctest sets them).

#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "relaxcycle/config.hpp"
#include "relaxcycle/csv.hpp"
#include "relaxcycle/cycle.hpp"
#include "relaxcycle/equilibria.hpp"
#include "relaxcycle/integrator.hpp"
#include "relaxcycle/model.hpp"
#include "relaxcycle/series.hpp"
#include "relaxcycle/svg.hpp"
#include "relaxcycle/toy_market.hpp"
#include "testutil.hpp"

using namespace relaxcycle;
using testutil::rel_err;

namespace {

struct Criterion {
    std::string name;
    std::function<void(std::ostream&)> run; // throws or streams failure details
};

std::string env_or_die(const char* name) {
    const char* value = std::getenv(name);
    if (!value || !*value) {
        throw std::runtime_error(std::string(name) + " not set; run through ctest");
    }
    return value;
}

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

// ---- 1. chart equivalence ------------------------------------------------

void chart_equivalence(std::ostream&) {
    std::mt19937 rng(1u);
    std::uniform_real_distribution<double> par(0.1, 4.0);
    std::uniform_real_distribution<double> n_dist(0.0, 6.0);
    std::uniform_real_distribution<double> s_dist(0.5, 3.0);
    std::uniform_real_distribution<double> t_dist(0.0, 8.0);
    std::uniform_real_distribution<double> drift(0.0, 0.2);

    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        ModelParams p;
        p.r = par(rng);
        p.k = par(rng);
        p.b = par(rng);
        p.eta = par(rng);
        p.rho = par(rng);
        p.s_max = par(rng);
        p.eps = par(rng);
        if (i % 3 == 0) { // drifted coefficients must push forward identically
            p.b_drift = drift(rng);
            p.smax_drift = drift(rng);
        }

        const StateNS x{n_dist(rng), s_dist(rng), t_dist(rng)};
        const Derivatives ns = rhs_budworm(p, x);
        const Derivatives ne = rhs_eroei(p, to_eroei_chart(x));
        const double de_pushforward = -ns.dslow / (x.s * x.s);
        worst = std::max(worst, rel_err(ne.dn, ns.dn));
        worst = std::max(worst, rel_err(ne.dslow, de_pushforward));
    }
    require(worst <= 1e-12,
            "pushforward mismatch: worst relative error " + format_double(worst));
}

// ---- 2. equilibria oracle -------------------------------------------------

void equilibria_oracle_suite(std::ostream&) {
    std::mt19937 rng(2u);
    std::uniform_real_distribution<double> par(0.2, 5.0);
    std::uniform_real_distribution<double> s_dist(0.1, 2.5);

    int checked = 0;
    int resampled = 0;
    while (checked < 200) {
        ModelParams p;
        p.r = par(rng);
        p.k = par(rng) * 3.0;
        p.b = par(rng);
        p.eta = par(rng);
        const double s = s_dist(rng);

        const EquilibriumSet es = budworm_equilibria(p, s);
        if (es.near_fold) {
            require(++resampled < 50, "too many near-fold draws");
            continue; // measure-zero fold set
        }
        ++checked;

        const auto oracle = testutil::equilibria_oracle(p, s);
        require(es.roots.size() == oracle.size(),
                "root count mismatch vs oracle at s = " + format_double(s));
        for (std::size_t i = 0; i < oracle.size(); ++i) {
            require(std::abs(es.roots[i].n - oracle[i]) < 1e-8,
                    "root " + format_double(es.roots[i].n) + " vs oracle " +
                        format_double(oracle[i]));
        }
        for (const auto& eq : es.roots) {
            const double dn_lo = rhs_budworm(p, StateNS{eq.n * (1.0 - 1e-4), s, 0.0}).dn;
            const double dn_hi = rhs_budworm(p, StateNS{eq.n * (1.0 + 1e-4), s, 0.0}).dn;
            const bool pushes_back = dn_lo > 0.0 && dn_hi < 0.0;
            const bool pushes_away = dn_lo < 0.0 && dn_hi > 0.0;
            require(eq.stable ? pushes_back : pushes_away,
                    "stability label disagrees with the perturbation test at n = " +
                        format_double(eq.n));
        }
    }
}

// ---- 3. exact roots -------------------------------------------------------

void exact_roots(std::ostream&) {
    ModelParams p = testutil::reference_params();
    const EquilibriumSet es = budworm_equilibria(p, 0.5);
    require(es.roots.size() == 3, "expected 3 roots at s = 0.5");
    const double expected[3] = {(4.0 - std::sqrt(11.0)) / 2.0, 1.0,
                                (4.0 + std::sqrt(11.0)) / 2.0};
    for (int i = 0; i < 3; ++i) {
        require(std::abs(es.roots[static_cast<std::size_t>(i)].n - expected[i]) < 1e-9,
                "root " + std::to_string(i) + " off: " +
                    format_double(es.roots[static_cast<std::size_t>(i)].n));
    }
}

// ---- 4. fold/hysteresis consistency ----------------------------------------

void fold_hysteresis(std::ostream&) {
    const ModelParams p = testutil::reference_params();
    const auto folds = fold_points(p, 0.1, 2.0);
    require(folds.has_value(), "no folds found on the bistable reference set");

    const double waypoints[] = {0.2, 1.2, 0.2};
    const auto schedule = piecewise_linear_schedule(waypoints, 500);
    const HysteresisTrace trace = quasi_static_sweep(p, schedule);
    require(trace.jumps.size() == 2,
            "expected 2 jumps, got " + std::to_string(trace.jumps.size()));
    const JumpEvent& up = trace.jumps[0];
    const JumpEvent& down = trace.jumps[1];
    require(up.from == Branch::low && up.to == Branch::high, "first jump not upward");
    require(down.from == Branch::high && down.to == Branch::low,
            "second jump not downward");
    require(std::abs(up.s - folds->s_plus) < 1e-6,
            "up-jump at " + format_double(up.s) + " vs fold " +
                format_double(folds->s_plus));
    require(std::abs(down.s - folds->s_minus) < 1e-6,
            "down-jump at " + format_double(down.s) + " vs fold " +
                format_double(folds->s_minus));
    require(up.s > down.s, "hysteresis asymmetry violated");
}

// ---- 5. limit cycle --------------------------------------------------------

void limit_cycle_suite(std::ostream& out) {
    const ModelParams p = testutil::reference_params();
    const LimitCycle cycle = find_limit_cycle(p, StateNE{0.2, 3.0, 0.0});
    require(cycle.residual < 1e-6,
            "residual " + format_double(cycle.residual) + " >= 1e-6");
    require(orientation(cycle) == Orientation::clockwise, "orbit not clockwise");

    const auto segments = segment_phases(cycle, 10.0, 16);
    require(segments.size() == 4,
            "expected 4 segments, got " + std::to_string(segments.size()));
    std::size_t fast_samples = 0;
    std::size_t total = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        require(segments[i].kind != segments[(i + 1) % 4].kind,
                "segments do not alternate");
        total += segments[i].count;
        if (segments[i].kind == Pace::fast) fast_samples += segments[i].count;
    }
    const double fast_fraction =
        static_cast<double>(fast_samples) / static_cast<double>(total);
    require(fast_fraction < 0.30,
            "fast fraction " + format_double(fast_fraction) + " >= 0.30");

    double e_min = cycle.orbit.front().e, e_max = e_min;
    for (const auto& s : cycle.orbit) {
        e_min = std::min(e_min, s.e);
        e_max = std::max(e_max, s.e);
    }
    const double third = (e_max - e_min) / 3.0;
    double n_low = std::numeric_limits<double>::infinity();
    double n_high = 0.0;
    for (const auto& s : cycle.orbit) {
        if (s.e < e_min + third || s.e > e_max - third) continue;
        n_low = std::min(n_low, s.n);
        n_high = std::max(n_high, s.n);
    }
    require(n_high / n_low > 2.0,
            "mid-range price ratio " + format_double(n_high / n_low) + " <= 2");
    out << "period " << format_double(cycle.period) << ", fast fraction "
        << format_double(fast_fraction) << ", ";
}

// ---- 6. integrator order ----------------------------------------------------

void integrator_order(std::ostream& out) {
    const auto harmonic = [](double, const Vec2& y) { return Vec2{y[1], -y[0]}; };
    const double two_pi = 2.0 * std::numbers::pi;

    std::vector<double> log_h, log_err;
    double h = two_pi / 16.0;
    for (int halving = 0; halving <= 4; ++halving) {
        const Trajectory traj = integrate_fixed(harmonic, Vec2{1.0, 0.0}, 0.0, two_pi, h);
        require(traj.ok(), "fixed-step integration failed");
        log_h.push_back(std::log(h));
        log_err.push_back(std::log(
            std::hypot(traj.states.back()[0] - 1.0, traj.states.back()[1])));
        h *= 0.5;
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(log_h.size());
    for (std::size_t i = 0; i < log_h.size(); ++i) {
        sx += log_h[i];
        sy += log_err[i];
        sxx += log_h[i] * log_h[i];
        sxy += log_h[i] * log_err[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    require(slope >= 4.5 && slope <= 5.5,
            "measured order slope " + format_double(slope) + " outside [4.5, 5.5]");
    out << "slope " << format_double(slope) << ", ";

    const Trajectory circle = integrate(harmonic, Vec2{1.0, 0.0}, 0.0, two_pi);
    require(circle.ok(), "adaptive integration failed");
    const double err_circle =
        std::hypot(circle.states.back()[0] - 1.0, circle.states.back()[1]);
    require(err_circle < 1e-6, "harmonic endpoint error " + format_double(err_circle));

    const auto growth = [](double, const Vec2& y) { return Vec2{y[0], 0.0}; };
    const Trajectory expo = integrate(growth, Vec2{1.0, 0.0}, 0.0, 1.0);
    require(expo.ok(), "exponential integration failed");
    const double err_exp = std::abs(expo.states.back()[0] - std::exp(1.0));
    require(err_exp < 1e-6, "exponential endpoint error " + format_double(err_exp));
}

// ---- 7. toy market -----------------------------------------------------------

void toy_market(std::ostream&) {
    ToyMarketConfig cfg;
    cfg.cap1 = 1000.0;
    cfg.p1 = 100.0;
    cfg.p2 = 200.0;
    cfg.demand_up = 100.0;
    cfg.demand_down = 50.0;
    cfg.steps = 400;
    const auto steps = toy_two_well(cfg, 480.0);

    const std::size_t probe = steps.size() - 1;
    std::size_t period = 0;
    for (std::size_t back = 1; back < 64; ++back) {
        if (steps[probe].demand == steps[probe - back].demand &&
            steps[probe].price == steps[probe - back].price) {
            period = back;
            break;
        }
    }
    require(period > 0, "no recurrent state found");

    const std::size_t start = probe - period + 1;
    int legs = 0;
    int fast_legs = 0;
    for (std::size_t i = 0; i < period; ++i) {
        const auto& cur = steps[start + i];
        const auto& prev = steps[start + (i + period - 1) % period];
        if (cur.pace != prev.pace) {
            ++legs;
            if (cur.pace == Pace::fast) ++fast_legs;
        }
    }
    require(legs == 4, "expected 4 legs per period, got " + std::to_string(legs));
    require(fast_legs == 2, "expected 2 fast legs, got " + std::to_string(fast_legs));
}

// ---- 8. CLI determinism and format validity -----------------------------------

void io_determinism(std::ostream&) {
    const std::string bin = env_or_die("RELAXCYCLE_BIN");
    const std::string data = env_or_die("RELAXCYCLE_DATA");
    const std::string configs = env_or_die("RELAXCYCLE_CONFIGS");
    const std::string series = data + "/sample_series.csv";
    const std::string ref_cfg = configs + "/reference.cfg";

    testutil::TempDir dir("acceptance");

    struct Invocation {
        std::string name;
        std::string args;       // {} replaced by the --out path
        std::string extra_out;  // second output file to compare, if any
    };
    const std::string svg_a = dir.path("cycle_a.svg").string();
    const std::string svg_b = dir.path("cycle_b.svg").string();

    const std::vector<Invocation> runs = {
        {"simulate", " simulate --config " + ref_cfg +
                         " --n0 0.2 --slow0 3.0 --t1 300 --out {}", ""},
        {"equilibria", " equilibria --config " + ref_cfg + " --s 0.5 --out {}", ""},
        {"folds", " folds --config " + ref_cfg + " --s-range 0.1:2 --out {}", ""},
        {"diagram", " diagram --config " + ref_cfg + " --s-grid 0.15:1.2:48 --out {}", ""},
        {"sweep", " sweep --config " + ref_cfg +
                      " --param k --grid 1:10:2 --analysis folds --grid-points 256"
                      " --threads 3 --out {}", ""},
        {"cycle", " cycle --config " + ref_cfg + " --n0 0.2 --e0 3.0 --svg SVG --out {}",
         "SVG"},
        {"toy", " toy --d0 480 --steps 120 --out {}", ""},
        {"phaseplot", " phaseplot --in " + series + " --theta 2 --out {}", ""},
    };

    for (const auto& inv : runs) {
        std::string out_a = dir.path(inv.name + "_a.out").string();
        std::string out_b = dir.path(inv.name + "_b.out").string();

        auto instantiate = [&](std::string args, const std::string& out,
                               const std::string& svg) {
            const auto at = args.find("{}");
            args.replace(at, 2, out);
            const auto svg_at = args.find("SVG");
            if (svg_at != std::string::npos) args.replace(svg_at, 3, svg);
            return args;
        };
        const auto res_a =
            testutil::run_command(bin + instantiate(inv.args, out_a, svg_a));
        const auto res_b =
            testutil::run_command(bin + instantiate(inv.args, out_b, svg_b));
        require(res_a.exit_code == 0,
                inv.name + " failed: exit " + std::to_string(res_a.exit_code) + "\n" +
                    res_a.err);
        require(res_b.exit_code == 0, inv.name + " second run failed");

        const std::string bytes_a = testutil::read_file(out_a);
        const std::string bytes_b = testutil::read_file(out_b);
        require(!bytes_a.empty(), inv.name + ": empty output");
        require(bytes_a == bytes_b, inv.name + ": outputs differ between runs");
        require(res_a.out == res_b.out, inv.name + ": stdout differs between runs");

        if (!inv.extra_out.empty()) {
            const std::string extra_a = testutil::read_file(svg_a);
            const std::string extra_b = testutil::read_file(svg_b);
            require(!extra_a.empty(), inv.name + ": empty SVG");
            require(extra_a == extra_b, inv.name + ": SVG differs between runs");
        }
    }

    // CSV round-trip losslessness on the emitted series fixture
    const auto rows = read_series_csv_file(series);
    const std::string rewritten = to_csv_string(to_table(rows));
    std::istringstream in(rewritten);
    const auto again = read_series_csv(in);
    require(again.size() == rows.size(), "round-trip changed the row count");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        require(again[i].year == rows[i].year &&
                    again[i].production == rows[i].production &&
                    again[i].price == rows[i].price,
                "round-trip changed row " + std::to_string(i));
    }

    // emitted SVG parses as well-formed XML
    for (const std::string* path : {&svg_a}) {
        const std::string svg = testutil::read_file(*path);
        std::string why;
        require(testutil::xml_well_formed(svg, &why), "cycle SVG not well-formed: " + why);
    }
    const auto phase = testutil::run_command(
        bin + " phaseplot --in " + series + " --out " + dir.path("phase.svg").string());
    require(phase.exit_code == 0, "phaseplot failed");
    std::string why;
    require(testutil::xml_well_formed(testutil::read_file(dir.path("phase.svg")), &why),
            "phaseplot SVG not well-formed: " + why);
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"chart equivalence (1000 random states, 1e-12 relative)", chart_equivalence},
        {"equilibria vs sign-scan oracle (200 samples, 1e-8; stability 100%)",
         equilibria_oracle_suite},
        {"exact roots {(4-sqrt(11))/2, 1, (4+sqrt(11))/2} at 1e-9", exact_roots},
        {"quasi-static jumps match folds within 1e-6, up-jump above down-jump",
         fold_hysteresis},
        {"limit cycle: residual < 1e-6, clockwise, 4 segments, fast < 30%, ratio > 2",
         limit_cycle_suite},
        {"integrator order slope in [4.5, 5.5]; endpoint errors < 1e-6",
         integrator_order},
        {"toy market (cap1=1000, p1=100, p2=200): 2 fast and 2 slow legs", toy_market},
        {"CLI determinism, CSV round-trip, SVG well-formedness", io_determinism},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::ostringstream detail;
        bool ok = true;
        std::string why;
        try {
            criteria[i].run(detail);
        } catch (const std::exception& ex) {
            ok = false;
            why = ex.what();
        }
        std::cout << (ok ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].name;
        if (!detail.str().empty()) std::cout << " [" << detail.str() << "]";
        if (!ok) std::cout << " -- " << why;
        std::cout << "\n";
        if (!ok) ++failures;
    }
    if (failures) {
        std::cout << failures << " criterion(s) failed\n";
    } else {
        std::cout << "all " << criteria.size() << " acceptance criteria passed\n";
    }
    return failures == 0 ? 0 : 1;
}
