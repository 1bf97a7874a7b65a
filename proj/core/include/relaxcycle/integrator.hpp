#ifndef RELAXCYCLE_INTEGRATOR_HPP
#define RELAXCYCLE_INTEGRATOR_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "relaxcycle/errors.hpp"
#include "relaxcycle/model.hpp"

namespace relaxcycle {

using Vec2 = std::array<double, 2>;

// Settings of the adaptive Dormand-Prince 5(4) integrator.
struct IntegratorSettings {
    double rel_tol = 1e-8;   // relative local error tolerance
    double abs_tol = 1e-10;  // absolute local error tolerance
    double h_init = 1e-3;    // first attempted step
    double h_min = 1e-12;    // underflow guard
    double h_max = std::numeric_limits<double>::infinity();
    long max_steps = 1000000; // attempted (accepted + rejected) step budget

    // 0 < h_min <= h_init <= h_max, tolerances > 0, max_steps > 0.
    void validate() const;
};

enum class IntegrationStatus : std::uint8_t {
    ok,
    step_underflow,   // error control demanded a step below h_min
    budget_exhausted, // max_steps attempts without reaching t1
    rhs_domain_error, // the vector field raised a DomainError
};

const char* to_string(IntegrationStatus status);

// Accepted steps of one integration, with the vector field stored at each
// node so trajectories can be densely resampled. A failed integration still
// carries every step accepted before the failure.
struct Trajectory {
    std::vector<double> times;  // strictly increasing
    std::vector<Vec2> states;
    std::vector<Vec2> derivs;   // f(t_i, y_i)
    Chart chart = Chart::ns;

    long accepted = 0;
    long rejected = 0;

    IntegrationStatus status = IntegrationStatus::ok;
    std::string error;      // empty when ok
    double fail_time = std::numeric_limits<double>::quiet_NaN();

    bool ok() const { return status == IntegrationStatus::ok; }
    double t0() const { return times.front(); }
    double t1() const { return times.back(); }
};

namespace detail {

// Dormand-Prince RK5(4)7M tableau (Hairer/Norsett/Wanner).
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                        a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct StageResult {
    Vec2 y5;  // 5th-order solution at t + h
    Vec2 err; // embedded 5th-minus-4th order error estimate
    Vec2 k7;  // f(t + h, y5), reused as k1 of the next step (FSAL)
};

// One RK5(4) step from (t, y) with slope k1 = f(t, y) already known.
template <typename Rhs>
StageResult dopri5_step(Rhs&& rhs, double t, const Vec2& y, const Vec2& k1, double h) {
    Vec2 w;
    for (int d = 0; d < 2; ++d) w[d] = y[d] + h * a21 * k1[d];
    const Vec2 k2 = rhs(t + c2 * h, w);

    for (int d = 0; d < 2; ++d) w[d] = y[d] + h * (a31 * k1[d] + a32 * k2[d]);
    const Vec2 k3 = rhs(t + c3 * h, w);

    for (int d = 0; d < 2; ++d)
        w[d] = y[d] + h * (a41 * k1[d] + a42 * k2[d] + a43 * k3[d]);
    const Vec2 k4 = rhs(t + c4 * h, w);

    for (int d = 0; d < 2; ++d)
        w[d] = y[d] + h * (a51 * k1[d] + a52 * k2[d] + a53 * k3[d] + a54 * k4[d]);
    const Vec2 k5 = rhs(t + c5 * h, w);

    for (int d = 0; d < 2; ++d)
        w[d] = y[d] +
               h * (a61 * k1[d] + a62 * k2[d] + a63 * k3[d] + a64 * k4[d] + a65 * k5[d]);
    const Vec2 k6 = rhs(t + h, w);

    StageResult out;
    for (int d = 0; d < 2; ++d)
        out.y5[d] = y[d] + h * (a71 * k1[d] + a73 * k3[d] + a74 * k4[d] + a75 * k5[d] +
                                a76 * k6[d]);
    out.k7 = rhs(t + h, out.y5);
    for (int d = 0; d < 2; ++d)
        out.err[d] = h * (e1 * k1[d] + e3 * k3[d] + e4 * k4[d] + e5 * k5[d] +
                          e6 * k6[d] + e7 * out.k7[d]);
    return out;
}

inline double error_norm(const Vec2& err, const Vec2& y, const Vec2& ynew,
                         double abs_tol, double rel_tol) {
    double sum = 0.0;
    for (int d = 0; d < 2; ++d) {
        const double sc =
            abs_tol + rel_tol * std::max(std::abs(y[d]), std::abs(ynew[d]));
        const double q = err[d] / sc;
        sum += q * q;
    }
    return std::sqrt(0.5 * sum);
}

void check_span_and_state(double t0, double t1, const Vec2& y0);

} // namespace detail

// Integrates y' = rhs(t, y) over [t0, t1] with adaptive Dormand-Prince 5(4)
// and PI step control. The local error per step is held below
// abs_tol + rel_tol*|y| componentwise. All accepted steps are returned,
// endpoints included. Failures (underflow, budget, DomainError from rhs) do
// not throw: the partial trajectory is returned with status and fail_time
// set, so callers can still plot what was computed.
template <typename Rhs>
Trajectory integrate(Rhs&& rhs, const Vec2& y0, double t0, double t1,
                     const IntegratorSettings& settings = {}) {
    settings.validate();
    detail::check_span_and_state(t0, t1, y0);

    constexpr double safety = 0.9;
    constexpr double fac_shrink = 0.2; // max step shrink per rejection: 5x
    constexpr double fac_grow = 10.0;  // max step growth per acceptance
    constexpr double beta = 0.04;      // PI stabilization exponent

    Trajectory traj;
    traj.times.reserve(256);
    traj.states.reserve(256);
    traj.derivs.reserve(256);

    double t = t0;
    Vec2 y = y0;
    Vec2 k1;
    try {
        k1 = rhs(t, y);
    } catch (const DomainError& ex) {
        traj.status = IntegrationStatus::rhs_domain_error;
        traj.fail_time = t;
        traj.error = std::string(ex.what()) + " (at t = " + std::to_string(t) + ")";
        return traj;
    }
    traj.times.push_back(t);
    traj.states.push_back(y);
    traj.derivs.push_back(k1);

    double h = std::min({settings.h_init, settings.h_max, t1 - t0});
    double fac_old = 1e-4;

    while (t < t1) {
        if (traj.accepted + traj.rejected >= settings.max_steps) {
            traj.status = IntegrationStatus::budget_exhausted;
            traj.fail_time = t;
            traj.error = "step budget of " + std::to_string(settings.max_steps) +
                         " exhausted at t = " + std::to_string(t);
            return traj;
        }

        bool last = false;
        if (t + h >= t1) {
            h = t1 - t;
            last = true;
        }
        if (t + h == t) { // step no longer advances time
            traj.status = IntegrationStatus::step_underflow;
            traj.fail_time = t;
            traj.error = "step " + std::to_string(h) + " does not advance t = " +
                         std::to_string(t);
            return traj;
        }

        detail::StageResult st;
        try {
            st = detail::dopri5_step(rhs, t, y, k1, h);
        } catch (const DomainError& ex) {
            traj.status = IntegrationStatus::rhs_domain_error;
            traj.fail_time = t;
            traj.error = std::string(ex.what()) +
                         " (while stepping from t = " + std::to_string(t) + ")";
            return traj;
        }

        const double err =
            detail::error_norm(st.err, y, st.y5, settings.abs_tol, settings.rel_tol);

        // PI controller with Lund stabilization, as in classic DOPRI5 codes.
        const double fac11 = std::pow(std::max(err, 1e-32), 0.2 - beta * 0.75);
        double fac = fac11 / std::pow(fac_old, beta);
        fac = std::max(1.0 / fac_grow, std::min(1.0 / fac_shrink, fac / safety));
        double h_next = h / fac;

        if (err > 1.0) {
            ++traj.rejected;
            h = h / std::min(1.0 / fac_shrink, fac11 / safety);
            if (h < settings.h_min || h <= std::abs(t) * 1e-16) {
                traj.status = IntegrationStatus::step_underflow;
                traj.fail_time = t;
                traj.error = "required step " + std::to_string(h) + " below h_min at t = " +
                             std::to_string(t);
                return traj;
            }
            continue;
        }

        ++traj.accepted;
        fac_old = std::max(err, 1e-4);
        t = last ? t1 : t + h;
        y = st.y5;
        k1 = st.k7; // FSAL
        traj.times.push_back(t);
        traj.states.push_back(y);
        traj.derivs.push_back(k1);

        h = std::min(h_next, settings.h_max);
        if (!last && h < settings.h_min) {
            traj.status = IntegrationStatus::step_underflow;
            traj.fail_time = t;
            traj.error = "proposed step " + std::to_string(h) + " below h_min at t = " +
                         std::to_string(t);
            return traj;
        }
    }
    return traj;
}

// Fixed-step variant of the same RK5(4) stages (no error control); used for
// convergence-order measurements. The final step is clipped to land on t1.
template <typename Rhs>
Trajectory integrate_fixed(Rhs&& rhs, const Vec2& y0, double t0, double t1, double h) {
    detail::check_span_and_state(t0, t1, y0);
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw ValidationError("integrate_fixed: step must be positive and finite");
    }

    Trajectory traj;
    double t = t0;
    Vec2 y = y0;
    Vec2 k1;
    try {
        k1 = rhs(t, y);
    } catch (const DomainError& ex) {
        traj.status = IntegrationStatus::rhs_domain_error;
        traj.fail_time = t;
        traj.error = ex.what();
        return traj;
    }
    traj.times.push_back(t);
    traj.states.push_back(y);
    traj.derivs.push_back(k1);

    while (t < t1) {
        double step = h;
        bool last = false;
        if (t + step >= t1) {
            step = t1 - t;
            last = true;
        }
        if (t + step == t) {
            traj.status = IntegrationStatus::step_underflow;
            traj.fail_time = t;
            traj.error = "fixed step " + std::to_string(step) +
                         " does not advance t = " + std::to_string(t);
            return traj;
        }
        detail::StageResult st;
        try {
            st = detail::dopri5_step(rhs, t, y, k1, step);
        } catch (const DomainError& ex) {
            traj.status = IntegrationStatus::rhs_domain_error;
            traj.fail_time = t;
            traj.error = std::string(ex.what()) +
                         " (while stepping from t = " + std::to_string(t) + ")";
            return traj;
        }
        ++traj.accepted;
        t = last ? t1 : t + step;
        y = st.y5;
        k1 = st.k7;
        traj.times.push_back(t);
        traj.states.push_back(y);
        traj.derivs.push_back(k1);
    }
    return traj;
}

// Cubic Hermite interpolation between accepted steps, exact at stored nodes.
// Requested times must lie within [t0, t1] of the (possibly partial)
// trajectory; otherwise ValidationError.
Vec2 sample_one(const Trajectory& traj, double t);
std::vector<Vec2> sample_at(const Trajectory& traj, std::span<const double> times);

} // namespace relaxcycle

#endif
