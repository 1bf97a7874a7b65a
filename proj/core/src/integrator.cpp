#include "relaxcycle/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace relaxcycle {

void IntegratorSettings::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
        throw ValidationError("integrator: tolerances must be > 0");
    }
    if (!(h_min > 0.0) || !(h_min <= h_init) || !(h_init <= h_max)) {
        throw ValidationError("integrator: require 0 < h_min <= h_init <= h_max");
    }
    if (max_steps <= 0) {
        throw ValidationError("integrator: max_steps must be > 0");
    }
}

const char* to_string(IntegrationStatus status) {
    switch (status) {
        case IntegrationStatus::ok: return "ok";
        case IntegrationStatus::step_underflow: return "step_underflow";
        case IntegrationStatus::budget_exhausted: return "budget_exhausted";
        case IntegrationStatus::rhs_domain_error: return "rhs_domain_error";
    }
    return "unknown";
}

namespace detail {

void check_span_and_state(double t0, double t1, const Vec2& y0) {
    if (!(t1 > t0) || !std::isfinite(t0) || !std::isfinite(t1)) {
        throw ValidationError("integrate: require finite t1 > t0");
    }
    if (!std::isfinite(y0[0]) || !std::isfinite(y0[1])) {
        throw ValidationError("integrate: initial state must be finite");
    }
}

} // namespace detail

Vec2 sample_one(const Trajectory& traj, double t) {
    if (traj.times.empty()) {
        throw ValidationError("sample_at: empty trajectory");
    }
    if (t < traj.times.front() || t > traj.times.back()) {
        throw ValidationError("sample_at: time " + std::to_string(t) +
                              " outside [" + std::to_string(traj.times.front()) + ", " +
                              std::to_string(traj.times.back()) + "]");
    }
    const auto it = std::lower_bound(traj.times.begin(), traj.times.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - traj.times.begin());
    if (hi < traj.times.size() && traj.times[hi] == t) {
        return traj.states[hi]; // exact at stored nodes
    }
    const std::size_t lo = hi - 1;
    const double h = traj.times[hi] - traj.times[lo];
    const double u = (t - traj.times[lo]) / h;
    const double u2 = u * u;
    const double u3 = u2 * u;
    const double b0 = 2.0 * u3 - 3.0 * u2 + 1.0;
    const double b1 = u3 - 2.0 * u2 + u;
    const double b2 = -2.0 * u3 + 3.0 * u2;
    const double b3 = u3 - u2;

    Vec2 out;
    for (int d = 0; d < 2; ++d) {
        out[d] = b0 * traj.states[lo][d] + b1 * h * traj.derivs[lo][d] +
                 b2 * traj.states[hi][d] + b3 * h * traj.derivs[hi][d];
    }
    return out;
}

std::vector<Vec2> sample_at(const Trajectory& traj, std::span<const double> times) {
    std::vector<Vec2> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(sample_one(traj, t));
    return out;
}

} // namespace relaxcycle
