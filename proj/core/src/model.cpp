#include "relaxcycle/model.hpp"

#include <cmath>
#include <string>

namespace relaxcycle {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ValidationError(std::string("model parameter ") + name +
                              " must be strictly positive and finite, got " +
                              std::to_string(v));
    }
}

void require_nonnegative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw ValidationError(std::string("model parameter ") + name +
                              " must be >= 0 and finite, got " + std::to_string(v));
    }
}

void check_fast_state(double n, double slow, char slow_name) {
    if (!(slow > 0.0)) {
        throw DomainError(std::string("state ") + slow_name +
                          " must be > 0, got " + std::to_string(slow));
    }
    if (!(n >= 0.0)) {
        throw DomainError("state n must be >= 0, got " + std::to_string(n));
    }
}

} // namespace

const char* to_string(Chart chart) {
    return chart == Chart::ns ? "ns" : "ne";
}

const char* to_string(Pace pace) {
    return pace == Pace::slow ? "slow" : "fast";
}

void ModelParams::validate() const {
    require_positive(r, "r");
    require_positive(k, "k");
    require_positive(eta, "eta");
    require_positive(rho, "rho");
    require_positive(s_max, "s_max");
    // b = 0 (no investment cap) and eps = 0 (no price feedback) are
    // well-defined degenerate limits and stay admissible
    require_nonnegative(b, "b");
    require_nonnegative(eps, "eps");
    require_nonnegative(b_drift, "b_drift");
    require_nonnegative(smax_drift, "smax_drift");
}

Derivatives rhs_budworm(const ModelParams& params, const StateNS& state) {
    check_fast_state(state.n, state.s, 's');
    const double n = state.n;
    const double s = state.s;
    const double bt = params.b_at(state.t);
    const double smax = params.s_max_at(state.t);

    const double dn = params.r * n * (1.0 - n / (params.k * s)) -
                      bt * n * n / (params.eta * params.eta * s * s + n * n);
    const double ds = params.rho * s * (1.0 - s / smax) - params.eps * n;
    return Derivatives{dn, ds, Chart::ns};
}

Derivatives rhs_eroei(const ModelParams& params, const StateNE& state) {
    check_fast_state(state.n, state.e, 'e');
    const double n = state.n;
    const double e = state.e;
    const double bt = params.b_at(state.t);
    const double smax = params.s_max_at(state.t);

    const double dn = params.r * n * (1.0 - n * e / params.k) -
                      bt * n * n / (params.eta * params.eta / (e * e) + n * n);
    const double de = params.rho * (1.0 / smax - e) + params.eps * n * e * e;
    return Derivatives{dn, de, Chart::ne};
}

StateNE to_eroei_chart(const StateNS& state) {
    check_fast_state(state.n, state.s, 's');
    return StateNE{state.n, 1.0 / state.s, state.t};
}

StateNS from_eroei_chart(const StateNE& state) {
    check_fast_state(state.n, state.e, 'e');
    return StateNS{state.n, 1.0 / state.e, state.t};
}

double mroei(const StateNE& state) {
    check_fast_state(state.n, state.e, 'e');
    return state.n * state.e;
}

} // namespace relaxcycle
