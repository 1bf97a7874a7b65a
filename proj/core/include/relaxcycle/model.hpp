#ifndef RELAXCYCLE_MODEL_HPP
#define RELAXCYCLE_MODEL_HPP

#include "relaxcycle/errors.hpp"

namespace relaxcycle {

// Coordinate chart of a two-variable state: (N, S) with S the resource-cost
// index, or (N, E) with E = 1/S.
enum class Chart { ns, ne };

// Fast/slow classification shared by the toy market, orbit segmentation and
// phase-plot annotation.
enum class Pace { slow, fast };

const char* to_string(Chart chart);
const char* to_string(Pace pace);

// Model constants. N is the fast variable (price / budworm population),
// S = 1/EROEI the slow one. Defaults are the reference cyclic set documented
// in configs/reference.cfg and the README: bistable in N for
// S in (0.38397, 0.55953), with a stable relaxation cycle of period ~108.5.
struct ModelParams {
    double r = 1.0;     // intrinsic growth rate of N
    double k = 10.0;    // ceiling coefficient; N saturates at k*S
    double b = 1.0;     // cap of the investment/predation term (beta*P combined)
    double eta = 1.0;   // half-saturation coefficient of the predation term
    double rho = 0.02;  // intrinsic growth rate of S
    double s_max = 1.2; // upper bound on S (EROEI floor is 1/s_max)
    double eps = 0.005; // depressive feedback of N on S

    // Optional linear drifts; the cycle degrades when either is nonzero.
    double b_drift = 0.0;
    double smax_drift = 0.0;

    double b_at(double t) const { return b + b_drift * t; }
    double s_max_at(double t) const { return s_max + smax_drift * t; }

    // Throws ValidationError unless all constants are strictly positive,
    // finite, and drifts are >= 0.
    void validate() const;
};

// State in the ecological chart: N (fast), S = 1/EROEI (slow).
struct StateNS {
    double n;
    double s;
    double t = 0.0;
};

// State in the economic chart: N (price), E = EROEI.
struct StateNE {
    double n;
    double e;
    double t = 0.0;
};

// Vector-field value, tagged with the chart it was evaluated in.
// dslow is dS/dt in the NS chart and dE/dt in the NE chart.
struct Derivatives {
    double dn;
    double dslow;
    Chart chart;
};

// dN/dt = r N (1 - N/(kS)) - B(t) N^2 / (eta^2 S^2 + N^2)
// dS/dt = rho S (1 - S/S_max(t)) - eps N
// Throws DomainError when s <= 0 or n < 0.
Derivatives rhs_budworm(const ModelParams& params, const StateNS& state);

// The same field pushed forward under E = 1/S:
// dE/dt = rho (1/S_max(t) - E) + eps N E^2
// dN/dt = r N (1 - N E / k) - B(t) N^2 / (eta^2/E^2 + N^2)
// Throws DomainError when e <= 0 or n < 0.
Derivatives rhs_eroei(const ModelParams& params, const StateNE& state);

// Chart maps E = 1/S; each is the inverse of the other.
StateNE to_eroei_chart(const StateNS& state); // DomainError when s <= 0
StateNS from_eroei_chart(const StateNE& state); // DomainError when e <= 0

// Money return on energy investment: N*E = N/S. High values stimulate
// investment and cap the price through the predation-like term.
double mroei(const StateNE& state);

} // namespace relaxcycle

#endif
