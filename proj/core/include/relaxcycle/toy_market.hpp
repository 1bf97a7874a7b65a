#ifndef RELAXCYCLE_TOY_MARKET_HPP
#define RELAXCYCLE_TOY_MARKET_HPP

#include <vector>

#include "relaxcycle/model.hpp"

namespace relaxcycle {

// Two-well market: a cheap tier covering demand up to cap1 and an expensive
// tier beyond it.
struct ToyMarketConfig {
    double cap1 = 1000.0;       // tier-1 capacity
    double p1 = 100.0;          // tier-1 price
    double p2 = 200.0;          // tier-2 price
    double demand_up = 100.0;   // demand increment per step at the low price
    double demand_down = 50.0;  // demand decrement per step at the high price
    int steps = 200;            // trajectory length

    // cap1 > 0, 0 < p1 < p2, increments > 0, steps > 0; else ValidationError.
    void validate() const;
};

struct ToyStep {
    double demand;
    double price;
    Pace pace;
};

// Discrete-time trajectory of the two-well market. Each step is either a
// price adjustment at frozen demand (fast) or a demand adjustment at frozen
// price (slow): demand rises by demand_up while the price is low and falls by
// demand_down while it is high; the price jumps to p2 once demand exceeds
// cap1 and back to p1 once demand returns below it. The steady trajectory is
// a closed rectangle in the (demand, price) plane with two fast and two slow
// legs per period.
std::vector<ToyStep> toy_two_well(const ToyMarketConfig& config, double initial_demand);

} // namespace relaxcycle

#endif
