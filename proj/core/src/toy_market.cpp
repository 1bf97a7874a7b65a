#include "relaxcycle/toy_market.hpp"

#include <cmath>
#include <string>

namespace relaxcycle {

void ToyMarketConfig::validate() const {
    if (!(cap1 > 0.0) || !std::isfinite(cap1)) {
        throw ValidationError("toy market: cap1 must be > 0");
    }
    if (!(p1 > 0.0) || !(p2 > p1) || !std::isfinite(p2)) {
        throw ValidationError("toy market: require 0 < p1 < p2");
    }
    if (!(demand_up > 0.0) || !(demand_down > 0.0)) {
        throw ValidationError("toy market: demand increments must be > 0");
    }
    if (steps <= 0) {
        throw ValidationError("toy market: steps must be > 0");
    }
}

std::vector<ToyStep> toy_two_well(const ToyMarketConfig& config, double initial_demand) {
    config.validate();
    if (!(initial_demand >= 0.0) || !std::isfinite(initial_demand)) {
        throw ValidationError("toy market: initial demand must be >= 0");
    }

    double demand = initial_demand;
    double price = demand <= config.cap1 ? config.p1 : config.p2;

    std::vector<ToyStep> out;
    out.reserve(static_cast<std::size_t>(config.steps) + 1);
    out.push_back(ToyStep{demand, price, Pace::slow});

    for (int i = 0; i < config.steps; ++i) {
        const bool low = price <= config.p1;
        if (low && demand > config.cap1) {
            price = config.p2; // tier-2 engaged: price jump at frozen demand
            out.push_back(ToyStep{demand, price, Pace::fast});
        } else if (!low && demand <= config.cap1) {
            price = config.p1; // back to tier 1: price drop at frozen demand
            out.push_back(ToyStep{demand, price, Pace::fast});
        } else {
            demand += low ? config.demand_up : -config.demand_down;
            if (demand < 0.0) demand = 0.0;
            out.push_back(ToyStep{demand, price, Pace::slow});
        }
    }
    return out;
}

} // namespace relaxcycle
