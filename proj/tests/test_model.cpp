#include <doctest.h>

#include <random>

#include "relaxcycle/model.hpp"
#include "relaxcycle/toy_market.hpp"
#include "testutil.hpp"

using namespace relaxcycle;
using testutil::rel_err;

TEST_SUITE("model") {

TEST_CASE("rhs_budworm matches hand-evaluated right-hand sides") {
    ModelParams p;
    p.r = 1.0;
    p.k = 1.0;
    p.b = 1.0;
    p.eta = 1.0;
    p.rho = 0.1;
    p.s_max = 10.0;
    p.eps = 0.05;

    // dn = 1*1*(1 - 1/1) - 1/(1+1) = -0.5; ds = 0.1*0.9 - 0.05 = 0.04
    const Derivatives d = rhs_budworm(p, StateNS{1.0, 1.0, 0.0});
    CHECK(d.chart == Chart::ns);
    CHECK(d.dn == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(d.dslow == doctest::Approx(0.04).epsilon(1e-14));
}

TEST_CASE("rhs_eroei matches hand evaluation and the pushforward identity") {
    ModelParams p;
    p.r = 1.0;
    p.k = 1.0;
    p.b = 1.0;
    p.eta = 1.0;
    p.rho = 0.1;
    p.s_max = 10.0;
    p.eps = 0.05;

    // de = 0.1*(0.1 - 1) + 0.05*1*1 = -0.04; dn as in the NS chart
    const Derivatives d = rhs_eroei(p, StateNE{1.0, 1.0, 0.0});
    CHECK(d.chart == Chart::ne);
    CHECK(d.dn == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(d.dslow == doctest::Approx(-0.04).epsilon(1e-14));
}

TEST_CASE("n = 0 axis is invariant in both charts") {
    ModelParams p;
    CHECK(rhs_budworm(p, StateNS{0.0, 2.0, 0.0}).dn == 0.0);
    CHECK(rhs_eroei(p, StateNE{0.0, 4.0, 0.0}).dn == 0.0);
}

TEST_CASE("b = 0 reduces the n-equation to a logistic with ceiling k*s") {
    ModelParams p;
    p.b = 0.0;
    p.eps = 0.0;
    const double s = 2.0;
    const Derivatives d = rhs_budworm(p, StateNS{p.k * s, s, 0.0});
    CHECK(d.dn == 0.0);

    CHECK(rhs_budworm(p, StateNS{0.5 * p.k * s, s, 0.0}).dn > 0.0);
    CHECK(rhs_budworm(p, StateNS{1.5 * p.k * s, s, 0.0}).dn < 0.0);
}

TEST_CASE("drifted coefficients enter through t") {
    ModelParams p;
    p.b_drift = 0.5;
    p.smax_drift = 0.25;
    CHECK(p.b_at(2.0) == doctest::Approx(p.b + 1.0));
    CHECK(p.s_max_at(4.0) == doctest::Approx(p.s_max + 1.0));

    const Derivatives d0 = rhs_budworm(p, StateNS{1.0, 0.5, 0.0});
    const Derivatives d1 = rhs_budworm(p, StateNS{1.0, 0.5, 3.0});
    CHECK(d0.dn != d1.dn);     // b grew
    CHECK(d0.dslow != d1.dslow); // s_max grew
}

TEST_CASE("chart maps invert each other") {
    const StateNS a{3.0, 0.5, 1.0};
    const StateNE b = to_eroei_chart(a);
    CHECK(b.n == 3.0);
    CHECK(b.e == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(b.t == 1.0);

    const StateNS back = from_eroei_chart(StateNE{3.0, 2.0, 1.0});
    CHECK(back.s == doctest::Approx(0.5).epsilon(1e-15));

    CHECK(to_eroei_chart(StateNS{0.0, 1.0, 0.0}).e == doctest::Approx(1.0));
    CHECK(from_eroei_chart(StateNE{0.0, 4.0, 0.0}).s == doctest::Approx(0.25));

    const StateNS x{1.7, 0.31, 0.0};
    const StateNS rt = from_eroei_chart(to_eroei_chart(x));
    CHECK(rel_err(rt.n, x.n) < 1e-15);
    CHECK(rel_err(rt.s, x.s) < 1e-15);
}

TEST_CASE("mroei is n*e = n/s") {
    CHECK(mroei(StateNE{2.0, 3.0, 0.0}) == doctest::Approx(6.0));
    CHECK(mroei(StateNE{0.0, 5.0, 0.0}) == 0.0);
    CHECK(mroei(StateNE{1.0, 1.0, 0.0}) == doctest::Approx(1.0));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> pos(0.1, 10.0);
    for (int i = 0; i < 50; ++i) {
        const StateNS x{pos(rng), pos(rng), 0.0};
        CHECK(rel_err(mroei(to_eroei_chart(x)), x.n / x.s) < 1e-13);
    }
}

TEST_CASE("domain violations are rejected, not clamped") {
    ModelParams p;
    CHECK_THROWS_AS(rhs_budworm(p, StateNS{1.0, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(rhs_budworm(p, StateNS{1.0, -0.5, 0.0}), DomainError);
    CHECK_THROWS_AS(rhs_budworm(p, StateNS{-1.0, 1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(rhs_eroei(p, StateNE{1.0, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(rhs_eroei(p, StateNE{1.0, -2.0, 0.0}), DomainError);
    CHECK_THROWS_AS(to_eroei_chart(StateNS{1.0, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(from_eroei_chart(StateNE{1.0, 0.0, 0.0}), DomainError);
}

TEST_CASE("parameter validation") {
    ModelParams p;
    CHECK_NOTHROW(p.validate());
    p.eps = 0.0; // degenerate limits are admissible
    p.b = 0.0;
    CHECK_NOTHROW(p.validate());
    p.eps = -0.1;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = ModelParams{};
    p.r = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = ModelParams{};
    p.b_drift = -0.1;
    CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("chart consistency: rhs_eroei is the pushforward of rhs_budworm") {
    // dE/dt = -(1/s)^2 dS/dt and identical dN/dt, up to rounding
    std::mt19937 rng(20260809);
    std::uniform_real_distribution<double> par(0.1, 4.0);
    std::uniform_real_distribution<double> n_dist(0.0, 6.0);
    std::uniform_real_distribution<double> s_dist(0.5, 3.0);

    for (int i = 0; i < 200; ++i) {
        ModelParams p;
        p.r = par(rng);
        p.k = par(rng);
        p.b = par(rng);
        p.eta = par(rng);
        p.rho = par(rng);
        p.s_max = par(rng);
        p.eps = par(rng);

        const StateNS x{n_dist(rng), s_dist(rng), 0.0};
        const Derivatives ns = rhs_budworm(p, x);
        const Derivatives ne = rhs_eroei(p, to_eroei_chart(x));

        const double de_expected = -ns.dslow / (x.s * x.s);
        CHECK(rel_err(ne.dn, ns.dn) < 1e-12);
        CHECK(rel_err(ne.dslow, de_expected) < 1e-12);
    }
}

TEST_CASE("toy market: crossing cap1 jumps the price in one fast step") {
    ToyMarketConfig cfg;
    cfg.cap1 = 1000.0;
    cfg.p1 = 100.0;
    cfg.p2 = 200.0;
    cfg.demand_up = 100.0;
    cfg.demand_down = 50.0;
    cfg.steps = 60;

    const auto steps = toy_two_well(cfg, 900.0);
    bool jump_seen = false;
    for (std::size_t i = 1; i < steps.size(); ++i) {
        if (steps[i - 1].price == 100.0 && steps[i].price == 200.0) {
            jump_seen = true;
            CHECK(steps[i].pace == Pace::fast);
            CHECK(steps[i].demand == steps[i - 1].demand); // price moves, demand frozen
            CHECK(steps[i - 1].demand > cfg.cap1);
        }
    }
    CHECK(jump_seen);
}

TEST_CASE("toy market: demand never exceeding cap1 keeps the price flat") {
    ToyMarketConfig cfg;
    cfg.cap1 = 1e9;
    cfg.steps = 40;
    const auto steps = toy_two_well(cfg, 0.0);
    for (const auto& st : steps) {
        CHECK(st.price == cfg.p1);
        CHECK(st.pace == Pace::slow);
    }
}

TEST_CASE("toy market: converged period has exactly 2 fast and 2 slow legs") {
    ToyMarketConfig cfg;
    cfg.cap1 = 1000.0;
    cfg.p1 = 100.0;
    cfg.p2 = 200.0;
    cfg.demand_up = 100.0;
    cfg.demand_down = 50.0;
    cfg.steps = 400;

    const auto steps = toy_two_well(cfg, 480.0);

    // locate the period by recurrence of the (demand, price) state
    const std::size_t probe = steps.size() - 1;
    std::size_t period = 0;
    for (std::size_t back = 1; back < 64; ++back) {
        const auto& a = steps[probe];
        const auto& b = steps[probe - back];
        if (a.demand == b.demand && a.price == b.price) {
            period = back;
            break;
        }
    }
    REQUIRE(period > 0);

    // count label runs over one period (circular)
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
    CHECK(legs == 4);
    CHECK(fast_legs == 2);
}

TEST_CASE("toy market invariants: price set {p1, p2}, demand bounded") {
    ToyMarketConfig cfg;
    cfg.cap1 = 700.0;
    cfg.demand_up = 130.0;
    cfg.demand_down = 45.0;
    cfg.steps = 500;
    const auto steps = toy_two_well(cfg, 100.0);
    for (const auto& st : steps) {
        CHECK((st.price == cfg.p1 || st.price == cfg.p2));
        CHECK(st.demand >= 0.0);
        CHECK(st.demand <= cfg.cap1 + cfg.demand_up);
    }
}

TEST_CASE("toy market config validation") {
    ToyMarketConfig cfg;
    cfg.p2 = cfg.p1;
    CHECK_THROWS_AS(toy_two_well(cfg, 0.0), ValidationError);
    cfg = ToyMarketConfig{};
    cfg.cap1 = -1.0;
    CHECK_THROWS_AS(toy_two_well(cfg, 0.0), ValidationError);
    cfg = ToyMarketConfig{};
    CHECK_THROWS_AS(toy_two_well(cfg, -5.0), ValidationError);
}

} // TEST_SUITE
