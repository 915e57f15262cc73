#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "illiq/exponential.hpp"

using namespace illiq;
using namespace illiq::test;

TEST_CASE("closed forms of the exponential family") {
    const ExponentialCost ec{Rat(1), Rat(1), true};
    // value at (0, 1) is e - 1
    CHECK(std::abs(static_cast<double>(exp_cost_value(ec, {Rat(0), Rat(1)})) - (std::exp(1.0) - 1.0)) < 1e-14);
    CHECK(exp_cost_value(ec, {Rat(0), Rat(0)}) == 0.0L);

    CHECK(exp_gradient_origin(ec) == Vec{Rat(1), Rat(1)});
    CHECK(exp_gradient_origin(ExponentialCost{Rat(3), Rat(2), true}) == Vec{Rat(1), Rat(3)});

    // marginal model is the linear market x0 + sbar x1
    const SeparableCost marginal = exp_marginal_cost(ExponentialCost{Rat(3), Rat(1), true});
    CHECK(marginal.per_asset[0] == Pwl::linear(Rat(1)));
    CHECK(marginal.per_asset[1] == Pwl::linear(Rat(3)));
    CHECK(marginal.per_asset[1].eval(Rat(1)) == ExtReal(Rat(3)));

    // horizon model: cash passes, buying the risky asset at scale is blocked
    const SeparableCost scalable = exp_scalable_cost(ec);
    CHECK(eval_cost(CostFunction{scalable}, {Rat(5), Rat(-1)}).value == ExtReal(Rat(5)));
    CHECK(eval_cost(CostFunction{scalable}, {Rat(0), Rat(1)}).value.is_pos_inf());
    CHECK(eval_cost(CostFunction{scalable}, {Rat(-2), Rat(0)}).value == ExtReal(Rat(-2)));
}

TEST_CASE("gradient agrees with finite differences") {
    const double h = 1e-7;
    for (const auto& ec : {ExponentialCost{Rat(1), Rat(1), true}, ExponentialCost{Rat(3), rat(1, 2), true},
                           ExponentialCost{rat(1, 2), Rat(2), false}}) {
        for (int k = -6; k <= 6; ++k) {
            Vec x;
            if (ec.with_cash) x.push_back(rat(k, 3));
            x.push_back(rat(k, 2));
            const auto grad = exp_cost_gradient(ec, x);
            for (size_t j = 0; j < grad.size(); ++j) {
                Vec xp = x, xm = x;
                xp[j] += Rat(h);
                xm[j] -= Rat(h);
                const double fd = static_cast<double>(exp_cost_value(ec, xp) - exp_cost_value(ec, xm)) / (2 * h);
                CHECK(std::abs(fd - grad[j]) <= 1e-6 * std::max(1.0, std::abs(grad[j])));
            }
        }
    }
}

TEST_CASE("epi-scaling stays in the family") {
    const ExponentialCost ec{Rat(2), Rat(1), false};
    const ExponentialCost half = exp_scale(ec, Rat(2));
    CHECK(half.alpha == rat(1, 2));
    for (int k = -4; k <= 4; ++k) {
        const Rat x = rat(k, 2);
        const long double lhs = exp_cost_value(half, {x});
        const long double rhs = 2.0L * exp_cost_value(ec, {x / 2});
        CHECK(std::abs(static_cast<double>(lhs - rhs)) < 1e-13);
    }
    CHECK_THROWS_AS(exp_scale(ec, Rat(0)), std::invalid_argument);
}

TEST_CASE("sandwich brackets the cost and preserves convexity") {
    const ExponentialCost ec{Rat(1), Rat(1), false};
    std::vector<Rat> grid;
    for (int k = -4; k <= 4; ++k) grid.push_back(Rat(k));
    const SandwichResult sw = pwl_sandwich(ec, grid, Rat(10));
    const Pwl& lower = sw.lower.per_asset.back();
    const Pwl& upper = sw.upper.per_asset.back();

    CHECK(lower.eval(Rat(0)) == ExtReal(Rat(0)));
    CHECK(upper.eval(Rat(0)) == ExtReal(Rat(0)));
    CHECK(lower.is_valid_cost());
    CHECK(upper.is_valid_cost());

    // ordering on a dense probe grid
    for (int k = -400; k <= 400; ++k) {
        const Rat x = rat(k, 100);
        const long double truth = exp_cost_value(ec, {x});
        const ExtReal lo = lower.eval(x);
        const ExtReal hi = upper.eval(x);
        REQUIRE(lo.is_finite());
        CHECK(static_cast<long double>(to_double(lo.finite())) <= truth + 1e-15L);
        if (hi.is_finite()) CHECK(static_cast<long double>(to_double(hi.finite())) >= truth - 1e-15L);
    }
    // outside the grid hull the upper bound is +inf
    CHECK(upper.eval(Rat(5)).is_pos_inf());

    // e^x - 1 on {-1, 0, 1}: upper(1/2) = (e-1)/2 >= e^{1/2}-1 >= lower(1/2)
    const SandwichResult coarse = pwl_sandwich(ec, {Rat(-1), Rat(0), Rat(1)}, Rat(10));
    const double up_half = to_double(coarse.upper.per_asset[0].eval(rat(1, 2)).finite());
    const double lo_half = to_double(coarse.lower.per_asset[0].eval(rat(1, 2)).finite());
    CHECK(std::abs(up_half - (std::exp(1.0) - 1.0) / 2) < 1e-9);
    CHECK(up_half >= std::exp(0.5) - 1.0);
    CHECK(lo_half <= std::exp(0.5) - 1.0);

    // gap certification flips with the requested bound
    CHECK(!pwl_sandwich(ec, {Rat(-1), Rat(0), Rat(1)}, Rat(1)).too_coarse);
    CHECK(pwl_sandwich(ec, {Rat(-4), Rat(0), Rat(4)}, rat(1, 10)).too_coarse);
}

TEST_CASE("sandwich with a cash coordinate keeps it linear") {
    const ExponentialCost ec{Rat(2), Rat(1), true};
    std::vector<Rat> grid{Rat(-2), Rat(-1), Rat(0), Rat(1), Rat(2)};
    const SandwichResult sw = pwl_sandwich(ec, grid, Rat(10));
    CHECK(sw.lower.per_asset[0] == Pwl::linear(Rat(1)));
    CHECK(sw.upper.per_asset[0] == Pwl::linear(Rat(1)));
    CHECK(sw.lower.per_asset.size() == 2);
}
