#pragma once

#include <vector>

#include "illiq/market.hpp"

namespace illiq {

// Closed forms for the exponential cost family. The derived objects (marginal
// and scalable models, gradient at 0, the marginal-price hull) are exact
// rational data; only pointwise values of the cost itself are transcendental.

long double exp_cost_value(const ExponentialCost& cost, const Vec& x);
std::vector<double> exp_cost_gradient(const ExponentialCost& cost, const Vec& x);

// grad S(0): (1, sbar) with cash, (sbar) without. Exact.
Vec exp_gradient_origin(const ExponentialCost& cost);

// S'(x) = x^0 + sbar x^1: the linear model of infinitesimal trades.
SeparableCost exp_marginal_cost(const ExponentialCost& cost);

// S_inf(x): x^0 for x^1 <= 0, +inf otherwise (cash passes through, the risky
// side blocks buying at scale).
SeparableCost exp_scalable_cost(const ExponentialCost& cost);

// alpha * S(x / alpha) stays in the family: only the curvature rescales.
ExponentialCost exp_scale(const ExponentialCost& cost, const Rat& alpha);

// Convexity-preserving piecewise-linear sandwich of the risky coordinate on a
// breakpoint grid (must contain 0). `upper` interpolates samples rounded up,
// `lower` is a max of certified tangent minorants; both vanish at 0 and
// bracket the true cost: lower <= S <= upper.
struct SandwichResult {
    SeparableCost lower;
    SeparableCost upper;
    Rat max_gap;             // largest upper - lower over grid points and midpoints
    bool too_coarse = false; // max_gap exceeded the requested bound
};

SandwichResult pwl_sandwich(const ExponentialCost& cost, const std::vector<Rat>& grid,
                            const Rat& gap_bound);

}  // namespace illiq
