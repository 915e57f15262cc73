#include "illiq/exponential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace illiq {

namespace {

// rational upper bound on v with a directed safety margin
Rat round_up(long double v) {
    const double d = static_cast<double>(v);
    const double margin = std::abs(d) * 1e-12 + 1e-15;
    return Rat(d) + Rat(margin);
}

Rat round_nearest(long double v) { return Rat(static_cast<double>(v)); }

long double risky_value(const ExponentialCost& c, long double x) {
    const long double a = static_cast<long double>(to_double(c.alpha));
    const long double s = static_cast<long double>(to_double(c.sbar));
    return s * (std::exp(a * x) - 1.0L) / a;
}

// conjugate of the risky coordinate at slope v > 0:
//   f*(v) = v ln(v / sbar) / alpha - (v - sbar) / alpha
long double risky_conjugate(const ExponentialCost& c, long double v) {
    const long double a = static_cast<long double>(to_double(c.alpha));
    const long double s = static_cast<long double>(to_double(c.sbar));
    return v * std::log(v / s) / a - (v - s) / a;
}

}  // namespace

long double exp_cost_value(const ExponentialCost& cost, const Vec& x) {
    if (static_cast<int>(x.size()) != cost.num_assets())
        throw std::invalid_argument("exp_cost_value: dimension mismatch");
    if (cost.with_cash)
        return static_cast<long double>(to_double(x[0])) + risky_value(cost, to_double(x[1]));
    return risky_value(cost, to_double(x[0]));
}

std::vector<double> exp_cost_gradient(const ExponentialCost& cost, const Vec& x) {
    const double a = to_double(cost.alpha);
    const double s = to_double(cost.sbar);
    const double risky = s * std::exp(a * to_double(x[cost.with_cash ? 1 : 0]));
    if (cost.with_cash) return {1.0, risky};
    return {risky};
}

Vec exp_gradient_origin(const ExponentialCost& cost) {
    if (cost.with_cash) return {Rat(1), cost.sbar};
    return {cost.sbar};
}

SeparableCost exp_marginal_cost(const ExponentialCost& cost) {
    SeparableCost out;
    if (cost.with_cash) out.per_asset.push_back(Pwl::linear(Rat(1)));
    out.per_asset.push_back(Pwl::linear(cost.sbar));
    return out;
}

SeparableCost exp_scalable_cost(const ExponentialCost& cost) {
    SeparableCost out;
    if (cost.with_cash) out.per_asset.push_back(Pwl::linear(Rat(1)));
    // 0 for x <= 0, +inf for x > 0
    out.per_asset.push_back(Pwl(ExtReal::neg_inf(), ExtReal(Rat(0)), {}, {Rat(0)}, Rat(0), Rat(0)));
    return out;
}

ExponentialCost exp_scale(const ExponentialCost& cost, const Rat& alpha) {
    if (alpha <= 0) throw std::invalid_argument("exp_scale: alpha must be positive");
    return ExponentialCost{cost.sbar, cost.alpha / alpha, cost.with_cash};
}

SandwichResult pwl_sandwich(const ExponentialCost& cost, const std::vector<Rat>& grid,
                            const Rat& gap_bound) {
    std::vector<Rat> g = grid;
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    if (g.size() < 2) throw std::invalid_argument("pwl_sandwich: need at least two grid points");
    if (!std::binary_search(g.begin(), g.end(), Rat(0)))
        throw std::invalid_argument("pwl_sandwich: grid must contain 0");

    // upper: lower convex envelope of samples rounded up (0 stays exact)
    std::vector<std::pair<Rat, Rat>> points;
    points.reserve(g.size());
    for (const Rat& x : g) {
        if (x == 0)
            points.emplace_back(x, Rat(0));
        else
            points.emplace_back(x, round_up(risky_value(cost, to_double(x))));
    }
    Pwl upper_risky = Pwl::lower_convex_envelope(points);

    // lower: max of tangent minorants; the tangent at 0 (slope sbar,
    // intercept 0) is exact and pins lower(0) = 0
    std::vector<std::pair<Rat, Rat>> lines;
    lines.emplace_back(cost.sbar, Rat(0));
    for (const Rat& x : g) {
        if (x == 0) continue;
        const double a = to_double(cost.alpha);
        const double s = to_double(cost.sbar);
        const Rat slope = round_nearest(s * std::exp(a * to_double(x)));
        if (slope <= 0) continue;
        const Rat conj_up = round_up(risky_conjugate(cost, to_double(slope)));
        lines.emplace_back(slope, -conj_up);
    }
    Pwl lower_risky = Pwl::max_of_affine(lines);

    SandwichResult out{SeparableCost{}, SeparableCost{}, Rat(0), false};
    if (cost.with_cash) {
        out.lower.per_asset.push_back(Pwl::linear(Rat(1)));
        out.upper.per_asset.push_back(Pwl::linear(Rat(1)));
    }
    out.lower.per_asset.push_back(lower_risky);
    out.upper.per_asset.push_back(upper_risky);

    // gap measured at grid points and midpoints inside the hull
    std::vector<Rat> probes = g;
    for (size_t i = 0; i + 1 < g.size(); ++i) probes.push_back((g[i] + g[i + 1]) / 2);
    for (const Rat& x : probes) {
        const ExtReal hi = upper_risky.eval(x);
        const ExtReal lo = lower_risky.eval(x);
        if (!hi.is_finite() || !lo.is_finite()) continue;
        const Rat gap = hi.finite() - lo.finite();
        out.max_gap = std::max(out.max_gap, gap);
    }
    out.too_coarse = out.max_gap > gap_bound;
    return out;
}

}  // namespace illiq
