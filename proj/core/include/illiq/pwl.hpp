#pragma once

#include <utility>
#include <vector>

#include "illiq/extreal.hpp"

namespace illiq {

// Closed interval with extended-real ends, possibly empty.
struct Interval {
    ExtReal lo;
    ExtReal hi;
    bool empty = false;

    static Interval make(ExtReal lo, ExtReal hi) { return Interval{std::move(lo), std::move(hi), false}; }
    static Interval make_empty() { return Interval{ExtReal(0), ExtReal(0), true}; }

    bool contains(const ExtReal& v) const { return !empty && lo <= v && v <= hi; }
    bool operator==(const Interval& o) const {
        if (empty || o.empty) return empty == o.empty;
        return lo == o.lo && hi == o.hi;
    }
};

// Proper lower semicontinuous convex piecewise-linear function of one variable.
//
//   f(x) = +inf outside [domain_lo, domain_hi]; inside, f is the integral of a
//   nondecreasing step slope function, pinned by f(anchor_x) = anchor_value.
//
// Breakpoints are strictly increasing and lie strictly inside the domain;
// slopes are strictly increasing after normalization (one slope per segment,
// segment i between breakpoint i-1 and i). The degenerate case domain_lo ==
// domain_hi represents the indicator-style single-point function.
//
// Cost functions in the market model are the subset with f(0) = 0 and 0 in the
// domain; conjugates and support functions reuse the same type with other
// anchors. Instances are immutable after construction.
class Pwl {
  public:
    Pwl(ExtReal domain_lo, ExtReal domain_hi, std::vector<Rat> breakpoints, std::vector<Rat> slopes,
        Rat anchor_x, Rat anchor_value);

    // f(x) = slope * x
    static Pwl linear(const Rat& slope);
    // Sublinear two-slope function: left * x for x <= 0, right * x for x >= 0.
    static Pwl two_slope(const Rat& left, const Rat& right);
    // Indicator-style point function: f(x0) = value, +inf elsewhere.
    static Pwl point(const Rat& x0, const Rat& value);
    // Greatest convex function below the given points (x strictly increasing);
    // +inf outside [first.x, last.x].
    static Pwl lower_convex_envelope(const std::vector<std::pair<Rat, Rat>>& points);
    // max_i (slope_i * x + intercept_i) on the whole line; list nonempty.
    static Pwl max_of_affine(const std::vector<std::pair<Rat, Rat>>& lines);

    ExtReal eval(const Rat& x) const;
    Interval subdifferential(const Rat& x) const;

    // Slope just left/right of x; -inf / +inf at and outside domain borders.
    ExtReal left_slope_at(const Rat& x) const;
    ExtReal right_slope_at(const Rat& x) const;

    // Legendre-Fenchel conjugate g(v) = sup_x { x v - f(x) }. Breakpoints of g
    // are the slopes of f; values come from the transition points, never from
    // a numeric sup.
    Pwl conjugate() const;

    // Epi-scaling x -> alpha * f(x / alpha), alpha > 0.
    Pwl scale(const Rat& alpha) const;
    // beta * f for beta > 0.
    Pwl value_scale(const Rat& beta) const;

    // Directional derivative at the origin (requires 0 in the domain): the
    // two-slope function with the slopes adjacent to 0; sides blocked by the
    // domain become +inf. Closed automatically for piecewise-linear f.
    Pwl subderivative_origin() const;
    // Horizon function sup_{alpha>0} alpha * f(x/alpha): extreme slopes where
    // the domain is unbounded, +inf directions where it is bounded.
    Pwl horizon() const;

    // Support function of [domain_lo, domain_hi] (conjugate of the domain
    // indicator); used for the zero-weight conjugate terms in duality.
    Pwl domain_support() const;

    const ExtReal& domain_lo() const { return domain_lo_; }
    const ExtReal& domain_hi() const { return domain_hi_; }
    const std::vector<Rat>& breakpoints() const { return breaks_; }
    const std::vector<Rat>& slopes() const { return slopes_; }
    const Rat& anchor_x() const { return anchor_x_; }
    const Rat& anchor_value() const { return anchor_value_; }

    bool is_point_domain() const { return domain_lo_ == domain_hi_; }
    bool has_full_domain() const { return domain_lo_.is_neg_inf() && domain_hi_.is_pos_inf(); }
    bool contains(const Rat& x) const { return ExtReal(x) >= domain_lo_ && ExtReal(x) <= domain_hi_; }

    // Cost-process requirement (vanishes at 0, 0 in the domain).
    bool is_valid_cost() const;
    // value(2x) == 2 value(x) checked structurally: anchor at 0, single kink at 0.
    bool is_sublinear() const;

    ExtReal min_slope() const;
    ExtReal max_slope() const;

    // Closure of the range of the subdifferential (= dom of the conjugate).
    Interval marginal_price_hull() const;

    // Affine minorants whose max equals f on its domain: (slope, intercept).
    std::vector<std::pair<Rat, Rat>> affine_pieces() const;

    bool operator==(const Pwl& o) const;

  private:
    ExtReal domain_lo_;
    ExtReal domain_hi_;
    std::vector<Rat> breaks_;
    std::vector<Rat> slopes_;  // breaks_.size() + 1 entries (1 dummy zero for point domains)
    Rat anchor_x_;
    Rat anchor_value_;

    void normalize();
    void validate() const;
};

}  // namespace illiq
