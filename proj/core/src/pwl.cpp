#include "illiq/pwl.hpp"

#include <algorithm>
#include <stdexcept>

namespace illiq {

Pwl::Pwl(ExtReal domain_lo, ExtReal domain_hi, std::vector<Rat> breakpoints, std::vector<Rat> slopes,
         Rat anchor_x, Rat anchor_value)
    : domain_lo_(std::move(domain_lo)),
      domain_hi_(std::move(domain_hi)),
      breaks_(std::move(breakpoints)),
      slopes_(std::move(slopes)),
      anchor_x_(std::move(anchor_x)),
      anchor_value_(std::move(anchor_value)) {
    normalize();
    validate();
}

Pwl Pwl::linear(const Rat& slope) {
    return Pwl(ExtReal::neg_inf(), ExtReal::pos_inf(), {}, {slope}, Rat(0), Rat(0));
}

Pwl Pwl::two_slope(const Rat& left, const Rat& right) {
    if (left > right) throw std::invalid_argument("two_slope: left slope exceeds right slope");
    if (left == right) return linear(left);
    return Pwl(ExtReal::neg_inf(), ExtReal::pos_inf(), {Rat(0)}, {left, right}, Rat(0), Rat(0));
}

Pwl Pwl::point(const Rat& x0, const Rat& value) {
    return Pwl(ExtReal(x0), ExtReal(x0), {}, {Rat(0)}, x0, value);
}

Pwl Pwl::lower_convex_envelope(const std::vector<std::pair<Rat, Rat>>& points) {
    if (points.empty()) throw std::invalid_argument("lower_convex_envelope: no points");
    for (size_t i = 0; i + 1 < points.size(); ++i)
        if (!(points[i].first < points[i + 1].first))
            throw std::invalid_argument("lower_convex_envelope: x not strictly increasing");
    if (points.size() == 1) return point(points[0].first, points[0].second);

    // Lower hull: keep points while consecutive slopes strictly increase.
    std::vector<std::pair<Rat, Rat>> hull;
    for (const auto& p : points) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            // pop b unless slope(a,b) < slope(b,p)
            const Rat lhs = (b.second - a.second) * (p.first - b.first);
            const Rat rhs = (p.second - b.second) * (b.first - a.first);
            if (lhs < rhs) break;
            hull.pop_back();
        }
        hull.push_back(p);
    }

    std::vector<Rat> breaks;
    std::vector<Rat> slopes;
    for (size_t i = 0; i + 1 < hull.size(); ++i)
        slopes.push_back((hull[i + 1].second - hull[i].second) / (hull[i + 1].first - hull[i].first));
    for (size_t i = 1; i + 1 < hull.size(); ++i) breaks.push_back(hull[i].first);

    return Pwl(ExtReal(hull.front().first), ExtReal(hull.back().first), std::move(breaks),
               std::move(slopes), hull.front().first, hull.front().second);
}

Pwl Pwl::max_of_affine(const std::vector<std::pair<Rat, Rat>>& lines) {
    if (lines.empty()) throw std::invalid_argument("max_of_affine: no lines");
    std::vector<std::pair<Rat, Rat>> sorted = lines;
    std::sort(sorted.begin(), sorted.end());
    // per slope keep the largest intercept
    std::vector<std::pair<Rat, Rat>> dedup;
    for (const auto& ln : sorted) {
        if (!dedup.empty() && dedup.back().first == ln.first)
            dedup.back().second = std::max(dedup.back().second, ln.second);
        else
            dedup.push_back(ln);
    }

    // Upper envelope of lines in slope order. A line is dropped when it never
    // wins: its crossing with the previous survivor lies right of the crossing
    // of the previous two.
    std::vector<std::pair<Rat, Rat>> env;
    std::vector<Rat> cross;  // cross[i] = x where env[i+1] overtakes env[i]
    for (const auto& ln : dedup) {
        Rat x;
        while (!env.empty()) {
            x = (env.back().second - ln.second) / (ln.first - env.back().first);
            if (cross.empty() || x > cross.back()) break;
            env.pop_back();
            cross.pop_back();
        }
        if (!env.empty()) cross.push_back(x);
        env.push_back(ln);
    }

    std::vector<Rat> slopes;
    slopes.reserve(env.size());
    for (const auto& ln : env) slopes.push_back(ln.first);
    Rat value_at_0 = env.front().second;
    for (const auto& ln : env) value_at_0 = std::max(value_at_0, ln.second);
    return Pwl(ExtReal::neg_inf(), ExtReal::pos_inf(), cross, std::move(slopes), Rat(0), value_at_0);
}

void Pwl::normalize() {
    if (domain_lo_ == domain_hi_) {
        if (!domain_lo_.is_finite()) throw std::invalid_argument("pwl: degenerate infinite domain");
        breaks_.clear();
        slopes_.assign(1, Rat(0));
        return;
    }
    if (slopes_.size() != breaks_.size() + 1)
        throw std::invalid_argument("pwl: need one slope per segment");

    // segments fully outside the domain carry no information
    while (!breaks_.empty() && ExtReal(breaks_.front()) <= domain_lo_) {
        breaks_.erase(breaks_.begin());
        slopes_.erase(slopes_.begin());
    }
    while (!breaks_.empty() && ExtReal(breaks_.back()) >= domain_hi_) {
        breaks_.pop_back();
        slopes_.pop_back();
    }
    // merge equal adjacent slopes
    for (size_t i = 0; i + 1 < slopes_.size();) {
        if (slopes_[i] == slopes_[i + 1]) {
            breaks_.erase(breaks_.begin() + static_cast<long>(i));
            slopes_.erase(slopes_.begin() + static_cast<long>(i + 1));
        } else {
            ++i;
        }
    }
}

void Pwl::validate() const {
    if (domain_hi_ < domain_lo_) throw std::invalid_argument("pwl: empty domain");
    if (ExtReal(anchor_x_) < domain_lo_ || ExtReal(anchor_x_) > domain_hi_)
        throw std::invalid_argument("pwl: anchor outside domain");
    for (size_t i = 0; i + 1 < breaks_.size(); ++i)
        if (!(breaks_[i] < breaks_[i + 1]))
            throw std::invalid_argument("pwl: breakpoints not strictly increasing");
    for (size_t i = 0; i + 1 < slopes_.size(); ++i)
        if (!(slopes_[i] < slopes_[i + 1])) throw std::invalid_argument("pwl: slopes not convex");
    if (!is_point_domain()) {
        if (slopes_.size() != breaks_.size() + 1) throw std::invalid_argument("pwl: shape mismatch");
        for (const Rat& b : breaks_)
            if (!(ExtReal(b) > domain_lo_ && ExtReal(b) < domain_hi_))
                throw std::invalid_argument("pwl: breakpoint outside open domain");
    }
}

ExtReal Pwl::eval(const Rat& x) const {
    if (!contains(x)) return ExtReal::pos_inf();
    if (is_point_domain()) return ExtReal(anchor_value_);
    Rat acc = anchor_value_;
    if (x > anchor_x_) {
        Rat pos = anchor_x_;
        size_t idx = static_cast<size_t>(
            std::upper_bound(breaks_.begin(), breaks_.end(), pos) - breaks_.begin());
        while (pos < x) {
            const Rat seg_end = (idx < breaks_.size() && breaks_[idx] < x) ? breaks_[idx] : x;
            acc += slopes_[idx] * (seg_end - pos);
            pos = seg_end;
            ++idx;
        }
    } else if (x < anchor_x_) {
        Rat pos = anchor_x_;
        size_t idx = static_cast<size_t>(
            std::lower_bound(breaks_.begin(), breaks_.end(), pos) - breaks_.begin());
        while (pos > x) {
            const Rat seg_start = (idx > 0 && breaks_[idx - 1] > x) ? breaks_[idx - 1] : x;
            acc -= slopes_[idx] * (pos - seg_start);
            pos = seg_start;
            if (idx > 0) --idx;
        }
    }
    return ExtReal(acc);
}

ExtReal Pwl::left_slope_at(const Rat& x) const {
    if (!contains(x) || ExtReal(x) == domain_lo_) return ExtReal::neg_inf();
    const size_t idx = static_cast<size_t>(
        std::lower_bound(breaks_.begin(), breaks_.end(), x) - breaks_.begin());
    return ExtReal(slopes_[idx]);
}

ExtReal Pwl::right_slope_at(const Rat& x) const {
    if (!contains(x) || ExtReal(x) == domain_hi_) return ExtReal::pos_inf();
    const size_t idx = static_cast<size_t>(
        std::upper_bound(breaks_.begin(), breaks_.end(), x) - breaks_.begin());
    return ExtReal(slopes_[idx]);
}

Interval Pwl::subdifferential(const Rat& x) const {
    if (!contains(x)) return Interval::make_empty();
    return Interval::make(left_slope_at(x), right_slope_at(x));
}

Pwl Pwl::conjugate() const {
    if (is_point_domain()) {
        // g(v) = p v - f(p), affine with slope p
        const Rat p = domain_lo_.finite();
        return Pwl(ExtReal::neg_inf(), ExtReal::pos_inf(), {}, {p}, Rat(0), -anchor_value_);
    }

    const size_t m = slopes_.size();
    std::vector<Rat> g_breaks = slopes_;
    std::vector<Rat> g_slopes;
    if (domain_lo_.is_finite())
        g_slopes.push_back(domain_lo_.finite());
    else
        g_breaks.erase(g_breaks.begin());
    for (size_t i = 0; i + 1 < m; ++i) g_slopes.push_back(breaks_[i]);
    if (domain_hi_.is_finite())
        g_slopes.push_back(domain_hi_.finite());
    else if (!g_breaks.empty())
        g_breaks.pop_back();

    // anchor g at the lowest slope of f
    const Rat v0 = slopes_.front();
    Rat xhat;
    if (domain_lo_.is_finite())
        xhat = domain_lo_.finite();
    else if (!breaks_.empty())
        xhat = breaks_.front();
    else
        xhat = anchor_x_;
    const Rat g_at_v0 = v0 * xhat - eval(xhat).finite();

    if (g_slopes.empty()) return point(v0, g_at_v0);  // f affine on the whole line

    const ExtReal g_lo = domain_lo_.is_neg_inf() ? ExtReal(slopes_.front()) : ExtReal::neg_inf();
    const ExtReal g_hi = domain_hi_.is_pos_inf() ? ExtReal(slopes_.back()) : ExtReal::pos_inf();
    return Pwl(g_lo, g_hi, std::move(g_breaks), std::move(g_slopes), v0, g_at_v0);
}

Pwl Pwl::scale(const Rat& alpha) const {
    if (alpha <= 0) throw std::invalid_argument("scale: alpha must be positive");
    std::vector<Rat> b = breaks_;
    for (Rat& x : b) x *= alpha;
    return Pwl(domain_lo_ * alpha, domain_hi_ * alpha, std::move(b), slopes_, anchor_x_ * alpha,
               anchor_value_ * alpha);
}

Pwl Pwl::value_scale(const Rat& beta) const {
    if (beta <= 0) throw std::invalid_argument("value_scale: beta must be positive");
    std::vector<Rat> s = slopes_;
    for (Rat& v : s) v *= beta;
    return Pwl(domain_lo_, domain_hi_, breaks_, std::move(s), anchor_x_, anchor_value_ * beta);
}

Pwl Pwl::subderivative_origin() const {
    if (!contains(Rat(0))) throw std::logic_error("subderivative_origin: 0 outside domain");
    const ExtReal l = left_slope_at(Rat(0));
    const ExtReal r = right_slope_at(Rat(0));
    if (l.is_neg_inf() && r.is_pos_inf()) return point(Rat(0), Rat(0));
    if (l.is_neg_inf())
        return Pwl(ExtReal(Rat(0)), ExtReal::pos_inf(), {}, {r.finite()}, Rat(0), Rat(0));
    if (r.is_pos_inf())
        return Pwl(ExtReal::neg_inf(), ExtReal(Rat(0)), {}, {l.finite()}, Rat(0), Rat(0));
    return two_slope(l.finite(), r.finite());
}

Pwl Pwl::horizon() const {
    const bool left = domain_lo_.is_neg_inf();
    const bool right = domain_hi_.is_pos_inf();
    if (!left && !right) return point(Rat(0), Rat(0));
    if (left && right) return two_slope(slopes_.front(), slopes_.back());
    if (right) return Pwl(ExtReal(Rat(0)), ExtReal::pos_inf(), {}, {slopes_.back()}, Rat(0), Rat(0));
    return Pwl(ExtReal::neg_inf(), ExtReal(Rat(0)), {}, {slopes_.front()}, Rat(0), Rat(0));
}

Pwl Pwl::domain_support() const {
    const bool lo_fin = domain_lo_.is_finite();
    const bool hi_fin = domain_hi_.is_finite();
    if (!lo_fin && !hi_fin) return point(Rat(0), Rat(0));
    if (lo_fin && hi_fin) {
        if (domain_lo_ == domain_hi_) return linear(domain_lo_.finite());
        return two_slope(domain_lo_.finite(), domain_hi_.finite());
    }
    if (hi_fin) return Pwl(ExtReal(Rat(0)), ExtReal::pos_inf(), {}, {domain_hi_.finite()}, Rat(0), Rat(0));
    return Pwl(ExtReal::neg_inf(), ExtReal(Rat(0)), {}, {domain_lo_.finite()}, Rat(0), Rat(0));
}

bool Pwl::is_valid_cost() const { return contains(Rat(0)) && eval(Rat(0)) == ExtReal(Rat(0)); }

bool Pwl::is_sublinear() const {
    if (!is_valid_cost()) return false;
    const bool lo_ok = domain_lo_.is_neg_inf() || domain_lo_ == ExtReal(Rat(0));
    const bool hi_ok = domain_hi_.is_pos_inf() || domain_hi_ == ExtReal(Rat(0));
    const bool breaks_ok = breaks_.empty() || (breaks_.size() == 1 && breaks_[0] == 0);
    return lo_ok && hi_ok && breaks_ok;
}

ExtReal Pwl::min_slope() const {
    if (is_point_domain()) return ExtReal::neg_inf();
    return ExtReal(slopes_.front());
}

ExtReal Pwl::max_slope() const {
    if (is_point_domain()) return ExtReal::pos_inf();
    return ExtReal(slopes_.back());
}

Interval Pwl::marginal_price_hull() const {
    const ExtReal lo = domain_lo_.is_finite() ? ExtReal::neg_inf() : min_slope();
    const ExtReal hi = domain_hi_.is_finite() ? ExtReal::pos_inf() : max_slope();
    return Interval::make(lo, hi);
}

std::vector<std::pair<Rat, Rat>> Pwl::affine_pieces() const {
    std::vector<std::pair<Rat, Rat>> pieces;
    if (is_point_domain()) {
        pieces.emplace_back(Rat(0), anchor_value_);
        return pieces;
    }
    for (size_t i = 0; i < slopes_.size(); ++i) {
        Rat p;
        if (i > 0)
            p = breaks_[i - 1];
        else if (domain_lo_.is_finite())
            p = domain_lo_.finite();
        else if (!breaks_.empty())
            p = breaks_.front();
        else
            p = anchor_x_;
        const Rat intercept = eval(p).finite() - slopes_[i] * p;
        pieces.emplace_back(slopes_[i], intercept);
    }
    return pieces;
}

bool Pwl::operator==(const Pwl& o) const {
    return domain_lo_ == o.domain_lo_ && domain_hi_ == o.domain_hi_ && breaks_ == o.breaks_ &&
           slopes_ == o.slopes_ && eval(anchor_x_) == o.eval(anchor_x_);
}

}  // namespace illiq
