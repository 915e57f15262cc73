#pragma once

#include <cassert>
#include <compare>
#include <limits>
#include <string>

#include "illiq/rational.hpp"

namespace illiq {

// Extended rational: a finite Rat, +inf, or -inf. Comparisons are total.
// Scalar multiplication uses the epigraph convention 0 * inf = 0.
class ExtReal {
  public:
    ExtReal() : kind_(Kind::Finite), value_(0) {}
    ExtReal(Rat v) : kind_(Kind::Finite), value_(std::move(v)) {}  // NOLINT: implicit by design
    ExtReal(long v) : kind_(Kind::Finite), value_(v) {}            // NOLINT
    ExtReal(int v) : kind_(Kind::Finite), value_(v) {}             // NOLINT

    static ExtReal pos_inf() { return ExtReal(Kind::PosInf); }
    static ExtReal neg_inf() { return ExtReal(Kind::NegInf); }

    bool is_finite() const { return kind_ == Kind::Finite; }
    bool is_pos_inf() const { return kind_ == Kind::PosInf; }
    bool is_neg_inf() const { return kind_ == Kind::NegInf; }

    const Rat& finite() const {
        assert(is_finite());
        return value_;
    }

    double to_double() const {
        if (is_pos_inf()) return std::numeric_limits<double>::infinity();
        if (is_neg_inf()) return -std::numeric_limits<double>::infinity();
        return illiq::to_double(value_);
    }

    ExtReal operator-() const {
        if (is_pos_inf()) return neg_inf();
        if (is_neg_inf()) return pos_inf();
        return ExtReal(-value_);
    }

    // Undefined on (+inf) + (-inf); asserted.
    ExtReal operator+(const ExtReal& o) const {
        if (is_finite() && o.is_finite()) return ExtReal(value_ + o.value_);
        if (is_pos_inf() || o.is_pos_inf()) {
            assert(!is_neg_inf() && !o.is_neg_inf());
            return pos_inf();
        }
        return neg_inf();
    }
    ExtReal operator-(const ExtReal& o) const { return *this + (-o); }

    // 0 * inf = 0 (epigraph convention).
    ExtReal operator*(const Rat& s) const {
        if (is_finite()) return ExtReal(value_ * s);
        if (s == 0) return ExtReal(Rat(0));
        const bool flip = s < 0;
        if (is_pos_inf()) return flip ? neg_inf() : pos_inf();
        return flip ? pos_inf() : neg_inf();
    }

    bool operator==(const ExtReal& o) const {
        if (kind_ != o.kind_) return false;
        return kind_ != Kind::Finite || value_ == o.value_;
    }
    bool operator!=(const ExtReal& o) const { return !(*this == o); }
    bool operator<(const ExtReal& o) const {
        if (kind_ == o.kind_) return kind_ == Kind::Finite && value_ < o.value_;
        if (is_neg_inf()) return true;
        if (o.is_neg_inf()) return false;
        return o.is_pos_inf();
    }
    bool operator<=(const ExtReal& o) const { return *this < o || *this == o; }
    bool operator>(const ExtReal& o) const { return o < *this; }
    bool operator>=(const ExtReal& o) const { return o <= *this; }

    std::string to_string() const {
        if (is_pos_inf()) return "inf";
        if (is_neg_inf()) return "-inf";
        return rat_to_string(value_);
    }

  private:
    enum class Kind { NegInf, Finite, PosInf };
    explicit ExtReal(Kind k) : kind_(k), value_(0) {}

    Kind kind_;
    Rat value_;
};

inline ExtReal min(const ExtReal& a, const ExtReal& b) { return a < b ? a : b; }
inline ExtReal max(const ExtReal& a, const ExtReal& b) { return a < b ? b : a; }

// "inf" / "-inf" / anything parse_rat accepts.
std::optional<ExtReal> parse_extreal(const std::string& text);

}  // namespace illiq
