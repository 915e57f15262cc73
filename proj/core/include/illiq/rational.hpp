#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

namespace illiq {

// Exact rational scalar. All kernel and LP arithmetic runs on Rat by default;
// double is an opt-in fast path (see lp.hpp).
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline double to_double(const Rat& q) { return q.get_d(); }

// "3", "-1.25", "7/2". Decimal strings parse exactly (1.25 -> 5/4).
std::optional<Rat> parse_rat(const std::string& text);

// Canonical display form: integer when denominator is 1, else "p/q".
std::string rat_to_string(const Rat& q);

}  // namespace illiq
