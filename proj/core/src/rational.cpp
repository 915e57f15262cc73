#include "illiq/rational.hpp"

#include <cctype>

namespace illiq {

namespace {

bool is_integer_body(const std::string& s) {
    if (s.empty()) return false;
    size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

}  // namespace

std::optional<Rat> parse_rat(const std::string& text) {
    if (text.empty()) return std::nullopt;

    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const std::string num = text.substr(0, slash);
        const std::string den = text.substr(slash + 1);
        if (!is_integer_body(num) || !is_integer_body(den)) return std::nullopt;
        Rat q;
        if (q.set_str(num + "/" + den, 10) != 0) return std::nullopt;
        if (q.get_den() == 0) return std::nullopt;
        q.canonicalize();
        return q;
    }

    const auto dot = text.find('.');
    if (dot == std::string::npos) {
        if (!is_integer_body(text)) return std::nullopt;
        Rat q;
        if (q.set_str(text, 10) != 0) return std::nullopt;
        return q;
    }

    // Exact decimal: digits.digits -> (digits digits) / 10^frac_len
    std::string head = text.substr(0, dot);
    std::string frac = text.substr(dot + 1);
    if (frac.empty()) return std::nullopt;
    for (char ch : frac)
        if (!std::isdigit(static_cast<unsigned char>(ch))) return std::nullopt;
    bool negative = false;
    if (!head.empty() && (head[0] == '-' || head[0] == '+')) {
        negative = head[0] == '-';
        head = head.substr(1);
    }
    if (!head.empty() && !is_integer_body(head)) return std::nullopt;
    if (head.empty()) head = "0";

    mpz_class numerator(head + frac, 10);
    mpz_class denominator;
    mpz_ui_pow_ui(denominator.get_mpz_t(), 10, frac.size());
    Rat q(numerator, denominator);
    q.canonicalize();
    if (negative) q = -q;
    return q;
}

std::string rat_to_string(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace illiq
