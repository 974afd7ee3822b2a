#include "kfp/rational.hpp"

#include <cctype>
#include <cmath>

namespace kfp {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// cpp_int's string constructor reads a leading zero as an octal prefix.
Int int_from_digits(std::string_view s) {
    size_t i = 0;
    while (i + 1 < s.size() && s[i] == '0') ++i;
    return Int{std::string(s.substr(i))};
}

}  // namespace

std::optional<Rat> parse_rational(std::string_view text) {
    std::string_view s = trim(text);
    if (s.empty()) return std::nullopt;

    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) return std::nullopt;

    auto slash = s.find('/');
    Rat value;
    if (slash != std::string_view::npos) {
        std::string_view num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) return std::nullopt;
        Int d = int_from_digits(den);
        if (d == 0) return std::nullopt;
        value = Rat(int_from_digits(num), d);
    } else {
        auto dot = s.find('.');
        if (dot == std::string_view::npos) {
            if (!all_digits(s)) return std::nullopt;
            value = Rat(int_from_digits(s));
        } else {
            std::string_view whole = s.substr(0, dot), frac = s.substr(dot + 1);
            if (whole.empty() && frac.empty()) return std::nullopt;
            if (!whole.empty() && !all_digits(whole)) return std::nullopt;
            if (!frac.empty() && !all_digits(frac)) return std::nullopt;
            Int digits = int_from_digits(std::string(whole) + std::string(frac));
            Int scale = 1;
            for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
            value = Rat(digits, scale);
        }
    }
    if (negative) value = -value;
    return value;
}

std::string to_string(const Rat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

std::string to_string(const ExtRat& r) {
    return r.is_inf() ? "inf" : to_string(r.value());
}

Rat rat_from_double(double x) {
    if (x == 0.0) return Rat(0);
    int exp = 0;
    double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
    // 53 doublings turn the mantissa into an integer.
    Int mant = static_cast<long long>(std::ldexp(m, 53));
    exp -= 53;
    Rat r(mant);
    if (exp >= 0)
        r *= Rat(Int(1) << exp);
    else
        r /= Rat(Int(1) << -exp);
    return r;
}

}  // namespace kfp
