#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace kfp {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Parses "p/q", "p", or a plain decimal like "0.25" into an exact rational.
/// Decimals are converted exactly (digits over a power of ten), never through
/// floating point. Returns nullopt on malformed input or zero denominator.
std::optional<Rat> parse_rational(std::string_view text);

/// Renders as "p/q", or just "p" when the denominator is 1.
std::string to_string(const Rat& r);

/// A nonnegative rational extended with +infinity, used for contraction
/// coefficients where no finite bound exists.
class ExtRat {
public:
    ExtRat() : infinite_(false), value_(0) {}
    static ExtRat finite(Rat v) { return ExtRat(false, std::move(v)); }
    static ExtRat inf() { return ExtRat(true, Rat(0)); }

    bool is_inf() const { return infinite_; }
    const Rat& value() const { return value_; }  // meaningful only when finite

    friend bool operator==(const ExtRat& a, const ExtRat& b) {
        if (a.infinite_ != b.infinite_) return false;
        return a.infinite_ || a.value_ == b.value_;
    }
    friend bool operator<(const ExtRat& a, const ExtRat& b) {
        if (a.infinite_) return false;
        if (b.infinite_) return true;
        return a.value_ < b.value_;
    }
    friend bool operator<=(const ExtRat& a, const ExtRat& b) { return a < b || a == b; }

    bool less_than(const Rat& bound) const { return !infinite_ && value_ < bound; }

private:
    ExtRat(bool inf, Rat v) : infinite_(inf), value_(std::move(v)) {}
    bool infinite_;
    Rat value_;
};

std::string to_string(const ExtRat& r);  // "p/q" or "inf"

/// Exact conversion of a finite double into a rational.
Rat rat_from_double(double x);

}  // namespace kfp
