#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace bibscreen {

/// Exact fraction with a positive denominator, always kept in lowest terms.
///
/// Every indicator is computed as a Rational and only rounded when it is
/// reported, so two independent computations can be compared exactly.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t numerator, std::int64_t denominator = 1);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    Rational operator-() const;
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }

    bool operator==(const Rational& o) const noexcept { return num_ == o.num_ && den_ == o.den_; }
    std::strong_ordering operator<=>(const Rational& o) const noexcept;

    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// floor(x + 1/2): halves go towards positive infinity.
    std::int64_t round_half_up() const;

    /// Half-up rounding at `decimals` places, printed with exactly that many
    /// fractional digits ("6.4", "-0.5", "12").
    std::string format_fixed(int decimals) const;

    /// "p" for integers, "p/q" otherwise.
    std::string to_string() const;
    static Rational parse(std::string_view text);

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// 100 * part / whole. `whole` must be positive.
Rational percent_of(std::int64_t part, std::int64_t whole);

}  // namespace bibscreen
