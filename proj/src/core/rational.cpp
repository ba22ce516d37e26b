#include "bibscreen/rational.hpp"

#include <charconv>
#include <limits>

#include "bibscreen/error.hpp"

namespace bibscreen {

namespace {

__extension__ typedef __int128 Wide;

Wide gcd_wide(Wide a, Wide b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        Wide t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Rational make(Wide n, Wide d) {
    if (d == 0) throw UsageError("rational: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    Wide g = gcd_wide(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    constexpr Wide lo = std::numeric_limits<std::int64_t>::min();
    constexpr Wide hi = std::numeric_limits<std::int64_t>::max();
    if (n < lo || n > hi || d > hi) throw Error("rational: overflow");
    return Rational(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
}

// floor(n / d) for d > 0
Wide floor_div(Wide n, Wide d) {
    Wide q = n / d;
    if ((n % d != 0) && (n < 0)) --q;
    return q;
}

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0) throw UsageError("rational: zero denominator");
    Wide n = numerator;
    Wide d = denominator;
    if (d < 0) {
        n = -n;
        d = -d;
    }
    Wide g = gcd_wide(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num_ = static_cast<std::int64_t>(n);
    den_ = static_cast<std::int64_t>(d);
}

Rational Rational::operator+(const Rational& o) const {
    return make(Wide(num_) * o.den_ + Wide(o.num_) * den_, Wide(den_) * o.den_);
}

Rational Rational::operator-(const Rational& o) const {
    return make(Wide(num_) * o.den_ - Wide(o.num_) * den_, Wide(den_) * o.den_);
}

Rational Rational::operator*(const Rational& o) const {
    return make(Wide(num_) * o.num_, Wide(den_) * o.den_);
}

Rational Rational::operator/(const Rational& o) const {
    if (o.num_ == 0) throw UsageError("rational: division by zero");
    return make(Wide(num_) * o.den_, Wide(den_) * o.num_);
}

Rational Rational::operator-() const { return make(-Wide(num_), den_); }

std::strong_ordering Rational::operator<=>(const Rational& o) const noexcept {
    Wide lhs = Wide(num_) * o.den_;
    Wide rhs = Wide(o.num_) * den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::int64_t Rational::round_half_up() const {
    return static_cast<std::int64_t>(floor_div(Wide(num_) * 2 + den_, Wide(den_) * 2));
}

std::string Rational::format_fixed(int decimals) const {
    Wide scale = 1;
    for (int i = 0; i < decimals; ++i) scale *= 10;
    Wide scaled = floor_div(Wide(num_) * scale * 2 + den_, Wide(den_) * 2);
    bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    Wide whole = scaled / scale;
    Wide frac = scaled % scale;

    std::string out = negative ? "-" : "";
    out += std::to_string(static_cast<long long>(whole));
    if (decimals > 0) {
        std::string digits = std::to_string(static_cast<long long>(frac));
        out += '.';
        out.append(static_cast<std::size_t>(decimals) - digits.size(), '0');
        out += digits;
    }
    return out;
}

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
    auto parse_int = [&](std::string_view s) {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
            throw DataError("rational: cannot parse '" + std::string(text) + "'");
        return v;
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

Rational percent_of(std::int64_t part, std::int64_t whole) {
    if (whole <= 0) throw UsageError("percent_of: non-positive denominator");
    return make(Wide(part) * 100, whole);
}

}  // namespace bibscreen
