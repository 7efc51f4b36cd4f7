#include "arccrit/exponent.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "arccrit/error.hpp"

namespace arccrit {

namespace {

std::int64_t narrow(__int128 v)
{
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
        throw SeriesError("exponent arithmetic overflow");
    }
    return static_cast<std::int64_t>(v);
}

Exponent make_reduced(__int128 num, __int128 den)
{
    if (den == 0) {
        throw SeriesError("exponent with zero denominator");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    __int128 a = num < 0 ? -num : num;
    __int128 b = den;
    while (b != 0) {
        const __int128 r = a % b;
        a = b;
        b = r;
    }
    if (a > 1) {
        num /= a;
        den /= a;
    }
    return Exponent(narrow(num), narrow(den));
}

} // namespace

Exponent::Exponent(std::int64_t num, std::int64_t den)
{
    if (den == 0) {
        throw SeriesError("exponent with zero denominator");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

std::optional<Exponent> Exponent::from_reduced(std::int64_t num, std::int64_t den)
{
    if (den <= 0 || std::gcd(num, den) != 1) {
        return std::nullopt;
    }
    return Exponent(num, den);
}

Exponent operator+(Exponent a, Exponent b)
{
    return make_reduced(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                        static_cast<__int128>(a.den_) * b.den_);
}

Exponent operator-(Exponent a, Exponent b) { return a + (-b); }

Exponent operator*(Exponent a, Exponent b)
{
    return make_reduced(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Exponent operator/(Exponent a, Exponent b)
{
    if (b.num_ == 0) {
        throw SeriesError("division of exponent by zero");
    }
    return make_reduced(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(Exponent a, Exponent b) noexcept
{
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) {
        return std::strong_ordering::less;
    }
    if (lhs > rhs) {
        return std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

std::int64_t lcm_checked(std::int64_t a, std::int64_t b)
{
    return narrow(static_cast<__int128>(a / std::gcd(a, b)) * b);
}

std::string to_string(Exponent e)
{
    if (e.den() == 1) {
        return std::to_string(e.num());
    }
    return std::to_string(e.num()) + "/" + std::to_string(e.den());
}

std::ostream& operator<<(std::ostream& os, Exponent e) { return os << to_string(e); }

std::optional<Exponent> parse_exponent(const std::string& text)
{
    std::int64_t num = 0;
    std::int64_t den = 1;
    std::istringstream in(text);
    if (!(in >> num)) {
        return std::nullopt;
    }
    if (in.peek() == '/') {
        in.get();
        if (!(in >> den)) {
            return std::nullopt;
        }
    }
    if (!in.eof() && in.peek() != std::char_traits<char>::eof()) {
        return std::nullopt;
    }
    return Exponent::from_reduced(num, den);
}

std::optional<Exponent> simplest_rational_near(double x, double tol, std::int64_t max_den)
{
    if (!std::isfinite(x)) {
        return std::nullopt;
    }
    for (std::int64_t q = 1; q <= max_den; ++q) {
        const double lo = (x - tol) * static_cast<double>(q);
        const double hi = (x + tol) * static_cast<double>(q);
        const auto p_lo = static_cast<std::int64_t>(std::ceil(lo - 1e-12));
        const auto p_hi = static_cast<std::int64_t>(std::floor(hi + 1e-12));
        std::optional<Exponent> best;
        double best_err = std::numeric_limits<double>::infinity();
        for (std::int64_t p = p_lo; p <= p_hi; ++p) {
            if (std::gcd(p, q) != 1) {
                continue;
            }
            const double err = std::abs(static_cast<double>(p) / static_cast<double>(q) - x);
            if (err <= tol + 1e-12 && err < best_err) {
                best = Exponent(p, q);
                best_err = err;
            }
        }
        if (best) {
            return best;
        }
    }
    return std::nullopt;
}

std::strong_ordering compare_orders(const ContactOrder& a, const ContactOrder& b) noexcept
{
    if (a.is_finite() != b.is_finite()) {
        return a.is_finite() ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return a.value() <=> b.value();
}

std::string to_string(const ContactOrder& o)
{
    return o.is_finite() ? to_string(o.value()) : ">=" + to_string(o.value());
}

std::ostream& operator<<(std::ostream& os, const ContactOrder& o) { return os << to_string(o); }

} // namespace arccrit
