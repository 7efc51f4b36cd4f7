#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

namespace arccrit {

/// Small exact rational used for exponents, truncations and contact orders.
///
/// Always stored in lowest terms with a positive denominator.
class Exponent {
public:
    constexpr Exponent() = default;
    Exponent(std::int64_t num, std::int64_t den = 1);

    /// Builds an exponent only if (num, den) is already reduced with den > 0.
    static std::optional<Exponent> from_reduced(std::int64_t num, std::int64_t den);

    [[nodiscard]] std::int64_t num() const noexcept { return num_; }
    [[nodiscard]] std::int64_t den() const noexcept { return den_; }
    [[nodiscard]] double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
    [[nodiscard]] bool is_integer() const noexcept { return den_ == 1; }
    [[nodiscard]] bool is_zero() const noexcept { return num_ == 0; }

    friend Exponent operator+(Exponent a, Exponent b);
    friend Exponent operator-(Exponent a, Exponent b);
    friend Exponent operator*(Exponent a, Exponent b);
    friend Exponent operator/(Exponent a, Exponent b);
    friend Exponent operator-(Exponent a) { return Exponent(-a.num_, a.den_); }
    Exponent& operator+=(Exponent b) { return *this = *this + b; }
    Exponent& operator-=(Exponent b) { return *this = *this - b; }

    friend bool operator==(Exponent a, Exponent b) noexcept { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend std::strong_ordering operator<=>(Exponent a, Exponent b) noexcept;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline Exponent min(Exponent a, Exponent b) { return b < a ? b : a; }
inline Exponent max(Exponent a, Exponent b) { return a < b ? b : a; }

std::int64_t lcm_checked(std::int64_t a, std::int64_t b);

/// "3/2", "2", "-1/4".
std::string to_string(Exponent e);
std::ostream& operator<<(std::ostream& os, Exponent e);

/// Parses "p/q" or "p"; the fraction must already be reduced.
std::optional<Exponent> parse_exponent(const std::string& text);

/// Simplest rational (smallest denominator, then closest) in [x - tol, x + tol]
/// with denominator at most max_den.
std::optional<Exponent> simplest_rational_near(double x, double tol, std::int64_t max_den);

/// Vanishing order of a series or distance: exact, or only bounded below by a truncation.
class ContactOrder {
public:
    enum class Kind { finite, at_least };

    static ContactOrder finite(Exponent e) { return ContactOrder(Kind::finite, e); }
    static ContactOrder at_least(Exponent e) { return ContactOrder(Kind::at_least, e); }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] bool is_finite() const noexcept { return kind_ == Kind::finite; }
    [[nodiscard]] bool is_at_least() const noexcept { return kind_ == Kind::at_least; }
    [[nodiscard]] Exponent value() const noexcept { return value_; }

    friend bool operator==(const ContactOrder&, const ContactOrder&) = default;

    /// Total order where AtLeast(x) sorts as +infinity (ties among AtLeast by bound).
    friend std::strong_ordering compare_orders(const ContactOrder& a, const ContactOrder& b) noexcept;

private:
    ContactOrder(Kind k, Exponent e) : kind_(k), value_(e) {}
    Kind kind_;
    Exponent value_;
};

/// "3/2" for finite orders, ">=8" for truncation-limited ones.
std::string to_string(const ContactOrder& o);
std::ostream& operator<<(std::ostream& os, const ContactOrder& o);

} // namespace arccrit

template <>
struct std::hash<arccrit::Exponent> {
    std::size_t operator()(arccrit::Exponent e) const noexcept
    {
        return std::hash<std::int64_t>{}(e.num()) * 1000003u ^ std::hash<std::int64_t>{}(e.den());
    }
};
