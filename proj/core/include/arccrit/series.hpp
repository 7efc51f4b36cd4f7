#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arccrit/exponent.hpp"

namespace arccrit {

using Coeff = mpq_class;

inline constexpr std::int64_t kDefaultMaxRamification = 24;
inline const Exponent kDefaultTruncation{8};

struct Term {
    Exponent exponent;
    Coeff coeff;

    friend bool operator==(const Term& a, const Term& b) { return a.exponent == b.exponent && a.coeff == b.coeff; }
};

/// Truncated Puiseux series in one variable t with exact rational coefficients.
///
/// Terms are strictly increasing in exponent, nonzero, and below the truncation;
/// nothing is known about exponents at or above the truncation. The common
/// denominator of the exponents (the ramification index) never exceeds
/// max_ramification(); operations that would exceed it throw SeriesError.
class PuiseuxSeries {
public:
    /// The zero series known to kDefaultTruncation.
    PuiseuxSeries();
    explicit PuiseuxSeries(Exponent truncation, std::int64_t max_ramification = kDefaultMaxRamification);

    /// Sorts, merges equal exponents and drops zero terms and terms at or beyond the truncation.
    PuiseuxSeries(std::vector<Term> terms, Exponent truncation,
                  std::int64_t max_ramification = kDefaultMaxRamification);

    static PuiseuxSeries monomial(const Coeff& c, Exponent e, Exponent truncation = kDefaultTruncation,
                                  std::int64_t max_ramification = kDefaultMaxRamification);
    static PuiseuxSeries constant(const Coeff& c, Exponent truncation = kDefaultTruncation,
                                  std::int64_t max_ramification = kDefaultMaxRamification);
    /// The series t.
    static PuiseuxSeries variable(Exponent truncation = kDefaultTruncation,
                                  std::int64_t max_ramification = kDefaultMaxRamification);

    [[nodiscard]] const std::vector<Term>& terms() const noexcept { return terms_; }
    [[nodiscard]] Exponent truncation() const noexcept { return truncation_; }
    [[nodiscard]] std::int64_t max_ramification() const noexcept { return max_ramification_; }
    [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }

    /// Least common denominator of the exponents (1 for the zero series).
    [[nodiscard]] std::int64_t ramification() const;

    /// Leading exponent, or the truncation for the zero series.
    [[nodiscard]] Exponent valuation() const noexcept
    {
        return terms_.empty() ? truncation_ : terms_.front().exponent;
    }
    [[nodiscard]] const Coeff& leading_coeff() const;

    /// Coefficient at exponent e (zero when absent).
    [[nodiscard]] Coeff coeff_at(Exponent e) const;

    /// Numeric value of the known terms at t > 0.
    [[nodiscard]] double evaluate(double t) const;
    /// Numeric derivative of the known terms at t > 0.
    [[nodiscard]] double evaluate_derivative(double t) const;

    /// Same terms, truncation lowered to min(truncation(), new_truncation).
    [[nodiscard]] PuiseuxSeries truncated(Exponent new_truncation) const;
    [[nodiscard]] PuiseuxSeries with_max_ramification(std::int64_t max_ramification) const;

    /// Exact equality below min of the two truncations (and below `bound` when given).
    [[nodiscard]] bool agrees_with(const PuiseuxSeries& other, std::optional<Exponent> bound = std::nullopt) const;

    friend bool operator==(const PuiseuxSeries& a, const PuiseuxSeries& b)
    {
        return a.truncation_ == b.truncation_ && a.terms_ == b.terms_;
    }

private:
    void normalize();

    std::vector<Term> terms_;
    Exponent truncation_;
    std::int64_t max_ramification_ = kDefaultMaxRamification;
};

ContactOrder ord(const PuiseuxSeries& f);

PuiseuxSeries operator+(const PuiseuxSeries& f, const PuiseuxSeries& g);
PuiseuxSeries operator-(const PuiseuxSeries& f, const PuiseuxSeries& g);
PuiseuxSeries operator-(const PuiseuxSeries& f);
PuiseuxSeries operator*(const PuiseuxSeries& f, const PuiseuxSeries& g);
PuiseuxSeries operator*(const Coeff& c, const PuiseuxSeries& f);

PuiseuxSeries int_pow(const PuiseuxSeries& f, unsigned n);

/// f^r for rational r. The leading coefficient must have an exact rational r-th power.
PuiseuxSeries pow(const PuiseuxSeries& f, Exponent r);

PuiseuxSeries sqrt(const PuiseuxSeries& f);
PuiseuxSeries reciprocal(const PuiseuxSeries& f);
PuiseuxSeries derivative(const PuiseuxSeries& f);

/// f(g(t)); requires ord(g) > 0.
PuiseuxSeries compose(const PuiseuxSeries& f, const PuiseuxSeries& g);

/// h with f(h(t)) = t up to truncation; requires ord(f) = 1.
PuiseuxSeries comp_inverse(const PuiseuxSeries& f);

/// f(t^k) for rational k > 0.
PuiseuxSeries substitute_power(const PuiseuxSeries& f, Exponent k);

/// Exact rational q-th root when one exists.
std::optional<Coeff> rational_root(const Coeff& c, std::int64_t q);
/// c^r as an exact rational when one exists.
std::optional<Coeff> rational_power(const Coeff& c, Exponent r);

/// Human-readable form, e.g. "t - 2*t^(5/2) + O(t^8)".
std::string to_string(const PuiseuxSeries& f);
std::ostream& operator<<(std::ostream& os, const PuiseuxSeries& f);

} // namespace arccrit
