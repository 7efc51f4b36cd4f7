#include "arccrit/series.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "arccrit/error.hpp"

namespace arccrit {

namespace {

std::int64_t combined_ramification(const PuiseuxSeries& f, const PuiseuxSeries& g)
{
    return std::min(f.max_ramification(), g.max_ramification());
}

// Exact integer power of a rational, negative exponents allowed for nonzero bases.
Coeff ipow(const Coeff& c, std::int64_t n)
{
    if (n < 0) {
        if (c == 0) {
            throw SeriesError("negative power of zero");
        }
        return ipow(Coeff(1) / c, -n);
    }
    mpz_class num;
    mpz_class den;
    mpz_pow_ui(num.get_mpz_t(), c.get_num_mpz_t(), static_cast<unsigned long>(n));
    mpz_pow_ui(den.get_mpz_t(), c.get_den_mpz_t(), static_cast<unsigned long>(n));
    Coeff out(num, den);
    out.canonicalize();
    return out;
}

std::optional<mpz_class> exact_int_root(const mpz_class& v, std::int64_t q)
{
    if (v < 0) {
        if (q % 2 == 0) {
            return std::nullopt;
        }
        auto r = exact_int_root(mpz_class(-v), q);
        if (!r) {
            return std::nullopt;
        }
        return mpz_class(-*r);
    }
    mpz_class r;
    if (mpz_root(r.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(q)) == 0) {
        return std::nullopt;
    }
    return r;
}

std::string coeff_string(const Coeff& c)
{
    return c.get_str();
}

} // namespace

std::optional<Coeff> rational_root(const Coeff& c, std::int64_t q)
{
    if (q <= 0) {
        throw SeriesError("root index must be positive");
    }
    if (q == 1) {
        return c;
    }
    auto num = exact_int_root(c.get_num(), q);
    auto den = exact_int_root(c.get_den(), q);
    if (!num || !den) {
        return std::nullopt;
    }
    Coeff out(*num, *den);
    out.canonicalize();
    return out;
}

std::optional<Coeff> rational_power(const Coeff& c, Exponent r)
{
    if (c == 0) {
        if (r.num() > 0) {
            return Coeff(0);
        }
        return std::nullopt;
    }
    auto root = rational_root(c, r.den());
    if (!root) {
        return std::nullopt;
    }
    return ipow(*root, r.num());
}

PuiseuxSeries::PuiseuxSeries() : truncation_(kDefaultTruncation) {}

PuiseuxSeries::PuiseuxSeries(Exponent truncation, std::int64_t max_ramification)
    : truncation_(truncation), max_ramification_(max_ramification)
{
}

PuiseuxSeries::PuiseuxSeries(std::vector<Term> terms, Exponent truncation, std::int64_t max_ramification)
    : terms_(std::move(terms)), truncation_(truncation), max_ramification_(max_ramification)
{
    normalize();
}

PuiseuxSeries PuiseuxSeries::monomial(const Coeff& c, Exponent e, Exponent truncation, std::int64_t max_ramification)
{
    return PuiseuxSeries({Term{e, c}}, truncation, max_ramification);
}

PuiseuxSeries PuiseuxSeries::constant(const Coeff& c, Exponent truncation, std::int64_t max_ramification)
{
    return monomial(c, Exponent(0), truncation, max_ramification);
}

PuiseuxSeries PuiseuxSeries::variable(Exponent truncation, std::int64_t max_ramification)
{
    return monomial(Coeff(1), Exponent(1), truncation, max_ramification);
}

void PuiseuxSeries::normalize()
{
    if (max_ramification_ < 1) {
        throw SeriesError("maximum ramification must be positive");
    }
    std::stable_sort(terms_.begin(), terms_.end(),
                     [](const Term& a, const Term& b) { return a.exponent < b.exponent; });
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (auto& term : terms_) {
        if (term.exponent >= truncation_) {
            break;
        }
        if (!merged.empty() && merged.back().exponent == term.exponent) {
            merged.back().coeff += term.coeff;
        } else {
            merged.push_back(std::move(term));
        }
    }
    std::erase_if(merged, [](const Term& t) { return t.coeff == 0; });
    terms_ = std::move(merged);
    if (ramification() > max_ramification_) {
        throw SeriesError("ramification index " + std::to_string(ramification()) + " exceeds maximum " +
                          std::to_string(max_ramification_));
    }
}

std::int64_t PuiseuxSeries::ramification() const
{
    std::int64_t d = 1;
    for (const auto& t : terms_) {
        d = lcm_checked(d, t.exponent.den());
    }
    return d;
}

const Coeff& PuiseuxSeries::leading_coeff() const
{
    if (terms_.empty()) {
        throw SeriesError("zero series has no leading coefficient");
    }
    return terms_.front().coeff;
}

Coeff PuiseuxSeries::coeff_at(Exponent e) const
{
    for (const auto& t : terms_) {
        if (t.exponent == e) {
            return t.coeff;
        }
    }
    return Coeff(0);
}

double PuiseuxSeries::evaluate(double t) const
{
    double sum = 0.0;
    for (const auto& term : terms_) {
        sum += term.coeff.get_d() * std::pow(t, term.exponent.to_double());
    }
    return sum;
}

double PuiseuxSeries::evaluate_derivative(double t) const
{
    double sum = 0.0;
    for (const auto& term : terms_) {
        if (term.exponent.is_zero()) {
            continue;
        }
        const double e = term.exponent.to_double();
        sum += term.coeff.get_d() * e * std::pow(t, e - 1.0);
    }
    return sum;
}

PuiseuxSeries PuiseuxSeries::truncated(Exponent new_truncation) const
{
    return PuiseuxSeries(terms_, min(truncation_, new_truncation), max_ramification_);
}

PuiseuxSeries PuiseuxSeries::with_max_ramification(std::int64_t max_ramification) const
{
    return PuiseuxSeries(terms_, truncation_, max_ramification);
}

bool PuiseuxSeries::agrees_with(const PuiseuxSeries& other, std::optional<Exponent> bound) const
{
    Exponent limit = min(truncation_, other.truncation_);
    if (bound) {
        limit = min(limit, *bound);
    }
    return (*this - other).valuation() >= limit;
}

ContactOrder ord(const PuiseuxSeries& f)
{
    if (f.is_zero()) {
        return ContactOrder::at_least(f.truncation());
    }
    return ContactOrder::finite(f.terms().front().exponent);
}

PuiseuxSeries operator+(const PuiseuxSeries& f, const PuiseuxSeries& g)
{
    std::vector<Term> terms;
    terms.reserve(f.terms().size() + g.terms().size());
    terms.insert(terms.end(), f.terms().begin(), f.terms().end());
    terms.insert(terms.end(), g.terms().begin(), g.terms().end());
    return PuiseuxSeries(std::move(terms), min(f.truncation(), g.truncation()), combined_ramification(f, g));
}

PuiseuxSeries operator-(const PuiseuxSeries& f)
{
    std::vector<Term> terms = f.terms();
    for (auto& t : terms) {
        t.coeff = -t.coeff;
    }
    return PuiseuxSeries(std::move(terms), f.truncation(), f.max_ramification());
}

PuiseuxSeries operator-(const PuiseuxSeries& f, const PuiseuxSeries& g) { return f + (-g); }

PuiseuxSeries operator*(const PuiseuxSeries& f, const PuiseuxSeries& g)
{
    const Exponent trunc = min(f.truncation() + g.valuation(), g.truncation() + f.valuation());
    std::vector<Term> terms;
    terms.reserve(f.terms().size() * g.terms().size());
    for (const auto& a : f.terms()) {
        for (const auto& b : g.terms()) {
            const Exponent e = a.exponent + b.exponent;
            if (e >= trunc) {
                break;
            }
            terms.push_back(Term{e, a.coeff * b.coeff});
        }
    }
    return PuiseuxSeries(std::move(terms), trunc, combined_ramification(f, g));
}

PuiseuxSeries operator*(const Coeff& c, const PuiseuxSeries& f)
{
    std::vector<Term> terms = f.terms();
    for (auto& t : terms) {
        t.coeff *= c;
    }
    return PuiseuxSeries(std::move(terms), f.truncation(), f.max_ramification());
}

PuiseuxSeries int_pow(const PuiseuxSeries& f, unsigned n)
{
    if (n == 0) {
        return PuiseuxSeries::constant(Coeff(1), f.truncation() - f.valuation(), f.max_ramification());
    }
    PuiseuxSeries result = f;
    for (unsigned i = 1; i < n; ++i) {
        result = result * f;
    }
    return result;
}

PuiseuxSeries pow(const PuiseuxSeries& f, Exponent r)
{
    if (f.is_zero()) {
        if (r.num() <= 0) {
            throw SeriesError("non-positive power of a series that vanishes to truncation");
        }
        return PuiseuxSeries(f.truncation() * r, f.max_ramification());
    }
    if (r.is_integer() && r.num() > 0 && r.num() <= 4) {
        return int_pow(f, static_cast<unsigned>(r.num()));
    }

    const Exponent lead = f.valuation();
    const Coeff& c = f.leading_coeff();
    auto scale = rational_power(c, r);
    if (!scale) {
        throw SeriesError("leading coefficient " + c.get_str() + " has no rational power " + to_string(r));
    }

    // f = c t^lead (1 + w), ord(w) > 0, w known below `rel`.
    const Exponent rel = f.truncation() - lead;
    std::vector<Term> w_terms;
    for (std::size_t i = 1; i < f.terms().size(); ++i) {
        w_terms.push_back(Term{f.terms()[i].exponent - lead, f.terms()[i].coeff / c});
    }
    const PuiseuxSeries w(std::move(w_terms), rel, f.max_ramification());

    std::vector<Term> acc{Term{Exponent(0), Coeff(1)}};
    if (!w.is_zero()) {
        const Coeff rq(mpz_class(r.num()), mpz_class(r.den()));
        Coeff binom(1);
        PuiseuxSeries w_pow = PuiseuxSeries::constant(Coeff(1), rel, f.max_ramification());
        for (std::int64_t k = 1; w.valuation() * Exponent(k) < rel; ++k) {
            binom = binom * (rq - Coeff(k - 1)) / Coeff(k);
            w_pow = (w_pow * w).truncated(rel);
            if (binom == 0) {
                break;
            }
            for (const auto& t : w_pow.terms()) {
                acc.push_back(Term{t.exponent, binom * t.coeff});
            }
        }
    }
    const Exponent shift = lead * r;
    for (auto& t : acc) {
        t.exponent += shift;
        t.coeff *= *scale;
    }
    return PuiseuxSeries(std::move(acc), shift + rel, f.max_ramification());
}

PuiseuxSeries sqrt(const PuiseuxSeries& f)
{
    if (f.is_zero()) {
        throw SeriesError("square root of a series that vanishes to truncation");
    }
    if (f.leading_coeff() < 0) {
        throw SeriesError("square root of a series with negative leading coefficient");
    }
    return pow(f, Exponent(1, 2));
}

PuiseuxSeries reciprocal(const PuiseuxSeries& f)
{
    if (f.is_zero()) {
        throw SeriesError("reciprocal of a series that vanishes to truncation");
    }
    return pow(f, Exponent(-1));
}

PuiseuxSeries derivative(const PuiseuxSeries& f)
{
    std::vector<Term> terms;
    for (const auto& t : f.terms()) {
        if (t.exponent.is_zero()) {
            continue;
        }
        const Coeff e(mpz_class(t.exponent.num()), mpz_class(t.exponent.den()));
        terms.push_back(Term{t.exponent - Exponent(1), t.coeff * e});
    }
    return PuiseuxSeries(std::move(terms), f.truncation() - Exponent(1), f.max_ramification());
}

PuiseuxSeries compose(const PuiseuxSeries& f, const PuiseuxSeries& g)
{
    if (g.is_zero()) {
        throw SeriesError("compose: inner series vanishes to truncation");
    }
    const Exponent inner_ord = g.valuation();
    if (inner_ord <= Exponent(0)) {
        throw SeriesError("compose: inner series must have positive order, got " + to_string(inner_ord));
    }
    const std::int64_t ram = combined_ramification(f, g);

    PuiseuxSeries result(f.truncation() * inner_ord, ram);
    if (f.is_zero()) {
        return result;
    }

    // Every power g^(k/d) is an integer power of one base g^(1/d).
    const std::int64_t d = f.ramification();
    const PuiseuxSeries base = pow(g, Exponent(1, d));
    std::optional<PuiseuxSeries> inv_base;
    std::int64_t have_k = 1;
    PuiseuxSeries power = base;

    for (const auto& term : f.terms()) {
        const std::int64_t k = (term.exponent * Exponent(d)).num();
        PuiseuxSeries piece;
        if (k == 0) {
            piece = PuiseuxSeries::constant(term.coeff, result.truncation(), ram);
        } else if (k < 0) {
            if (!inv_base) {
                inv_base = reciprocal(base);
            }
            piece = term.coeff * int_pow(*inv_base, static_cast<unsigned>(-k));
        } else {
            while (have_k < k) {
                power = power * base;
                ++have_k;
            }
            piece = term.coeff * power;
        }
        result = result + piece;
    }
    return result;
}

PuiseuxSeries comp_inverse(const PuiseuxSeries& f)
{
    const ContactOrder o = ord(f);
    if (!o.is_finite() || o.value() != Exponent(1)) {
        throw SeriesError("comp_inverse requires order exactly 1, got " + to_string(o));
    }
    const Exponent trunc = f.truncation();
    const std::int64_t ram = f.max_ramification();
    const Coeff c = f.leading_coeff();
    PuiseuxSeries h = PuiseuxSeries::monomial(Coeff(1) / c, Exponent(1), trunc, ram);
    if (f.terms().size() == 1) {
        return h;
    }

    // h is exact below `correct`; each Newton step doubles correct - 1.
    Exponent correct = min(trunc, f.terms()[1].exponent);
    const PuiseuxSeries identity = PuiseuxSeries::variable(trunc, ram);
    const PuiseuxSeries df = derivative(f);
    while (correct < trunc) {
        const Exponent target = min(trunc, Exponent(1) + Exponent(2) * (correct - Exponent(1)));
        const PuiseuxSeries f_t = f.truncated(target);
        // Newton treats the current approximation as exact up to the new target.
        const PuiseuxSeries h_t(h.terms(), target, ram);
        const PuiseuxSeries residual = compose(f_t, h_t) - identity.truncated(target);
        const PuiseuxSeries slope = compose(df.truncated(target - Exponent(1)), h_t);
        h = (h_t - residual * reciprocal(slope)).truncated(target);
        correct = target;
    }
    return PuiseuxSeries(h.terms(), trunc, ram);
}

PuiseuxSeries substitute_power(const PuiseuxSeries& f, Exponent k)
{
    if (k <= Exponent(0)) {
        throw SeriesError("substitute_power requires a positive exponent");
    }
    std::vector<Term> terms = f.terms();
    for (auto& t : terms) {
        t.exponent = t.exponent * k;
    }
    return PuiseuxSeries(std::move(terms), f.truncation() * k, f.max_ramification());
}

std::string to_string(const PuiseuxSeries& f)
{
    std::ostringstream os;
    bool first = true;
    for (const auto& t : f.terms()) {
        Coeff c = t.coeff;
        if (first) {
            if (c < 0) {
                os << "-";
                c = -c;
            }
        } else {
            os << (c < 0 ? " - " : " + ");
            if (c < 0) {
                c = -c;
            }
        }
        first = false;
        if (t.exponent.is_zero()) {
            os << coeff_string(c);
            continue;
        }
        if (c != 1) {
            os << coeff_string(c) << "*";
        }
        os << "t";
        if (t.exponent != Exponent(1)) {
            if (t.exponent.is_integer()) {
                os << "^" << t.exponent;
            } else {
                os << "^(" << t.exponent << ")";
            }
        }
    }
    if (first) {
        os << "0";
    }
    os << " + O(t^";
    if (f.truncation().is_integer()) {
        os << f.truncation();
    } else {
        os << "(" << f.truncation() << ")";
    }
    os << ")";
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const PuiseuxSeries& f) { return os << to_string(f); }

} // namespace arccrit
