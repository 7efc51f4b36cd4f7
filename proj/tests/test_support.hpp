#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <tuple>
#include <vector>

#include "arccrit/series.hpp"

namespace arccrit::testing {

// {exp_num, exp_den, coeff_num, coeff_den}
using Quad = std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>;

inline Coeff q(std::int64_t n, std::int64_t d = 1)
{
    Coeff c{mpz_class(n), mpz_class(d)};
    c.canonicalize();
    return c;
}

inline PuiseuxSeries series(std::initializer_list<Quad> quads, Exponent truncation = kDefaultTruncation)
{
    std::vector<Term> terms;
    for (const auto& [en, ed, cn, cd] : quads) {
        terms.push_back(Term{Exponent(en, ed), q(cn, cd)});
    }
    return PuiseuxSeries(std::move(terms), truncation);
}

// Random series with small coefficients and exponents on a 1/ram grid in [lo, hi).
inline PuiseuxSeries random_series(std::mt19937_64& rng, Exponent lo, Exponent hi, std::int64_t ram,
                                   int max_terms, Exponent truncation = kDefaultTruncation)
{
    std::uniform_int_distribution<std::int64_t> coeff(-5, 5);
    std::uniform_int_distribution<std::int64_t> den(1, 3);
    const std::int64_t lo_k = (lo * Exponent(ram)).num();
    const std::int64_t hi_k = ((hi * Exponent(ram)) - Exponent(1)).num();
    std::uniform_int_distribution<std::int64_t> expo(lo_k, hi_k);
    std::uniform_int_distribution<int> count(1, max_terms);
    std::vector<Term> terms;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
        std::int64_t c = coeff(rng);
        if (c == 0) {
            c = 1;
        }
        terms.push_back(Term{Exponent(expo(rng), ram), q(c, den(rng))});
    }
    return PuiseuxSeries(std::move(terms), truncation);
}

} // namespace arccrit::testing

#include "arccrit/arc.hpp"

namespace arccrit::testing {

inline PuiseuxSeries t_pow(std::int64_t num, std::int64_t den = 1, std::int64_t cn = 1, std::int64_t cd = 1)
{
    return PuiseuxSeries::monomial(q(cn, cd), Exponent(num, den));
}

inline PuiseuxSeries zero() { return PuiseuxSeries(kDefaultTruncation); }

// Rational unit vectors used as tangent directions for random arcs.
inline std::vector<std::vector<Coeff>> unit_directions(std::size_t dim)
{
    std::vector<std::vector<Coeff>> out;
    auto pad = [dim](std::vector<Coeff> v) {
        v.resize(dim, Coeff(0));
        return v;
    };
    out.push_back(pad({q(1)}));
    out.push_back(pad({q(3, 5), q(4, 5)}));
    out.push_back(pad({q(2, 3), q(2, 3), q(1, 3)}));
    out.push_back(pad({q(0), q(1)}));
    if (dim >= 4) {
        out.push_back(pad({q(1, 2), q(1, 2), q(1, 2), q(1, 2)}));
        out.push_back(pad({q(0), q(0), q(3, 5), q(4, 5)}));
    }
    return out;
}

// One draw of random_arc_triple; two of the arcs may coincide.
inline std::vector<Arc> draw_arc_triple(std::mt19937_64& rng, std::size_t dim)
{
    static const Exponent grid[] = {Exponent(1), Exponent(5, 4), Exponent(3, 2), Exponent(2),
                                    Exponent(5, 2), Exponent(3)};
    const auto dirs = unit_directions(dim);
    std::uniform_int_distribution<std::size_t> pick_dir(0, dirs.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_exp(1, std::size(grid) - 1);
    std::uniform_int_distribution<std::size_t> pick_comp(0, dim - 1);
    std::uniform_int_distribution<int> pick_coeff(-3, 3);
    std::bernoulli_distribution same_tangent(0.7);

    const auto& base_dir = dirs[pick_dir(rng)];
    std::vector<PuiseuxSeries> base(dim, zero());
    for (std::size_t i = 0; i < dim; ++i) {
        base[i] = PuiseuxSeries::monomial(base_dir[i], Exponent(1));
    }
    const std::size_t bent = pick_comp(rng);
    base[bent] = base[bent] + t_pow(2);

    std::vector<Arc> out;
    for (int k = 0; k < 3; ++k) {
        std::vector<PuiseuxSeries> comps = base;
        if (!same_tangent(rng)) {
            const auto& d = dirs[pick_dir(rng)];
            for (std::size_t i = 0; i < dim; ++i) {
                comps[i] = comps[i] - PuiseuxSeries::monomial(base_dir[i], Exponent(1)) +
                           PuiseuxSeries::monomial(d[i], Exponent(1));
            }
        }
        const int n_perturb = 1 + static_cast<int>(rng() % 2);
        for (int p = 0; p < n_perturb; ++p) {
            int c = pick_coeff(rng);
            if (c == 0) {
                c = 1;
            }
            const std::size_t comp = pick_comp(rng);
            comps[comp] = comps[comp] + PuiseuxSeries::monomial(q(c, 2), grid[pick_exp(rng)]);
        }
        out.push_back(reparametrize_by_distance(Arc(std::move(comps))));
    }
    return out;
}

// Three distance-parametrized arcs sharing a random base arc and differing by
// perturbations at random exponents, so that pairwise orders are nontrivial. Draws
// where two arcs agree up to truncation are redrawn: the triple is pairwise distinct
// with finite pairwise orders.
inline std::vector<Arc> random_arc_triple(std::mt19937_64& rng, std::size_t dim)
{
    for (;;) {
        auto arcs = draw_arc_triple(rng, dim);
        if (tord(arcs[0], arcs[1]).is_finite() && tord(arcs[1], arcs[2]).is_finite() &&
            tord(arcs[0], arcs[2]).is_finite()) {
            return arcs;
        }
    }
}

} // namespace arccrit::testing
