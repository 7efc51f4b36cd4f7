#include <doctest.h>

#include <map>
#include <random>

#include "arccrit/error.hpp"
#include "arccrit/series.hpp"
#include "test_support.hpp"

using namespace arccrit;
using arccrit::testing::q;
using arccrit::testing::random_series;
using arccrit::testing::series;

namespace {

// Term-by-term product without any truncation bookkeeping beyond the cut.
std::map<Exponent, Coeff> naive_product(const PuiseuxSeries& f, const PuiseuxSeries& g, Exponent cut)
{
    std::map<Exponent, Coeff> out;
    for (const auto& a : f.terms()) {
        for (const auto& b : g.terms()) {
            const Exponent e = a.exponent + b.exponent;
            if (e < cut) {
                out[e] += a.coeff * b.coeff;
            }
        }
    }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
}

std::map<Exponent, Coeff> as_map(const PuiseuxSeries& f)
{
    std::map<Exponent, Coeff> out;
    for (const auto& t : f.terms()) {
        out[t.exponent] = t.coeff;
    }
    return out;
}

} // namespace

TEST_CASE("exponents are reduced and ordered")
{
    CHECK(Exponent(6, 4) == Exponent(3, 2));
    CHECK(Exponent(3, -6) == Exponent(-1, 2));
    CHECK(Exponent(5, 4) < Exponent(4, 3));
    CHECK(to_string(Exponent(3, 2)) == "3/2");
    CHECK(!Exponent::from_reduced(2, 4));
    CHECK(!Exponent::from_reduced(1, 0));
    CHECK_THROWS_AS(Exponent(1, 0), SeriesError);
    CHECK(parse_exponent("5/2") == Exponent(5, 2));
    CHECK(!parse_exponent("4/2"));
}

TEST_CASE("simplest rational prefers small denominators")
{
    CHECK(simplest_rational_near(1.52, 0.05, 12) == Exponent(3, 2));
    CHECK(simplest_rational_near(1.0003, 0.05, 12) == Exponent(1));
    CHECK(simplest_rational_near(1.25, 0.01, 12) == Exponent(5, 4));
    CHECK(simplest_rational_near(0.5454, 0.001, 12) == Exponent(6, 11));
    CHECK(!simplest_rational_near(0.5454, 0.0001, 10));
}

TEST_CASE("ord of a series")
{
    CHECK(ord(series({{3, 2, 1, 1}, {2, 1, -1, 1}})) == ContactOrder::finite(Exponent(3, 2)));
    CHECK(ord(PuiseuxSeries(Exponent(8))) == ContactOrder::at_least(Exponent(8)));
    CHECK(ord(series({{2, 3, 5, 1}, {1, 1, 1, 1}})) == ContactOrder::finite(Exponent(2, 3)));
}

TEST_CASE("ring operations")
{
    SUBCASE("cancellation")
    {
        const auto f = series({{1, 1, 1, 1}, {2, 1, 1, 1}}) + series({{1, 1, -1, 1}});
        CHECK(f == series({{2, 1, 1, 1}}));
    }
    SUBCASE("exponent addition")
    {
        const auto half = series({{1, 2, 1, 1}});
        const auto prod = half * half;
        CHECK(prod.terms() == series({{1, 1, 1, 1}}).terms());
        CHECK(prod.truncation() == Exponent(17, 2));
    }
    SUBCASE("square of t - t^(3/2) matches naive expansion")
    {
        const auto f = series({{1, 1, 1, 1}, {3, 2, -1, 1}});
        const auto sq = int_pow(f, 2);
        const auto expected = series({{2, 1, 1, 1}, {5, 2, -2, 1}, {3, 1, 1, 1}});
        CHECK(sq.terms() == expected.terms());
        CHECK(as_map(sq) == naive_product(f, f, sq.truncation()));
    }
    SUBCASE("product truncation rule")
    {
        const auto f = series({{1, 1, 1, 1}}, Exponent(5));
        const auto g = series({{2, 1, 1, 1}}, Exponent(4));
        CHECK((f * g).truncation() == Exponent(5));
    }
    SUBCASE("ramification cap")
    {
        const auto f = PuiseuxSeries({Term{Exponent(1, 5), q(1)}}, Exponent(8), 6);
        const auto g = PuiseuxSeries({Term{Exponent(1, 3), q(1)}}, Exponent(8), 6);
        CHECK_THROWS_AS(f + g, SeriesError);
    }
}

TEST_CASE("sqrt")
{
    CHECK(sqrt(series({{2, 1, 1, 1}})).terms() == series({{1, 1, 1, 1}}).terms());
    CHECK(sqrt(series({{1, 1, 4, 1}})).terms() == series({{1, 2, 2, 1}}).terms());

    const auto f = series({{2, 1, 1, 1}, {3, 1, 1, 1}});
    const auto r = sqrt(f);
    // t * (1 + t)^(1/2) = t + t^2/2 - t^3/8 + t^4/16 - ...
    CHECK(r.coeff_at(Exponent(1)) == q(1));
    CHECK(r.coeff_at(Exponent(2)) == q(1, 2));
    CHECK(r.coeff_at(Exponent(3)) == q(-1, 8));
    CHECK(r.coeff_at(Exponent(4)) == q(1, 16));
    CHECK((r * r).agrees_with(f));
    CHECK(ord(r) == ContactOrder::finite(Exponent(1)));

    CHECK_THROWS_AS(sqrt(PuiseuxSeries()), SeriesError);
    CHECK_THROWS_AS(sqrt(series({{2, 1, -1, 1}})), SeriesError);
    CHECK_THROWS_AS(sqrt(series({{2, 1, 2, 1}})), SeriesError);
}

TEST_CASE("compose")
{
    const auto t2 = series({{2, 1, 1, 1}});
    const auto g = series({{1, 1, 1, 1}, {2, 1, 1, 1}});
    CHECK(compose(t2, g).terms() == series({{2, 1, 1, 1}, {3, 1, 2, 1}, {4, 1, 1, 1}}).terms());
    CHECK(compose(PuiseuxSeries::variable(), g) == g);
    CHECK(compose(series({{1, 2, 1, 1}}), t2).terms() == series({{1, 1, 1, 1}}).terms());
    CHECK_THROWS_AS(compose(t2, series({{0, 1, 1, 1}})), SeriesError);
    CHECK_THROWS_AS(compose(t2, PuiseuxSeries()), SeriesError);
}

TEST_CASE("comp_inverse")
{
    CHECK(comp_inverse(PuiseuxSeries::variable()) == PuiseuxSeries::variable());
    CHECK(comp_inverse(series({{1, 1, 2, 1}})).terms() == series({{1, 1, 1, 2}}).terms());

    const auto f = series({{1, 1, 1, 1}, {3, 2, 1, 1}});
    const auto h = comp_inverse(f);
    CHECK(h.coeff_at(Exponent(1)) == q(1));
    CHECK(h.coeff_at(Exponent(3, 2)) == q(-1));
    CHECK(h.coeff_at(Exponent(2)) == q(3, 2));
    CHECK(h.truncation() == Exponent(8));
    CHECK(compose(f, h).agrees_with(PuiseuxSeries::variable()));
    CHECK(compose(h, f).agrees_with(PuiseuxSeries::variable()));

    CHECK_THROWS_AS(comp_inverse(series({{2, 1, 1, 1}})), SeriesError);
    CHECK_THROWS_AS(comp_inverse(series({{1, 2, 1, 1}})), SeriesError);
}

TEST_CASE("property: ring laws up to truncation")
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 60; ++i) {
        const auto f = random_series(rng, Exponent(0), Exponent(4), 4, 5);
        const auto g = random_series(rng, Exponent(0), Exponent(4), 4, 5);
        const auto h = random_series(rng, Exponent(0), Exponent(4), 4, 5);
        CHECK((f + g).agrees_with(g + f));
        CHECK((f * g).agrees_with(g * f));
        CHECK(((f + g) + h).agrees_with(f + (g + h)));
        CHECK(((f * g) * h).agrees_with(f * (g * h)));
        CHECK((f * (g + h)).agrees_with(f * g + f * h));

        if (!f.is_zero() && !g.is_zero()) {
            CHECK(ord(f * g) == ContactOrder::finite(f.valuation() + g.valuation()));
            const auto s = f + g;
            CHECK(s.valuation() >= min(f.valuation(), g.valuation()));
            if (f.valuation() != g.valuation()) {
                CHECK(s.valuation() == min(f.valuation(), g.valuation()));
            }
        }
    }
}

TEST_CASE("property: sqrt squares back and comp_inverse inverts")
{
    std::mt19937_64 rng(11);
    const Coeff squares[] = {q(1), q(4), q(9, 4), q(1, 16)};
    for (int i = 0; i < 40; ++i) {
        auto tail = random_series(rng, Exponent(3, 2), Exponent(5), 4, 4);
        const auto lead = PuiseuxSeries::monomial(squares[i % 4], Exponent(1));
        const auto f = lead + tail;
        const auto r = sqrt(f);
        CHECK(ord(r) == ContactOrder::finite(Exponent(1, 2)));
        CHECK((r * r).agrees_with(f));
    }
    const Coeff roots[] = {q(1), q(16), q(1, 16), q(81)};
    for (int i = 0; i < 40; ++i) {
        auto tail = random_series(rng, Exponent(5, 4), Exponent(4), 4, 4);
        const auto f = PuiseuxSeries::monomial(roots[i % 4], Exponent(1)) + tail;
        const auto h = comp_inverse(f);
        CHECK(compose(f, h).agrees_with(PuiseuxSeries::variable()));
        CHECK(compose(h, f).agrees_with(PuiseuxSeries::variable()));
    }
}

TEST_CASE("rational powers")
{
    CHECK(rational_power(q(8), Exponent(2, 3)) == q(4));
    CHECK(rational_power(q(-8), Exponent(1, 3)) == q(-2));
    CHECK(!rational_power(q(2), Exponent(1, 2)));
    CHECK(rational_power(q(4, 9), Exponent(-1, 2)) == q(3, 2));
    CHECK(pow(series({{2, 1, 4, 1}}), Exponent(3, 2)).terms() == series({{3, 1, 8, 1}}).terms());
}
