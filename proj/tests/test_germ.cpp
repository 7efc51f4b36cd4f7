#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <set>

#include "arccrit/error.hpp"
#include "arccrit/germ.hpp"
#include "arccrit/sampling.hpp"
#include "test_support.hpp"

using namespace arccrit;
using arccrit::testing::q;

namespace {

// Defining relations of the builtin families, written out independently of the
// sheet maps. Each returns |lhs - rhs| / (|lhs| + |rhs|).
using Relation = std::function<double(const std::vector<double>&)>;

double rel(long double lhs, long double rhs)
{
    const long double den = std::fabs(lhs) + std::fabs(rhs);
    return den == 0 ? 0.0 : static_cast<double>(std::fabs(lhs - rhs) / den);
}

Relation cusp_relation(int p, int qq)
{
    // |x|^q = y^p with y >= 0 (both branches (+-y^{p/q}, y))
    return [p, qq](const std::vector<double>& x) {
        return rel(std::pow(std::fabs(static_cast<long double>(x[0])), qq), std::pow(static_cast<long double>(x[1]), p));
    };
}

Relation horn_relation(double beta)
{
    return [beta](const std::vector<double>& x) {
        const long double r2 = static_cast<long double>(x[0]) * x[0] + static_cast<long double>(x[1]) * x[1];
        return rel(r2, std::pow(static_cast<long double>(x[2]), 2 * beta));
    };
}

Relation cone_relation(double m)
{
    return [m](const std::vector<double>& x) {
        const long double r2 = static_cast<long double>(x[0]) * x[0] + static_cast<long double>(x[1]) * x[1];
        return rel(m * m * r2, static_cast<long double>(x[2]) * x[2]);
    };
}

Relation complex_cusp_relation()
{
    // (a + ib)^3 = (c + id)^2
    return [](const std::vector<double>& x) {
        const std::complex<long double> z2(x[0], x[1]);
        const std::complex<long double> z3(x[2], x[3]);
        const auto l = z2 * z2 * z2;
        const auto r = z3 * z3;
        const long double den = std::abs(l) + std::abs(r);
        return den == 0 ? 0.0 : static_cast<double>(std::abs(l - r) / den);
    };
}

struct Family {
    GermModel germ;
    Relation relation;
};

std::vector<Family> families()
{
    return {
        {builtin("plane"), [](const std::vector<double>& x) { return std::fabs(x[2]); }},
        {builtin("cone"), cone_relation(0.75)},
        {builtin("cone", {q(5, 12)}), cone_relation(5.0 / 12.0)},
        {builtin("horn"), horn_relation(2.0)},
        {builtin("horn", {q(3, 2)}), horn_relation(1.5)},
        {builtin("cusp"), cusp_relation(3, 2)},
        {builtin("cusp", {q(5), q(3)}), cusp_relation(5, 3)},
        {builtin("complex_cusp"), complex_cusp_relation()},
    };
}

} // namespace

TEST_CASE("builtin families and their parameters")
{
    CHECK(builtin("plane").name() == "plane");
    CHECK(builtin("cone").name() == "cone(3/4)");
    CHECK(builtin("horn").name() == "horn(2)");
    CHECK(builtin("cusp").name() == "cusp(3,2)");
    CHECK(builtin("complex_cusp").ambient_dim() == 4);

    const GermModel cusp = builtin("cusp", {q(3), q(2)});
    REQUIRE(cusp.sheets().size() == 2);
    REQUIRE(cusp.pancakes());
    CHECK(cusp.pancakes()->pancakes.size() == 2);
    CHECK(cusp.pancakes_of_sheet(0) != cusp.pancakes_of_sheet(1));
    // (+-u^{3/2}, u)
    const auto x = cusp.sheets()[0].evaluate(0.25);
    CHECK(x[0] == doctest::Approx(0.125));
    CHECK(x[1] == doctest::Approx(0.25));
    CHECK(cusp.sheets()[1].evaluate(0.25)[0] == doctest::Approx(-0.125));

    const GermModel plane = builtin("plane");
    REQUIRE(plane.sheets().size() == 1);
    CHECK(plane.sheets()[0].evaluate(0.3, -0.2) == std::vector<double>{0.3, -0.2, 0.0});
    CHECK(plane.pancakes()->pancakes.size() == 1);

    CHECK(builtin("horn").pancakes()->pancakes.size() == 1);
    CHECK(builtin("cone").pancakes()->pancakes.size() == 1);
    CHECK_FALSE(builtin("complex_cusp").pancakes());

    CHECK_THROWS_AS(builtin("sphere"), GermError);
    CHECK_THROWS_AS(builtin("horn", {q(1, 2)}), GermError);
    CHECK_THROWS_AS(builtin("cusp", {q(2), q(3)}), GermError);
    CHECK_THROWS_AS(builtin("cusp", {q(2), q(2)}), GermError);
    CHECK_THROWS_AS(builtin("cusp", {q(5, 2), q(1)}), GermError);
    CHECK_THROWS_AS(builtin("cone", {q(1)}), GermError); // 1 + 1 is not a rational square
    CHECK_THROWS_AS(builtin("plane", {q(1)}), GermError);
}

TEST_CASE("sheet points satisfy the defining relations")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto& f : families()) {
        CAPTURE(f.germ.name());
        for (const auto& s : f.germ.sheets()) {
            for (int i = 0; i < 200; ++i) {
                const double u = s.domain().u_lo.get_d() + (s.domain().u_hi.get_d() - s.domain().u_lo.get_d()) * unit(rng);
                const double v = s.domain().v_lo.get_d() + (s.domain().v_hi.get_d() - s.domain().v_lo.get_d()) * unit(rng);
                CHECK(f.relation(s.evaluate(u, v)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("horn(2) rational circle parametrization")
{
    // ((1 - s^2)/(1 + s^2), 2s/(1 + s^2)) scaled by z^2
    const GermModel g = builtin("horn");
    for (double s : {-1.0, -0.5, 0.0, 0.25, 1.0}) {
        const double z = 0.3;
        const auto x = g.sheets()[0].evaluate(z, s);
        const double c = (1 - s * s) / (1 + s * s);
        const double d = 2 * s / (1 + s * s);
        CHECK(x[0] == doctest::Approx(z * z * c).epsilon(1e-14));
        CHECK(x[1] == doctest::Approx(z * z * d).epsilon(1e-14));
        CHECK(x[2] == doctest::Approx(z));
        CHECK(horn_relation(2.0)(x) <= 1e-12);
    }
}

TEST_CASE("sheet validation rejects malformed maps")
{
    const RationalMap u{{Monomial{1, Exponent(1), 0}}, {}};
    const RationalMap v{{Monomial{1, Exponent(0), 1}}, {}};
    CHECK_NOTHROW(Sheet(2, {u, v}, Domain{-1, 1, -1, 1}));
    // zero coefficient
    CHECK_THROWS_AS(Sheet(2, {RationalMap{{Monomial{0, Exponent(1), 0}}, {}}, v}, Domain{-1, 1, -1, 1}), GermError);
    // constant term: the corner does not map to the origin
    CHECK_THROWS_AS(Sheet(1, {RationalMap{{Monomial{1, Exponent(0), 0}}, {}}}, Domain{}), GermError);
    // one-parameter sheets have no v
    CHECK_THROWS_AS(Sheet(1, {v}, Domain{}), GermError);
    // fractional powers need u >= 0
    CHECK_THROWS_AS(Sheet(1, {RationalMap{{Monomial{1, Exponent(3, 2), 0}}, {}}}, Domain{-1, 1, 0, 0}), GermError);
    // vanishing denominator
    CHECK_THROWS_AS(Sheet(2, {u, RationalMap{{Monomial{1, Exponent(1), 0}}, {Monomial{1, Exponent(0), 1}}}},
                          Domain{0, 1, -1, 1}),
                    GermError);
    CHECK_THROWS_AS(Sheet(3, {u}, Domain{}), GermError);

    CHECK_THROWS_AS(GermModel("empty", {}), GermError);
    const Sheet s2(2, {u, v}, Domain{-1, 1, -1, 1});
    const Sheet s3(2, {u, v, RationalMap{}}, Domain{-1, 1, -1, 1});
    CHECK_THROWS_AS(GermModel("mixed", {s2, s3}), GermError);
    // pancakes must cover every sheet
    CHECK_THROWS_AS(GermModel("uncovered", {s2, s2}, PancakeDecomposition{{Pancake{{0}}}, {}}), GermError);
}

TEST_CASE("locate and point_on_ray invert the sheet maps")
{
    for (const auto& f : families()) {
        CAPTURE(f.germ.name());
        const GermModel& g = f.germ;
        for (std::size_t s = 0; s < g.sheets().size(); ++s) {
            for (double r : {0.2, 1e-3, 1e-7}) {
                const ParameterRay ray{s, 0.25 * g.sheets()[s].domain().v_hi.get_d(), 0.4};
                const LocatedPoint p = point_on_ray(g, ray, r);
                double n = 0;
                for (double c : p.x) {
                    n += c * c;
                }
                CHECK(std::sqrt(n) == doctest::Approx(r).epsilon(1e-9));
                const LocatedPoint back = locate(g, p.x);
                double err = 0;
                for (std::size_t i = 0; i < p.x.size(); ++i) {
                    err = std::max(err, std::fabs(back.x[i] - p.x[i]));
                }
                CHECK(err <= 1e-9 * r);
            }
        }
    }
    const GermModel plane = builtin("plane");
    CHECK_THROWS_AS(locate(plane, {0.1, 0.1, 0.1}), GermError);
    CHECK_THROWS_AS(locate(plane, {0.1, 0.1}), GermError);
    CHECK_THROWS_AS(point_on_ray(plane, ParameterRay{0, 0, 0}, 5.0), GermError);
}

TEST_CASE("sample_arcs: deterministic, on the germ, distance parametrized")
{
    for (const auto& f : families()) {
        CAPTURE(f.germ.name());
        const GermModel& g = f.germ;
        const auto arcs = sample_arcs(g, 6, 3);
        REQUIRE(arcs.size() >= 1);
        CHECK(arcs == sample_arcs(g, 6, 3));
        std::set<std::size_t> sheets;
        for (const auto& a : arcs) {
            sheets.insert(a.trace()->sheet);
        }
        CHECK(sheets.size() == g.sheets().size());
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            const Arc& a = arcs[i];
            CAPTURE(i);
            CHECK(a.distance_parametrized());
            REQUIRE(a.trace());
            CHECK(sheet_residual(g, a) <= 1e-9);
            // norm equals t, and the defining relation holds at 100 parameters
            for (int k = 0; k < 100; ++k) {
                const double t = std::pow(10.0, -5.0 + 2.0 * k / 99.0);
                const auto x = a.evaluate(t);
                double n = 0;
                for (double c : x) {
                    n += c * c;
                }
                CHECK(std::sqrt(n) == doctest::Approx(t).epsilon(1e-9));
                CHECK(f.relation(x) <= 1e-12);
            }
            for (std::size_t j = 0; j < i; ++j) {
                CHECK(tord(arcs[i], arcs[j]).is_finite());
            }
        }
    }
}

TEST_CASE("sample_arcs on the cusp stays on the branches")
{
    const GermModel g = builtin("cusp");
    const auto arcs = sample_arcs(g, 8, 1);
    // one arc germ per branch
    REQUIRE(arcs.size() == 2);
    CHECK(arcs[0].evaluate(0.01)[0] > 0);
    CHECK(arcs[1].evaluate(0.01)[0] < 0);
    CHECK(tord(arcs[0], arcs[1]) == ContactOrder::finite(Exponent(3, 2)));
}

TEST_CASE("sample_arcs: horn(2) meridians have norm order 1")
{
    const GermModel g = builtin("horn");
    for (const auto& a : sample_arcs(g, 4, 11)) {
        const PuiseuxSeries n = norm_series(a);
        CHECK(n.valuation() == Exponent(1));
        CHECK(n.leading_coeff() == 1);
    }
    CHECK_THROWS_AS(sample_arcs(g, 0, 1), GermError);
}
