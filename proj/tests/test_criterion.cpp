#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "arccrit/criterion.hpp"
#include "arccrit/error.hpp"
#include "arccrit/io.hpp"
#include "arccrit/sampling.hpp"
#include "test_support.hpp"

using namespace arccrit;
using namespace arccrit::testing;

namespace {

Arc dp(std::vector<PuiseuxSeries> comps) { return reparametrize_by_distance(Arc(std::move(comps))); }

using Status = UltrametricResult::Status;

// u with u sqrt(1 + u) = t, by bisection
double cusp_height(double t)
{
    double lo = 0.0;
    double hi = t;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (mid * std::sqrt(1 + mid) < t ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("compare_orders")
{
    SUBCASE("cusp branches are a witness")
    {
        const GermModel g = builtin("cusp");
        const auto arcs = sample_arcs(g, 2, 1);
        const CriterionReport r = compare_orders(g, arcs[0], arcs[1]);
        CHECK(r.equal == Agreement::Witness);
        CHECK(r.outer_order == ContactOrder::finite(Exponent(3, 2)));
        REQUIRE(r.inner_order.snapped.has_value());
        CHECK(*r.inner_order.snapped == Exponent(1));
        REQUIRE(r.ratio_exponent.has_value());
        CHECK(*r.ratio_exponent == doctest::Approx(-0.5).epsilon(0.02));
        // independent check: the inner path runs through the origin, so d_inn = 2t exactly
        for (const auto& [t, d] : r.inner_order.scales) {
            CHECK(d == doctest::Approx(2 * t).epsilon(1e-9));
        }
    }
    SUBCASE("plane pairs are equal")
    {
        const GermModel g = builtin("plane");
        const auto arcs = sample_arcs(g, 3, 2);
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            for (std::size_t j = i + 1; j < arcs.size(); ++j) {
                const CriterionReport r = compare_orders(g, arcs[i], arcs[j], {}, nullptr, i, j);
                CHECK(r.equal == Agreement::Equal);
                CHECK(r.first == i);
                CHECK(r.second == j);
            }
        }
    }
    SUBCASE("coincident arcs are inconclusive, not equal")
    {
        const GermModel g = builtin("cusp");
        // a sampled branch arc against the same branch written out literally
        const Arc a = sample_arcs(g, 1, 1)[0];
        const Arc b = dp({t_pow(3, 2, sgn(a.components()[0].leading_coeff())), t_pow(1)});
        const CriterionReport r = compare_orders(g, a, b);
        CHECK(r.equal == Agreement::Inconclusive);
        CHECK_FALSE(r.notes.empty());
    }
}

TEST_CASE("lipschitz_probe")
{
    SUBCASE("cusp fails every k")
    {
        const GermModel g = builtin("cusp");
        const auto arcs = sample_arcs(g, 2, 1);
        for (double k : {10.0, 100.0, 1000.0}) {
            const LipschitzProbe p = lipschitz_probe(g, arcs[0], arcs[1], k);
            CHECK_FALSE(p.pass);
            CHECK(p.max_ratio > k);
        }
        // branch points (+-u^(3/2), u) at norm t = u sqrt(1 + u): d_inn / d_out = t / u^(3/2)
        const LipschitzProbe p = lipschitz_probe(g, arcs[0], arcs[1], 10.0);
        for (const auto& [t, ratio] : p.ratios) {
            CHECK(ratio == doctest::Approx(t / std::pow(cusp_height(t), 1.5)).epsilon(1e-6));
        }
    }
    SUBCASE("plane passes k = 10")
    {
        const GermModel g = builtin("plane");
        const auto arcs = sample_arcs(g, 2, 4);
        const LipschitzProbe p = lipschitz_probe(g, arcs[0], arcs[1], 10.0);
        CHECK(p.pass);
        CHECK(p.max_ratio == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("ultrametric_check")
{
    SUBCASE("(t,0), (t,t^2), (t,t^3)")
    {
        const Arc a = dp({t_pow(1), zero()});
        const Arc b = dp({t_pow(1), t_pow(2)});
        const Arc c = dp({t_pow(1), t_pow(3)});
        const UltrametricResult u = ultrametric_check(a, b, c);
        CHECK(u.status == Status::Holds);
        CHECK(u.orders[0] == ContactOrder::finite(Exponent(2)));
        CHECK(u.orders[1] == ContactOrder::finite(Exponent(2)));
        CHECK(u.orders[2] == ContactOrder::finite(Exponent(3)));
    }
    SUBCASE("(t,0), (t,t^(5/2)), (0,t)")
    {
        const Arc a = dp({t_pow(1), zero()});
        const Arc b = dp({t_pow(1), t_pow(5, 2)});
        const Arc c = dp({zero(), t_pow(1)});
        const UltrametricResult u = ultrametric_check(a, b, c);
        CHECK(u.status == Status::Holds);
        CHECK(u.orders[0] == ContactOrder::finite(Exponent(1)));
        CHECK(u.orders[1] == ContactOrder::finite(Exponent(1)));
        CHECK(u.orders[2] == ContactOrder::finite(Exponent(5, 2)));
    }
    SUBCASE("truncation-limited pair")
    {
        const Arc a = dp({t_pow(1), zero()});
        const Arc c = dp({t_pow(1), t_pow(3)});
        CHECK(ultrametric_check(a, a, c).status == Status::Inconclusive);
    }
}

TEST_CASE("property: the two smallest pairwise orders coincide")
{
    std::mt19937_64 rng(42);
    for (int n = 0; n < 200; ++n) {
        const auto triple = random_arc_triple(rng, n % 2 == 0 ? 3 : 4);
        const UltrametricResult u = ultrametric_check(triple[0], triple[1], triple[2]);
        if (u.status == Status::Inconclusive) {
            continue;
        }
        CHECK(u.status == Status::Holds);
        CHECK(u.orders[0] == u.orders[1]);
    }
}

TEST_CASE("psi_scatter")
{
    SUBCASE("cusp is tangent with slope -1/2")
    {
        const PsiScatter s = psi_scatter(builtin("cusp"));
        CHECK(s.tangent);
        CHECK(s.slope == doctest::Approx(-0.5).epsilon(0.2));
        CHECK(s.rows.size() == RunConfig{}.scales.size() * static_cast<std::size_t>(RunConfig{}.pairs_per_scale));
        for (const PsiRow& row : s.rows) {
            CHECK(row.d_inner >= row.d_outer * (1 - 1e-9));
        }
    }
    SUBCASE("plane is flat")
    {
        const PsiScatter s = psi_scatter(builtin("plane"));
        CHECK_FALSE(s.tangent);
        CHECK(std::abs(s.slope) <= 0.05);
    }
    SUBCASE("CSV")
    {
        PsiScatter s;
        s.rows.push_back(PsiRow{0.25, 3, 0.5, 1.0});
        std::ostringstream os;
        write_psi_csv(os, s);
        CHECK(os.str().rfind("t,pair,d_outer,d_inner,ratio\n", 0) == 0);
        CHECK(os.str().find("0.25,3,0.5,1,2") != std::string::npos);
    }
}

TEST_CASE("verdict")
{
    SUBCASE("cusp")
    {
        const Verdict v = verdict(builtin("cusp"), 8);
        CHECK(v.outcome == Verdict::Outcome::NotNormallyEmbedded);
        REQUIRE(v.witness.has_value());
        const CriterionReport& w = v.reports[*v.witness];
        CHECK(w.equal == Agreement::Witness);
        // witness soundness: re-derive both orders from the stored arcs
        const ContactOrder outer = tord(v.arcs[w.first], v.arcs[w.second]);
        CHECK(outer == w.outer_order);
        const InnerOrderEstimate inner =
            inner_contact_order(builtin("cusp"), v.arcs[w.first], v.arcs[w.second]);
        REQUIRE(inner.snapped.has_value());
        CHECK(*inner.snapped == *w.inner_order.snapped);
        CHECK(outer.value() - *inner.snapped > Exponent(0));
        REQUIRE(v.min_order_gap.has_value());
        CHECK(*v.min_order_gap == Exponent(1, 2));
    }
    for (const std::string& name : {"plane", "horn", "cone"}) {
        SUBCASE(name.c_str())
        {
            const Verdict v = verdict(builtin(name), 8);
            CHECK(v.outcome == Verdict::Outcome::NoWitnessFound);
            CHECK_FALSE(v.witness.has_value());
            CHECK(v.inconclusive.empty());
            for (const CriterionReport& r : v.reports) {
                CHECK(r.equal == Agreement::Equal);
            }
            for (const auto& [t, ratio] : v.max_lipschitz_ratio) {
                CHECK(ratio <= 5.0);
            }
        }
    }
    SUBCASE("budget below two")
    {
        CHECK_THROWS_AS((void)verdict(builtin("plane"), 1), SpecError);
    }
}

TEST_CASE("verdict JSON is deterministic for a fixed seed")
{
    const RunConfig config;
    const GermModel g = builtin("cusp");
    const std::string first = verdict_json(verdict(g, 4, config), config);
    const std::string second = verdict_json(verdict(g, 4, config), config);
    CHECK(first == second);
    CHECK(first.find("\"schema\"") != std::string::npos);
    CHECK(first.find("NotNormallyEmbedded") != std::string::npos);
}
