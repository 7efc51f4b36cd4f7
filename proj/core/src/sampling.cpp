#include "arccrit/sampling.hpp"

#include <random>

#include "arccrit/error.hpp"
#include "arccrit/numeric.hpp"

namespace arccrit {

namespace {

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& grid)
{
    return grid[std::uniform_int_distribution<std::size_t>(0, grid.size() - 1)(rng)];
}

Coeff pick_nonzero(std::mt19937_64& rng, const std::vector<Coeff>& grid, bool positive)
{
    for (;;) {
        Coeff c = pick(rng, grid);
        if (c != 0 && (!positive || c > 0)) {
            return c;
        }
    }
}

// Order in u of the norm along u = t with v held at v0.
Exponent norm_order(const Sheet& s, const Coeff& v0, const SamplingSpec& spec)
{
    const auto u = PuiseuxSeries::variable(spec.truncation, spec.max_ramification);
    const auto v = PuiseuxSeries::constant(v0, spec.truncation, spec.max_ramification);
    PuiseuxSeries sq(spec.truncation, spec.max_ramification);
    for (const auto& c : s.evaluate(u, v)) {
        sq = sq + c * c;
    }
    if (sq.is_zero()) {
        throw GermError("sheet collapses to the origin along an arc");
    }
    return Exponent(sq.valuation().num(), sq.valuation().den() * 2);
}

struct Draw {
    PuiseuxSeries u;
    PuiseuxSeries v;
};

// Radial sheet: u = t, v = v0 + b t^(q nu), so after distance reparametrization
// v - v0 has exponent q in the distance variable.
Draw radial_draw(std::mt19937_64& rng, const Sheet& s, const Coeff& v0, const SamplingSpec& spec)
{
    const Exponent nu = norm_order(s, v0, spec);
    const Exponent trunc = spec.truncation * nu;
    const Exponent q = pick(rng, spec.exponents) * nu;
    const Coeff b = pick(rng, spec.coefficients);
    Draw d{PuiseuxSeries::variable(trunc, spec.max_ramification),
           PuiseuxSeries::constant(v0, trunc, spec.max_ramification) +
               PuiseuxSeries::monomial(b, q, trunc, spec.max_ramification)};
    return d;
}

// Corner sheet: one parameter is a t, the other b t^q.
Draw corner_draw(std::mt19937_64& rng, const Sheet& s, const SamplingSpec& spec)
{
    const Domain& dom = s.domain();
    const auto mono = [&](const Coeff& c, Exponent e) {
        return PuiseuxSeries::monomial(c, e, spec.truncation, spec.max_ramification);
    };
    auto coeff_for = [&](const Coeff& lo, const Coeff& hi, bool nonzero) {
        for (;;) {
            Coeff c = nonzero ? pick_nonzero(rng, spec.coefficients, false) : pick(rng, spec.coefficients);
            if ((c >= 0 || lo < 0) && (c <= 0 || hi > 0)) {
                return c;
            }
        }
    };
    if (s.parameter_dim() == 1) {
        return Draw{mono(coeff_for(dom.u_lo, dom.u_hi, true), Exponent(1)), PuiseuxSeries(spec.truncation)};
    }
    const bool u_leads = std::bernoulli_distribution(0.5)(rng);
    const Exponent q = pick(rng, spec.exponents);
    if (u_leads) {
        return Draw{mono(coeff_for(dom.u_lo, dom.u_hi, true), Exponent(1)), mono(coeff_for(dom.v_lo, dom.v_hi, false), q)};
    }
    return Draw{mono(coeff_for(dom.u_lo, dom.u_hi, false), q), mono(coeff_for(dom.v_lo, dom.v_hi, true), Exponent(1))};
}

} // namespace

double sheet_residual(const GermModel& g, const Arc& arc)
{
    if (!arc.trace()) {
        throw ArcError("arc has no sheet trace");
    }
    const SheetTrace& tr = *arc.trace();
    const Sheet& s = g.sheets().at(tr.sheet);
    double worst = 0.0;
    for (double t : {1.0 / 64, 1.0 / 256, 1.0 / 1024, 1.0 / 4096}) {
        const double v = tr.v ? tr.v->evaluate(t) : 0.0;
        const auto expected = s.evaluate(tr.u.evaluate(t), v);
        worst = std::max(worst, euclidean_distance(arc.evaluate(t), expected) / t);
    }
    return worst;
}

std::vector<Arc> sample_arcs(const GermModel& g, std::size_t count, std::uint64_t seed, const SamplingSpec& spec)
{
    if (count < 1) {
        throw GermError("sample_arcs: count must be at least 1");
    }
    if (spec.exponents.empty() || spec.coefficients.empty() || spec.offsets.empty()) {
        throw GermError("sample_arcs: empty sampling grid");
    }
    std::mt19937_64 rng(seed);
    const std::size_t nsheets = g.sheets().size();
    std::vector<Arc> out;
    Coeff v0 = 0;
    const std::size_t max_draws = count * spec.attempts_per_arc;
    std::size_t failures = 0;
    for (std::size_t draw = 0; draw < max_draws && out.size() < count; ++draw) {
        const std::size_t si = draw % nsheets;
        const Sheet& s = g.sheets()[si];
        if (si == 0) {
            v0 = pick(rng, spec.offsets);
        }
        try {
            Coeff offset = v0;
            if (s.radial() && (offset < s.domain().v_lo || offset > s.domain().v_hi)) {
                offset = (s.domain().v_lo + s.domain().v_hi) / 2;
            }
            const Draw d = s.radial() ? radial_draw(rng, s, offset, spec) : corner_draw(rng, s, spec);
            std::optional<PuiseuxSeries> tv;
            if (s.parameter_dim() == 2) {
                tv = d.v;
            }
            Arc raw(s.evaluate(d.u, d.v), false, SheetTrace{si, d.u, tv});
            Arc arc = reparametrize_by_distance(raw);
            if (sheet_residual(g, arc) > 1e-9) {
                throw ArcError("sampled arc fails the sheet residual check");
            }
            bool fresh = true;
            for (const auto& prev : out) {
                if (tord(prev, arc).is_at_least()) {
                    fresh = false;
                    break;
                }
            }
            if (fresh) {
                out.push_back(std::move(arc));
            }
        } catch (const SeriesError&) {
            ++failures;
        } catch (const ArcError&) {
            ++failures;
        }
    }
    if (out.empty()) {
        throw GermError("sample_arcs: sheet parametrization admits no arc with rational distance expansion (" +
                        std::to_string(failures) + " failed draws)");
    }
    return out;
}

} // namespace arccrit
