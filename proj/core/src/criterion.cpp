#include "arccrit/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

#include "arccrit/error.hpp"
#include "arccrit/numeric.hpp"
#include "arccrit/sampling.hpp"

namespace arccrit {

std::string to_string(Agreement a)
{
    switch (a) {
    case Agreement::Equal:
        return "equal";
    case Agreement::Witness:
        return "witness";
    case Agreement::Inconclusive:
        return "inconclusive";
    }
    return "inconclusive";
}

std::string to_string(Verdict::Outcome o)
{
    return o == Verdict::Outcome::NotNormallyEmbedded ? "NotNormallyEmbedded" : "NoWitnessFound";
}

namespace {

MeshCache* ensure_cache(const GermModel& g, MeshCache* cache, std::optional<MeshCache>& local)
{
    if (!cache && !g.pancakes()) {
        cache = &local.emplace(g);
    }
    return cache;
}

std::optional<double> ratio_slope(const std::vector<double>& t, const std::vector<double>& d_inn,
                                  const std::vector<double>& d_out)
{
    std::vector<double> r;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (!(d_out[k] > 0.0) || !(d_inn[k] > 0.0)) {
            return std::nullopt;
        }
        r.push_back(d_inn[k] / d_out[k]);
    }
    return fit_power_law(t, r).slope;
}

void classify(CriterionReport& rep, const RunConfig& config)
{
    const InnerOrderEstimate& in = rep.inner_order;
    if (!rep.outer_order.is_finite()) {
        rep.notes.emplace_back("outer order is truncation-limited");
        return;
    }
    if (in.degenerate) {
        rep.notes.emplace_back("inner fit degenerate");
        return;
    }
    if (!in.snapped) {
        rep.notes.emplace_back("inner fit did not snap");
        return;
    }
    const Exponent outer = rep.outer_order.value();
    const Exponent inner = *in.snapped;
    if (inner == outer) {
        rep.equal = Agreement::Equal;
        return;
    }
    const double gap = (outer - inner).to_double();
    if (gap > config.witness_gap) {
        rep.equal = Agreement::Witness;
    } else if (gap < 0.0) {
        rep.notes.emplace_back("inner order above outer order");
    } else {
        rep.notes.emplace_back("order gap below the witness threshold");
    }
}

} // namespace

CriterionReport compare_orders(const GermModel& g, const Arc& a, const Arc& b, const RunConfig& config,
                               MeshCache* cache, std::size_t first, std::size_t second)
{
    CriterionReport rep;
    rep.first = first;
    rep.second = second;
    std::optional<MeshCache> local;
    cache = ensure_cache(g, cache, local);
    try {
        rep.outer_order = tord(a, b);
        rep.inner_order = inner_contact_order(g, a, b, config, cache);
        std::vector<double> ts;
        std::vector<double> d_inn;
        std::vector<double> d_out;
        for (const auto& [t, d] : rep.inner_order.scales) {
            ts.push_back(t);
            d_inn.push_back(d);
            d_out.push_back(outer_distance(a, b, t));
        }
        rep.ratio_exponent = ratio_slope(ts, d_inn, d_out);
        classify(rep, config);
    } catch (const Error& e) {
        rep.equal = Agreement::Inconclusive;
        rep.notes.emplace_back(e.what());
    }
    return rep;
}

LipschitzProbe lipschitz_probe(const GermModel& g, const Arc& a, const Arc& b, double k, const RunConfig& config,
                               MeshCache* cache)
{
    if (!(k > 0.0)) {
        throw SpecError("Lipschitz constant must be positive");
    }
    std::optional<MeshCache> local;
    cache = ensure_cache(g, cache, local);
    const auto ts = config.probe_scales.values();
    const auto ratios = parallel_map<double>(ts.size(), [&](std::size_t i) {
        const double d_out = outer_distance(a, b, ts[i]);
        if (!(d_out > 0.0)) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        return inner_arc_distance(g, a, b, ts[i], config, cache) / d_out;
    });
    LipschitzProbe out;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (std::isnan(ratios[i])) {
            continue;
        }
        out.ratios.emplace_back(ts[i], ratios[i]);
        out.max_ratio = std::max(out.max_ratio, ratios[i]);
    }
    out.pass = out.max_ratio <= k;
    return out;
}

UltrametricResult ultrametric_check(const Arc& a, const Arc& b, const Arc& c)
{
    UltrametricResult r;
    r.orders = {tord(a, b), tord(b, c), tord(a, c)};
    std::sort(r.orders.begin(), r.orders.end(),
              [](const ContactOrder& x, const ContactOrder& y) { return compare_orders(x, y) < 0; });
    if (std::any_of(r.orders.begin(), r.orders.end(), [](const ContactOrder& o) { return !o.is_finite(); })) {
        r.status = UltrametricResult::Status::Inconclusive;
        return r;
    }
    r.status = r.orders[0] == r.orders[1] ? UltrametricResult::Status::Holds : UltrametricResult::Status::Violated;
    return r;
}

namespace {

// A point shape: a parameter ray and a norm relative to the scale.
struct Shape {
    ParameterRay ray;
    double norm = 1.0;
};

Shape random_shape(const GermModel& g, std::mt19937_64& rng)
{
    std::uniform_int_distribution<std::size_t> pick(0, g.sheets().size() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Shape s;
    s.ray.sheet = pick(rng);
    const Sheet& sh = g.sheets()[s.ray.sheet];
    const double lo = sh.domain().v_lo.get_d();
    const double hi = sh.domain().v_hi.get_d();
    s.ray.v = lo + (hi - lo) * unit(rng);
    s.ray.phi = 2.0 * std::numbers::pi * unit(rng);
    if (sh.parameter_dim() == 1 && sh.domain().u_lo >= 0) {
        s.ray.phi = 0.0; // one-sided curve: only the forward direction exists
    }
    s.norm = 0.5 + 0.5 * unit(rng);
    return s;
}

std::vector<std::pair<Shape, Shape>> pair_shapes(const GermModel& g, std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution mirror(0.5);
    std::vector<std::pair<Shape, Shape>> out;
    while (out.size() < n) {
        const Shape x = random_shape(g, rng);
        Shape y = random_shape(g, rng);
        if (mirror(rng) && g.sheets().size() > 1) {
            const std::size_t sheet = y.ray.sheet;
            y = x;
            y.ray.sheet = sheet;
        }
        const bool same = x.ray.sheet == y.ray.sheet && x.ray.v == y.ray.v && x.ray.phi == y.ray.phi && x.norm == y.norm;
        if (!same) {
            out.emplace_back(x, y);
        }
    }
    return out;
}

} // namespace

PsiScatter psi_scatter(const GermModel& g, const RunConfig& config, MeshCache* cache)
{
    if (config.pairs_per_scale < 16) {
        throw SpecError("psi_scatter needs at least 16 pairs per scale");
    }
    std::optional<MeshCache> local;
    cache = ensure_cache(g, cache, local);
    const auto ts = config.scales.values();
    const auto shapes = pair_shapes(g, static_cast<std::size_t>(config.pairs_per_scale), config.seed);
    const std::size_t n = shapes.size();
    const auto rows = parallel_map<PsiRow>(ts.size() * n, [&](std::size_t i) {
        const double t = ts[i / n];
        const auto& [sx, sy] = shapes[i % n];
        const LocatedPoint x = point_on_ray(g, sx.ray, sx.norm * t);
        const LocatedPoint y = point_on_ray(g, sy.ray, sy.norm * t);
        PsiRow row;
        row.t = t;
        row.pair = i % n;
        row.d_outer = euclidean_distance(x.x, y.x);
        if (g.pancakes()) {
            row.d_inner = pancake_distance(g, x, y, config);
        } else {
            const double res = t / config.resolution_divisor;
            const double d = inner_distance_numeric(*cache, x, y, t, res);
            row.d_inner = d <= row.d_outer * (1 + 1e-9) ? row.d_outer : d;
        }
        return row;
    });
    PsiScatter out;
    out.rows = rows;
    std::vector<double> mt;
    std::vector<double> mr;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        double m = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const PsiRow& r = rows[k * n + j];
            if (r.d_outer > 0.0) {
                m = std::max(m, r.d_inner / r.d_outer);
            }
        }
        out.max_ratio.emplace_back(ts[k], m);
        mt.push_back(ts[k]);
        mr.push_back(m);
    }
    const PowerLawFit fit = fit_power_law(mt, mr);
    out.slope = fit.slope;
    out.r_squared = fit.r_squared;
    out.tangent = out.slope <= config.tangency_slope;
    return out;
}

void write_psi_csv(std::ostream& os, const PsiScatter& s)
{
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << "t,pair,d_outer,d_inner,ratio\n" << std::setprecision(17);
    for (const auto& r : s.rows) {
        os << r.t << ',' << r.pair << ',' << r.d_outer << ',' << r.d_inner << ',' << (r.d_inner / r.d_outer) << '\n';
    }
    os.flags(flags);
    os.precision(prec);
}

Verdict verdict(const GermModel& g, std::size_t budget, const RunConfig& config)
{
    if (budget < 2) {
        throw SpecError("verdict needs an arc budget of at least 2");
    }
    config.validate();
    Verdict v;
    v.germ = g.name();
    v.budget = budget;
    v.seed = config.seed;
    SamplingSpec spec;
    spec.truncation = config.truncation;
    spec.max_ramification = config.max_ramification;
    v.arcs = sample_arcs(g, budget, config.seed, spec);
    std::optional<MeshCache> local;
    MeshCache* cache = ensure_cache(g, nullptr, local);

    const auto ts = config.scales.values();
    std::vector<double> max_ratio(ts.size(), 0.0);
    for (std::size_t i = 0; i < v.arcs.size(); ++i) {
        for (std::size_t j = i + 1; j < v.arcs.size(); ++j) {
            CriterionReport rep = compare_orders(g, v.arcs[i], v.arcs[j], config, cache, i, j);
            for (std::size_t k = 0; k < rep.inner_order.scales.size() && k < ts.size(); ++k) {
                const double d_out = outer_distance(v.arcs[i], v.arcs[j], ts[k]);
                if (d_out > 0.0) {
                    max_ratio[k] = std::max(max_ratio[k], rep.inner_order.scales[k].second / d_out);
                }
            }
            if (rep.outer_order.is_finite() && rep.inner_order.snapped) {
                const Exponent gap = rep.outer_order.value() - *rep.inner_order.snapped;
                v.min_order_gap = v.min_order_gap ? min(*v.min_order_gap, gap) : gap;
            }
            if (rep.equal == Agreement::Inconclusive) {
                v.inconclusive.push_back(v.reports.size());
            }
            if (rep.equal == Agreement::Witness && !v.witness) {
                v.witness = v.reports.size();
            }
            v.reports.push_back(std::move(rep));
        }
    }
    for (std::size_t k = 0; k < ts.size(); ++k) {
        v.max_lipschitz_ratio.emplace_back(ts[k], max_ratio[k]);
    }
    if (v.arcs.size() < 2) {
        v.notes.emplace_back("fewer than two distinct arcs could be sampled");
    }
    v.psi = psi_scatter(g, config, cache);
    if (v.witness && v.psi.tangent) {
        v.outcome = Verdict::Outcome::NotNormallyEmbedded;
    } else {
        if (v.witness) {
            v.notes.emplace_back("order witness not confirmed by psi tangency");
            v.witness.reset();
        } else if (v.psi.tangent) {
            v.notes.emplace_back("psi tangency without an order witness among the sampled pairs");
        }
        v.outcome = Verdict::Outcome::NoWitnessFound;
    }
    return v;
}

} // namespace arccrit
