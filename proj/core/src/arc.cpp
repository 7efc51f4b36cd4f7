#include "arccrit/arc.hpp"

#include <algorithm>
#include <cmath>

#include "arccrit/error.hpp"

namespace arccrit {

namespace {

ContactOrder half(const ContactOrder& o)
{
    const Exponent v = o.value() / Exponent(2);
    return o.is_finite() ? ContactOrder::finite(v) : ContactOrder::at_least(v);
}

PuiseuxSeries squared_difference(const Arc& a, const Arc& b)
{
    if (a.dimension() != b.dimension()) {
        throw ArcError("arcs live in different ambient dimensions");
    }
    PuiseuxSeries sum(min(a.truncation(), b.truncation()) * Exponent(2),
                      a.components().front().max_ramification());
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        const PuiseuxSeries d = a.components()[i] - b.components()[i];
        sum = sum + d * d;
    }
    return sum;
}

// Ramifies so that |arc| has order exactly one.
Arc normalize_norm_order(const Arc& arc)
{
    const PuiseuxSeries n2 = squared_norm_series(arc);
    if (n2.is_zero()) {
        throw ArcError("zero arc: every component vanishes to truncation");
    }
    const Exponent norm_order = n2.valuation() / Exponent(2);
    if (norm_order == Exponent(1)) {
        return arc;
    }
    try {
        return ramify(arc, Exponent(1) / norm_order);
    } catch (const SeriesError& e) {
        throw ArcError(std::string("cannot normalize norm order ") + to_string(norm_order) + ": " + e.what());
    }
}

std::vector<Coeff> linear_coefficients(const Arc& arc)
{
    std::vector<Coeff> out;
    for (const auto& c : arc.components()) {
        out.push_back(c.coeff_at(Exponent(1)));
    }
    return out;
}

// Positive rational lambda with b = lambda * a, if any.
std::optional<Coeff> positive_ratio(const std::vector<Coeff>& a, const std::vector<Coeff>& b)
{
    std::optional<Coeff> lambda;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) {
            if (b[i] != 0) {
                return std::nullopt;
            }
            continue;
        }
        const Coeff r = b[i] / a[i];
        if (lambda && *lambda != r) {
            return std::nullopt;
        }
        lambda = r;
    }
    if (!lambda || *lambda <= 0) {
        return std::nullopt;
    }
    return lambda;
}

} // namespace

Arc::Arc(std::vector<PuiseuxSeries> components, bool distance_parametrized, std::optional<SheetTrace> trace)
    : components_(std::move(components)), distance_parametrized_(distance_parametrized), trace_(std::move(trace))
{
    if (components_.empty()) {
        throw ArcError("arc needs at least one component");
    }
    for (std::size_t i = 0; i < components_.size(); ++i) {
        if (components_[i].valuation() <= Exponent(0)) {
            throw ArcError("arc component " + std::to_string(i) + " does not vanish at t = 0");
        }
    }
    if (distance_parametrized_) {
        const PuiseuxSeries n2 = squared_norm_series(*this);
        const PuiseuxSeries excess = n2 - PuiseuxSeries::monomial(Coeff(1), Exponent(2), n2.truncation());
        if (excess.valuation() <= Exponent(2)) {
            throw ArcError("arc flagged as distance parametrized but |arc(t)|^2 - t^2 has order " +
                           to_string(excess.valuation()));
        }
    }
}

Exponent Arc::truncation() const
{
    Exponent t = components_.front().truncation();
    for (const auto& c : components_) {
        t = min(t, c.truncation());
    }
    return t;
}

std::vector<double> Arc::evaluate(double t) const
{
    std::vector<double> out;
    out.reserve(components_.size());
    for (const auto& c : components_) {
        out.push_back(c.evaluate(t));
    }
    return out;
}

PuiseuxSeries squared_norm_series(const Arc& arc)
{
    PuiseuxSeries sum(arc.truncation() * Exponent(2), arc.components().front().max_ramification());
    for (const auto& c : arc.components()) {
        sum = sum + c * c;
    }
    return sum;
}

PuiseuxSeries norm_series(const Arc& arc)
{
    const PuiseuxSeries n2 = squared_norm_series(arc);
    if (n2.is_zero()) {
        throw ArcError("zero arc has no norm series");
    }
    try {
        return sqrt(n2);
    } catch (const SeriesError& e) {
        throw ArcError(std::string("norm has no rational expansion: ") + e.what());
    }
}

Arc ramify(const Arc& arc, Exponent k)
{
    std::vector<PuiseuxSeries> comps;
    for (const auto& c : arc.components()) {
        comps.push_back(substitute_power(c, k));
    }
    std::optional<SheetTrace> trace = arc.trace();
    if (trace) {
        trace->u = substitute_power(trace->u, k);
        if (trace->v) {
            trace->v = substitute_power(*trace->v, k);
        }
    }
    return Arc(std::move(comps), false, std::move(trace));
}

Arc reparametrize_to_norm_scale(const Arc& arc, const Coeff& scale)
{
    if (scale <= 0) {
        throw ArcError("norm scale must be positive");
    }
    const Arc normalized = normalize_norm_order(arc);
    PuiseuxSeries h;
    try {
        const PuiseuxSeries scaled_norm = sqrt((Coeff(1) / scale) * squared_norm_series(normalized));
        h = comp_inverse(scaled_norm);
    } catch (const SeriesError& e) {
        throw ArcError(std::string("arc is not distance parametrizable over the rationals: ") + e.what());
    }
    try {
        std::vector<PuiseuxSeries> comps;
        for (const auto& c : normalized.components()) {
            comps.push_back(c.is_zero() ? PuiseuxSeries(c.truncation(), c.max_ramification()) : compose(c, h));
        }
        std::optional<SheetTrace> trace = normalized.trace();
        if (trace) {
            trace->u = trace->u.is_zero() ? trace->u : compose(trace->u, h);
            if (trace->v) {
                trace->v = compose(*trace->v, h);
            }
        }
        return Arc(std::move(comps), scale == 1, std::move(trace));
    } catch (const SeriesError& e) {
        throw ArcError(std::string("reparametrization needs irrational coefficients: ") + e.what());
    }
}

Arc reparametrize_by_distance(const Arc& arc)
{
    if (arc.distance_parametrized()) {
        return arc;
    }
    return reparametrize_to_norm_scale(arc, Coeff(1));
}

ContactOrder tord(const Arc& a, const Arc& b)
{
    if (a.dimension() != b.dimension()) {
        throw ArcError("arcs live in different ambient dimensions");
    }
    if (a.distance_parametrized() && b.distance_parametrized()) {
        return half(ord(squared_difference(a, b)));
    }
    if (!a.distance_parametrized() && b.distance_parametrized()) {
        return tord(b, a);
    }

    // Bring both arcs to the common parametrization |arc(s)|^2 = c s^2.
    const Arc na = a.distance_parametrized() ? a : normalize_norm_order(a);
    const Arc nb = normalize_norm_order(b);
    const auto va = linear_coefficients(na);
    const auto vb = linear_coefficients(nb);
    if (!positive_ratio(va, vb)) {
        // Distinct unit tangents: |a(s) - b(s)| = s |u_a - u_b| + ...
        return ContactOrder::finite(Exponent(1));
    }
    Coeff scale = 0;
    for (const auto& c : va) {
        scale += c * c;
    }
    const Arc pa = na.distance_parametrized() ? na : reparametrize_to_norm_scale(na, scale);
    const Arc pb = reparametrize_to_norm_scale(nb, scale);
    return half(ord(squared_difference(pa, pb)));
}

double outer_distance(const Arc& a, const Arc& b, double t)
{
    if (!a.distance_parametrized() || !b.distance_parametrized()) {
        throw ArcError("outer_distance needs distance-parametrized arcs");
    }
    if (a.dimension() != b.dimension()) {
        throw ArcError("arcs live in different ambient dimensions");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        const double d = (a.components()[i] - b.components()[i]).evaluate(t);
        s += d * d;
    }
    return std::sqrt(s);
}

namespace {

// b_i(t + delta) - b_i(t) without cancellation.
double increment(const PuiseuxSeries& f, double t, double delta)
{
    double s = 0.0;
    const double rel = delta / t;
    for (const auto& term : f.terms()) {
        const double e = term.exponent.to_double();
        s += term.coeff.get_d() * std::pow(t, e) * std::expm1(e * std::log1p(rel));
    }
    return s;
}

} // namespace

namespace {

// Parameter tau with |arc(tau)| = r, assuming the norm increases near the origin.
double parameter_at_distance(const Arc& arc, double r)
{
    double hi = r;
    for (int i = 0; i < 200 && euclidean_norm(arc.evaluate(hi)) < r; ++i) {
        hi *= 2.0;
    }
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (euclidean_norm(arc.evaluate(mid)) < r) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Fallback for arcs whose distance parametrization has irrational coefficients:
// everything is evaluated numerically in the original parametrizations.
std::vector<double> numeric_point_to_arc(const Arc& a, const Arc& b, const std::vector<double>& scales)
{
    std::vector<double> out;
    for (double t : scales) {
        const auto x = a.evaluate(parameter_at_distance(a, t));
        const double s_mid = parameter_at_distance(b, t);
        const double reach = euclidean_distance(x, b.evaluate(s_mid));
        if (reach == 0.0) {
            out.push_back(0.0);
            continue;
        }
        const double s_lo = parameter_at_distance(b, std::max(t - 1.01 * reach, 1e-3 * t));
        const double s_hi = parameter_at_distance(b, t + 1.01 * reach);
        auto objective = [&](double s) {
            const auto y = b.evaluate(s);
            double s2 = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                s2 += (x[i] - y[i]) * (x[i] - y[i]);
            }
            return s2;
        };
        const auto [arg, val] = grid_then_golden(objective, s_lo, s_hi);
        (void)arg;
        out.push_back(std::min(reach, std::sqrt(val)));
    }
    return out;
}

std::vector<double> exact_point_to_arc(const Arc& pa, const Arc& pb, const std::vector<double>& scales)
{
    std::vector<PuiseuxSeries> diff;
    for (std::size_t i = 0; i < pa.dimension(); ++i) {
        diff.push_back(pa.components()[i] - pb.components()[i]);
    }
    std::vector<double> out;
    for (double t : scales) {
        std::vector<double> base(diff.size());
        for (std::size_t i = 0; i < diff.size(); ++i) {
            base[i] = diff[i].evaluate(t);
        }
        const double reach = euclidean_norm(base);
        double best = reach;
        if (reach > 0.0) {
            auto objective = [&](double delta) {
                double s2 = 0.0;
                for (std::size_t i = 0; i < diff.size(); ++i) {
                    const double d = base[i] - increment(pb.components()[i], t, delta);
                    s2 += d * d;
                }
                return s2;
            };
            const double lo = std::max(-1.01 * reach, -0.999 * t);
            const auto [arg, val] = grid_then_golden(objective, lo, 1.01 * reach);
            (void)arg;
            best = std::min(best, std::sqrt(val));
        }
        out.push_back(best);
    }
    return out;
}

} // namespace

std::vector<double> point_to_arc_distances(const Arc& a, const Arc& b, const std::vector<double>& scales)
{
    if (a.dimension() != b.dimension()) {
        throw ArcError("arcs live in different ambient dimensions");
    }
    try {
        return exact_point_to_arc(reparametrize_by_distance(a), reparametrize_by_distance(b), scales);
    } catch (const ArcError&) {
        return numeric_point_to_arc(a, b, scales);
    }
}

OuterPointToArc outer_point_to_arc(const Arc& a, const Arc& b, const RunConfig& config)
{
    if (a.dimension() != b.dimension()) {
        throw ArcError("arcs live in different ambient dimensions");
    }
    OuterPointToArc out;
    out.scales = config.outer_scales.values();
    Exponent truncation = min(a.truncation(), b.truncation());
    try {
        truncation = min(reparametrize_by_distance(a).truncation(), reparametrize_by_distance(b).truncation());
    } catch (const ArcError&) {
    }
    out.distances = point_to_arc_distances(a, b, out.scales);

    bool all_zero = true;
    for (std::size_t k = 0; k < out.scales.size(); ++k) {
        if (out.distances[k] > 1e-12 * out.scales[k]) {
            all_zero = false;
        }
    }
    if (all_zero) {
        out.order = ContactOrder::at_least(truncation);
        return out;
    }
    for (double d : out.distances) {
        if (!(d > 0.0)) {
            throw FitError("point-to-arc distance vanishes at some scales but not others");
        }
    }
    const SnappedFit sf = snap_power_law(out.scales, out.distances, config.snap_tolerance, config.snap_denominator,
                                         config.min_r_squared);
    out.fit = sf.fit;
    const auto& snapped = sf.snapped;
    if (!snapped) {
        throw FitError("point-to-arc outer order fit failed: slope " + std::to_string(sf.fit.slope) + ", R^2 " +
                       std::to_string(sf.fit.r_squared));
    }
    out.order = ContactOrder::finite(*snapped);
    return out;
}

} // namespace arccrit
