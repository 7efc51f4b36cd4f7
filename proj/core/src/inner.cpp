#include "arccrit/inner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>

#include "arccrit/error.hpp"
#include "arccrit/numeric.hpp"

namespace arccrit {

namespace {

bool share_pancake(const GermModel& g, std::size_t s1, std::size_t s2)
{
    const auto a = g.pancakes_of_sheet(s1);
    const auto b = g.pancakes_of_sheet(s2);
    return std::find_first_of(a.begin(), a.end(), b.begin(), b.end()) != a.end();
}

// A place where a chain may cross from one pancake to the next.
struct Crossing {
    std::optional<BoundaryCurve> curve; // empty: the origin
};

std::vector<double> crossing_point(const GermModel& g, const Crossing& c, double u)
{
    if (!c.curve) {
        return std::vector<double>(g.ambient_dim(), 0.0);
    }
    const Sheet& s = g.sheets()[c.curve->sheet];
    const double v = c.curve->side == BoundaryCurve::Side::VLow ? s.domain().v_lo.get_d() : s.domain().v_hi.get_d();
    return s.evaluate(u, v);
}

double crossing_u_max(const GermModel& g, const Crossing& c)
{
    return c.curve ? g.sheets()[c.curve->sheet].domain().u_hi.get_d() : 0.0;
}

// Simple pancake paths from any start pancake to any goal pancake, as adjacency indices.
void pancake_paths(const PancakeDecomposition& pd, std::size_t at, const std::vector<std::size_t>& goals,
                   std::vector<bool>& seen, std::vector<std::size_t>& route, std::vector<std::vector<std::size_t>>& out)
{
    if (std::find(goals.begin(), goals.end(), at) != goals.end()) {
        out.push_back(route);
        return;
    }
    for (std::size_t k = 0; k < pd.adjacency.size(); ++k) {
        const Adjacency& adj = pd.adjacency[k];
        std::size_t next;
        if (adj.a == at) {
            next = adj.b;
        } else if (adj.b == at) {
            next = adj.a;
        } else {
            continue;
        }
        if (seen[next]) {
            continue;
        }
        seen[next] = true;
        route.push_back(k);
        pancake_paths(pd, next, goals, seen, route, out);
        route.pop_back();
        seen[next] = false;
    }
}

// Minimal chain length through the given crossings; curve parameters by coordinate descent.
double chain_length(const GermModel& g, const std::vector<double>& x, const std::vector<double>& y,
                    const std::vector<Crossing>& crossings, const RunConfig& config)
{
    const std::size_t m = crossings.size();
    std::vector<double> u(m, 0.0);
    std::vector<std::vector<double>> pts(m);
    for (std::size_t i = 0; i < m; ++i) {
        pts[i] = crossing_point(g, crossings[i], 0.0);
    }
    auto total = [&]() {
        double s = 0.0;
        const std::vector<double>* prev = &x;
        for (const auto& p : pts) {
            s += euclidean_distance(*prev, p);
            prev = &p;
        }
        return s + euclidean_distance(*prev, y);
    };
    double current = total();
    for (int it = 0; it < config.chain_iterations; ++it) {
        const double before = current;
        for (std::size_t i = 0; i < m; ++i) {
            if (!crossings[i].curve) {
                continue;
            }
            const auto& left = i == 0 ? x : pts[i - 1];
            const auto& right = i + 1 == m ? y : pts[i + 1];
            auto f = [&](double ui) {
                const auto p = crossing_point(g, crossings[i], ui);
                return euclidean_distance(left, p) + euclidean_distance(p, right);
            };
            const auto [arg, val] = grid_then_golden(f, 0.0, crossing_u_max(g, crossings[i]));
            (void)val;
            u[i] = arg;
            pts[i] = crossing_point(g, crossings[i], arg);
        }
        current = total();
        if (before - current <= config.chain_tolerance * std::max(current, 1e-300)) {
            break;
        }
    }
    return current;
}

void check_arc(const GermModel& g, const Arc& a)
{
    if (a.dimension() != g.ambient_dim() || (a.trace() && a.trace()->sheet >= g.sheets().size())) {
        throw MetricError("arc does not belong to the germ");
    }
}

bool coincident(const Arc& a, const Arc& b)
{
    if (!a.distance_parametrized() || !b.distance_parametrized()) {
        return false;
    }
    try {
        return tord(a, b).is_at_least();
    } catch (const ArcError&) {
        return false;
    }
}

} // namespace

double pancake_distance(const GermModel& g, const LocatedPoint& x, const LocatedPoint& y, const RunConfig& config)
{
    if (!g.pancakes()) {
        throw MetricError("germ has no pancake decomposition");
    }
    const double euclid = euclidean_distance(x.x, y.x);
    if (euclid == 0.0 || euclidean_norm(x.x) == 0.0 || euclidean_norm(y.x) == 0.0 || share_pancake(g, x.sheet, y.sheet)) {
        return euclid;
    }
    const PancakeDecomposition& pd = *g.pancakes();
    const auto starts = g.pancakes_of_sheet(x.sheet);
    const auto goals = g.pancakes_of_sheet(y.sheet);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t start : starts) {
        std::vector<bool> seen(pd.pancakes.size(), false);
        seen[start] = true;
        std::vector<std::size_t> route;
        std::vector<std::vector<std::size_t>> paths;
        pancake_paths(pd, start, goals, seen, route, paths);
        for (const auto& path : paths) {
            // Every combination of crossing choices along the path.
            std::vector<std::vector<Crossing>> options;
            for (std::size_t k : path) {
                std::vector<Crossing> opts{Crossing{}};
                for (const auto& c : pd.adjacency[k].curves) {
                    opts.push_back(Crossing{c});
                }
                options.push_back(std::move(opts));
            }
            std::vector<std::size_t> pick(options.size(), 0);
            for (;;) {
                std::vector<Crossing> chosen;
                for (std::size_t i = 0; i < options.size(); ++i) {
                    chosen.push_back(options[i][pick[i]]);
                }
                best = std::min(best, chain_length(g, x.x, y.x, chosen, config));
                std::size_t i = 0;
                while (i < pick.size() && ++pick[i] == options[i].size()) {
                    pick[i++] = 0;
                }
                if (i == pick.size()) {
                    break;
                }
            }
        }
    }
    if (!std::isfinite(best)) {
        throw MetricError("no pancake chain connects the points");
    }
    return std::max(best, euclid);
}

double pancake_distance(const GermModel& g, const std::vector<double>& x, const std::vector<double>& y,
                        const RunConfig& config)
{
    return pancake_distance(g, locate(g, x), locate(g, y), config);
}

LocatedPoint arc_point(const GermModel& g, const Arc& arc, double t)
{
    check_arc(g, arc);
    if (!arc.trace()) {
        return locate(g, arc.evaluate(t));
    }
    const SheetTrace& tr = *arc.trace();
    const double v = tr.v ? tr.v->evaluate(t) : 0.0;
    return make_point(g, tr.sheet, tr.u.evaluate(t), v);
}

std::shared_ptr<const PointGraph> MeshCache::get(double t, double resolution)
{
    std::lock_guard lock(mutex_);
    auto& slot = meshes_[{t, resolution}];
    if (!slot) {
        slot = std::make_shared<const PointGraph>(mesh_at_scale(*germ_, t, resolution));
    }
    return slot;
}

double inner_distance_numeric(const GermModel& g, const LocatedPoint& x, const LocatedPoint& y, double t,
                              double resolution)
{
    return mesh_at_scale(g, t, resolution).distance(x, y);
}

double inner_distance_numeric(MeshCache& cache, const LocatedPoint& x, const LocatedPoint& y, double t,
                              double resolution)
{
    return cache.get(t, resolution)->distance(x, y);
}

double inner_arc_distance(const GermModel& g, const Arc& a, const Arc& b, double t, const RunConfig& config,
                          MeshCache* cache)
{
    check_arc(g, a);
    check_arc(g, b);
    const bool exact = a.distance_parametrized() && b.distance_parametrized();
    const LocatedPoint x = arc_point(g, a, t);
    const LocatedPoint y = arc_point(g, b, t);
    const double euclid = exact ? outer_distance(a, b, t) : euclidean_distance(x.x, y.x);
    if (g.pancakes()) {
        if (share_pancake(g, x.sheet, y.sheet)) {
            return euclid;
        }
        return std::max(pancake_distance(g, x, y, config), euclid);
    }
    const double res = t / config.resolution_divisor;
    const double d = cache ? inner_distance_numeric(*cache, x, y, t, res) : inner_distance_numeric(g, x, y, t, res);
    // A path that is the straight chord itself is replaced by the exact chord length.
    if (d <= euclidean_distance(x.x, y.x) * (1 + 1e-9)) {
        return euclid;
    }
    return std::max(d, euclid);
}

InnerOrderEstimate estimate_order(const std::vector<double>& t, const std::vector<double>& d, const RunConfig& config,
                                  bool coincident)
{
    InnerOrderEstimate est;
    for (std::size_t k = 0; k < t.size(); ++k) {
        est.scales.emplace_back(t[k], d[k]);
    }
    if (coincident || std::all_of(d.begin(), d.end(), [](double x) { return x == 0.0; })) {
        est.degenerate = true;
        return est;
    }
    std::vector<double> tp;
    std::vector<double> dp;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (d[k] > 0.0) {
            tp.push_back(t[k]);
            dp.push_back(d[k]);
        }
    }
    if (tp.size() < 3) {
        return est;
    }
    const SnappedFit sf = snap_power_law(tp, dp, config.snap_tolerance, config.snap_denominator, config.min_r_squared);
    est.slope = sf.fit.slope;
    est.r_squared = std::clamp(sf.fit.r_squared, 0.0, 1.0);
    // Every scale must carry a positive distance for the snapped value to stand.
    if (tp.size() == t.size()) {
        est.snapped = sf.snapped;
    }
    return est;
}

InnerOrderEstimate inner_contact_order(const GermModel& g, const Arc& a, const Arc& b, const RunConfig& config,
                                       MeshCache* cache)
{
    if (config.scales.size() < 5) {
        throw SpecError("inner_contact_order needs at least five scales");
    }
    const std::vector<double> ts = config.scales.values();
    std::optional<MeshCache> local;
    if (!cache && !g.pancakes()) {
        cache = &local.emplace(g);
    }
    const auto ds = parallel_map<double>(ts.size(), [&](std::size_t k) { return inner_arc_distance(g, a, b, ts[k], config, cache); });
    return estimate_order(ts, ds, config, coincident(a, b));
}

InnerOrderEstimate inner_point_to_arc_order(const GermModel& g, const Arc& a, const Arc& b, const RunConfig& config,
                                            MeshCache* cache)
{
    check_arc(g, a);
    check_arc(g, b);
    if (config.scales.size() < 5) {
        throw SpecError("inner_point_to_arc_order needs at least five scales");
    }
    const std::vector<double> ts = config.scales.values();
    std::optional<MeshCache> local;
    if (!cache && !g.pancakes()) {
        cache = &local.emplace(g);
    }
    const auto ds = parallel_map<double>(ts.size(), [&](std::size_t k) {
        const double t = ts[k];
        const bool same = g.pancakes() && share_pancake(g, arc_point(g, a, t).sheet, arc_point(g, b, t).sheet);
        if (same) {
            // One pancake: the inner metric is Euclidean, so this is the outer point-to-arc distance.
            return point_to_arc_distances(a, b, {t}).front();
        }
        const LocatedPoint x = arc_point(g, a, t);
        std::function<double(double)> f;
        std::shared_ptr<const PointGraph> mesh;
        std::vector<double> field;
        if (g.pancakes()) {
            f = [&](double s) { return pancake_distance(g, x, arc_point(g, b, s), config); };
        } else {
            mesh = cache->get(t, t / config.resolution_divisor);
            // The infimum is at most d(x, b(t)); nothing farther can matter.
            const LocatedPoint y = arc_point(g, b, t);
            field = mesh->distance_field(x, mesh->distance(x, y) + 2.0 * mesh->resolution());
            f = [&](double s) { return mesh->distance(field, x, arc_point(g, b, s)); };
        }
        // The minimizer lies within the ball |y| <= 2t; the mesh window stops at 4t.
        return grid_then_golden(f, 0.0, 2.0 * t, 129).second;
    });
    return estimate_order(ts, ds, config, coincident(a, b));
}

void write_distance_csv(std::ostream& os, const std::vector<DistanceRow>& rows)
{
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << "t,d_outer,d_inner,ratio\n" << std::setprecision(17);
    for (const auto& r : rows) {
        os << r.t << ',' << r.d_outer << ',' << r.d_inner << ',' << (r.d_inner / r.d_outer) << '\n';
    }
    os.flags(flags);
    os.precision(prec);
}

} // namespace arccrit
