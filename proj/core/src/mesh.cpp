#include "arccrit/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>

#include "arccrit/error.hpp"
#include "arccrit/numeric.hpp"

namespace arccrit {

namespace {

constexpr int kEdgeSamples = 256;
constexpr double kSpacing = 0.95; // fraction of the resolution used as target spacing

double dist(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double norm_of(const Sheet& s, double u, double v) { return euclidean_norm(s.evaluate(u, v)); }

struct Range {
    double lo;
    double hi;
};

// Min of f over n+1 evenly spaced points of [a, b].
template <class F>
double min_on(F&& f, double a, double b, int n = kEdgeSamples)
{
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
        m = std::min(m, f(a + (b - a) * i / n));
    }
    return m;
}

// Smallest x in (0, hi] with ok(x), assuming ok is monotone; hi itself must be ok.
template <class F>
double bisect_first(F&& ok, double hi)
{
    double lo = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

Range v_range(const Sheet& s) { return {s.domain().v_lo.get_d(), s.domain().v_hi.get_d()}; }

// Box of a non-radial two-parameter sheet at half-width lambda.
struct Box {
    Range u;
    Range v;
};

Box corner_box(const Sheet& s, double lambda)
{
    const Domain& d = s.domain();
    return {{std::max(d.u_lo.get_d(), -lambda), std::min(d.u_hi.get_d(), lambda)},
            {std::max(d.v_lo.get_d(), -lambda), std::min(d.v_hi.get_d(), lambda)}};
}

// Min norm over the box edges that lie inside the domain (edges through the domain
// boundary are part of the germ's own boundary).
double far_edge_min(const Sheet& s, const Box& b)
{
    const Domain& d = s.domain();
    double m = std::numeric_limits<double>::infinity();
    if (b.u.hi > 0 && (b.u.hi < d.u_hi.get_d() || b.u.hi == d.u_hi.get_d())) {
        m = std::min(m, min_on([&](double v) { return norm_of(s, b.u.hi, v); }, b.v.lo, b.v.hi));
    }
    if (b.u.lo < 0) {
        m = std::min(m, min_on([&](double v) { return norm_of(s, b.u.lo, v); }, b.v.lo, b.v.hi));
    }
    if (b.v.hi > 0) {
        m = std::min(m, min_on([&](double u) { return norm_of(s, u, b.v.hi); }, b.u.lo, b.u.hi));
    }
    if (b.v.lo < 0) {
        m = std::min(m, min_on([&](double u) { return norm_of(s, u, b.v.lo); }, b.u.lo, b.u.hi));
    }
    return m;
}

double corner_lambda_max(const Sheet& s)
{
    const Domain& d = s.domain();
    return std::max({-d.u_lo.get_d(), d.u_hi.get_d(), -d.v_lo.get_d(), d.v_hi.get_d()});
}

// Norm reached at the far end of a radial or one-parameter sheet in direction dir.
double far_norm(const Sheet& s, double u)
{
    if (s.parameter_dim() == 1) {
        return norm_of(s, u, 0.0);
    }
    const Range vr = v_range(s);
    return min_on([&](double v) { return norm_of(s, u, v); }, vr.lo, vr.hi);
}

// Sheet-local mesh window.
struct Window {
    bool corner = false; // non-radial two-parameter sheet
    Range u{0.0, 0.0};
    double lambda = 0.0;
};

Window window_for(const Sheet& s, double radius)
{
    Window w;
    const Domain& d = s.domain();
    if (s.parameter_dim() == 2 && !s.radial()) {
        w.corner = true;
        w.lambda = bisect_first([&](double l) { return far_edge_min(s, corner_box(s, l)) >= radius; }, corner_lambda_max(s));
        const Box b = corner_box(s, w.lambda);
        w.u = b.u;
        return w;
    }
    if (d.u_hi > 0) {
        w.u.hi = bisect_first([&](double u) { return far_norm(s, u) >= radius; }, d.u_hi.get_d());
    }
    if (d.u_lo < 0) {
        w.u.lo = -bisect_first([&](double u) { return far_norm(s, -u) >= radius; }, -d.u_lo.get_d());
    }
    return w;
}

Range v_window(const Sheet& s, const Window& w)
{
    if (s.parameter_dim() == 1) {
        return {0.0, 0.0};
    }
    if (w.corner) {
        return corner_box(s, w.lambda).v;
    }
    return v_range(s);
}

// u levels from 0 outward to `extent` (sign gives the direction) such that moving one
// level changes every sheet point by at most the target spacing.
std::vector<double> levels_outward(const std::vector<const Sheet*>& sheets, const std::vector<Range>& vranges,
                                   double extent, double spacing)
{
    std::vector<double> out{0.0};
    if (extent == 0.0) {
        return out;
    }
    const double dir = extent > 0 ? 1.0 : -1.0;
    const double end = std::abs(extent);
    double u = 0.0;
    double step = spacing;
    auto ok = [&](double a, double b) {
        for (std::size_t k = 0; k < sheets.size(); ++k) {
            const Range vr = vranges[k];
            const int n = sheets[k]->parameter_dim() == 1 ? 0 : 32;
            for (int i = 0; i <= n; ++i) {
                const double v = n == 0 ? 0.0 : vr.lo + (vr.hi - vr.lo) * i / n;
                if (dist(sheets[k]->evaluate(dir * a, v), sheets[k]->evaluate(dir * b, v)) > spacing) {
                    return false;
                }
            }
        }
        return true;
    };
    while (u < end) {
        step = std::min(step * 2.0, end - u);
        while (!ok(u, u + step)) {
            step *= 0.5;
            if (step < end * 1e-12) {
                throw GermError("mesh: sheet map too steep to resolve");
            }
        }
        u = (end - (u + step) < 1e-12 * end) ? end : u + step;
        out.push_back(dir * u);
        if (out.size() > 4'000'000) {
            throw GermError("mesh: too many levels");
        }
    }
    return out;
}

// v values along a level at (approximately) equal arc length; always includes the
// range ends and, for corner sheets, v = 0.
std::vector<double> v_samples(const Sheet& s, double u, Range vr, bool split_at_zero, double spacing)
{
    if (s.parameter_dim() == 1) {
        return {0.0};
    }
    auto piece = [&](double a, double b, std::vector<double>& out) {
        std::vector<double> cum(kEdgeSamples + 1, 0.0);
        std::vector<double> prev = s.evaluate(u, a);
        for (int i = 1; i <= kEdgeSamples; ++i) {
            std::vector<double> cur = s.evaluate(u, a + (b - a) * i / kEdgeSamples);
            cum[i] = cum[i - 1] + dist(prev, cur);
            prev = std::move(cur);
        }
        const double length = cum.back();
        const int segs = length > 0.0 ? static_cast<int>(std::ceil(length / spacing)) : 0;
        if (out.empty() || out.back() != a) {
            out.push_back(a);
        }
        if (segs == 0) {
            return;
        }
        std::size_t j = 0;
        for (int k = 1; k < segs; ++k) {
            const double target = length * k / segs;
            while (cum[j + 1] < target) {
                ++j;
            }
            const double frac = (target - cum[j]) / (cum[j + 1] - cum[j]);
            out.push_back(a + (b - a) * (static_cast<double>(j) + frac) / kEdgeSamples);
        }
        out.push_back(b);
    };
    std::vector<double> out;
    if (split_at_zero && vr.lo < 0.0 && vr.hi > 0.0) {
        piece(vr.lo, 0.0, out);
        piece(0.0, vr.hi, out);
    } else {
        piece(vr.lo, vr.hi, out);
    }
    // A collapsed level (radial sheet at u = 0) is a single vertex.
    if (s.radial() && u == 0.0) {
        return {vr.lo};
    }
    return out;
}

} // namespace

double germ_radius(const GermModel& g)
{
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : g.sheets()) {
        const Domain& d = s.domain();
        if (s.parameter_dim() == 2 && !s.radial()) {
            Box b{{d.u_lo.get_d(), d.u_hi.get_d()}, {d.v_lo.get_d(), d.v_hi.get_d()}};
            m = std::min(m, far_edge_min(s, b));
            continue;
        }
        if (d.u_hi > 0) {
            m = std::min(m, far_norm(s, d.u_hi.get_d()));
        }
        if (d.u_lo < 0) {
            m = std::min(m, far_norm(s, d.u_lo.get_d()));
        }
    }
    return m / 4.0;
}

PointGraph mesh_at_scale(const GermModel& g, double t, double resolution)
{
    if (!(t > 0.0) || t > germ_radius(g) * (1 + 1e-12)) {
        throw GermError("mesh: scale must lie in (0, germ radius]");
    }
    if (!(resolution > 0.0) || resolution > t / 8.0) {
        throw GermError("mesh: resolution must lie in (0, t/8]");
    }
    const double radius = 4.0 * t;
    const double spacing = kSpacing * resolution;
    const std::size_t ns = g.sheets().size();

    std::vector<Window> windows;
    for (const auto& s : g.sheets()) {
        windows.push_back(window_for(s, radius));
    }

    // Radial and one-parameter sheets share their u levels so that coincident edges
    // produce coincident vertices; corner sheets get their own.
    std::vector<std::vector<double>> sheet_levels(ns);
    {
        // Each direction uses only the sheets that extend that way.
        auto shared_levels = [&](bool up) {
            std::vector<const Sheet*> active;
            std::vector<Range> vr;
            double extent = 0.0;
            for (std::size_t i = 0; i < ns; ++i) {
                const double e = up ? windows[i].u.hi : windows[i].u.lo;
                if (!windows[i].corner && e != 0.0) {
                    active.push_back(&g.sheets()[i]);
                    vr.push_back(v_window(g.sheets()[i], windows[i]));
                    extent = up ? std::max(extent, e) : std::min(extent, e);
                }
            }
            return levels_outward(active, vr, extent, spacing);
        };
        const std::vector<double> up = shared_levels(true);
        const std::vector<double> down = shared_levels(false);
        std::vector<double> common(down.rbegin(), down.rend());
        common.insert(common.end(), up.begin() + 1, up.end());
        for (std::size_t i = 0; i < ns; ++i) {
            const Sheet& s = g.sheets()[i];
            if (windows[i].corner) {
                const Range vr = v_window(s, windows[i]);
                std::vector<double> up = levels_outward({&s}, {vr}, windows[i].u.hi, spacing);
                std::vector<double> down = levels_outward({&s}, {vr}, windows[i].u.lo, spacing);
                sheet_levels[i].assign(down.rbegin(), down.rend());
                sheet_levels[i].insert(sheet_levels[i].end(), up.begin() + 1, up.end());
                continue;
            }
            // Keep shared levels inside this sheet's window plus one level beyond it.
            const auto& w = windows[i].u;
            for (std::size_t k = 0; k < common.size(); ++k) {
                const double u = common[k];
                const bool inside = u >= w.lo && u <= w.hi;
                const bool next_out = (k > 0 && common[k - 1] >= w.lo && common[k - 1] <= w.hi && u > w.hi) ||
                                      (k + 1 < common.size() && common[k + 1] >= w.lo && common[k + 1] <= w.hi && u < w.lo);
                if (inside || next_out) {
                    const Domain& d = s.domain();
                    if (u >= d.u_lo.get_d() && u <= d.u_hi.get_d()) {
                        sheet_levels[i].push_back(u);
                    }
                }
            }
        }
    }

    PointGraph pg;
    pg.dim_ = g.ambient_dim();
    pg.t_ = t;
    pg.res_ = resolution;
    pg.levels_.resize(ns);
    for (std::size_t i = 0; i < ns; ++i) {
        const Sheet& s = g.sheets()[i];
        const Range vr = v_window(s, windows[i]);
        for (double u : sheet_levels[i]) {
            const std::uint32_t first = static_cast<std::uint32_t>(pg.sheet_.size());
            for (double v : v_samples(s, u, vr, windows[i].corner, spacing)) {
                const auto x = s.evaluate(u, v);
                if (euclidean_norm(x) > radius) {
                    continue;
                }
                pg.coords_.insert(pg.coords_.end(), x.begin(), x.end());
                pg.sheet_.push_back(static_cast<std::uint32_t>(i));
                pg.vparam_.push_back(v);
            }
            const std::uint32_t count = static_cast<std::uint32_t>(pg.sheet_.size()) - first;
            if (count > 0) {
                pg.levels_[i].push_back({u, first, count});
            }
        }
    }
    const std::size_t n = pg.size();
    if (n == 0) {
        throw GermError("mesh: no vertices inside the ball");
    }

    // Edges: grid neighbours up to two levels and two positions apart, length <= 2 res.
    std::vector<std::vector<std::pair<std::uint32_t, float>>> adj(n);
    const double reach = 2.0 * resolution;
    auto link = [&](std::uint32_t a, std::uint32_t b) {
        const double d = dist(pg.point(a), pg.point(b));
        if (d <= reach) {
            adj[a].emplace_back(b, static_cast<float>(d));
            adj[b].emplace_back(a, static_cast<float>(d));
            return true;
        }
        return false;
    };
    for (std::size_t si = 0; si < ns; ++si) {
        const auto& lv = pg.levels_[si];
        for (std::size_t li = 0; li < lv.size(); ++li) {
            for (std::uint32_t k = 0; k < lv[li].count; ++k) {
                const std::uint32_t a = lv[li].first + k;
                for (std::uint32_t step = 1; step <= 2 && k + step < lv[li].count; ++step) {
                    link(a, a + step);
                }
                for (std::size_t lj = li + 1; lj <= li + 2 && lj < lv.size(); ++lj) {
                    const PointGraph::Level& L = lv[lj];
                    const auto begin = pg.vparam_.begin() + L.first;
                    const auto end = begin + L.count;
                    const std::uint32_t pos =
                        static_cast<std::uint32_t>(std::lower_bound(begin, end, pg.vparam_[a]) - begin);
                    for (std::uint32_t j = pos; j < L.count; ++j) {
                        if (!link(a, L.first + j) && j > pos + 1) {
                            break;
                        }
                    }
                    for (std::uint32_t j = pos; j-- > 0;) {
                        if (!link(a, L.first + j) && j + 2 < pos) {
                            break;
                        }
                    }
                }
            }
        }
    }

    // Glue coincident vertices of different sheets (level ends and the origin).
    {
        const double tol = 1e-9 * radius;
        std::vector<std::uint32_t> cand;
        for (std::size_t si = 0; si < ns; ++si) {
            for (const PointGraph::Level& L : pg.levels_[si]) {
                cand.push_back(L.first);
                if (L.count > 1) {
                    cand.push_back(L.first + L.count - 1);
                }
                if (windows[si].corner) {
                    for (std::uint32_t k = 0; k < L.count; ++k) {
                        if (euclidean_norm(pg.point(L.first + k)) <= tol) {
                            cand.push_back(L.first + k);
                        }
                    }
                }
            }
        }
        std::sort(cand.begin(), cand.end(), [&](std::uint32_t a, std::uint32_t b) { return pg.point(a)[0] < pg.point(b)[0]; });
        for (std::size_t i = 0; i < cand.size(); ++i) {
            for (std::size_t j = i + 1; j < cand.size() && pg.point(cand[j])[0] - pg.point(cand[i])[0] <= tol; ++j) {
                const std::uint32_t a = cand[i];
                const std::uint32_t b = cand[j];
                if (pg.sheet_[a] != pg.sheet_[b] && dist(pg.point(a), pg.point(b)) <= tol) {
                    adj[a].emplace_back(b, static_cast<float>(dist(pg.point(a), pg.point(b))));
                    adj[b].emplace_back(a, static_cast<float>(dist(pg.point(a), pg.point(b))));
                }
            }
        }
    }

    pg.offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        pg.offsets_[i + 1] = pg.offsets_[i] + static_cast<std::uint32_t>(adj[i].size());
    }
    pg.targets_.reserve(pg.offsets_.back());
    pg.weights_.reserve(pg.offsets_.back());
    for (auto& list : adj) {
        for (const auto& [b, w] : list) {
            pg.targets_.push_back(b);
            pg.weights_.push_back(w);
        }
        list.clear();
        list.shrink_to_fit();
    }
    if (!pg.connected()) {
        throw GermError("mesh: graph is disconnected (resolution too coarse)");
    }
    return pg;
}

bool PointGraph::connected() const
{
    const std::size_t n = size();
    std::vector<bool> seen(n, false);
    std::vector<std::uint32_t> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
        const std::uint32_t a = stack.back();
        stack.pop_back();
        for (std::uint32_t e = offsets_[a]; e < offsets_[a + 1]; ++e) {
            const std::uint32_t b = targets_[e];
            if (!seen[b]) {
                seen[b] = true;
                ++count;
                stack.push_back(b);
            }
        }
    }
    return count == n;
}

double PointGraph::shortest(const std::vector<Attachment>& from, const std::vector<Attachment>& to) const
{
    std::unordered_map<std::uint32_t, double> exit;
    for (const auto& a : to) {
        auto [it, fresh] = exit.emplace(a.vertex, a.length);
        if (!fresh) {
            it->second = std::min(it->second, a.length);
        }
    }
    std::vector<double> best(size(), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    for (const auto& a : from) {
        if (a.length < best[a.vertex]) {
            best[a.vertex] = a.length;
            queue.emplace(a.length, a.vertex);
        }
    }
    double answer = std::numeric_limits<double>::infinity();
    while (!queue.empty()) {
        const auto [d, a] = queue.top();
        queue.pop();
        if (d > best[a]) {
            continue;
        }
        if (d >= answer) {
            break;
        }
        if (const auto it = exit.find(a); it != exit.end()) {
            answer = std::min(answer, d + it->second);
        }
        for (std::uint32_t e = offsets_[a]; e < offsets_[a + 1]; ++e) {
            const std::uint32_t b = targets_[e];
            const double nd = d + static_cast<double>(weights_[e]);
            if (nd < best[b]) {
                best[b] = nd;
                queue.emplace(nd, b);
            }
        }
    }
    return answer;
}

double PointGraph::path_length(std::size_t from, std::size_t to) const
{
    if (from >= size() || to >= size()) {
        throw MetricError("no such vertex");
    }
    const double d = shortest({{static_cast<std::uint32_t>(from), 0.0}}, {{static_cast<std::uint32_t>(to), 0.0}});
    if (!std::isfinite(d)) {
        throw MetricError("vertices are not connected");
    }
    return d;
}

std::vector<PointGraph::Attachment> PointGraph::attachments(const LocatedPoint& p) const
{
    if (p.sheet >= levels_.size() || p.x.size() != dim_) {
        throw MetricError("point does not belong to this mesh");
    }
    const auto& lv = levels_[p.sheet];
    const double reach = 2.0 * res_;
    std::vector<Attachment> out;
    const auto pos = static_cast<std::ptrdiff_t>(
        std::lower_bound(lv.begin(), lv.end(), p.u, [](const Level& L, double u) { return L.u < u; }) - lv.begin());
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, pos - 2);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(lv.size()) - 1, pos + 2);
    for (std::ptrdiff_t li = lo; li <= hi; ++li) {
        const Level& L = lv[static_cast<std::size_t>(li)];
        const auto begin = vparam_.begin() + L.first;
        const auto vpos = static_cast<std::uint32_t>(std::lower_bound(begin, begin + L.count, p.v) - begin);
        auto consider = [&](std::uint32_t j) {
            const double d = dist(point(L.first + j), p.x);
            if (d <= reach) {
                out.push_back({L.first + j, d});
                return true;
            }
            return false;
        };
        for (std::uint32_t j = vpos; j < L.count; ++j) {
            if (!consider(j) && j > vpos + 1) {
                break;
            }
        }
        for (std::uint32_t j = vpos; j-- > 0;) {
            if (!consider(j) && j + 2 < vpos) {
                break;
            }
        }
    }
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& a : out) {
        nearest = std::min(nearest, a.length);
    }
    if (!(nearest <= res_)) {
        throw MetricError("point is farther than the resolution from every mesh vertex");
    }
    return out;
}

double PointGraph::direct(const LocatedPoint& x, const std::vector<Attachment>& ax, const LocatedPoint& y,
                          const std::vector<Attachment>& ay) const
{
    if (x.sheet != y.sheet) {
        return std::numeric_limits<double>::infinity();
    }
    const double d = dist(x.x, y.x);
    for (const auto& a : ax) {
        for (const auto& b : ay) {
            if (a.vertex == b.vertex && d <= 2.0 * res_) {
                return d;
            }
        }
    }
    return std::numeric_limits<double>::infinity();
}

double PointGraph::distance(const LocatedPoint& x, const LocatedPoint& y) const
{
    const auto ax = attachments(x);
    const auto ay = attachments(y);
    const double best = std::min(direct(x, ax, y, ay), shortest(ax, ay));
    if (!std::isfinite(best)) {
        throw MetricError("points are not connected in the mesh");
    }
    return best;
}

std::vector<double> PointGraph::distance_field(const LocatedPoint& x, double cutoff) const
{
    std::vector<double> best(size(), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    for (const auto& a : attachments(x)) {
        if (a.length < best[a.vertex]) {
            best[a.vertex] = a.length;
            queue.emplace(a.length, a.vertex);
        }
    }
    while (!queue.empty()) {
        const auto [d, a] = queue.top();
        queue.pop();
        if (d > best[a]) {
            continue;
        }
        if (d > cutoff) {
            break;
        }
        for (std::uint32_t e = offsets_[a]; e < offsets_[a + 1]; ++e) {
            const std::uint32_t b = targets_[e];
            const double nd = d + static_cast<double>(weights_[e]);
            if (nd < best[b]) {
                best[b] = nd;
                queue.emplace(nd, b);
            }
        }
    }
    return best;
}

double PointGraph::distance(const std::vector<double>& field, const LocatedPoint& x, const LocatedPoint& y) const
{
    if (field.size() != size()) {
        throw MetricError("distance field does not belong to this mesh");
    }
    const auto ay = attachments(y);
    double best = direct(x, attachments(x), y, ay);
    for (const auto& a : ay) {
        best = std::min(best, field[a.vertex] + a.length);
    }
    return best;
}

} // namespace arccrit
