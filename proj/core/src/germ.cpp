#include "arccrit/germ.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "arccrit/error.hpp"
#include "arccrit/numeric.hpp"

namespace arccrit {

namespace {

double monomial_value(const Monomial& m, double u, double v)
{
    double out = m.coeff.get_d();
    if (!m.u_exp.is_zero()) {
        out *= m.u_exp.is_integer() ? std::pow(u, static_cast<double>(m.u_exp.num())) : std::pow(u, m.u_exp.to_double());
    }
    if (m.v_exp != 0) {
        out *= std::pow(v, static_cast<double>(m.v_exp));
    }
    return out;
}

double sum_value(const std::vector<Monomial>& ms, double u, double v)
{
    double s = 0.0;
    for (const auto& m : ms) {
        s += monomial_value(m, u, v);
    }
    return s;
}

PuiseuxSeries sum_series(const std::vector<Monomial>& ms, const PuiseuxSeries& u, const PuiseuxSeries& v)
{
    const Exponent trunc = std::min(u.truncation(), v.truncation());
    const std::int64_t ram = std::min(u.max_ramification(), v.max_ramification());
    PuiseuxSeries s(trunc, ram);
    for (const auto& m : ms) {
        PuiseuxSeries term = PuiseuxSeries::constant(m.coeff, trunc, ram);
        if (!m.u_exp.is_zero()) {
            if (u.is_zero()) {
                continue;
            }
            term = term * pow(u, m.u_exp);
        }
        if (m.v_exp != 0) {
            if (v.is_zero()) {
                continue;
            }
            term = term * int_pow(v, static_cast<unsigned>(m.v_exp));
        }
        s = s + term;
    }
    return s;
}

double norm_at(const Sheet& s, double u, double v)
{
    const auto x = s.evaluate(u, v);
    return euclidean_norm(x);
}

} // namespace

double RationalMap::evaluate(double u, double v) const
{
    const double num = sum_value(numerator, u, v);
    return denominator.empty() ? num : num / sum_value(denominator, u, v);
}

PuiseuxSeries RationalMap::evaluate(const PuiseuxSeries& u, const PuiseuxSeries& v) const
{
    const PuiseuxSeries num = sum_series(numerator, u, v);
    if (denominator.empty()) {
        return num;
    }
    return num * reciprocal(sum_series(denominator, u, v));
}

Sheet::Sheet(int parameter_dim, std::vector<RationalMap> components, Domain domain)
    : parameter_dim_(parameter_dim), components_(std::move(components)), domain_(std::move(domain))
{
    if (parameter_dim_ != 1 && parameter_dim_ != 2) {
        throw GermError("sheet parameter_dim must be 1 or 2");
    }
    if (components_.empty()) {
        throw GermError("sheet needs at least one component");
    }
    if (!(domain_.u_lo <= 0 && domain_.u_hi >= 0 && domain_.u_lo < domain_.u_hi)) {
        throw GermError("sheet domain: u range must contain 0 and be non-empty");
    }
    if (parameter_dim_ == 2 && !(domain_.v_lo < domain_.v_hi)) {
        throw GermError("sheet domain: v range must be non-empty");
    }
    radial_ = parameter_dim_ == 2;
    for (const auto& c : components_) {
        for (const auto* list : {&c.numerator, &c.denominator}) {
            for (const auto& m : *list) {
                if (m.coeff == 0) {
                    throw GermError("sheet map has a zero coefficient");
                }
                if (m.u_exp < Exponent(0) || m.v_exp < 0) {
                    throw GermError("sheet map exponents must be non-negative");
                }
                if (parameter_dim_ == 1 && m.v_exp != 0) {
                    throw GermError("one-parameter sheet map uses v");
                }
                if (!m.u_exp.is_integer() && domain_.u_lo < 0) {
                    throw GermError("fractional power of u needs u >= 0 on the domain");
                }
            }
        }
        for (const auto& m : c.numerator) {
            if (m.u_exp.is_zero()) {
                radial_ = false;
                if (m.v_exp == 0) {
                    throw GermError("sheet map does not vanish at the parameter corner");
                }
            }
        }
        if (!c.denominator.empty()) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (const auto& m : c.denominator) {
                if (!m.u_exp.is_zero()) {
                    throw GermError("sheet map denominators may depend on v only");
                }
            }
            const double a = domain_.v_lo.get_d();
            const double b = domain_.v_hi.get_d();
            for (int i = 0; i <= 256; ++i) {
                const double d = sum_value(c.denominator, 0.0, a + (b - a) * i / 256.0);
                lo = std::min(lo, d);
                hi = std::max(hi, d);
            }
            if (!(lo > 1e-9 || hi < -1e-9)) {
                throw GermError("sheet map denominator vanishes on the domain");
            }
        }
    }
    if (parameter_dim_ == 2 && !radial_ && !(domain_.v_lo <= 0 && domain_.v_hi >= 0)) {
        throw GermError("sheet domain must contain the corner (0, 0)");
    }
    auto compile = [](const std::vector<Monomial>& ms) {
        std::vector<FastMonomial> out;
        for (const auto& m : ms) {
            const bool integral = m.u_exp.is_integer() && m.u_exp.num() <= 64;
            out.push_back({m.coeff.get_d(), m.u_exp.to_double(), integral ? static_cast<int>(m.u_exp.num()) : -1,
                           static_cast<int>(m.v_exp)});
        }
        return out;
    };
    for (const auto& c : components_) {
        fast_.push_back({compile(c.numerator), compile(c.denominator)});
    }
}

namespace {

double ipow(double x, int n)
{
    double r = 1.0;
    for (; n > 0; --n) {
        r *= x;
    }
    return r;
}

} // namespace

double Sheet::eval_fast(const std::vector<FastMonomial>& ms, double u, double v)
{
    double s = 0.0;
    for (const auto& m : ms) {
        const double pu = m.u_int >= 0 ? ipow(u, m.u_int) : std::pow(u, m.u_exp);
        s += m.coeff * pu * ipow(v, m.v_exp);
    }
    return s;
}

std::vector<double> Sheet::evaluate(double u, double v) const
{
    std::vector<double> out;
    out.reserve(fast_.size());
    for (const auto& c : fast_) {
        const double num = eval_fast(c.numerator, u, v);
        out.push_back(c.denominator.empty() ? num : num / eval_fast(c.denominator, u, v));
    }
    return out;
}

std::vector<PuiseuxSeries> Sheet::evaluate(const PuiseuxSeries& u, const PuiseuxSeries& v) const
{
    std::vector<PuiseuxSeries> out;
    out.reserve(components_.size());
    for (const auto& c : components_) {
        out.push_back(c.evaluate(u, v));
    }
    return out;
}

GermModel::GermModel(std::string name, std::vector<Sheet> sheets, std::optional<PancakeDecomposition> pancakes)
    : name_(std::move(name)), sheets_(std::move(sheets)), pancakes_(std::move(pancakes))
{
    if (sheets_.empty()) {
        throw GermError("germ needs at least one sheet");
    }
    for (const auto& s : sheets_) {
        if (s.dimension() != sheets_.front().dimension()) {
            throw GermError("sheets disagree on the ambient dimension");
        }
    }
    if (!pancakes_) {
        return;
    }
    std::vector<bool> covered(sheets_.size(), false);
    for (const auto& p : pancakes_->pancakes) {
        if (p.sheets.empty()) {
            throw GermError("empty pancake");
        }
        for (std::size_t s : p.sheets) {
            if (s >= sheets_.size()) {
                throw GermError("pancake refers to a missing sheet");
            }
            covered[s] = true;
        }
    }
    if (std::find(covered.begin(), covered.end(), false) != covered.end()) {
        throw GermError("pancakes do not cover every sheet");
    }
    const std::size_t np = pancakes_->pancakes.size();
    for (const auto& adj : pancakes_->adjacency) {
        if (adj.a >= np || adj.b >= np || adj.a == adj.b) {
            throw GermError("adjacency refers to a missing pancake");
        }
        for (const auto& c : adj.curves) {
            const auto& pa = pancakes_->pancakes[adj.a].sheets;
            const auto& pb = pancakes_->pancakes[adj.b].sheets;
            const bool member = std::find(pa.begin(), pa.end(), c.sheet) != pa.end() ||
                                std::find(pb.begin(), pb.end(), c.sheet) != pb.end();
            if (!member || sheets_[c.sheet].parameter_dim() != 2) {
                throw GermError("boundary curve must be an edge of a two-parameter sheet in either pancake");
            }
        }
    }
}

std::vector<std::size_t> GermModel::pancakes_of_sheet(std::size_t sheet) const
{
    std::vector<std::size_t> out;
    if (!pancakes_) {
        return out;
    }
    for (std::size_t i = 0; i < pancakes_->pancakes.size(); ++i) {
        const auto& s = pancakes_->pancakes[i].sheets;
        if (std::find(s.begin(), s.end(), sheet) != s.end()) {
            out.push_back(i);
        }
    }
    return out;
}

namespace {

Monomial mono(Coeff c, Exponent u, std::int64_t v = 0) { return Monomial{std::move(c), u, v}; }

// Rational half circle ((1-v^2), 2v) / (1+v^2) for v in [-1, 1], scaled by sign * c * u^e.
std::array<RationalMap, 2> circle(int sign, const Coeff& c, Exponent e)
{
    const std::vector<Monomial> den{mono(1, Exponent(0)), mono(1, Exponent(0), 2)};
    RationalMap x{{mono(sign * c, e), mono(-sign * c, e, 2)}, den};
    RationalMap y{{mono(2 * sign * c, e, 1)}, den};
    return {x, y};
}

Domain radial_domain() { return Domain{0, 1, -1, 1}; }

Coeff param(const std::vector<Coeff>& params, std::size_t i, const Coeff& fallback)
{
    return i < params.size() ? params[i] : fallback;
}

void expect_params(const std::string& family, const std::vector<Coeff>& params, std::size_t max)
{
    if (params.size() > max) {
        throw GermError(family + ": expected at most " + std::to_string(max) + " parameters");
    }
}

std::string coeff_string(const Coeff& c) { return c.get_str(); }

GermModel circle_germ(const std::string& name, Exponent radius_exp, const Coeff& height)
{
    std::vector<Sheet> sheets;
    for (int sign : {1, -1}) {
        auto [x, y] = circle(sign, 1, radius_exp);
        RationalMap z{{mono(height, Exponent(1))}, {}};
        sheets.emplace_back(2, std::vector<RationalMap>{x, y, z}, radial_domain());
    }
    return GermModel(name, std::move(sheets), PancakeDecomposition{{Pancake{{0, 1}}}, {}});
}

} // namespace

GermModel builtin(const std::string& family, const std::vector<Coeff>& params)
{
    if (family == "plane") {
        expect_params(family, params, 0);
        Sheet s(2, {RationalMap{{mono(1, Exponent(1))}, {}}, RationalMap{{mono(1, Exponent(0), 1)}, {}}, RationalMap{}},
                Domain{-1, 1, -1, 1});
        return GermModel("plane", {s}, PancakeDecomposition{{Pancake{{0}}}, {}});
    }
    if (family == "cone") {
        expect_params(family, params, 1);
        const Coeff m = param(params, 0, Coeff(3, 4));
        if (m <= 0) {
            throw GermError("cone: slope must be positive");
        }
        const Coeff n2 = 1 + m * m;
        if (!rational_root(n2, 2)) {
            throw GermError("cone: 1 + m^2 must be the square of a rational");
        }
        return circle_germ("cone(" + coeff_string(m) + ")", Exponent(1), m);
    }
    if (family == "horn") {
        expect_params(family, params, 1);
        const Coeff beta = param(params, 0, Coeff(2));
        if (beta < 1) {
            throw GermError("horn: beta must be at least 1");
        }
        const Exponent e = Exponent(beta.get_num().get_si(), beta.get_den().get_si());
        return circle_germ("horn(" + coeff_string(beta) + ")", e, 1);
    }
    if (family == "cusp") {
        expect_params(family, params, 2);
        const Coeff p = param(params, 0, Coeff(3));
        const Coeff q = param(params, 1, Coeff(2));
        if (p.get_den() != 1 || q.get_den() != 1 || q < 1 || p <= q) {
            throw GermError("cusp: need integers p > q >= 1");
        }
        const Exponent e(p.get_num().get_si(), q.get_num().get_si());
        std::vector<Sheet> sheets;
        for (int sign : {1, -1}) {
            sheets.emplace_back(1,
                                std::vector<RationalMap>{RationalMap{{mono(sign, e)}, {}},
                                                         RationalMap{{mono(1, Exponent(1))}, {}}},
                                Domain{0, 1, 0, 0});
        }
        PancakeDecomposition pd{{Pancake{{0}}, Pancake{{1}}}, {Adjacency{0, 1, {}}}};
        return GermModel("cusp(" + coeff_string(p) + "," + coeff_string(q) + ")", std::move(sheets), std::move(pd));
    }
    if (family == "complex_cusp") {
        expect_params(family, params, 0);
        // w = +-u * (1 + i v)^2 / (1 + v^2); components Re, Im of w^2 and w^3.
        const std::vector<Monomial> d2{mono(1, Exponent(0)), mono(2, Exponent(0), 2), mono(1, Exponent(0), 4)};
        const std::vector<Monomial> d3{mono(1, Exponent(0)), mono(3, Exponent(0), 2), mono(3, Exponent(0), 4),
                                       mono(1, Exponent(0), 6)};
        std::vector<Sheet> sheets;
        for (int sign : {1, -1}) {
            const Exponent two(2);
            const Exponent three(3);
            RationalMap a{{mono(1, two), mono(-6, two, 2), mono(1, two, 4)}, d2};
            RationalMap b{{mono(4, two, 1), mono(-4, two, 3)}, d2};
            RationalMap c{{mono(sign, three), mono(-15 * sign, three, 2), mono(15 * sign, three, 4), mono(-sign, three, 6)},
                          d3};
            RationalMap d{{mono(6 * sign, three, 1), mono(-20 * sign, three, 3), mono(6 * sign, three, 5)}, d3};
            sheets.emplace_back(2, std::vector<RationalMap>{a, b, c, d}, radial_domain());
        }
        return GermModel("complex_cusp", std::move(sheets));
    }
    throw GermError("unknown germ family '" + family + "'");
}

LocatedPoint make_point(const GermModel& g, std::size_t sheet, double u, double v)
{
    if (sheet >= g.sheets().size()) {
        throw GermError("no such sheet");
    }
    return LocatedPoint{sheet, u, v, g.sheets()[sheet].evaluate(u, v)};
}

namespace {

struct RayGeometry {
    double rho_max = 0.0;
    double du = 1.0;
    double dv = 0.0;
    double v0 = 0.0;
};

RayGeometry ray_geometry(const Sheet& s, const ParameterRay& ray)
{
    const Domain& d = s.domain();
    RayGeometry r;
    if (s.parameter_dim() == 1 || s.radial()) {
        const bool forward = s.parameter_dim() == 2 || std::cos(ray.phi) >= 0.0;
        r.du = forward ? 1.0 : -1.0;
        r.rho_max = forward ? d.u_hi.get_d() : -d.u_lo.get_d();
        r.v0 = s.parameter_dim() == 2 ? ray.v : 0.0;
        if (s.parameter_dim() == 2 && (ray.v < d.v_lo.get_d() || ray.v > d.v_hi.get_d())) {
            throw GermError("ray angle outside the sheet domain");
        }
        return r;
    }
    r.du = std::cos(ray.phi);
    r.dv = std::sin(ray.phi);
    r.rho_max = std::numeric_limits<double>::infinity();
    auto clip = [&](double dir, double lo, double hi) {
        if (dir > 1e-15) {
            r.rho_max = std::min(r.rho_max, hi / dir);
        } else if (dir < -1e-15) {
            r.rho_max = std::min(r.rho_max, lo / dir);
        }
    };
    clip(r.du, d.u_lo.get_d(), d.u_hi.get_d());
    clip(r.dv, d.v_lo.get_d(), d.v_hi.get_d());
    return r;
}

double residual(const Sheet& s, double u, double v, const std::vector<double>& x)
{
    return euclidean_distance(s.evaluate(u, v), x);
}

void clamp_to_domain(const Sheet& s, double& u, double& v)
{
    u = std::clamp(u, s.domain().u_lo.get_d(), s.domain().u_hi.get_d());
    if (s.parameter_dim() == 2) {
        v = std::clamp(v, s.domain().v_lo.get_d(), s.domain().v_hi.get_d());
    } else {
        v = 0.0;
    }
}

// Gauss-Newton on |S(u, v) - x| with central-difference Jacobian.
void refine(const Sheet& s, double& u, double& v, const std::vector<double>& x)
{
    const std::size_t n = x.size();
    for (int it = 0; it < 40; ++it) {
        const auto f = s.evaluate(u, v);
        const double hu = 1e-7 * std::max(std::abs(u), 1e-12);
        const double hv = 1e-7 * std::max(std::abs(v), 1e-3);
        const auto fu1 = s.evaluate(u + hu, v);
        const auto fu0 = s.evaluate(u - hu, v);
        std::vector<double> ju(n);
        std::vector<double> jv(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            ju[i] = (fu1[i] - fu0[i]) / (2 * hu);
        }
        if (s.parameter_dim() == 2) {
            const auto fv1 = s.evaluate(u, v + hv);
            const auto fv0 = s.evaluate(u, v - hv);
            for (std::size_t i = 0; i < n; ++i) {
                jv[i] = (fv1[i] - fv0[i]) / (2 * hv);
            }
        }
        double a = 0, b = 0, c = 0, ru = 0, rv = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = x[i] - f[i];
            a += ju[i] * ju[i];
            b += ju[i] * jv[i];
            c += jv[i] * jv[i];
            ru += ju[i] * r;
            rv += jv[i] * r;
        }
        double du = 0, dv = 0;
        const double det = a * c - b * b;
        if (s.parameter_dim() == 2 && std::abs(det) > 1e-300 && c > 0) {
            du = (c * ru - b * rv) / det;
            dv = (a * rv - b * ru) / det;
        } else if (a > 0) {
            du = ru / a;
        }
        double nu = u + du;
        double nv = v + dv;
        clamp_to_domain(s, nu, nv);
        if (residual(s, nu, nv, x) > residual(s, u, v, x)) {
            break;
        }
        const bool done = nu == u && nv == v;
        u = nu;
        v = nv;
        if (done) {
            break;
        }
    }
}

} // namespace

LocatedPoint point_on_ray(const GermModel& g, const ParameterRay& ray, double r)
{
    if (ray.sheet >= g.sheets().size()) {
        throw GermError("no such sheet");
    }
    const Sheet& s = g.sheets()[ray.sheet];
    const RayGeometry geo = ray_geometry(s, ray);
    auto at = [&](double rho) { return std::pair{geo.du * rho, geo.v0 + geo.dv * rho}; };
    auto norm = [&](double rho) {
        const auto [u, v] = at(rho);
        return norm_at(s, u, v);
    };
    if (!(geo.rho_max > 0.0) || norm(geo.rho_max) < r) {
        throw GermError("ray leaves the sheet domain before reaching the requested norm");
    }
    double lo = 0.0;
    double hi = geo.rho_max;
    for (int i = 0; i < 200 && lo < hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) {
            break;
        }
        (norm(mid) < r ? lo : hi) = mid;
    }
    const auto [u, v] = at(std::abs(norm(lo) - r) < std::abs(norm(hi) - r) ? lo : hi);
    return make_point(g, ray.sheet, u, v);
}

LocatedPoint locate(const GermModel& g, const std::vector<double>& x)
{
    if (x.size() != g.ambient_dim()) {
        throw GermError("point has the wrong dimension");
    }
    const double r = euclidean_norm(x);
    if (r == 0.0) {
        const Sheet& s = g.sheets().front();
        const double v = s.radial() ? s.domain().v_lo.get_d() : 0.0;
        return make_point(g, 0, 0.0, v);
    }
    struct Candidate {
        double res;
        std::size_t sheet;
        double u;
        double v;
    };
    std::vector<Candidate> cands;
    for (std::size_t si = 0; si < g.sheets().size(); ++si) {
        const Sheet& s = g.sheets()[si];
        std::vector<ParameterRay> rays;
        if (s.parameter_dim() == 1) {
            rays = {{si, 0.0, 0.0}, {si, 0.0, std::numbers::pi}};
        } else if (s.radial()) {
            const double a = s.domain().v_lo.get_d();
            const double b = s.domain().v_hi.get_d();
            for (int i = 0; i <= 128; ++i) {
                rays.push_back({si, a + (b - a) * i / 128.0, 0.0});
            }
        } else {
            for (int i = 0; i < 256; ++i) {
                rays.push_back({si, 0.0, 2 * std::numbers::pi * i / 256.0});
            }
        }
        for (const auto& ray : rays) {
            try {
                const LocatedPoint p = point_on_ray(g, ray, r);
                cands.push_back({euclidean_distance(p.x, x), si, p.u, p.v});
            } catch (const GermError&) {
            }
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.res < b.res; });
    LocatedPoint best;
    double best_res = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < std::min<std::size_t>(cands.size(), 4); ++i) {
        Candidate c = cands[i];
        const Sheet& s = g.sheets()[c.sheet];
        refine(s, c.u, c.v, x);
        const double res = residual(s, c.u, c.v, x);
        if (res < best_res) {
            best_res = res;
            best = make_point(g, c.sheet, c.u, c.v);
        }
    }
    if (!(best_res <= 1e-9 * r)) {
        throw GermError("point is not on the germ (residual " + std::to_string(best_res) + ")");
    }
    return best;
}

} // namespace arccrit
