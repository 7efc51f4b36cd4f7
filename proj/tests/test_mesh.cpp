#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "arccrit/error.hpp"
#include "arccrit/germ.hpp"
#include "arccrit/mesh.hpp"

using namespace arccrit;
namespace {

double euclid(std::span<const double> a, std::span<const double> b)
{
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    return std::sqrt(s);
}

LocatedPoint at_norm(const GermModel& g, std::size_t sheet, double v, double r, double phi = 0.0)
{
    return point_on_ray(g, ParameterRay{sheet, v, phi}, r);
}

} // namespace

TEST_CASE("plane: orthogonal points at radius t are sqrt(2) t apart")
{
    const GermModel g = builtin("plane");
    const double t = 0.1;
    const PointGraph m = mesh_at_scale(g, t, t / 64);
    CHECK(m.connected());
    const LocatedPoint x = make_point(g, 0, t, 0);
    const LocatedPoint y = make_point(g, 0, 0, t);
    const double d = m.distance(x, y);
    CHECK(d >= 0.1414);
    CHECK(d <= 0.1414214 * 1.05);
    CHECK(m.distance(x, x) == 0.0);
}

TEST_CASE("cusp(3,2): opposite branch points are joined through the origin")
{
    const GermModel g = builtin("cusp");
    for (double t : {1.0 / 16, 1.0 / 256, 1.0 / 4096}) {
        const PointGraph m = mesh_at_scale(g, t, t / 64);
        const LocatedPoint x = at_norm(g, 0, 0, t);
        const LocatedPoint y = at_norm(g, 1, 0, t);
        // |x| + |y| = 2t
        CHECK(m.distance(x, y) == doctest::Approx(2 * t).epsilon(0.05));
        CHECK(m.distance(x, y) >= euclid(x.x, y.x));
    }
}

TEST_CASE("horn(2): antipodal meridian points are about pi z^2 apart")
{
    const GermModel g = builtin("horn");
    // deeper scales put the z^2 circle below the mesh resolution t/64
    for (double t : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
        const PointGraph m = mesh_at_scale(g, t, t / 64);
        const LocatedPoint x = at_norm(g, 0, 0.0, t);
        const LocatedPoint y = at_norm(g, 1, 0.0, t);
        const double z = x.x[2];
        const double d = m.distance(x, y);
        // half the circle of radius z^2 at height z = t + O(t^3)
        CHECK(d <= std::numbers::pi * t * t * 1.05);
        CHECK(d >= 2 * z * z);
        CHECK(d == doctest::Approx(std::numbers::pi * z * z).epsilon(0.05));
    }
}

TEST_CASE("complex cusp: mesh builds connected and bounds antipodal paths")
{
    const GermModel g = builtin("complex_cusp");
    const double t = 1.0 / 64;
    const PointGraph m = mesh_at_scale(g, t, t / 32);
    CHECK(m.connected());
    const LocatedPoint x = at_norm(g, 0, 0.25, t);
    const LocatedPoint y = at_norm(g, 1, 0.25, t);
    // w and -w: Euclidean distance 2|w|^3 but any path on the germ passes near the origin
    const double d = m.distance(x, y);
    CHECK(euclid(x.x, y.x) < 0.5 * t);
    CHECK(d >= 1.9 * t);
    CHECK(d <= 2.2 * t);
}

TEST_CASE("property: graph distance dominates Euclidean distance")
{
    std::mt19937_64 rng(5);
    for (const std::string& name : {"plane", "cone", "horn", "cusp", "complex_cusp"}) {
        CAPTURE(name);
        const GermModel g = builtin(name);
        const double t = 1.0 / 32;
        const PointGraph m = mesh_at_scale(g, t, t / 16);
        std::uniform_int_distribution<std::size_t> pick(0, m.size() - 1);
        for (int k = 0; k < 20; ++k) {
            const std::size_t i = pick(rng);
            const std::size_t j = pick(rng);
            CHECK(m.path_length(i, j) >= euclid(m.point(i), m.point(j)) * (1 - 1e-6));
        }
    }
}

TEST_CASE("property: halving the resolution changes path lengths by less than 1%")
{
    for (const std::string& name : {"plane", "cone", "horn", "cusp", "complex_cusp"}) {
        CAPTURE(name);
        const GermModel g = builtin(name);
        const double t = 1.0 / 32;
        const PointGraph coarse = mesh_at_scale(g, t, t / 64);
        const PointGraph fine = mesh_at_scale(g, t, t / 128);
        const std::size_t last = g.sheets().size() - 1;
        const bool surface = g.sheets()[0].parameter_dim() == 2;
        const double v = surface ? 0.5 * g.sheets()[0].domain().v_hi.get_d() : 0.0;
        const double phi = surface ? 1.0 : 0.0;
        // endpoints at different norms, so lengths stay well above the resolution
        std::vector<std::pair<LocatedPoint, LocatedPoint>> pairs;
        pairs.emplace_back(at_norm(g, 0, v, t, phi), at_norm(g, last, v, 0.5 * t, 2 * phi));
        pairs.emplace_back(at_norm(g, 0, 0, t, 0), at_norm(g, last, 0.5 * v, 0.25 * t, 4 * phi));
        for (const auto& [x, y] : pairs) {
            const double c = coarse.distance(x, y);
            CHECK(std::abs(fine.distance(x, y) - c) <= 0.01 * c);
        }
    }
}

TEST_CASE("mesh_at_scale preconditions")
{
    const GermModel g = builtin("plane");
    CHECK(germ_radius(g) == doctest::Approx(0.25));
    CHECK_THROWS_AS(mesh_at_scale(g, 0.5, 0.01), GermError);
    CHECK_THROWS_AS(mesh_at_scale(g, 0.1, 0.1), GermError);
    CHECK_THROWS_AS(mesh_at_scale(g, -1.0, 0.01), GermError);
    const PointGraph m = mesh_at_scale(g, 0.1, 0.1 / 16);
    CHECK_THROWS_AS((void)m.path_length(0, m.size()), MetricError);
    // a point far outside the 4t window has no nearby vertex
    CHECK_THROWS_AS((void)m.distance(make_point(g, 0, 0.9, 0), make_point(g, 0, 0.1, 0)), MetricError);
}
