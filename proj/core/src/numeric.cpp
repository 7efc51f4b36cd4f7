#include "arccrit/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "arccrit/error.hpp"

namespace arccrit {

namespace {

struct LogSamples {
    std::vector<double> x;
    std::vector<double> y;
};

LogSamples to_logs(std::span<const double> t, std::span<const double> d)
{
    if (t.size() != d.size()) {
        throw FitError("fit: mismatched sample sizes");
    }
    if (t.size() < 2) {
        throw FitError("fit: need at least two samples");
    }
    LogSamples out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] > 0.0) || !(d[i] > 0.0) || !std::isfinite(d[i])) {
            throw FitError("fit: samples must be positive and finite");
        }
        out.x.push_back(std::log(t[i]));
        out.y.push_back(std::log(d[i]));
    }
    return out;
}

double mean(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

} // namespace

PowerLawFit fit_power_law(std::span<const double> t, std::span<const double> d)
{
    const auto logs = to_logs(t, d);
    const double mx = mean(logs.x);
    const double my = mean(logs.y);
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < logs.x.size(); ++i) {
        const double dx = logs.x[i] - mx;
        const double dy = logs.y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) {
        throw FitError("fit: scales are not distinct");
    }
    PowerLawFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy <= 0.0) {
        fit.r_squared = 1.0;
    } else {
        fit.r_squared = std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
    }
    return fit;
}

double fixed_slope_r_squared(std::span<const double> t, std::span<const double> d, double slope)
{
    const auto logs = to_logs(t, d);
    const double my = mean(logs.y);
    double intercept = 0.0;
    for (std::size_t i = 0; i < logs.x.size(); ++i) {
        intercept += logs.y[i] - slope * logs.x[i];
    }
    intercept /= static_cast<double>(logs.x.size());
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < logs.x.size(); ++i) {
        const double r = logs.y[i] - (slope * logs.x[i] + intercept);
        ss_res += r * r;
        ss_tot += (logs.y[i] - my) * (logs.y[i] - my);
    }
    if (ss_tot <= 0.0) {
        return ss_res <= 0.0 ? 1.0 : 0.0;
    }
    return 1.0 - ss_res / ss_tot;
}

double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi, double tolerance,
                               int max_iterations)
{
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < max_iterations && (b - a) > tolerance; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        if (c == d) {
            break;
        }
    }
    return fc < fd ? c : d;
}

std::pair<double, double> grid_then_golden(const std::function<double(double)>& f, double lo, double hi, int samples)
{
    samples = std::max(samples, 3);
    const double step = (hi - lo) / static_cast<double>(samples - 1);
    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const double v = f(lo + step * i);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    const double a = lo + step * std::max(best - 1, 0);
    const double b = lo + step * std::min(best + 1, samples - 1);
    const double x = golden_section_minimize(f, a, b, 0.0, 300);
    const double fx = f(x);
    if (fx < best_val) {
        return {x, fx};
    }
    return {lo + step * best, best_val};
}

double euclidean_distance(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double euclidean_norm(std::span<const double> a)
{
    double s = 0.0;
    for (double x : a) {
        s += x * x;
    }
    return std::sqrt(s);
}

SnappedFit snap_power_law(std::span<const double> t, std::span<const double> d, double tolerance,
                          std::int64_t max_den, double min_r_squared)
{
    SnappedFit out;
    out.fit = fit_power_law(t, d);
    const auto candidate = simplest_rational_near(out.fit.slope, tolerance, max_den);
    if (candidate && out.fit.r_squared >= min_r_squared &&
        fixed_slope_r_squared(t, d, candidate->to_double()) >= min_r_squared) {
        out.snapped = candidate;
    }
    return out;
}

} // namespace arccrit
