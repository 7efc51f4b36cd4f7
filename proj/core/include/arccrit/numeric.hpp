#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "arccrit/exponent.hpp"

namespace arccrit {

/// Least-squares line through (log t, log d).
struct PowerLawFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Fits log(d) = slope * log(t) + intercept. Every t and d must be positive.
PowerLawFit fit_power_law(std::span<const double> t, std::span<const double> d);

/// R^2 of the best line through (log t, log d) whose slope is pinned to `slope`.
double fixed_slope_r_squared(std::span<const double> t, std::span<const double> d, double slope);

/// Golden-section search for a minimizer of a unimodal function on [lo, hi].
double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double tolerance = 0.0, int max_iterations = 200);

/// Minimizes over a uniform grid of `samples` points then refines with golden section
/// around the best grid point. Returns {argmin, min}.
std::pair<double, double> grid_then_golden(const std::function<double(double)>& f, double lo, double hi,
                                           int samples = 65);

/// Power-law fit with its exponent snapped to the simplest nearby rational. `snapped`
/// is set only when |slope - p/q| <= tolerance, q <= max_den, R^2 >= min_r_squared and
/// the refit with the slope pinned to p/q also reaches min_r_squared.
struct SnappedFit {
    PowerLawFit fit;
    std::optional<Exponent> snapped;
};

SnappedFit snap_power_law(std::span<const double> t, std::span<const double> d, double tolerance,
                          std::int64_t max_den, double min_r_squared);

/// Runs f(0..n-1) on up to hardware_concurrency threads; results keep index order.
/// The first exception thrown by any task is rethrown.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, F&& f)
{
    std::vector<std::optional<R>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    const std::size_t workers = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
    auto run = [&](std::size_t w) {
        for (std::size_t i = w; i < n; i += workers) {
            try {
                slots[i].emplace(f(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(run, w);
        }
    }
    std::vector<R> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (errors[i]) {
            std::rethrow_exception(errors[i]);
        }
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b);
double euclidean_norm(std::span<const double> a);

} // namespace arccrit
