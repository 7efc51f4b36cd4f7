#pragma once

#include <cstdint>
#include <vector>

#include "arccrit/exponent.hpp"
#include "arccrit/series.hpp"

namespace arccrit {

/// Geometric scale sweep t_k = base^k for k = k_min..k_max (decreasing t).
struct ScaleSpec {
    int k_min = 4;
    int k_max = 14;
    double base = 0.5;

    [[nodiscard]] std::vector<double> values() const;
    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(k_max - k_min + 1); }
    friend bool operator==(const ScaleSpec&, const ScaleSpec&) = default;
};

/// Every tunable of a run. Defaults are the documented ones.
struct RunConfig {
    Exponent truncation = kDefaultTruncation;
    std::int64_t max_ramification = kDefaultMaxRamification;

    // Inner-order sweeps: 11 scales from 2^-20 to 2^-40. Quarter-power subleading
    // terms bias slopes at shallower scales; mesh size depends only on t / resolution.
    ScaleSpec scales{10, 20, 0.25};
    // Outer point-to-arc sweep: 12 scales from 2^-8 to 2^-30 (the numeric fallback
    // loses the difference to cancellation much deeper than that).
    ScaleSpec outer_scales{4, 15, 0.25};
    // Lipschitz probe sweep; reaches far enough that t^(-1/2) passes 10^3.
    ScaleSpec probe_scales{4, 24, 0.5};

    int resolution_divisor = 64;
    std::int64_t snap_denominator = 12;
    double snap_tolerance = 0.05;
    double min_r_squared = 0.99;
    double witness_gap = 0.1;
    double tangency_slope = -0.1;
    std::vector<double> lipschitz_ks{10.0, 100.0, 1000.0};
    int pairs_per_scale = 16;
    int chain_iterations = 50;
    double chain_tolerance = 1e-10;
    std::uint64_t seed = 1;

    /// Throws SpecError on inconsistent settings.
    void validate() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

} // namespace arccrit
