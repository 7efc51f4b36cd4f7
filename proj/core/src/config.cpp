#include "arccrit/config.hpp"

#include <cmath>

#include "arccrit/error.hpp"

namespace arccrit {

std::vector<double> ScaleSpec::values() const
{
    std::vector<double> out;
    out.reserve(size());
    for (int k = k_min; k <= k_max; ++k) {
        out.push_back(std::pow(base, k));
    }
    return out;
}

namespace {

void check_scales(const ScaleSpec& s, const char* name)
{
    if (s.k_min >= s.k_max) {
        throw SpecError(std::string(name) + ": k_min must be less than k_max");
    }
    if (!(s.base > 0.0 && s.base < 1.0)) {
        throw SpecError(std::string(name) + ": base must lie in (0, 1)");
    }
}

} // namespace

void RunConfig::validate() const
{
    if (truncation <= Exponent(0)) {
        throw SpecError("truncation must be positive");
    }
    if (max_ramification < 1) {
        throw SpecError("max_ramification must be at least 1");
    }
    check_scales(scales, "scales");
    check_scales(outer_scales, "outer_scales");
    check_scales(probe_scales, "probe_scales");
    if (scales.size() < 5) {
        throw SpecError("scales: at least five scales are required");
    }
    if (resolution_divisor < 8) {
        throw SpecError("resolution_divisor must be at least 8");
    }
    if (snap_denominator < 1) {
        throw SpecError("snap_denominator must be positive");
    }
    if (!(snap_tolerance > 0.0) || !(witness_gap > 0.0) || !(chain_tolerance > 0.0)) {
        throw SpecError("tolerances must be positive");
    }
    if (!(min_r_squared > 0.0 && min_r_squared <= 1.0)) {
        throw SpecError("min_r_squared must lie in (0, 1]");
    }
    if (pairs_per_scale < 16) {
        throw SpecError("pairs_per_scale must be at least 16");
    }
    if (lipschitz_ks.empty()) {
        throw SpecError("lipschitz_ks must not be empty");
    }
    for (double k : lipschitz_ks) {
        if (!(k > 0.0)) {
            throw SpecError("lipschitz constants must be positive");
        }
    }
    if (chain_iterations < 1) {
        throw SpecError("chain_iterations must be positive");
    }
}

} // namespace arccrit
