#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "arccrit/arc.hpp"
#include "arccrit/germ.hpp"

namespace arccrit {

/// How arcs are drawn on a germ. Exponents and coefficients are picked uniformly
/// from the grids with a seeded generator.
struct SamplingSpec {
    std::vector<Exponent> exponents{Exponent(1), Exponent(5, 4), Exponent(3, 2), Exponent(2), Exponent(5, 2), Exponent(3)};
    std::vector<Coeff> coefficients{Coeff(0), Coeff(1, 2), Coeff(-1, 2), Coeff(1), Coeff(-1), Coeff(2), Coeff(-2)};
    /// Angular offsets for radial sheets; kept away from the domain edges.
    std::vector<Coeff> offsets{Coeff(-2, 3), Coeff(-1, 2), Coeff(-1, 3), Coeff(0), Coeff(1, 3), Coeff(1, 2), Coeff(2, 3)};
    Exponent truncation = kDefaultTruncation;
    std::int64_t max_ramification = kDefaultMaxRamification;
    std::size_t attempts_per_arc = 32;
};

/// Up to `count` pairwise distinct distance-parametrized arcs on g, deterministic in
/// `seed`. Draws cycle through the sheets; draws on a radial germ within one cycle
/// share their angular offset, so opposite sheets yield antipodal arcs. Duplicates
/// (tord AtLeast against an earlier arc) are dropped, so fewer arcs are returned when
/// the germ has fewer distinct ones (a one-parameter sheet carries a single arc germ).
/// Every arc carries its SheetTrace.
std::vector<Arc> sample_arcs(const GermModel& g, std::size_t count, std::uint64_t seed, const SamplingSpec& spec = {});

/// Max over probe parameters of |arc(t) - sheet(u(t), v(t))| / t.
double sheet_residual(const GermModel& g, const Arc& arc);

} // namespace arccrit
