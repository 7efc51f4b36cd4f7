#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arccrit/arc.hpp"
#include "arccrit/config.hpp"
#include "arccrit/germ.hpp"
#include "arccrit/inner.hpp"

namespace arccrit {

enum class Agreement { Equal, Witness, Inconclusive };

std::string to_string(Agreement a);

/// Outer versus inner contact order for one arc pair.
struct CriterionReport {
    std::size_t first = 0;
    std::size_t second = 0;
    ContactOrder outer_order = ContactOrder::at_least(Exponent(0));
    InnerOrderEstimate inner_order;
    Agreement equal = Agreement::Inconclusive;
    /// Slope of log(d_inn / d_out) against log t; absent when the ratio is undefined.
    std::optional<double> ratio_exponent;
    std::vector<std::string> notes;
};

/// Witness: snapped inner order below a finite outer order by more than
/// config.witness_gap. Equal: snapped inner order equals the outer order exactly.
/// Fit and mesh failures become Inconclusive with a note.
CriterionReport compare_orders(const GermModel& g, const Arc& a, const Arc& b, const RunConfig& config = {},
                               MeshCache* cache = nullptr, std::size_t first = 0, std::size_t second = 1);

struct LipschitzProbe {
    bool pass = true;
    double max_ratio = 1.0;
    std::vector<std::pair<double, double>> ratios; // (t, d_inn / d_out)
};

/// d_inn(a(t), b(t)) <= k |a(t) - b(t)| over config.probe_scales. Scales where the
/// arcs meet (d_out = 0) are skipped.
LipschitzProbe lipschitz_probe(const GermModel& g, const Arc& a, const Arc& b, double k, const RunConfig& config = {},
                               MeshCache* cache = nullptr);

struct UltrametricResult {
    enum class Status { Holds, Violated, Inconclusive };
    Status status = Status::Inconclusive;
    std::array<ContactOrder, 3> orders{ContactOrder::at_least(Exponent(0)), ContactOrder::at_least(Exponent(0)),
                                       ContactOrder::at_least(Exponent(0))}; // ascending
};

/// The two smallest of the three pairwise tords coincide. Inconclusive when any of
/// them is truncation-limited.
UltrametricResult ultrametric_check(const Arc& a, const Arc& b, const Arc& c);

struct PsiRow {
    double t = 0.0;
    std::size_t pair = 0;
    double d_outer = 0.0;
    double d_inner = 0.0;
};

struct PsiScatter {
    std::vector<PsiRow> rows;                           // scale-major
    std::vector<std::pair<double, double>> max_ratio;   // (t, max d_inn / d_out)
    double slope = 0.0;
    double r_squared = 0.0;
    bool tangent = false; // slope <= config.tangency_slope
};

/// Image of psi(x1, x2) = (|x1 - x2|, d_inn(x1, x2)) on random point pairs at each of
/// config.scales. Pair shapes are drawn once from config.seed and rescaled with t, so
/// every scale sees the same configurations; half of them mirror the first point onto
/// another sheet. Tangency to the d_inn axis shows as an unbounded ratio.
PsiScatter psi_scatter(const GermModel& g, const RunConfig& config = {}, MeshCache* cache = nullptr);

/// CSV with header t,pair,d_outer,d_inner,ratio.
void write_psi_csv(std::ostream& os, const PsiScatter& s);

struct Verdict {
    enum class Outcome { NotNormallyEmbedded, NoWitnessFound };
    Outcome outcome = Outcome::NoWitnessFound;
    std::string germ;
    std::size_t budget = 0;
    std::uint64_t seed = 0;
    std::vector<Arc> arcs;
    std::vector<CriterionReport> reports;
    std::optional<std::size_t> witness; // index into reports
    PsiScatter psi;
    std::vector<std::pair<double, double>> max_lipschitz_ratio; // (t, max over pairs)
    std::optional<Exponent> min_order_gap;                      // min of outer - snapped inner
    std::vector<std::size_t> inconclusive;                       // indices into reports
    std::vector<std::string> notes;
};

std::string to_string(Verdict::Outcome o);

/// Samples `budget` arcs, compares orders on every pair and runs psi_scatter. A
/// witness is reported only when the order comparison and psi tangency agree.
Verdict verdict(const GermModel& g, std::size_t budget, const RunConfig& config = {});

} // namespace arccrit
