#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "arccrit/config.hpp"
#include "arccrit/numeric.hpp"
#include "arccrit/series.hpp"

namespace arccrit {

/// Where an arc came from on a germ: its sheet and the sheet parameters as series
/// in the arc's own variable.
struct SheetTrace {
    std::size_t sheet = 0;
    PuiseuxSeries u;
    std::optional<PuiseuxSeries> v;

    friend bool operator==(const SheetTrace&, const SheetTrace&) = default;
};

/// Arc t -> (c_1(t), ..., c_n(t)) leaving the origin; every component has positive order.
///
/// When distance_parametrized() is set, |arc(t)|^2 = t^2 up to truncation.
class Arc {
public:
    explicit Arc(std::vector<PuiseuxSeries> components, bool distance_parametrized = false,
                 std::optional<SheetTrace> trace = std::nullopt);

    [[nodiscard]] const std::vector<PuiseuxSeries>& components() const noexcept { return components_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return components_.size(); }
    [[nodiscard]] bool distance_parametrized() const noexcept { return distance_parametrized_; }
    [[nodiscard]] const std::optional<SheetTrace>& trace() const noexcept { return trace_; }
    /// Smallest component truncation.
    [[nodiscard]] Exponent truncation() const;

    [[nodiscard]] std::vector<double> evaluate(double t) const;

    friend bool operator==(const Arc&, const Arc&) = default;

private:
    std::vector<PuiseuxSeries> components_;
    bool distance_parametrized_ = false;
    std::optional<SheetTrace> trace_;
};

/// Sum of squared components.
PuiseuxSeries squared_norm_series(const Arc& arc);

/// |arc(t)| as a series. Throws ArcError for the zero arc and when the norm has no
/// expansion with rational coefficients.
PuiseuxSeries norm_series(const Arc& arc);

/// Arc reparametrized (after t -> t^(1/m) ramification when needed) so |arc(t)| = t.
Arc reparametrize_by_distance(const Arc& arc);

/// Same image germ with |arc(s)|^2 = scale * s^2; scale must make the leading
/// coefficient a rational square. scale = 1 is distance parametrization.
Arc reparametrize_to_norm_scale(const Arc& arc, const Coeff& scale);

/// Substitutes t -> t^k in every component (and in the trace).
Arc ramify(const Arc& arc, Exponent k);

/// Exact outer order of contact. Arcs that are not distance parametrized are brought
/// to a common norm parametrization first.
ContactOrder tord(const Arc& a, const Arc& b);

/// |a(t) - b(t)| for distance-parametrized arcs, evaluated from the exact difference series.
double outer_distance(const Arc& a, const Arc& b, double t);

/// inf_s |a(t) - b(s)| at each t (a, b at matched distance to the origin). Uses the
/// exact difference series when both arcs admit distance parametrizations.
std::vector<double> point_to_arc_distances(const Arc& a, const Arc& b, const std::vector<double>& scales);

/// Per-scale table and fitted order of t -> inf_s |a(t) - b(s)|.
struct OuterPointToArc {
    ContactOrder order = ContactOrder::at_least(Exponent(0));
    std::vector<double> scales;
    std::vector<double> distances;
    std::optional<PowerLawFit> fit;
};

/// Numeric point-to-arc outer order: golden-section over s per scale, slope fit and
/// rational snapping verified by a pinned-slope refit. Throws FitError when no
/// confident rational exists.
OuterPointToArc outer_point_to_arc(const Arc& a, const Arc& b, const RunConfig& config = {});

inline ContactOrder outer_point_to_arc_order(const Arc& a, const Arc& b, const RunConfig& config = {})
{
    return outer_point_to_arc(a, b, config).order;
}

} // namespace arccrit
