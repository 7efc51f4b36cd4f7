#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "arccrit/arc.hpp"
#include "arccrit/config.hpp"
#include "arccrit/germ.hpp"
#include "arccrit/mesh.hpp"

namespace arccrit {

/// Chain metric over the germ's pancake decomposition: the shortest chain
/// x = p_0, ..., p_k = y whose consecutive points share a pancake, intermediate points
/// ranging over the origin and the listed boundary curves. Equals |x - y| when x and y
/// share a pancake. Throws MetricError without a decomposition or connecting chain.
double pancake_distance(const GermModel& g, const LocatedPoint& x, const LocatedPoint& y, const RunConfig& config = {});
/// Same for raw points, located on the germ first (GermError when off the germ).
double pancake_distance(const GermModel& g, const std::vector<double>& x, const std::vector<double>& y,
                        const RunConfig& config = {});

/// Point on an arc at parameter t: from the sheet trace when present, otherwise by
/// locating arc(t) on the germ (GermError when it is off the germ).
LocatedPoint arc_point(const GermModel& g, const Arc& arc, double t);

/// Meshes keyed by (t, resolution), built on first use and shared afterwards.
class MeshCache {
public:
    explicit MeshCache(const GermModel& g) : germ_(&g) {}
    std::shared_ptr<const PointGraph> get(double t, double resolution);

private:
    const GermModel* germ_;
    std::mutex mutex_;
    std::map<std::pair<double, double>, std::shared_ptr<const PointGraph>> meshes_;
};

/// Mesh geodesic distance at scale t.
double inner_distance_numeric(const GermModel& g, const LocatedPoint& x, const LocatedPoint& y, double t,
                              double resolution);
double inner_distance_numeric(MeshCache& cache, const LocatedPoint& x, const LocatedPoint& y, double t,
                              double resolution);

/// Inner distance between two arcs on g at t: the pancake metric when the germ has a
/// decomposition (same-pancake distances come from the exact difference series),
/// otherwise the mesh geodesic at resolution t / divisor.
double inner_arc_distance(const GermModel& g, const Arc& a, const Arc& b, double t, const RunConfig& config,
                          MeshCache* cache = nullptr);

/// Fitted exponent of an inner distance table.
struct InnerOrderEstimate {
    double slope = 0.0;
    std::optional<Exponent> snapped;
    double r_squared = 0.0;
    std::vector<std::pair<double, double>> scales; // (t, distance), t decreasing
    /// The arcs coincide up to truncation (every distance exactly zero, or exact
    /// outer order AtLeast); no fit is attempted.
    bool degenerate = false;
};

/// Builds an estimate from a distance table (shared by the inner and ratio sweeps).
InnerOrderEstimate estimate_order(const std::vector<double>& t, const std::vector<double>& d, const RunConfig& config,
                                  bool coincident = false);

/// tord_inn: order of the inner distance between a(t) and b(t) over config.scales.
InnerOrderEstimate inner_contact_order(const GermModel& g, const Arc& a, const Arc& b, const RunConfig& config = {},
                                       MeshCache* cache = nullptr);

/// Order of t -> inf_s d_inn(a(t), b(s)) over config.scales.
InnerOrderEstimate inner_point_to_arc_order(const GermModel& g, const Arc& a, const Arc& b,
                                            const RunConfig& config = {}, MeshCache* cache = nullptr);

/// One row of a per-scale distance table.
struct DistanceRow {
    double t = 0.0;
    double d_outer = 0.0;
    double d_inner = 0.0;
};

/// CSV with header t,d_outer,d_inner,ratio (ratio = d_inner / d_outer).
void write_distance_csv(std::ostream& os, const std::vector<DistanceRow>& rows);

} // namespace arccrit
