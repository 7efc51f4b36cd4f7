#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "arccrit/germ.hpp"

namespace arccrit {

/// Largest scale t for which every sheet covers the ball of radius 4t.
double germ_radius(const GermModel& g);

/// Point cloud on a germ near the origin with Euclidean edge weights. Vertices sit on
/// per-sheet parameter grids (rings of constant u); edges join grid neighbours on the
/// same sheet and coincident vertices of different sheets. Read-only once built.
class PointGraph {
public:
    [[nodiscard]] std::size_t size() const noexcept { return sheet_.size(); }
    [[nodiscard]] std::size_t edge_count() const noexcept { return targets_.size() / 2; }
    [[nodiscard]] std::size_t dimension() const noexcept { return dim_; }
    [[nodiscard]] double scale() const noexcept { return t_; }
    [[nodiscard]] double resolution() const noexcept { return res_; }

    [[nodiscard]] std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
    [[nodiscard]] std::size_t sheet(std::size_t i) const { return sheet_[i]; }

    /// Shortest-path length between two vertices.
    [[nodiscard]] double path_length(std::size_t from, std::size_t to) const;

    /// Shortest path between two germ points, each joined to the grid vertices around
    /// its parameters by straight edges of length at most 2 * resolution. Throws
    /// MetricError when a point is farther than the resolution from every vertex.
    [[nodiscard]] double distance(const LocatedPoint& x, const LocatedPoint& y) const;

    /// Distances from x to every vertex (one Dijkstra), for repeated queries from x.
    /// Vertices farther than `cutoff` may be left at infinity.
    [[nodiscard]] std::vector<double> distance_field(const LocatedPoint& x,
                                                     double cutoff = std::numeric_limits<double>::infinity()) const;
    /// distance(x, y) read off a field computed from x; infinity beyond the field's cutoff.
    [[nodiscard]] double distance(const std::vector<double>& field, const LocatedPoint& x, const LocatedPoint& y) const;

    [[nodiscard]] bool connected() const;

private:
    friend PointGraph mesh_at_scale(const GermModel& g, double t, double resolution);

    struct Level {
        double u;
        std::uint32_t first;
        std::uint32_t count;
    };
    struct Attachment {
        std::uint32_t vertex;
        double length;
    };

    [[nodiscard]] std::vector<Attachment> attachments(const LocatedPoint& p) const;
    double shortest(const std::vector<Attachment>& from, const std::vector<Attachment>& to) const;
    [[nodiscard]] double direct(const LocatedPoint& x, const std::vector<Attachment>& ax, const LocatedPoint& y,
                                const std::vector<Attachment>& ay) const;

    std::size_t dim_ = 0;
    double t_ = 0.0;
    double res_ = 0.0;
    std::vector<double> coords_;
    std::vector<std::uint32_t> sheet_;
    std::vector<double> vparam_;
    std::vector<std::vector<Level>> levels_; // per sheet, increasing u
    std::vector<std::uint32_t> offsets_;     // CSR
    std::vector<std::uint32_t> targets_;
    std::vector<float> weights_;
};

/// Mesh of the germ inside the ball of radius 4t with vertex spacing at most
/// `resolution`. Requires 0 < t <= germ_radius(g) and resolution <= t / 8; throws
/// GermError when the result is disconnected.
PointGraph mesh_at_scale(const GermModel& g, double t, double resolution);

} // namespace arccrit
