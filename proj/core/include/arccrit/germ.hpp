#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arccrit/series.hpp"

namespace arccrit {

/// c * u^a * v^b with a >= 0 rational and b >= 0 integer.
struct Monomial {
    Coeff coeff;
    Exponent u_exp = Exponent(0);
    std::int64_t v_exp = 0;

    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Sum of numerator monomials over a sum of denominator monomials in v alone.
/// An empty denominator means 1.
struct RationalMap {
    std::vector<Monomial> numerator;
    std::vector<Monomial> denominator;

    [[nodiscard]] double evaluate(double u, double v) const;
    [[nodiscard]] PuiseuxSeries evaluate(const PuiseuxSeries& u, const PuiseuxSeries& v) const;

    friend bool operator==(const RationalMap&, const RationalMap&) = default;
};

/// Parameter box. v bounds are ignored for one-parameter sheets.
struct Domain {
    Coeff u_lo = 0;
    Coeff u_hi = 1;
    Coeff v_lo = 0;
    Coeff v_hi = 0;

    friend bool operator==(const Domain&, const Domain&) = default;
};

class Sheet {
public:
    /// Validates the maps against the domain; throws GermError.
    Sheet(int parameter_dim, std::vector<RationalMap> components, Domain domain);

    [[nodiscard]] int parameter_dim() const noexcept { return parameter_dim_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return components_.size(); }
    [[nodiscard]] const std::vector<RationalMap>& components() const noexcept { return components_; }
    [[nodiscard]] const Domain& domain() const noexcept { return domain_; }

    /// True when the whole edge u = 0 maps to the origin (u is a radius, v an angle).
    [[nodiscard]] bool radial() const noexcept { return radial_; }

    [[nodiscard]] std::vector<double> evaluate(double u, double v = 0.0) const;
    /// Components with u and v replaced by series; v is ignored for one-parameter sheets.
    [[nodiscard]] std::vector<PuiseuxSeries> evaluate(const PuiseuxSeries& u, const PuiseuxSeries& v) const;

    friend bool operator==(const Sheet&, const Sheet&) = default;

private:
    // Double-precision copy of the maps for fast evaluation.
    struct FastMonomial {
        double coeff;
        double u_exp;
        int u_int; // -1 when the u exponent is fractional
        int v_exp;
        friend bool operator==(const FastMonomial&, const FastMonomial&) = default;
    };
    struct FastMap {
        std::vector<FastMonomial> numerator;
        std::vector<FastMonomial> denominator;
        friend bool operator==(const FastMap&, const FastMap&) = default;
    };
    static double eval_fast(const std::vector<FastMonomial>& ms, double u, double v);

    int parameter_dim_;
    std::vector<RationalMap> components_;
    Domain domain_;
    bool radial_ = false;
    std::vector<FastMap> fast_;
};

/// Where two pancakes meet besides the origin: the v = v_lo or v = v_hi edge of a sheet.
struct BoundaryCurve {
    enum class Side { VLow, VHigh };
    std::size_t sheet = 0;
    Side side = Side::VLow;

    friend bool operator==(const BoundaryCurve&, const BoundaryCurve&) = default;
};

struct Pancake {
    std::vector<std::size_t> sheets;
    bool normally_embedded = true;

    friend bool operator==(const Pancake&, const Pancake&) = default;
};

/// Pancakes a and b share the origin and every listed curve.
struct Adjacency {
    std::size_t a = 0;
    std::size_t b = 0;
    std::vector<BoundaryCurve> curves;

    friend bool operator==(const Adjacency&, const Adjacency&) = default;
};

struct PancakeDecomposition {
    std::vector<Pancake> pancakes;
    std::vector<Adjacency> adjacency;

    friend bool operator==(const PancakeDecomposition&, const PancakeDecomposition&) = default;
};

class GermModel {
public:
    /// Throws GermError unless there is a sheet, dimensions agree and pancakes cover every sheet.
    GermModel(std::string name, std::vector<Sheet> sheets, std::optional<PancakeDecomposition> pancakes = std::nullopt);

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] const std::vector<Sheet>& sheets() const noexcept { return sheets_; }
    [[nodiscard]] const std::optional<PancakeDecomposition>& pancakes() const noexcept { return pancakes_; }
    [[nodiscard]] std::size_t ambient_dim() const { return sheets_.front().dimension(); }

    /// Pancakes containing the sheet (empty without a decomposition).
    [[nodiscard]] std::vector<std::size_t> pancakes_of_sheet(std::size_t sheet) const;

    friend bool operator==(const GermModel&, const GermModel&) = default;

private:
    std::string name_;
    std::vector<Sheet> sheets_;
    std::optional<PancakeDecomposition> pancakes_;
};

/// Builtin families: plane, cone [m], horn [beta], cusp [p q], complex_cusp.
/// Throws GermError for an unknown family or invalid parameters.
GermModel builtin(const std::string& family, const std::vector<Coeff>& params = {});

/// A germ point together with the sheet parameters that produce it.
struct LocatedPoint {
    std::size_t sheet = 0;
    double u = 0.0;
    double v = 0.0;
    std::vector<double> x;
};

LocatedPoint make_point(const GermModel& g, std::size_t sheet, double u, double v = 0.0);

/// Finds sheet parameters for x. Throws GermError when x is not on the germ
/// (residual above 1e-9 relative to |x|).
LocatedPoint locate(const GermModel& g, const std::vector<double>& x);

/// A ray from the parameter corner: u = rho (radial and one-parameter sheets, v fixed)
/// or (u, v) = rho * (cos phi, sin phi) otherwise.
struct ParameterRay {
    std::size_t sheet = 0;
    double v = 0.0;
    double phi = 0.0;
};

/// Point on the ray whose ambient norm equals r; throws GermError when the ray
/// leaves the domain first.
LocatedPoint point_on_ray(const GermModel& g, const ParameterRay& ray, double r);

} // namespace arccrit
