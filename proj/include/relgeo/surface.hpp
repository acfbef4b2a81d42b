#pragma once

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "relgeo/expression.hpp"
#include "relgeo/series.hpp"

namespace relgeo {

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Chart value and all parameter partials through order 4 at one point.
/// One entry per unordered multi-index, so mixed partials are symmetric by
/// construction.
struct Jet4 {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    std::map<std::pair<int, int>, Eigen::Vector3d> partials;

    Eigen::Vector3d partial(int i, int j) const {
        auto it = partials.find({i, j});
        if (it == partials.end()) throw std::out_of_range("Jet4: partial not stored");
        return it->second;
    }

    static Jet4 from_series(const Vec3Series& s);
    /// Taylor coefficients from stored partials; valid through order 4.
    Vec3Series to_series(int order) const;
};

struct Rect {
    double u0 = 0, u1 = 1, v0 = 0, v1 = 1;
    bool periodic_u = false, periodic_v = false;

    double width_u() const { return u1 - u0; }
    double width_v() const { return v1 - v0; }
    double diameter() const { return std::hypot(width_u(), width_v()); }

    bool contains(double u, double v) const {
        bool in_u = periodic_u || (u >= u0 && u <= u1);
        bool in_v = periodic_v || (v >= v0 && v <= v1);
        return in_u && in_v;
    }
};

/// Parametric chart with high-order derivative access.
///
/// The evaluator returns the position expanded as a truncated Taylor series
/// at (u, v).  Builtins provide analytic series to arbitrary order;
/// finite-difference charts are capped at order 4 with degraded tolerances.
class SurfacePatch {
public:
    using SeriesEval = std::function<Vec3Series(double, double, int)>;

    SurfacePatch() = default;
    SurfacePatch(Rect domain, SeriesEval eval, double orientation = 1.0)
        : domain_(domain), eval_(std::move(eval)), orientation_(orientation) {}

    const Rect& domain() const { return domain_; }
    double orientation() const { return orientation_; }
    bool closed() const { return closed_; }
    bool convex() const { return convex_; }
    bool analytic() const { return max_jet_order_ == std::numeric_limits<int>::max(); }
    int max_jet_order() const { return max_jet_order_; }
    const std::string& kind() const { return kind_; }
    /// True when the u-axis runs pole to pole (sphere-like closed charts).
    bool polar_u() const { return polar_u_; }

    Vec3Series position_series(double u, double v, int order) const;
    Jet4 jet4(double u, double v) const { return Jet4::from_series(position_series(u, v, 4)); }
    Eigen::Vector3d position(double u, double v) const {
        return position_series(u, v, 0).value();
    }

    SurfacePatch with_orientation(double sign) const {
        SurfacePatch p = *this;
        p.orientation_ = sign;
        return p;
    }

    // Builder-style setters used by the factories.
    SurfacePatch& set_closed(bool c) { closed_ = c; return *this; }
    SurfacePatch& set_convex(bool c) { convex_ = c; return *this; }
    SurfacePatch& set_max_jet_order(int n) { max_jet_order_ = n; return *this; }
    SurfacePatch& set_kind(std::string k) { kind_ = std::move(k); return *this; }
    SurfacePatch& set_polar_u(bool p) { polar_u_ = p; return *this; }

private:
    Rect domain_;
    SeriesEval eval_;
    double orientation_ = 1.0;
    bool closed_ = false;
    bool convex_ = false;
    bool polar_u_ = false;
    int max_jet_order_ = std::numeric_limits<int>::max();
    std::string kind_;
};

/// Quartic normal deformation of a paraboloid: the one-parameter family
/// z-chart + t (a x^4 + b x^2 y^2 + c y^4) N, with N the unit normal of the
/// undeformed paraboloid.
struct ParaboloidFamilySpec {
    double l1 = 1, l2 = 1;  // curvatures at the origin
    double a = 0, b = 0, c = 0;  // quartic coefficients
    double t = 0;  // deformation parameter
};

// Builtin factories.  Ovaloids (sphere, ellipsoid) default to the inward
// orientation, which makes H = 1/r, K = 1/r^2, rho = r > 0 on spheres.
SurfacePatch make_sphere(double radius, const Eigen::Vector3d& center = Eigen::Vector3d::Zero());
SurfacePatch make_ellipsoid(double a, double b, double c);
SurfacePatch make_paraboloid(double l1, double l2, double halfwidth = 2.0);
SurfacePatch make_paraboloid_family(const ParaboloidFamilySpec& spec, double halfwidth = 2.0);
SurfacePatch make_torus(double R, double r);
/// Graph chart z = h(x, y) over [x0,x1]x[y0,y1]; h must evaluate analytically.
SurfacePatch make_graph(const Expression& height, const Rect& box);
SurfacePatch make_graph(std::function<Series2(const Series2&, const Series2&)> height,
                        const Rect& box, std::string kind = "graph");

/// Central-difference jet of a black-box position evaluator.  Order-k
/// partials use step eps^(1/(k+2)) * scale; each stencil is second-order
/// accurate.  Throws DomainError when the stencil would leave a non-periodic
/// domain.
Jet4 fd_jet(const std::function<Eigen::Vector3d(double, double)>& chart, const Rect& domain,
            double u, double v, int order = 4);

/// Wraps a black-box position evaluator as a patch with FD jets (order <= 4).
SurfacePatch make_fd_patch(std::function<Eigen::Vector3d(double, double)> chart, Rect domain,
                           double orientation = 1.0);

}  // namespace relgeo
