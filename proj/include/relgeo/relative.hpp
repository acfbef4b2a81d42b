#pragma once

#include <array>
#include <optional>

#include "relgeo/geometry.hpp"

namespace relgeo {

struct GuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TransversalityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InversionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A nowhere vanishing scalar function f(u, v) with partials through order 3,
/// evaluated at curvature pairs (u, v) = (H, K).
struct FunctionOfHK {
    using Fn = std::function<double(double, double)>;

    Fn f, fu, fv, fuu, fuv, fvv, fuuu, fuuv, fuvv, fvvv;
    std::function<bool(double, double)> guard;  // true when (u,v) is admissible
    std::string name;

    void check_guard(double u, double v) const {
        if (guard && !guard(u, v))
            throw GuardError("FunctionOfHK '" + name + "': (u,v) outside domain guard");
    }

    /// Mixed partial d^{i+j} f / du^i dv^j, i + j <= 3.
    double partial(int i, int j, double u, double v) const;
};

/// Manhart's family f(u,v) = q_i |v|^alpha with the piecewise constants
/// q = (q1, q2, q3) selected by region: q1 for u>0, v>0; q2 for u<0, v>0;
/// q3 for v<0.  The guard excludes v = 0.
FunctionOfHK manhart_f(double alpha, const std::array<double, 3>& q = {1.0, 1.0, 1.0});

FunctionOfHK constant_f(double c);

/// A user function with symbolic partials, each given as an expression in
/// u and v (grammar: + - * / ^, parentheses, abs, log, exp).  Missing
/// higher partials may be omitted only if identically zero is intended.
FunctionOfHK expression_f(const std::string& name,
                          const std::array<std::string, 10>& f_and_partials,
                          std::function<bool(double, double)> guard = nullptr);

/// Checks f_u and f_v against finite differences of f at a guarded point.
double partial_consistency_residual(const FunctionOfHK& f, double u, double v);

/// The relative normal y = f(H,K) N - grad_II f(H,K) at a point.
struct RelativeNormalSample {
    Eigen::Vector3d y;
    double normal_part;               // f(H, K)
    Eigen::Vector2d tangential_part;  // -grad_II f(H,K), parameter components
};

RelativeNormalSample relative_normal(const SurfacePatch& patch, double u, double v,
                                     const FunctionOfHK& f);

/// Parameter-space jet of the composite field f(H, K) (order-4 surface jets).
ScalarFieldJet f_of_curvatures_jet(const SurfacePatch& patch, double u, double v,
                                   const FunctionOfHK& f);
ScalarFieldJet compose_field_jet(const FunctionOfHK& f, const ScalarFieldJet& Hjet,
                                 const ScalarFieldJet& Kjet);

/// A_{(N_f)} = f A + Hs^II_{f(H,K)} - L(grad_II f(H,K), .) in parameter
/// components.
Eigen::Matrix2d relative_shape_operator(const SurfacePatch& patch, double u, double v,
                                        const FunctionOfHK& f);

/// H_{(N_f)} = f H + (1/2) Lap_II f(H,K)
///           - (1/4) II(grad_II log|K|, grad_II f(H,K)).
double relative_mean_curvature(const SurfacePatch& patch, double u, double v,
                               const FunctionOfHK& f);

/// Relative area density det(y, xi_u, xi_v) w.r.t. du dv, normalized by the
/// orientation flag so that y = N yields the positive Euclidean density.
double relative_area_element(const SurfacePatch& patch, double u, double v,
                             const Eigen::Vector3d& y);

struct SupportSample {
    double rho;               // <P - origin, -N>
    Eigen::Vector3d P;        // position - origin
    Eigen::Vector3d Pt;       // tangential part of P
    Eigen::Vector2d Pt_coords;  // parameter components of Pt
};

SupportSample support_function(const SurfacePatch& patch, double u, double v,
                               const Eigen::Vector3d& origin = Eigen::Vector3d::Zero());

/// Parameters where the ovaloid's oriented unit normal equals n (Newton
/// iteration; coarse-grid fallback).  Residual |N(u,v) - n| <= tol.
std::pair<double, double> gauss_map_inverse(const SurfacePatch& ovaloid,
                                            const Eigen::Vector3d& n, double tol = 1e-12);

/// Transfers the gauge field y through the Peterson correspondence: match
/// the target's oriented unit normal on the gauge, return y there (as a
/// free vector).
Eigen::Vector3d peterson_transfer(const SurfacePatch& gauge,
                                  const std::function<Eigen::Vector3d(double, double)>& y_on_gauge,
                                  const SurfacePatch& target, double u, double v);

/// F(G(point)) times the Euclidean area density, where F is the gauge's
/// support function evaluated at the target's oriented unit normal.
double anisotropic_area_density(const SurfacePatch& target, double u, double v,
                                const std::function<double(const Eigen::Vector3d&)>& gauge_support);

/// Closed-form support function of a centered ellipsoid (even in n, so the
/// inward/outward distinction does not matter).
std::function<double(const Eigen::Vector3d&)> ellipsoid_support(double a, double b, double c);

}  // namespace relgeo
