#pragma once

#include "relgeo/quadrature.hpp"

namespace relgeo {

struct StepError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class DeformationMode { EuclideanNormal, RelativeNormal };

/// Compact-support normal deformation: points move by t * bump(u,v) along
/// the chosen direction field of the *undeformed* surface.
struct DeformationSpec {
    /// Bump amplitude as an analytic series evaluator (zero series outside
    /// the support box).
    std::function<Series2(const Series2&, const Series2&)> bump_series;
    Rect support;  // strictly inside the chart domain
    DeformationMode mode = DeformationMode::EuclideanNormal;
    std::optional<FunctionOfHK> f;  // required for RelativeNormal mode
    double t_step = 1e-3;

    double bump(double u, double v) const;
};

/// Smooth bump A exp(1 - 1/(1 - s^2)) with s^2 the elliptic radius of the
/// support box; vanishes with all derivatives on the boundary.
DeformationSpec make_bump_spec(const SurfacePatch& patch, double cu, double cv, double ru,
                               double rv, double amplitude,
                               DeformationMode mode = DeformationMode::EuclideanNormal,
                               std::optional<FunctionOfHK> f = std::nullopt);

/// Polynomial bump a u^4 + b u^2 v^2 + c v^4 (not compactly supported; used
/// for the quartic-deformation cross-checks).
DeformationSpec make_quartic_bump_spec(double a, double b, double c, const Rect& support);

/// Euler-Lagrange density of the relative area: Phi = -2 H_{(N_f)} in its
/// expanded form (singular 1/K coefficients guard K != 0).
double phi_density(const SurfacePatch& patch, double u, double v, const FunctionOfHK& f);

/// Euler-Lagrange density of the curvature functional Int f(H,K) dOmega.
double psi_density(const SurfacePatch& patch, double u, double v, const FunctionOfHK& f);

/// First-order variations of H and K under normal deformation with
/// amplitude field psi:
///   dH = 1/2 Lap psi + (2H^2 - K) psi
///   dK = 2KH psi + K Lap_II psi + 1/2 II(grad_II psi, grad_II log|K|).
std::pair<double, double> curvature_variation(const SurfacePatch& patch, double u, double v,
                                              const ScalarFieldJet& psi);

struct Eq9Report {
    Eigen::Vector2d dH_coeffs, dH_expected;  // coefficients of x^2, y^2
    Eigen::Vector2d dK_coeffs, dK_expected;
    double max_deviation = 0;
};

/// Least-squares fit of the quadratic expansion of (dH, dK) near the origin
/// of the quartic paraboloid family against the closed-form coefficients
/// (6a+b, b+6c) and (12 a l2 + 2 b l1, 2 b l2 + 12 c l1).
Eq9Report eq9_expansion_check(const ParaboloidFamilySpec& spec, double probe_radius = 5e-3);

/// Deformed patch with analytically composed jets; the deformation direction
/// is evaluated on the undeformed surface.  RelativeNormal mode supports jet
/// orders up to 2 (enough for curvatures and area elements).
SurfacePatch deform(const SurfacePatch& patch, const DeformationSpec& spec, double t);

enum class Functional { CurvatureFunctional, RelativeAreaFrozen };

/// 4th-order central difference in t of the chosen functional, integrated
/// over the bump support.  CurvatureFunctional endows each deformed surface
/// with its own curvatures; RelativeAreaFrozen transfers y = N_f of the
/// undeformed surface (the gauge) through the Peterson correspondence, which
/// requires the undeformed patch to be convex.
double fd_first_variation(Functional functional, const SurfacePatch& patch,
                          const DeformationSpec& spec, const FunctionOfHK& f, int resolution = 48);

struct VariationReport {
    double dF_fd = 0;         // FD first variation of the curvature functional
    double dF_analytic = 0;   // Int phi f Psi dOmega
    double dArea_analytic = 0;  // -2 Int phi H_{(y)} dOmega_{(y)}
    std::optional<double> dArea_fd;  // FD of the frozen-field relative area
    double alpha = 0, C = 0;  // C = 1/(1-alpha)
    double residual_fd_vs_analytic = 0;   // |dF_fd - dF_analytic| / |dF_fd|
    double residual_identity = 0;         // |dArea_analytic - C dF_fd| / |dF_fd|
    std::optional<double> residual_frozen;  // |dArea_fd - dArea_analytic| / |dArea_analytic|
};

/// Full variational-equivalence report for the Manhart family member alpha.
VariationReport manhart_identity_report(const SurfacePatch& patch, const DeformationSpec& spec,
                                        double alpha, int resolution = 48,
                                        bool with_frozen_fd = false);

struct PdeResiduals {
    std::array<double, 3> uv_form{};      // the (u,v)-coefficient system
    std::array<double, 3> l_form{};       // the raw (l1,l2)-coefficient system
    std::array<double, 3> equivalence{};  // algebraic agreement of the two forms
    double max_uv() const { return std::max({std::abs(uv_form[0]), std::abs(uv_form[1]), std::abs(uv_form[2])}); }
    double max_equiv() const { return std::max({std::abs(equivalence[0]), std::abs(equivalence[1]), std::abs(equivalence[2])}); }
};

/// Residuals of the three PDEs characterizing the Manhart family, evaluated
/// at u = (l1+l2)/2, v = l1 l2, in both algebraic forms.
PdeResiduals pde_residuals(const FunctionOfHK& f, double C, double l1, double l2);

struct SphereConditionReport {
    double fitted_exponent = 0;
    double expected_exponent = 0;  // 2 (C-1) / C
    double q1 = 0;
    double max_relative_deviation = 0;
};

/// Fits f(x, x^2) to a power law in x and compares with the exponent forced
/// by criticality on spheres of radius 1/x.
SphereConditionReport sphere_condition_check(const FunctionOfHK& f, double C,
                                             const std::vector<double>& x_grid);

/// Scans C over [c_min, c_max] with the given step and returns the smallest
/// normalized max pointwise residual |Phi - C Psi| / (|Phi| + |Psi|) over
/// the sample set; large values certify that no constant links Phi and Psi.
double phi_psi_separation(const std::vector<std::pair<double, double>>& phi_psi_samples,
                          double c_min = -10.0, double c_max = 10.0, double c_step = 0.01);

}  // namespace relgeo
