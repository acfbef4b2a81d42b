#pragma once

#include <string>
#include <vector>

#include "relgeo/relative.hpp"

namespace relgeo {

/// Tensor-product quadrature over a chart domain.  Periodic axes get the
/// periodic trapezoid rule (spectral for smooth periodic integrands);
/// non-periodic axes Gauss-Legendre.  Nodes are always interior, so polar
/// chart degeneracies are never evaluated.
struct QuadratureGrid {
    std::vector<std::pair<double, double>> nodes;
    std::vector<double> weights;
    std::string rule;
    int resolution = 0;
    int refinement_level = 0;

    double weight_sum() const;
};

/// Gauss-Legendre nodes/weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

QuadratureGrid build_grid(const SurfacePatch& patch, int resolution);
/// Grid over a sub-rectangle of the domain (used for bump supports).
QuadratureGrid build_subgrid(const Rect& box, int resolution);

/// Deterministic pairwise sum.
double pairwise_sum(std::vector<double>& terms);

/// Weighted sum of a density sampled at the grid nodes (density is taken
/// w.r.t. du dv, i.e. it includes the area element).
double integrate(const QuadratureGrid& grid,
                 const std::function<double(double, double)>& density);

struct RefinedIntegral {
    double value = 0;          // finest level
    double coarse = 0;         // previous level
    double relative_change = 0;
    bool converged = false;
};

RefinedIntegral integrate_refined(const SurfacePatch& patch, int resolution,
                                  const std::function<double(double, double)>& density,
                                  double tol = 1e-8);

/// Euclidean surface area density |xi_u x xi_v| at a node.
double area_density(const SurfacePatch& patch, double u, double v);

/// Integral of f(H, K) dOmega over the patch.
double curvature_functional(const SurfacePatch& patch, const QuadratureGrid& grid,
                            const FunctionOfHK& f);

struct DivergenceReport {
    double max_pointwise_residual = 0;  // |div P^t - (2 - 2 rho H)|
    double integral_residual = 0;       // integration-by-parts residual
};

/// Checks div(P^t) = 2 - 2 rho H pointwise (divergence from analytic jets)
/// and the integrated-by-parts identity for a test function.
DivergenceReport divergence_identity_check(const SurfacePatch& ovaloid, const QuadratureGrid& grid,
                                           const Eigen::Vector3d& origin = Eigen::Vector3d::Zero());

struct IntegralFormulaReport {
    double lhs = 0;   // (1/2) Int <P, grad(H^sigma sqrt(K)^(1-sigma))> dOmega
    double rhs1 = 0;  // Int rho sqrt(K)^(1-sigma) (H^(1+sigma) - sqrt(K)^(1+sigma)) dOmega
    double rhs2 = 0;  // Int H^sigma (H^(1-sigma) - sqrt(K)^(1-sigma)) dOmega
    double residual = 0;   // |lhs - rhs1 - rhs2|
    bool nonnegative = false;  // rhs1 + rhs2 >= -tol
    double min_rhs1_integrand = 0, min_rhs2_integrand = 0;  // pointwise signs
};

/// Evaluates both sides of the sphere-characterizing integral formula on a
/// convex ovaloid (H > 0, K > 0 guarded at every node).
IntegralFormulaReport integral_formula_eval(const SurfacePatch& ovaloid,
                                            const QuadratureGrid& grid, double sigma,
                                            const Eigen::Vector3d& origin = Eigen::Vector3d::Zero());

struct Theorem3Report {
    double defect_min = 0, defect_max = 0;  // rho - f(H^sigma sqrt(K)^(1-sigma))
    double formula_sum = 0;                 // rhs1 + rhs2 of the integral formula
    bool defect_vanishes = false;           // |defect| below tolerance everywhere
    bool contradiction_flagged = false;     // single-signed defect on a non-sphere
};

/// Numerical evidence for the support-function sphere characterization:
/// on a non-sphere the defect field rho - f(...) cannot vanish identically
/// when f is decreasing.
Theorem3Report theorem3_evidence(const SurfacePatch& ovaloid, const QuadratureGrid& grid,
                                 const std::function<double(double)>& f_decreasing, double sigma,
                                 const Eigen::Vector3d& origin = Eigen::Vector3d::Zero());

/// Average of the quadrature-node positions; interior for convex bodies.
Eigen::Vector3d centroid_estimate(const SurfacePatch& patch, const QuadratureGrid& grid);

}  // namespace relgeo
