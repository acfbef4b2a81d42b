#pragma once

#include <Eigen/Dense>

#include "relgeo/surface.hpp"

namespace relgeo {

struct DegeneracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Christoffel symbols Gamma^k_{ij}, symmetric in the lower indices.
using Christoffel = std::array<std::array<std::array<double, 2>, 2>, 2>;

enum class Metric { I, II };

/// Pointwise fundamental forms, curvatures and connection data.
struct CurvatureBundle {
    Eigen::Vector3d position;
    Eigen::Vector3d xu, xv;
    Eigen::Vector3d N;          // oriented unit normal
    Eigen::Matrix2d I, II;      // fundamental forms
    Eigen::Matrix2d A;          // shape operator I^{-1} II
    double H = 0, K = 0;
    double detI = 0, detII = 0;
    Christoffel christoffel_I{}, christoffel_II{};
    bool ii_degenerate = false;  // |det II| below threshold; K may cross 0

    const Eigen::Matrix2d& metric(Metric m) const { return m == Metric::I ? I : II; }
    const Christoffel& christoffel(Metric m) const {
        return m == Metric::I ? christoffel_I : christoffel_II;
    }
};

/// A scalar field known through second parameter derivatives at a point.
struct ScalarFieldJet {
    double value = 0;
    Eigen::Vector2d d1 = Eigen::Vector2d::Zero();
    Eigen::Matrix2d d2 = Eigen::Matrix2d::Zero();

    static ScalarFieldJet from_series(const Series2& s);
    static ScalarFieldJet constant(double c) { return {c, {}, {}}; }
};

/// All geometric quantities as truncated series at one point; the common
/// entry point for every curvature computation.  The position series is
/// requested at order k+2 so H and K come out valid through order k.
struct GeomSeries {
    Vec3Series pos, xu, xv, N;
    Series2 I11, I12, I22;
    Series2 II11, II12, II22;
    Series2 detI, detII;
    Series2 H, K;
    Series2 area;  // sqrt(det I)
    double orientation;

    Eigen::Matrix2d I_value() const;
    Eigen::Matrix2d II_value() const;
};

GeomSeries geom_series(const SurfacePatch& patch, double u, double v, int k);

/// Full bundle at a point (jets of order >= 3 required).
CurvatureBundle curvature_bundle(const SurfacePatch& patch, double u, double v);

enum class CurvatureField { H, K };

/// Value and parameter partials through order 2 of H or K (order-4 jets).
ScalarFieldJet scalar_field_jet(const SurfacePatch& patch, double u, double v,
                                CurvatureField field);

/// Jets of H and K at once (shares the series work).
std::pair<ScalarFieldJet, ScalarFieldJet> curvature_field_jets(const SurfacePatch& patch,
                                                               double u, double v);

/// Contravariant gradient G^{-1} d1 of the chosen metric.  For metric II
/// this is well-defined also when II is Lorentzian (K < 0).
Eigen::Vector2d grad(Metric metric, const CurvatureBundle& bundle, const ScalarFieldJet& fjet);

/// Hessian operator V -> nabla_V grad(f) in parameter components, and its
/// trace (the Laplacian of the chosen metric).
std::pair<Eigen::Matrix2d, double> hessian_laplacian(Metric metric, const CurvatureBundle& bundle,
                                                     const ScalarFieldJet& fjet);

/// Difference tensor L^k_{ij} = Gamma^II - Gamma^I.
Christoffel difference_tensor(const CurvatureBundle& bundle);

/// Inner product of two contravariant vectors under the chosen metric.
double metric_product(Metric metric, const CurvatureBundle& bundle, const Eigen::Vector2d& X,
                      const Eigen::Vector2d& Y);

/// II(grad_II a, grad_II b) = d1(a)^T II^{-1} d1(b); valid for K < 0 too.
double ii_grad_product(const CurvatureBundle& bundle, const ScalarFieldJet& a,
                       const ScalarFieldJet& b);

/// <grad a, grad b> w.r.t. the first fundamental form.
double i_grad_product(const CurvatureBundle& bundle, const ScalarFieldJet& a,
                      const ScalarFieldJet& b);

/// Christoffel symbols of a (pseudo-)metric given its components and their
/// first parameter derivatives.
Christoffel christoffel_from_metric(const Eigen::Matrix2d& g, const Eigen::Matrix2d& dg_du,
                                    const Eigen::Matrix2d& dg_dv);

}  // namespace relgeo
