#include "relgeo/geometry.hpp"

namespace relgeo {

ScalarFieldJet ScalarFieldJet::from_series(const Series2& s) {
    ScalarFieldJet j;
    j.value = s.value();
    if (s.order() >= 1) j.d1 = {s.partial(1, 0), s.partial(0, 1)};
    if (s.order() >= 2) {
        j.d2(0, 0) = s.partial(2, 0);
        j.d2(0, 1) = j.d2(1, 0) = s.partial(1, 1);
        j.d2(1, 1) = s.partial(0, 2);
    }
    return j;
}

Eigen::Matrix2d GeomSeries::I_value() const {
    Eigen::Matrix2d m;
    m << I11.value(), I12.value(), I12.value(), I22.value();
    return m;
}

Eigen::Matrix2d GeomSeries::II_value() const {
    Eigen::Matrix2d m;
    m << II11.value(), II12.value(), II12.value(), II22.value();
    return m;
}

GeomSeries geom_series(const SurfacePatch& patch, double u, double v, int k) {
    Vec3Series pos = patch.position_series(u, v, k + 2);
    Vec3Series xu = pos.derivative_u();
    Vec3Series xv = pos.derivative_v();

    Series2 I11 = dot(xu, xu), I12 = dot(xu, xv), I22 = dot(xv, xv);
    Series2 detI = I11 * I22 - I12 * I12;
    if (detI.value() <= 0.0)
        throw DegeneracyError("geom_series: first fundamental form degenerate (immersion failure)");
    Series2 area = sqrt(detI);

    Vec3Series raw = cross(xu, xv);
    Series2 scale = patch.orientation() * inv(area);
    Vec3Series N{scale * raw.x, scale * raw.y, scale * raw.z};

    Vec3Series xuu = xu.derivative_u();
    Vec3Series xuv = xu.derivative_v();
    Vec3Series xvv = xv.derivative_v();
    Series2 II11 = dot(xuu, N), II12 = dot(xuv, N), II22 = dot(xvv, N);
    Series2 detII = II11 * II22 - II12 * II12;

    Series2 K = detII / detI;
    Series2 H = (I22 * II11 - 2.0 * (I12 * II12) + I11 * II22) / (2.0 * detI);

    return GeomSeries{std::move(pos),  std::move(xu),    std::move(xv),  std::move(N),
                      std::move(I11),  std::move(I12),   std::move(I22), std::move(II11),
                      std::move(II12), std::move(II22),  std::move(detI), std::move(detII),
                      std::move(H),    std::move(K),     std::move(area), patch.orientation()};
}

Christoffel christoffel_from_metric(const Eigen::Matrix2d& g, const Eigen::Matrix2d& dg_du,
                                    const Eigen::Matrix2d& dg_dv) {
    double det = g.determinant();
    if (det == 0.0) throw DegeneracyError("christoffel: singular metric");
    Eigen::Matrix2d ginv = g.inverse();

    std::array<Eigen::Matrix2d, 2> dg = {dg_du, dg_dv};
    Christoffel gamma{};
    for (int kdx = 0; kdx < 2; ++kdx)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double sum = 0.0;
                for (int l = 0; l < 2; ++l)
                    sum += ginv(kdx, l) * (dg[static_cast<size_t>(i)](l, j) +
                                           dg[static_cast<size_t>(j)](i, l) -
                                           dg[static_cast<size_t>(l)](i, j));
                gamma[static_cast<size_t>(kdx)][static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    0.5 * sum;
            }
    return gamma;
}

namespace {

Eigen::Matrix2d metric_derivative(const Series2& g11, const Series2& g12, const Series2& g22,
                                  bool wrt_u) {
    Eigen::Matrix2d m;
    int i = wrt_u ? 1 : 0, j = wrt_u ? 0 : 1;
    m << g11.partial(i, j), g12.partial(i, j), g12.partial(i, j), g22.partial(i, j);
    return m;
}

}  // namespace

CurvatureBundle curvature_bundle(const SurfacePatch& patch, double u, double v) {
    GeomSeries gs = geom_series(patch, u, v, 1);

    CurvatureBundle b;
    b.position = gs.pos.value();
    b.xu = gs.xu.value();
    b.xv = gs.xv.value();
    b.N = gs.N.value();
    b.I = gs.I_value();
    b.II = gs.II_value();
    b.detI = gs.detI.value();
    b.detII = gs.detII.value();
    b.H = gs.H.value();
    b.K = gs.K.value();
    b.A = b.I.inverse() * b.II;
    b.ii_degenerate = std::abs(b.detII) <= 1e-12 * b.detI;

    b.christoffel_I = christoffel_from_metric(b.I, metric_derivative(gs.I11, gs.I12, gs.I22, true),
                                              metric_derivative(gs.I11, gs.I12, gs.I22, false));
    if (!b.ii_degenerate)
        b.christoffel_II =
            christoffel_from_metric(b.II, metric_derivative(gs.II11, gs.II12, gs.II22, true),
                                    metric_derivative(gs.II11, gs.II12, gs.II22, false));
    return b;
}

std::pair<ScalarFieldJet, ScalarFieldJet> curvature_field_jets(const SurfacePatch& patch,
                                                               double u, double v) {
    GeomSeries gs = geom_series(patch, u, v, 2);
    return {ScalarFieldJet::from_series(gs.H), ScalarFieldJet::from_series(gs.K)};
}

ScalarFieldJet scalar_field_jet(const SurfacePatch& patch, double u, double v,
                                CurvatureField field) {
    auto [h, k] = curvature_field_jets(patch, u, v);
    return field == CurvatureField::H ? h : k;
}

Eigen::Vector2d grad(Metric metric, const CurvatureBundle& bundle, const ScalarFieldJet& fjet) {
    const Eigen::Matrix2d& g = bundle.metric(metric);
    double det = g.determinant();
    if (det == 0.0) throw DegeneracyError("grad: singular metric");
    return g.inverse() * fjet.d1;
}

std::pair<Eigen::Matrix2d, double> hessian_laplacian(Metric metric, const CurvatureBundle& bundle,
                                                     const ScalarFieldJet& fjet) {
    const Eigen::Matrix2d& g = bundle.metric(metric);
    double det = g.determinant();
    if (det == 0.0) throw DegeneracyError("hessian_laplacian: singular metric");
    const Christoffel& gamma = bundle.christoffel(metric);

    // Covariant Hessian (lower indices): f_{;ij} = f_ij - Gamma^m_{ij} f_m.
    Eigen::Matrix2d hess_lower;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double x = fjet.d2(i, j);
            for (int m = 0; m < 2; ++m)
                x -= gamma[static_cast<size_t>(m)][static_cast<size_t>(i)]
                          [static_cast<size_t>(j)] *
                     fjet.d1(m);
            hess_lower(i, j) = x;
        }
    Eigen::Matrix2d op = g.inverse() * hess_lower;
    return {op, op.trace()};
}

Christoffel difference_tensor(const CurvatureBundle& bundle) {
    if (bundle.ii_degenerate)
        throw DegeneracyError("difference_tensor: second fundamental form degenerate");
    Christoffel L{};
    for (size_t k = 0; k < 2; ++k)
        for (size_t i = 0; i < 2; ++i)
            for (size_t j = 0; j < 2; ++j)
                L[k][i][j] = bundle.christoffel_II[k][i][j] - bundle.christoffel_I[k][i][j];
    return L;
}

double metric_product(Metric metric, const CurvatureBundle& bundle, const Eigen::Vector2d& X,
                      const Eigen::Vector2d& Y) {
    return X.dot(bundle.metric(metric) * Y);
}

double ii_grad_product(const CurvatureBundle& bundle, const ScalarFieldJet& a,
                       const ScalarFieldJet& b) {
    if (bundle.II.determinant() == 0.0)
        throw DegeneracyError("ii_grad_product: singular second fundamental form");
    return a.d1.dot(bundle.II.inverse() * b.d1);
}

double i_grad_product(const CurvatureBundle& bundle, const ScalarFieldJet& a,
                      const ScalarFieldJet& b) {
    return a.d1.dot(bundle.I.inverse() * b.d1);
}

}  // namespace relgeo
