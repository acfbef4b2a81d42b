#include "relgeo/relative.hpp"

#include <cmath>

namespace relgeo {

double FunctionOfHK::partial(int i, int j, double u, double v) const {
    check_guard(u, v);
    switch (i * 10 + j) {
        case 0: return f(u, v);
        case 10: return fu(u, v);
        case 1: return fv(u, v);
        case 20: return fuu(u, v);
        case 11: return fuv(u, v);
        case 2: return fvv(u, v);
        case 30: return fuuu(u, v);
        case 21: return fuuv(u, v);
        case 12: return fuvv(u, v);
        case 3: return fvvv(u, v);
        default: throw std::invalid_argument("FunctionOfHK: partials available through order 3");
    }
}

FunctionOfHK manhart_f(double alpha, const std::array<double, 3>& q) {
    for (double qi : q)
        if (qi == 0.0) throw std::invalid_argument("manhart_f: q constants must be non-zero");

    auto pick_q = [q](double u, double v) {
        if (v < 0.0) return q[2];
        return (u < 0.0) ? q[1] : q[0];
    };
    // d^k/dv^k |v|^alpha, with the sign of v carried by odd derivatives.
    auto dv = [alpha, pick_q](int k, double u, double v) {
        double c = pick_q(u, v);
        for (int m = 0; m < k; ++m) c *= (alpha - m);
        double s = (v < 0.0 && k % 2 == 1) ? -1.0 : 1.0;
        return c * s * std::pow(std::abs(v), alpha - k);
    };

    FunctionOfHK f;
    f.name = "manhart(alpha=" + std::to_string(alpha) + ")";
    f.guard = [](double, double v) { return v != 0.0 && std::isfinite(v); };
    f.f = [dv](double u, double v) { return dv(0, u, v); };
    f.fv = [dv](double u, double v) { return dv(1, u, v); };
    f.fvv = [dv](double u, double v) { return dv(2, u, v); };
    f.fvvv = [dv](double u, double v) { return dv(3, u, v); };
    auto zero = [](double, double) { return 0.0; };
    f.fu = zero;
    f.fuu = zero;
    f.fuv = zero;
    f.fuuu = zero;
    f.fuuv = zero;
    f.fuvv = zero;
    return f;
}

FunctionOfHK constant_f(double c) {
    if (c == 0.0) throw std::invalid_argument("constant_f: must be non-zero");
    FunctionOfHK f;
    f.name = "constant(" + std::to_string(c) + ")";
    auto zero = [](double, double) { return 0.0; };
    f.f = [c](double, double) { return c; };
    f.fu = zero;
    f.fv = zero;
    f.fuu = zero;
    f.fuv = zero;
    f.fvv = zero;
    f.fuuu = zero;
    f.fuuv = zero;
    f.fuvv = zero;
    f.fvvv = zero;
    return f;
}

FunctionOfHK expression_f(const std::string& name,
                          const std::array<std::string, 10>& f_and_partials,
                          std::function<bool(double, double)> guard) {
    std::array<Expression, 10> exprs = {
        Expression::parse(f_and_partials[0]), Expression::parse(f_and_partials[1]),
        Expression::parse(f_and_partials[2]), Expression::parse(f_and_partials[3]),
        Expression::parse(f_and_partials[4]), Expression::parse(f_and_partials[5]),
        Expression::parse(f_and_partials[6]), Expression::parse(f_and_partials[7]),
        Expression::parse(f_and_partials[8]), Expression::parse(f_and_partials[9])};

    auto wrap = [](const Expression& e) {
        return [e](double u, double v) { return e.eval(u, v); };
    };

    FunctionOfHK f;
    f.name = name;
    f.guard = std::move(guard);
    f.f = wrap(exprs[0]);
    f.fu = wrap(exprs[1]);
    f.fv = wrap(exprs[2]);
    f.fuu = wrap(exprs[3]);
    f.fuv = wrap(exprs[4]);
    f.fvv = wrap(exprs[5]);
    f.fuuu = wrap(exprs[6]);
    f.fuuv = wrap(exprs[7]);
    f.fuvv = wrap(exprs[8]);
    f.fvvv = wrap(exprs[9]);
    return f;
}

double partial_consistency_residual(const FunctionOfHK& f, double u, double v) {
    const double h = 1e-6 * std::max({1.0, std::abs(u), std::abs(v)});
    double fd_u = (f.f(u + h, v) - f.f(u - h, v)) / (2 * h);
    double fd_v = (f.f(u, v + h) - f.f(u, v - h)) / (2 * h);
    return std::max(std::abs(fd_u - f.fu(u, v)), std::abs(fd_v - f.fv(u, v)));
}

RelativeNormalSample relative_normal(const SurfacePatch& patch, double u, double v,
                                     const FunctionOfHK& f) {
    GeomSeries gs = geom_series(patch, u, v, 1);
    double H = gs.H.value(), K = gs.K.value();
    f.check_guard(H, K);

    Eigen::Matrix2d II = gs.II_value();
    if (II.determinant() == 0.0)
        throw DegeneracyError("relative_normal: second fundamental form degenerate");

    Eigen::Vector2d dH{gs.H.partial(1, 0), gs.H.partial(0, 1)};
    Eigen::Vector2d dK{gs.K.partial(1, 0), gs.K.partial(0, 1)};
    Eigen::Vector2d df = f.fu(H, K) * dH + f.fv(H, K) * dK;
    Eigen::Vector2d g = II.inverse() * df;  // grad_II f(H,K)

    RelativeNormalSample sample;
    sample.normal_part = f.f(H, K);
    sample.tangential_part = -g;
    sample.y = sample.normal_part * gs.N.value() - g(0) * gs.xu.value() - g(1) * gs.xv.value();
    return sample;
}

ScalarFieldJet compose_field_jet(const FunctionOfHK& f, const ScalarFieldJet& Hjet,
                                 const ScalarFieldJet& Kjet) {
    double H = Hjet.value, K = Kjet.value;
    f.check_guard(H, K);
    double fu = f.fu(H, K), fv = f.fv(H, K);
    double fuu = f.fuu(H, K), fuv = f.fuv(H, K), fvv = f.fvv(H, K);

    ScalarFieldJet out;
    out.value = f.f(H, K);
    out.d1 = fu * Hjet.d1 + fv * Kjet.d1;
    out.d2 = fu * Hjet.d2 + fv * Kjet.d2 + fuu * Hjet.d1 * Hjet.d1.transpose() +
             fuv * (Hjet.d1 * Kjet.d1.transpose() + Kjet.d1 * Hjet.d1.transpose()) +
             fvv * Kjet.d1 * Kjet.d1.transpose();
    return out;
}

ScalarFieldJet f_of_curvatures_jet(const SurfacePatch& patch, double u, double v,
                                   const FunctionOfHK& f) {
    auto [Hjet, Kjet] = curvature_field_jets(patch, u, v);
    return compose_field_jet(f, Hjet, Kjet);
}

Eigen::Matrix2d relative_shape_operator(const SurfacePatch& patch, double u, double v,
                                        const FunctionOfHK& f) {
    CurvatureBundle b = curvature_bundle(patch, u, v);
    if (b.ii_degenerate)
        throw DegeneracyError("relative_shape_operator: second fundamental form degenerate");
    ScalarFieldJet fjet = f_of_curvatures_jet(patch, u, v, f);

    auto [hess_ii, lap_ii] = hessian_laplacian(Metric::II, b, fjet);
    (void)lap_ii;
    Eigen::Vector2d g = grad(Metric::II, b, fjet);
    Christoffel L = difference_tensor(b);

    Eigen::Matrix2d Lg;  // V -> L(grad_II f, V)
    for (size_t i = 0; i < 2; ++i)
        for (size_t k = 0; k < 2; ++k)
            Lg(static_cast<int>(i), static_cast<int>(k)) =
                L[i][0][k] * g(0) + L[i][1][k] * g(1);

    return fjet.value * b.A + hess_ii - Lg;
}

double relative_mean_curvature(const SurfacePatch& patch, double u, double v,
                               const FunctionOfHK& f) {
    CurvatureBundle b = curvature_bundle(patch, u, v);
    if (b.ii_degenerate)
        throw DegeneracyError("relative_mean_curvature: second fundamental form degenerate");
    ScalarFieldJet fjet = f_of_curvatures_jet(patch, u, v, f);

    auto [hess_ii, lap_ii] = hessian_laplacian(Metric::II, b, fjet);
    (void)hess_ii;
    // grad_II log|K| pairs with grad_II f under II:  (dK/K)^T II^{-1} df.
    auto [Hjet, Kjet] = curvature_field_jets(patch, u, v);
    (void)Hjet;
    double cross = Kjet.d1.dot(b.II.inverse() * fjet.d1) / b.K;

    return fjet.value * b.H + 0.5 * lap_ii - 0.25 * cross;
}

double relative_area_element(const SurfacePatch& patch, double u, double v,
                             const Eigen::Vector3d& y) {
    GeomSeries gs = geom_series(patch, u, v, 0);
    Eigen::Vector3d xu = gs.xu.value(), xv = gs.xv.value();
    Eigen::Vector3d N = gs.N.value();
    if (std::abs(y.dot(N)) <= 1e-12 * y.norm())
        throw TransversalityError("relative_area_element: y is tangential");
    Eigen::Matrix3d m;
    m.col(0) = y;
    m.col(1) = xu;
    m.col(2) = xv;
    return patch.orientation() * m.determinant();
}

SupportSample support_function(const SurfacePatch& patch, double u, double v,
                               const Eigen::Vector3d& origin) {
    GeomSeries gs = geom_series(patch, u, v, 0);
    Eigen::Vector3d P = gs.pos.value() - origin;
    Eigen::Vector3d N = gs.N.value();

    SupportSample s;
    s.P = P;
    s.rho = P.dot(-N);
    s.Pt = P - P.dot(N) * N;
    // Parameter components: solve I * c = (<P, xu>, <P, xv>).
    Eigen::Matrix2d I = gs.I_value();
    Eigen::Vector2d rhs{P.dot(gs.xu.value()), P.dot(gs.xv.value())};
    s.Pt_coords = I.inverse() * rhs;
    return s;
}

namespace {

struct NormalSample {
    Eigen::Vector3d N;
    Eigen::Matrix<double, 3, 2> dN;
};

NormalSample normal_with_derivatives(const SurfacePatch& patch, double u, double v) {
    GeomSeries gs = geom_series(patch, u, v, 0);
    NormalSample s;
    s.N = gs.N.value();
    s.dN.col(0) = gs.N.partial(1, 0);
    s.dN.col(1) = gs.N.partial(0, 1);
    return s;
}

}  // namespace

std::pair<double, double> gauss_map_inverse(const SurfacePatch& ovaloid, const Eigen::Vector3d& n,
                                            double tol) {
    if (!ovaloid.closed() || !ovaloid.convex())
        throw InversionError("gauss_map_inverse: gauge must be a closed convex builtin");
    if (std::abs(n.norm() - 1.0) > 1e-8)
        throw InversionError("gauss_map_inverse: |n| != 1");

    const Rect& dom = ovaloid.domain();
    // Inward convention: the oriented normal at spherical parameters (th, ph)
    // points along -(sin th cos ph, sin th sin ph, cos th) for the sphere;
    // seed from the antipode of n.
    Eigen::Vector3d m = (ovaloid.orientation() < 0) ? Eigen::Vector3d(-n) : n;
    double u = std::acos(std::clamp(m.z(), -1.0, 1.0));
    double vv = std::atan2(m.y(), m.x());
    if (vv < 0) vv += 2.0 * M_PI;

    auto clamp_point = [&dom](double& uu, double& w) {
        const double margin = 1e-9;
        if (!dom.periodic_u) uu = std::clamp(uu, dom.u0 + margin, dom.u1 - margin);
        if (dom.periodic_v) {
            double L = dom.width_v();
            w = std::fmod(w - dom.v0, L);
            if (w < 0) w += L;
            w += dom.v0;
        } else {
            w = std::clamp(w, dom.v0 + margin, dom.v1 - margin);
        }
    };
    clamp_point(u, vv);

    auto newton = [&](double& uu, double& w, int iters) {
        double best = std::numeric_limits<double>::infinity();
        for (int it = 0; it < iters; ++it) {
            NormalSample s = normal_with_derivatives(ovaloid, uu, w);
            Eigen::Vector3d r = s.N - n;
            best = std::min(best, r.norm());
            if (r.norm() <= tol) return r.norm();
            Eigen::Matrix2d JtJ = s.dN.transpose() * s.dN;
            Eigen::Vector2d rhs = -s.dN.transpose() * r;
            if (std::abs(JtJ.determinant()) < 1e-30) break;
            Eigen::Vector2d step = JtJ.inverse() * rhs;
            // Damp oversized steps; the normal field is 2π-Lipschitz at most.
            double cap = 0.5 * std::max(dom.width_u(), dom.width_v());
            if (step.norm() > cap) step *= cap / step.norm();
            uu += step(0);
            w += step(1);
            clamp_point(uu, w);
        }
        return best;
    };

    double res = newton(u, vv, 50);
    if (res <= tol) return {u, vv};

    // Coarse grid fallback, then polish.
    double bu = u, bv = vv, bres = res;
    const int G = 32;
    for (int i = 1; i < G; ++i)
        for (int j = 0; j < G; ++j) {
            double uu = dom.u0 + dom.width_u() * i / G;
            double w = dom.v0 + dom.width_v() * (j + 0.5) / G;
            Eigen::Vector3d N = geom_series(ovaloid, uu, w, 0).N.value();
            double r = (N - n).norm();
            if (r < bres) {
                bres = r;
                bu = uu;
                bv = w;
            }
        }
    res = newton(bu, bv, 50);
    if (res <= tol) return {bu, bv};
    throw InversionError("gauss_map_inverse: no convergence, best residual " + std::to_string(res));
}

Eigen::Vector3d peterson_transfer(const SurfacePatch& gauge,
                                  const std::function<Eigen::Vector3d(double, double)>& y_on_gauge,
                                  const SurfacePatch& target, double u, double v) {
    Eigen::Vector3d n = geom_series(target, u, v, 0).N.value();
    auto [ug, vg] = gauss_map_inverse(gauge, n);
    return y_on_gauge(ug, vg);
}

double anisotropic_area_density(const SurfacePatch& target, double u, double v,
                                const std::function<double(const Eigen::Vector3d&)>& gauge_support) {
    GeomSeries gs = geom_series(target, u, v, 0);
    return gauge_support(gs.N.value()) * gs.area.value();
}

std::function<double(const Eigen::Vector3d&)> ellipsoid_support(double a, double b, double c) {
    return [a, b, c](const Eigen::Vector3d& n) {
        return std::sqrt(a * a * n.x() * n.x() + b * b * n.y() * n.y() + c * c * n.z() * n.z());
    };
}

}  // namespace relgeo
