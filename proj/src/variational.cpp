#include "relgeo/variational.hpp"

#include <cmath>

namespace relgeo {

double DeformationSpec::bump(double u, double v) const {
    return bump_series(Series2::variable_u(u, 0), Series2::variable_v(v, 0)).value();
}

DeformationSpec make_bump_spec(const SurfacePatch& patch, double cu, double cv, double ru,
                               double rv, double amplitude, DeformationMode mode,
                               std::optional<FunctionOfHK> f) {
    const Rect& dom = patch.domain();
    Rect support{cu - ru, cu + ru, cv - rv, cv + rv, false, false};
    bool inside_u = dom.periodic_u || (support.u0 > dom.u0 && support.u1 < dom.u1);
    bool inside_v = dom.periodic_v || (support.v0 > dom.v0 && support.v1 < dom.v1);
    if (!inside_u || !inside_v)
        throw std::invalid_argument("make_bump_spec: support box must lie strictly inside the domain");

    DeformationSpec spec;
    spec.support = support;
    spec.mode = mode;
    spec.f = std::move(f);
    spec.bump_series = [cu, cv, ru, rv, amplitude](const Series2& U, const Series2& V) {
        double su = (U.value() - cu) / ru, sv = (V.value() - cv) / rv;
        int ord = std::min(U.order(), V.order());
        if (su * su + sv * sv >= 1.0) return Series2(ord);  // identically zero outside
        Series2 du = (U - cu) * (1.0 / ru), dv = (V - cv) * (1.0 / rv);
        Series2 s2 = du * du + dv * dv;
        return amplitude * exp(1.0 - inv(1.0 - s2));
    };
    return spec;
}

DeformationSpec make_quartic_bump_spec(double a, double b, double c, const Rect& support) {
    DeformationSpec spec;
    spec.support = support;
    spec.bump_series = [a, b, c](const Series2& U, const Series2& V) {
        return a * (U * U * U * U) + b * (U * U * V * V) + c * (V * V * V * V);
    };
    return spec;
}

namespace {

struct DensityContext {
    CurvatureBundle bundle;
    ScalarFieldJet Hjet, Kjet;
    double lapH_I, lapK_I;    // Laplacians w.r.t. I
    double lapH_II, lapK_II;  // Laplacians w.r.t. II
    double pHH_II, pHK_II, pKK_II;  // II(grad_II ., grad_II .)
    double pHH_I, pHK_I, pKK_I;     // <grad ., grad .> w.r.t. I
};

DensityContext density_context(const SurfacePatch& patch, double u, double v) {
    DensityContext ctx{curvature_bundle(patch, u, v), {}, {}, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    if (ctx.bundle.ii_degenerate)
        throw DegeneracyError("density: second fundamental form degenerate");
    std::tie(ctx.Hjet, ctx.Kjet) = curvature_field_jets(patch, u, v);

    ctx.lapH_I = hessian_laplacian(Metric::I, ctx.bundle, ctx.Hjet).second;
    ctx.lapK_I = hessian_laplacian(Metric::I, ctx.bundle, ctx.Kjet).second;
    ctx.lapH_II = hessian_laplacian(Metric::II, ctx.bundle, ctx.Hjet).second;
    ctx.lapK_II = hessian_laplacian(Metric::II, ctx.bundle, ctx.Kjet).second;
    ctx.pHH_II = ii_grad_product(ctx.bundle, ctx.Hjet, ctx.Hjet);
    ctx.pHK_II = ii_grad_product(ctx.bundle, ctx.Hjet, ctx.Kjet);
    ctx.pKK_II = ii_grad_product(ctx.bundle, ctx.Kjet, ctx.Kjet);
    ctx.pHH_I = i_grad_product(ctx.bundle, ctx.Hjet, ctx.Hjet);
    ctx.pHK_I = i_grad_product(ctx.bundle, ctx.Hjet, ctx.Kjet);
    ctx.pKK_I = i_grad_product(ctx.bundle, ctx.Kjet, ctx.Kjet);
    return ctx;
}

}  // namespace

double phi_density(const SurfacePatch& patch, double u, double v, const FunctionOfHK& f) {
    DensityContext c = density_context(patch, u, v);
    double H = c.bundle.H, K = c.bundle.K;
    if (K == 0.0) throw GuardError("phi_density: K = 0 makes the 1/K coefficients singular");
    f.check_guard(H, K);

    double f0 = f.f(H, K), fu = f.fu(H, K), fv = f.fv(H, K);
    double fuu = f.fuu(H, K), fuv = f.fuv(H, K), fvv = f.fvv(H, K);

    return -2.0 * f0 * H - fu * c.lapH_II - fv * c.lapK_II - fuu * c.pHH_II +
           (fu / (2.0 * K) - 2.0 * fuv) * c.pHK_II + (fv / (2.0 * K) - fvv) * c.pKK_II;
}

double psi_density(const SurfacePatch& patch, double u, double v, const FunctionOfHK& f) {
    DensityContext c = density_context(patch, u, v);
    double H = c.bundle.H, K = c.bundle.K;
    f.check_guard(H, K);

    double f0 = f.f(H, K);
    double fu = f.fu(H, K), fv = f.fv(H, K);
    double fuu = f.fuu(H, K), fuv = f.fuv(H, K), fvv = f.fvv(H, K);
    double fuuu = f.fuuu(H, K), fuuv = f.fuuv(H, K), fuvv = f.fuvv(H, K), fvvv = f.fvvv(H, K);

    return fu * (2.0 * H * H - K) + 2.0 * H * K * fv - 2.0 * f0 * H +
           0.5 * fuuu * c.pHH_I + fuuv * c.pHK_I + 0.5 * fuvv * c.pKK_I +
           K * fuuv * c.pHH_II + (2.0 * K * fuvv + 0.5 * fuv) * c.pHK_II +
           (K * fvvv + 0.5 * fvv) * c.pKK_II +
           0.5 * fuu * c.lapH_I + 0.5 * fuv * c.lapK_I +
           K * fuv * c.lapH_II + K * fvv * c.lapK_II;
}

std::pair<double, double> curvature_variation(const SurfacePatch& patch, double u, double v,
                                              const ScalarFieldJet& psi) {
    CurvatureBundle b = curvature_bundle(patch, u, v);
    if (b.K == 0.0) throw GuardError("curvature_variation: log K singular at K = 0");
    if (b.ii_degenerate) throw DegeneracyError("curvature_variation: degenerate II");
    auto [Hjet, Kjet] = curvature_field_jets(patch, u, v);

    double lap_psi = hessian_laplacian(Metric::I, b, psi).second;
    double lap_ii_psi = hessian_laplacian(Metric::II, b, psi).second;
    double cross = psi.d1.dot(b.II.inverse() * Kjet.d1) / b.K;  // II(grad_II psi, grad_II log|K|)
    (void)Hjet;

    double dH = 0.5 * lap_psi + (2.0 * b.H * b.H - b.K) * psi.value;
    double dK = 2.0 * b.K * b.H * psi.value + b.K * lap_ii_psi + 0.5 * cross;
    return {dH, dK};
}

Eq9Report eq9_expansion_check(const ParaboloidFamilySpec& spec, double probe_radius) {
    if (spec.l1 * spec.l2 == 0.0) throw std::invalid_argument("eq9: l1*l2 must be non-zero");
    SurfacePatch base = make_paraboloid(spec.l1, spec.l2);

    const double a = spec.a, b = spec.b, c = spec.c;
    auto psi_jet = [&](double x, double y) {
        ScalarFieldJet j;
        j.value = a * x * x * x * x + b * x * x * y * y + c * y * y * y * y;
        j.d1 = {4 * a * x * x * x + 2 * b * x * y * y, 2 * b * x * x * y + 4 * c * y * y * y};
        j.d2(0, 0) = 12 * a * x * x + 2 * b * y * y;
        j.d2(0, 1) = j.d2(1, 0) = 4 * b * x * y;
        j.d2(1, 1) = 2 * b * x * x + 12 * c * y * y;
        return j;
    };

    // Sample a small tensor grid and fit even monomials; the quartic basis
    // entries absorb the O(r^4) remainder of the expansion.
    const int G = 5;
    std::vector<Eigen::Vector2d> values;
    std::vector<Eigen::Matrix<double, 5, 1>> basis;
    for (int i = 0; i < G; ++i)
        for (int j = 0; j < G; ++j) {
            double x = probe_radius * (2.0 * i / (G - 1) - 1.0);
            double y = probe_radius * (2.0 * j / (G - 1) - 1.0);
            auto [dH, dK] = curvature_variation(base, x, y, psi_jet(x, y));
            values.push_back({dH, dK});
            Eigen::Matrix<double, 5, 1> row;
            row << x * x, y * y, x * x * x * x, x * x * y * y, y * y * y * y;
            basis.push_back(row);
        }

    Eigen::MatrixXd M(static_cast<int>(basis.size()), 5);
    Eigen::VectorXd rh(static_cast<int>(basis.size())), rk(static_cast<int>(basis.size()));
    for (int i = 0; i < M.rows(); ++i) {
        M.row(i) = basis[static_cast<size_t>(i)].transpose();
        rh(i) = values[static_cast<size_t>(i)](0);
        rk(i) = values[static_cast<size_t>(i)](1);
    }
    Eigen::VectorXd ch = M.colPivHouseholderQr().solve(rh);
    Eigen::VectorXd ck = M.colPivHouseholderQr().solve(rk);

    Eq9Report rep;
    rep.dH_coeffs = {ch(0), ch(1)};
    rep.dK_coeffs = {ck(0), ck(1)};
    rep.dH_expected = {6 * a + b, b + 6 * c};
    rep.dK_expected = {12 * a * spec.l2 + 2 * b * spec.l1, 2 * b * spec.l2 + 12 * c * spec.l1};
    rep.max_deviation = std::max((rep.dH_coeffs - rep.dH_expected).cwiseAbs().maxCoeff(),
                                 (rep.dK_coeffs - rep.dK_expected).cwiseAbs().maxCoeff());
    return rep;
}

namespace {

/// Direction field of the deformation as a series at (u, v): the oriented
/// unit normal or the relative normal of the undeformed surface.
Vec3Series direction_series(const SurfacePatch& patch, const DeformationSpec& spec, double u,
                            double v, int ord) {
    if (spec.mode == DeformationMode::EuclideanNormal) {
        GeomSeries gs = geom_series(patch, u, v, ord > 0 ? ord - 1 : 0);
        return gs.N.truncated(ord);
    }
    if (ord > 2)
        throw DomainError("deform: relative-normal jets are available through order 2 only");
    if (!spec.f) throw std::invalid_argument("deform: RelativeNormal mode requires f");
    const FunctionOfHK& f = *spec.f;

    GeomSeries gs = geom_series(patch, u, v, ord + 1);
    double H0 = gs.H.value(), K0 = gs.K.value();
    f.check_guard(H0, K0);
    Series2 fser = compose2(gs.H.truncated(ord + 1), gs.K.truncated(ord + 1),
                            [&](int i, int j) { return f.partial(i, j, H0, K0); });
    Series2 dfu = fser.derivative_u();
    Series2 dfv = fser.derivative_v();
    Series2 invdet = inv(gs.detII);
    Series2 g1 = (gs.II22 * dfu - gs.II12 * dfv) * invdet;
    Series2 g2 = (gs.II11 * dfv - gs.II12 * dfu) * invdet;
    Vec3Series y = fser * gs.N - g1 * gs.xu - g2 * gs.xv;
    return y.truncated(ord);
}

}  // namespace

SurfacePatch deform(const SurfacePatch& patch, const DeformationSpec& spec, double t) {
    SurfacePatch base = patch;  // value copy keeps the deformed patch self-contained
    DeformationSpec s = spec;

    auto eval = [base, s, t](double u, double v, int ord) {
        Vec3Series pos = base.position_series(u, v, ord);
        if (t == 0.0) return pos;
        Series2 bump = s.bump_series(Series2::variable_u(u, ord), Series2::variable_v(v, ord));
        bool zero = true;
        for (int d = 0; d <= ord && zero; ++d)
            for (int j = 0; j <= d; ++j)
                if (bump.coeff(d - j, j) != 0.0) { zero = false; break; }
        if (zero) return pos;
        Vec3Series dir = direction_series(base, s, u, v, ord);
        return pos + (t * bump) * dir;
    };

    SurfacePatch deformed(patch.domain(), eval, patch.orientation());
    deformed.set_closed(patch.closed()).set_kind(patch.kind() + "+deform");
    if (patch.max_jet_order() < std::numeric_limits<int>::max())
        deformed.set_max_jet_order(patch.max_jet_order());

    // Immersion / non-degeneracy spot check over the support.
    if (t != 0.0) {
        for (int i = 1; i < 5; ++i)
            for (int j = 1; j < 5; ++j) {
                double u = spec.support.u0 + spec.support.width_u() * i / 5.0;
                double v = spec.support.v0 + spec.support.width_v() * j / 5.0;
                GeomSeries gs = geom_series(deformed, u, v, 0);
                if (gs.detI.value() <= 0.0 || !std::isfinite(gs.K.value()))
                    throw StepError("deform: surface degenerates on the support; try |t| <= " +
                                    std::to_string(std::abs(t) / 4.0));
            }
    }
    return deformed;
}

namespace {

double functional_value(Functional functional, const SurfacePatch& undeformed,
                        const SurfacePatch& deformed, const FunctionOfHK& f,
                        const QuadratureGrid& grid) {
    if (functional == Functional::CurvatureFunctional)
        return curvature_functional(deformed, grid, f);

    // Frozen-field relative area: y = N_f of the undeformed surface,
    // transported through matched oriented normals.
    if (!undeformed.convex())
        throw InversionError("relative_area_frozen: undeformed surface must be convex");
    return integrate(grid, [&](double u, double v) {
        GeomSeries gs = geom_series(deformed, u, v, 0);
        Eigen::Vector3d n = gs.N.value();
        auto [ug, vg] = gauss_map_inverse(undeformed, n, 1e-11);
        Eigen::Vector3d y = relative_normal(undeformed, ug, vg, f).y;
        Eigen::Matrix3d m;
        m.col(0) = y;
        m.col(1) = gs.xu.value();
        m.col(2) = gs.xv.value();
        return deformed.orientation() * m.determinant();
    });
}

}  // namespace

double fd_first_variation(Functional functional, const SurfacePatch& patch,
                          const DeformationSpec& spec, const FunctionOfHK& f, int resolution) {
    QuadratureGrid grid = build_subgrid(spec.support, resolution);
    const double h = spec.t_step;
    auto F = [&](double t) {
        SurfacePatch d = deform(patch, spec, t);
        return functional_value(functional, patch, d, f, grid);
    };
    return (F(-2 * h) - 8.0 * F(-h) + 8.0 * F(h) - F(2 * h)) / (12.0 * h);
}

VariationReport manhart_identity_report(const SurfacePatch& patch, const DeformationSpec& spec,
                                        double alpha, int resolution, bool with_frozen_fd) {
    if (alpha == 1.0) throw std::invalid_argument("manhart_identity_report: alpha != 1 required");
    FunctionOfHK f = manhart_f(alpha);
    DeformationSpec rspec = spec;
    rspec.mode = DeformationMode::RelativeNormal;
    rspec.f = f;

    VariationReport rep;
    rep.alpha = alpha;
    rep.C = 1.0 / (1.0 - alpha);

    QuadratureGrid grid = build_subgrid(spec.support, resolution);
    rep.dF_fd = fd_first_variation(Functional::CurvatureFunctional, patch, rspec, f, resolution);
    rep.dF_analytic = integrate(grid, [&](double u, double v) {
        double phi = rspec.bump(u, v);
        if (phi == 0.0) return 0.0;
        GeomSeries gs = geom_series(patch, u, v, 0);
        return phi * f.f(gs.H.value(), gs.K.value()) * psi_density(patch, u, v, f) *
               gs.area.value();
    });
    rep.dArea_analytic = integrate(grid, [&](double u, double v) {
        double phi = rspec.bump(u, v);
        if (phi == 0.0) return 0.0;
        Eigen::Vector3d y = relative_normal(patch, u, v, f).y;
        return -2.0 * phi * relative_mean_curvature(patch, u, v, f) *
               relative_area_element(patch, u, v, y);
    });
    if (with_frozen_fd)
        rep.dArea_fd =
            fd_first_variation(Functional::RelativeAreaFrozen, patch, rspec, f, resolution);

    double scale = std::abs(rep.dF_fd) > 0 ? std::abs(rep.dF_fd) : 1.0;
    rep.residual_fd_vs_analytic = std::abs(rep.dF_fd - rep.dF_analytic) / scale;
    rep.residual_identity = std::abs(rep.dArea_analytic - rep.C * rep.dF_fd) / scale;
    if (rep.dArea_fd) {
        double ascale = std::abs(rep.dArea_analytic) > 0 ? std::abs(rep.dArea_analytic) : 1.0;
        rep.residual_frozen = std::abs(*rep.dArea_fd - rep.dArea_analytic) / ascale;
    }
    return rep;
}

PdeResiduals pde_residuals(const FunctionOfHK& f, double C, double l1, double l2) {
    double u = 0.5 * (l1 + l2), v = l1 * l2;
    f.check_guard(u, v);
    double fu = f.fu(u, v), fv = f.fv(u, v);
    double fuu = f.fuu(u, v), fuv = f.fuv(u, v), fvv = f.fvv(u, v);

    PdeResiduals r;
    // (u, v)-coefficient form.
    r.uv_form[0] = (-2.0 * u / v * fu + (4.0 - 8.0 * u * u / v) * fv) -
                   (C * fuu + 4.0 * C * u * fuv + 8.0 * C * (u * u - 0.5 * v) * fvv);
    r.uv_form[1] = (-2.0 * u / v * fu - 4.0 * fv) - (C * fuu + 4.0 * C * u * fuv + 4.0 * C * v * fvv);
    r.uv_form[2] = (-2.0 * fu - 4.0 * u * fv) -
                   (C * u * fuu + 4.0 * C * v * fuv + 4.0 * C * u * v * fvv);

    // Raw (l1, l2)-coefficient form.
    r.l_form[0] = (-12.0 / l1 * fu - 24.0 * l2 / l1 * fv) -
                  (6.0 * C * fuu + 24.0 * C * l2 * fuv + 24.0 * C * l2 * l2 * fvv);
    r.l_form[1] = (-(2.0 / l1 + 2.0 / l2) * fu - 8.0 * fv) -
                  (2.0 * C * fuu + 4.0 * C * (l1 + l2) * fuv + 8.0 * C * l1 * l2 * fvv);
    r.l_form[2] = (-12.0 / l2 * fu - 24.0 * l1 / l2 * fv) -
                  (6.0 * C * fuu + 24.0 * C * l1 * fuv + 24.0 * C * l1 * l1 * fvv);

    // The substitution 1/l1 + 1/l2 = 2u/v links the two forms linearly.
    r.equivalence[0] = r.uv_form[0] - (r.l_form[0] + r.l_form[2]) / 12.0;
    r.equivalence[1] = r.uv_form[1] - 0.5 * r.l_form[1];
    r.equivalence[2] = r.uv_form[2] - (l1 * r.l_form[0] + l2 * r.l_form[2]) / 12.0;
    return r;
}

SphereConditionReport sphere_condition_check(const FunctionOfHK& f, double C,
                                             const std::vector<double>& x_grid) {
    if (C == 0.0) throw std::invalid_argument("sphere_condition_check: C != 0 required");
    SphereConditionReport rep;
    rep.expected_exponent = 2.0 * (C - 1.0) / C;

    // Least squares on log f(x, x^2) = log q + e log x.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double x : x_grid) {
        if (!(x > 0)) throw std::invalid_argument("sphere_condition_check: x grid must be positive");
        double fx = f.f(x, x * x);
        if (!(fx > 0)) throw GuardError("sphere_condition_check: f(x, x^2) <= 0, log fit impossible");
        double lx = std::log(x), ly = std::log(fx);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    double det = n * sxx - sx * sx;
    rep.fitted_exponent = (n * sxy - sx * sy) / det;
    double logq = (sy * sxx - sx * sxy) / det;
    rep.q1 = std::exp(logq);

    for (double x : x_grid) {
        double model = rep.q1 * std::pow(x, rep.expected_exponent);
        double fx = f.f(x, x * x);
        rep.max_relative_deviation =
            std::max(rep.max_relative_deviation, std::abs(fx - model) / std::abs(fx));
    }
    return rep;
}

double phi_psi_separation(const std::vector<std::pair<double, double>>& phi_psi_samples,
                          double c_min, double c_max, double c_step) {
    double best = std::numeric_limits<double>::infinity();
    for (double C = c_min; C <= c_max + 0.5 * c_step; C += c_step) {
        double worst = 0.0;
        for (const auto& [phi, psi] : phi_psi_samples)
            worst = std::max(worst, std::abs(phi - C * psi) / (std::abs(phi) + std::abs(psi) + 1e-12));
        best = std::min(best, worst);
    }
    return best;
}

}  // namespace relgeo
