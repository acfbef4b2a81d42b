// Acceptance gate: one pass/fail line per criterion, nonzero exit when any
// criterion fails.  Each criterion is evaluated from scratch against frozen
// tolerances; failures print enough diagnostics to locate the offending case.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "relgeo/scenario.hpp"
#include "relgeo/variational.hpp"

using namespace relgeo;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Criterion {
    bool pass = true;
    std::string summary;
    std::vector<std::string> notes;
};

/// Deterministic interior sample points; polar charts get a 10% margin on the
/// pole-to-pole axis so jets stay away from chart degeneracies.
std::vector<std::pair<double, double>> sample_points(const SurfacePatch& patch, int n,
                                                     unsigned seed) {
    std::mt19937 rng(seed);
    const Rect& d = patch.domain();
    double mu = patch.polar_u() ? 0.10 : 0.05;
    std::uniform_real_distribution<double> du(d.u0 + mu * d.width_u(), d.u1 - mu * d.width_u());
    std::uniform_real_distribution<double> dv(d.v0 + 0.05 * d.width_v(),
                                              d.v1 - 0.05 * d.width_v());
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < n; ++i) pts.emplace_back(du(rng), dv(rng));
    return pts;
}

struct NamedSurface {
    std::string name;
    SurfacePatch patch;
    DeformationSpec bump;
};

std::vector<NamedSurface> criterion1_surfaces(double alpha) {
    std::optional<FunctionOfHK> f = manhart_f(alpha);
    std::vector<NamedSurface> out;
    SurfacePatch ell = make_ellipsoid(1.0, 1.2, 1.5);
    out.push_back({"ellipsoid(1,1.2,1.5)", ell,
                   make_bump_spec(ell, 1.5, 3.0, 0.4, 0.5, 1.0, DeformationMode::RelativeNormal,
                                  f)});
    SurfacePatch cap = make_graph(Expression::parse("0.3*exp(-u*u - v*v)"),
                                  Rect{-0.45, 0.45, -0.45, 0.45});
    out.push_back({"convex graph cap", cap,
                   make_bump_spec(cap, 0.0, 0.0, 0.3, 0.3, 1.0, DeformationMode::RelativeNormal,
                                  f)});
    SurfacePatch saddle =
        make_graph(Expression::parse("(u*u - v*v)/2"), Rect{-1.0, 1.0, -1.0, 1.0});
    // Off-center bump: a bump centered at the origin makes both sides of the
    // identity vanish by the saddle's u <-> v antisymmetry.
    out.push_back({"saddle (K<0)", saddle,
                   make_bump_spec(saddle, 0.3, 0.1, 0.5, 0.5, 1.0, DeformationMode::RelativeNormal,
                                  f)});
    // Small step: the relative normal reaches |y| ~ 100 on the cap at
    // alpha = -1, so larger steps leave the linear response regime.
    for (auto& s : out) s.bump.t_step = 1e-5;
    return out;
}

std::string fmt(const char* format, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

Criterion criterion1() {
    // Variational equivalence for the curvature-power family: pointwise
    // Euler-Lagrange identity and the finite-difference first-variation ratio.
    Criterion c;
    c.summary = "power-family variational identity (pointwise + FD bump)";
    const double point_tol = 1e-7, fd_tol = 1e-4;
    for (double alpha : {-1.0, 0.0, 0.25, 0.5, 2.0}) {
        FunctionOfHK f = manhart_f(alpha);
        for (const NamedSurface& s : criterion1_surfaces(alpha)) {
            double worst = 0, worst_abs = 0, scale = 0;
            for (auto [u, v] : sample_points(s.patch, 200, 20260826)) {
                double phi = phi_density(s.patch, u, v, f);
                double psi = psi_density(s.patch, u, v, f);
                double abs_resid = std::abs(phi * (1.0 - alpha) - psi);
                double r = abs_resid / (std::abs(phi) + std::abs(psi) + 1e-12);
                worst = std::max(worst, r);
                worst_abs = std::max(worst_abs, abs_resid);
                scale = std::max(scale, std::abs(phi) + std::abs(psi));
            }
            VariationReport rep = manhart_identity_report(s.patch, s.bump, alpha, 128);
            bool point_ok = worst <= point_tol;
            bool fd_ok = std::isfinite(rep.residual_identity) && rep.residual_identity <= fd_tol;
            if (point_ok && fd_ok) continue;
            c.pass = false;
            c.notes.push_back("alpha=" + fmt("%g", alpha) + ", " + s.name + ":" +
                              (point_ok ? "" : fmt(" normalized pointwise residual %.2e > 1e-7",
                                                   worst)) +
                              (fd_ok ? "" : fmt(" FD ratio residual %.2e > 1e-4",
                                                rep.residual_identity)));
            if (worst_abs < 1e-12 && scale < 1e-10) {
                c.notes.push_back(fmt(
                    "    both Euler-Lagrange densities vanish identically here (max |Phi|+|Psi| "
                    "= %.2e over 200 points; absolute residual %.2e),",
                    scale, worst_abs));
                c.notes.push_back(
                    "    so the normalized residual is floating-point dust divided by the 1e-12 "
                    "floor, not a violation of the identity;");
                c.notes.push_back(
                    "    the saddle z=(u^2-v^2)/2 is an improper affine sphere: at exponent 1/4 "
                    "its relative normal is the constant (0,0,1),");
                c.notes.push_back(fmt(
                    "    hence the relative mean curvature, both densities, and the FD first "
                    "variation (dF_fd = %.2e) all vanish; the",
                    rep.dF_fd));
                c.notes.push_back(
                    "    normalized pointwise bound cannot be met in double precision at this "
                    "(alpha, surface) pair; the identity itself holds exactly (0 = 0).");
            }
        }
    }
    return c;
}

Criterion criterion2() {
    // No constant C links Phi and Psi for f = u or f = u*v.
    Criterion c;
    c.summary = "non-power f: no constant links the two Euler-Lagrange densities";
    SurfacePatch ell = make_ellipsoid(1.0, 1.2, 1.5);
    SurfacePatch saddle =
        make_graph(Expression::parse("(u*u - v*v)/2"), Rect{-1.0, 1.0, -1.0, 1.0});
    for (const char* expr : {"u", "u*v"}) {
        FunctionOfHK f = f_from_json({{"kind", "table"},
                                      {"f", expr},
                                      {"fu", expr[1] ? "v" : "1"},
                                      {"fv", expr[1] ? "u" : "0"},
                                      {"fuv", expr[1] ? "1" : "0"}});
        std::vector<std::pair<double, double>> samples;
        for (auto [u, v] : sample_points(ell, 40, 7001))
            samples.emplace_back(phi_density(ell, u, v, f), psi_density(ell, u, v, f));
        for (auto [u, v] : sample_points(saddle, 40, 7002))
            samples.emplace_back(phi_density(saddle, u, v, f), psi_density(saddle, u, v, f));
        double margin = phi_psi_separation(samples, -10.0, 10.0, 0.01);
        if (margin < 0.1) {
            c.pass = false;
            c.notes.push_back(std::string("f = ") + expr +
                              fmt(": separation margin %.3f < 0.1", margin));
        }
    }
    return c;
}

Criterion criterion3() {
    // FD of the frozen-field relative area matches -2 Int phi H_rel dOmega_rel.
    Criterion c;
    c.summary = "frozen-field relative-area first variation matches the analytic integral";
    SurfacePatch ell = make_ellipsoid(1.0, 1.2, 1.5);
    DeformationSpec spec = make_bump_spec(ell, 1.5, 3.0, 0.4, 0.5, 1.0,
                                          DeformationMode::RelativeNormal, manhart_f(0.5));
    spec.t_step = 5e-4;
    VariationReport rep = manhart_identity_report(ell, spec, 0.5, 48, true);
    if (!rep.residual_frozen || *rep.residual_frozen > 1e-3) {
        c.pass = false;
        c.notes.push_back(fmt("frozen residual %.2e > 1e-3",
                              rep.residual_frozen ? *rep.residual_frozen : -1.0));
    }
    return c;
}

Criterion criterion4() {
    // Quartic-paraboloid curvature-variation coefficients match closed forms.
    Criterion c;
    c.summary = "quartic deformation dH/dK coefficients match closed forms";
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> dl(0.5, 3.0), dc(-1.0, 1.0);
    std::bernoulli_distribution flip(0.5);
    for (int i = 0; i < 5; ++i) {
        ParaboloidFamilySpec spec;
        spec.l1 = dl(rng) * (flip(rng) ? 1.0 : -1.0);
        spec.l2 = dl(rng) * (flip(rng) ? 1.0 : -1.0);
        spec.a = dc(rng);
        spec.b = dc(rng);
        spec.c = dc(rng);
        Eq9Report r = eq9_expansion_check(spec);
        if (r.max_deviation > 1e-4) {
            c.pass = false;
            c.notes.push_back(fmt("draw %d: max coefficient deviation %.2e > 1e-4", double(i),
                                  r.max_deviation));
        }
    }
    return c;
}

Criterion criterion5() {
    // The characterizing PDE system, both algebraic forms, and the sphere
    // power-law condition for several family exponents.
    Criterion c;
    c.summary = "characterizing PDE system + sphere power-law condition";
    for (double alpha : {-1.0, -0.5, 0.0, 0.25, 0.5, 2.0}) {
        FunctionOfHK f = manhart_f(alpha);
        double C = 1.0 / (1.0 - alpha);
        double max_uv = 0, max_equiv = 0;
        for (int i = 0; i < 10; ++i)
            for (int k = 0; k < 10; ++k) {
                double l1 = 0.5 + 2.5 * i / 9.0, l2 = 0.5 + 2.5 * k / 9.0;
                PdeResiduals r = pde_residuals(f, C, l1, l2);
                max_uv = std::max(max_uv, r.max_uv());
                max_equiv = std::max(max_equiv, r.max_equiv());
            }
        std::vector<double> xs;
        for (int i = 0; i <= 10; ++i) xs.push_back(0.5 + 2.5 * i / 10.0);
        SphereConditionReport sc = sphere_condition_check(f, C, xs);
        double exp_dev = std::abs(sc.fitted_exponent - 2.0 * alpha);
        if (max_uv > 1e-10 || max_equiv > 1e-10 || exp_dev > 1e-10 ||
            sc.max_relative_deviation > 1e-10) {
            c.pass = false;
            c.notes.push_back(fmt("alpha=%g: pde %.2e", alpha, max_uv) +
                              fmt(", equiv %.2e, exponent dev %.2e", max_equiv, exp_dev));
        }
    }
    return c;
}

Criterion criterion6() {
    // Support-function integral formula: vanishes on spheres, residual +
    // positivity + 4th-order convergence on the ellipsoid, divergence identity.
    Criterion c;
    c.summary = "support-function integral formula (spheres zero; ellipsoid residual, "
                "positivity, convergence)";
    SurfacePatch sph = make_sphere(1.5);
    QuadratureGrid sg = build_grid(sph, 32);
    for (double sigma : {-1.0, 0.0, 1.0}) {
        IntegralFormulaReport r = integral_formula_eval(sph, sg, sigma);
        double worst = std::max({std::abs(r.lhs), std::abs(r.rhs1), std::abs(r.rhs2)});
        if (worst > 1e-9) {
            c.pass = false;
            c.notes.push_back(fmt("sphere sigma=%g: |terms| %.2e > 1e-9", sigma, worst));
        }
    }
    SurfacePatch ell = make_ellipsoid(1.0, 1.2, 1.5);
    QuadratureGrid g64 = build_grid(ell, 64);
    Eigen::Vector3d origin = centroid_estimate(ell, g64);
    DivergenceReport div = divergence_identity_check(ell, g64, origin);
    if (div.max_pointwise_residual > 1e-9) {
        c.pass = false;
        c.notes.push_back(fmt("divergence pointwise residual %.2e > 1e-9",
                              div.max_pointwise_residual));
    }
    for (double sigma : {-1.0, 0.0, 1.0}) {
        IntegralFormulaReport r = integral_formula_eval(ell, g64, sigma, origin);
        if (r.residual > 1e-7 || !r.nonnegative || r.min_rhs1_integrand < -1e-12 ||
            r.min_rhs2_integrand < -1e-12) {
            c.pass = false;
            c.notes.push_back(fmt("ellipsoid sigma=%g: residual %.2e, min integrands %.2e",
                                  sigma, r.residual,
                                  std::min(r.min_rhs1_integrand, r.min_rhs2_integrand)));
        }
    }
    double r16 = integral_formula_eval(ell, build_grid(ell, 16), 1.0, origin).residual;
    double r32 = integral_formula_eval(ell, build_grid(ell, 32), 1.0, origin).residual;
    double order = std::log2(r16 / std::max(r32, 1e-300));
    if (!(order >= 4.0)) {
        c.pass = false;
        c.notes.push_back(fmt("convergence order %.2f < 4 (residuals %.2e -> %.2e)", order, r16,
                              r32));
    }
    return c;
}

Criterion criterion7() {
    // Geometry substrate: total curvature = 2 pi Euler characteristic on the
    // closed builtins (4 pi for genus 0, 0 for the torus), exact sphere
    // values, and paraboloid closed forms.
    Criterion c;
    c.summary = "geometry substrate (total curvature = 2*pi*chi; sphere exact; paraboloid closed "
                "forms)";
    struct Closed {
        const char* name;
        SurfacePatch patch;
        double chi;
    };
    std::vector<Closed> closed{{"sphere(1.3)", make_sphere(1.3), 2.0},
                               {"ellipsoid(1,1.2,1.5)", make_ellipsoid(1.0, 1.2, 1.5), 2.0},
                               {"torus(2,0.5)", make_torus(2.0, 0.5), 0.0}};
    for (const Closed& s : closed) {
        QuadratureGrid g = build_grid(s.patch, 48);
        double total = integrate(g, [&](double u, double v) {
            return curvature_bundle(s.patch, u, v).K * area_density(s.patch, u, v);
        });
        if (std::abs(total - 2.0 * kPi * s.chi) > 1e-8) {
            c.pass = false;
            c.notes.push_back(std::string(s.name) +
                              fmt(": total curvature %.12f != 2*pi*chi = %.12f", total,
                                  2.0 * kPi * s.chi));
        }
    }
    SurfacePatch s2 = make_sphere(2.0);
    CurvatureBundle b = curvature_bundle(s2, 1.1, 2.3);
    SupportSample sp = support_function(s2, 1.1, 2.3);
    if (std::abs(b.H - 0.5) > 1e-14 || std::abs(b.K - 0.25) > 1e-14 ||
        std::abs(sp.rho - 2.0) > 1e-13) {
        c.pass = false;
        c.notes.push_back(fmt("sphere(2): H=%.17g K=%.17g rho=%.17g", b.H, b.K, sp.rho));
    }
    SurfacePatch par = make_paraboloid(0.8, 1.7);
    std::mt19937 rng(55);
    std::uniform_real_distribution<double> d(-1.5, 1.5);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        double x = d(rng), y = d(rng);
        CurvatureBundle pb = curvature_bundle(par, x, y);
        double w2 = 1.0 + 0.64 * x * x + 2.89 * y * y;
        double K = 0.8 * 1.7 / (w2 * w2);
        double H = (0.8 * (1.0 + 2.89 * y * y) + 1.7 * (1.0 + 0.64 * x * x)) /
                   (2.0 * std::pow(w2, 1.5));
        worst = std::max({worst, std::abs(pb.K - K), std::abs(pb.H - H)});
    }
    if (worst > 1e-10) {
        c.pass = false;
        c.notes.push_back(fmt("paraboloid closed-form deviation %.2e > 1e-10", worst));
    }
    return c;
}

Criterion criterion8() {
    // Spheres are critical: the relative mean curvature is constant and the
    // relative normal purely normal for the tested exponents.
    Criterion c;
    c.summary = "sphere criticality (constant relative mean curvature, zero tangential part)";
    for (double alpha : {-1.0, -0.5, 0.0})
        for (double radius : {0.7, 1.5, 2.3}) {
            SurfacePatch sph = make_sphere(radius);
            FunctionOfHK f = manhart_f(alpha);
            double hmin = 1e300, hmax = -1e300, tmax = 0;
            for (auto [u, v] : sample_points(sph, 200, 90210)) {
                double h = relative_mean_curvature(sph, u, v, f);
                hmin = std::min(hmin, h);
                hmax = std::max(hmax, h);
                tmax = std::max(tmax, relative_normal(sph, u, v, f).tangential_part.norm());
            }
            if (hmax - hmin > 1e-10 || tmax > 1e-12) {
                c.pass = false;
                c.notes.push_back(fmt("alpha=%g r=%g:", alpha, radius) +
                                  fmt(" spread %.2e, tangential %.2e", hmax - hmin, tmax));
            }
        }
    return c;
}

}  // namespace

int main() {
    std::vector<Criterion (*)()> criteria{criterion1, criterion2, criterion3, criterion4,
                                          criterion5, criterion6, criterion7, criterion8};
    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        Criterion c;
        try {
            c = criteria[i]();
        } catch (const std::exception& e) {
            c.pass = false;
            c.summary = "evaluation aborted";
            c.notes.push_back(std::string("exception: ") + e.what());
        }
        std::printf("criterion %zu: %s — %s\n", i + 1, c.pass ? "PASS" : "FAIL",
                    c.summary.c_str());
        for (const std::string& n : c.notes) std::printf("    %s\n", n.c_str());
        if (!c.pass) ++failures;
    }
    std::printf("%d/8 criteria passed\n", 8 - failures);
    return failures == 0 ? 0 : 1;
}
