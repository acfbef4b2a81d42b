#include "relgeo/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "relgeo/geometry.hpp"
#include "relgeo/quadrature.hpp"

namespace relgeo {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& what) {
    if (!j.is_object()) throw SchemaError(what + ": expected a JSON object");
}

void check_keys(const json& j, const std::string& what, std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok) throw SchemaError(what + ": unknown key '" + it.key() + "'");
    }
}

double get_number(const json& j, const std::string& key, const std::string& what) {
    if (!j.contains(key)) throw SchemaError(what + ": missing key '" + key + "'");
    if (!j[key].is_number()) throw SchemaError(what + ": '" + key + "' must be a number");
    return j[key].get<double>();
}

double get_number_or(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw SchemaError("'" + key + "' must be a number");
    return j[key].get<double>();
}

int get_int_or(const json& j, const std::string& key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) throw SchemaError("'" + key + "' must be an integer");
    return j[key].get<int>();
}

std::vector<double> get_vector(const json& j, const std::string& key, size_t n,
                               const std::string& what) {
    if (!j.contains(key)) throw SchemaError(what + ": missing key '" + key + "'");
    const json& a = j[key];
    if (!a.is_array() || a.size() != n)
        throw SchemaError(what + ": '" + key + "' must be an array of " + std::to_string(n));
    std::vector<double> out;
    for (const auto& e : a) {
        if (!e.is_number()) throw SchemaError(what + ": '" + key + "' entries must be numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

double orientation_from(const json& j, const std::string& what, double fallback) {
    if (!j.contains("orientation")) return fallback;
    const std::string s = j["orientation"].get<std::string>();
    if (s == "inward") return -1.0;
    if (s == "outward") return 1.0;
    throw SchemaError(what + ": orientation must be 'inward' or 'outward'");
}

}  // namespace

SurfacePatch surface_from_json(const json& j) {
    require_object(j, "surface");
    if (!j.contains("kind")) throw SchemaError("surface: missing key 'kind'");
    const std::string kind = j["kind"].get<std::string>();

    if (kind == "sphere") {
        check_keys(j, "surface(sphere)", {"kind", "radius", "center", "orientation"});
        double r = get_number(j, "radius", "sphere");
        Eigen::Vector3d center = Eigen::Vector3d::Zero();
        if (j.contains("center")) {
            auto c = get_vector(j, "center", 3, "sphere");
            center = Eigen::Vector3d(c[0], c[1], c[2]);
        }
        return make_sphere(r, center).with_orientation(orientation_from(j, "sphere", -1.0));
    }
    if (kind == "ellipsoid") {
        check_keys(j, "surface(ellipsoid)", {"kind", "semi_axes", "orientation"});
        auto ax = get_vector(j, "semi_axes", 3, "ellipsoid");
        return make_ellipsoid(ax[0], ax[1], ax[2])
            .with_orientation(orientation_from(j, "ellipsoid", -1.0));
    }
    if (kind == "paraboloid") {
        check_keys(j, "surface(paraboloid)", {"kind", "l1", "l2", "halfwidth", "orientation"});
        double l1 = get_number(j, "l1", "paraboloid");
        double l2 = get_number(j, "l2", "paraboloid");
        double hw = get_number_or(j, "halfwidth", 2.0);
        return make_paraboloid(l1, l2, hw).with_orientation(orientation_from(j, "paraboloid", 1.0));
    }
    if (kind == "torus") {
        check_keys(j, "surface(torus)", {"kind", "R", "r", "orientation"});
        return make_torus(get_number(j, "R", "torus"), get_number(j, "r", "torus"))
            .with_orientation(orientation_from(j, "torus", 1.0));
    }
    if (kind == "graph") {
        check_keys(j, "surface(graph)", {"kind", "height", "box", "orientation"});
        if (!j.contains("height")) throw SchemaError("graph: missing key 'height'");
        auto box = get_vector(j, "box", 4, "graph");
        Rect rect{box[0], box[1], box[2], box[3]};
        if (rect.width_u() <= 0 || rect.width_v() <= 0)
            throw SchemaError("graph: box must satisfy u0 < u1 and v0 < v1");
        Expression h = [&] {
            try {
                return Expression::parse(j["height"].get<std::string>());
            } catch (const ExpressionError& e) {
                throw SchemaError(std::string("graph height: ") + e.what());
            }
        }();
        return make_graph(h, rect).with_orientation(orientation_from(j, "graph", 1.0));
    }
    throw SchemaError("surface: unknown kind '" + kind + "'");
}

FunctionOfHK f_from_json(const json& j) {
    require_object(j, "f");
    if (!j.contains("kind")) throw SchemaError("f: missing key 'kind'");
    const std::string kind = j["kind"].get<std::string>();

    if (kind == "manhart") {
        check_keys(j, "f(manhart)", {"kind", "alpha", "q"});
        double alpha = get_number(j, "alpha", "manhart");
        std::array<double, 3> q{1.0, 1.0, 1.0};
        if (j.contains("q")) {
            auto qq = get_vector(j, "q", 3, "manhart");
            q = {qq[0], qq[1], qq[2]};
        }
        return manhart_f(alpha, q);
    }
    if (kind == "constant") {
        check_keys(j, "f(constant)", {"kind", "value"});
        return constant_f(get_number(j, "value", "constant"));
    }
    if (kind == "table") {
        check_keys(j, "f(table)",
                   {"kind", "name", "f", "fu", "fv", "fuu", "fuv", "fvv", "fuuu", "fuuv", "fuvv",
                    "fvvv"});
        static const char* slots[10] = {"f",   "fu",   "fv",   "fuu",  "fuv",
                                        "fvv", "fuuu", "fuuv", "fuvv", "fvvv"};
        if (!j.contains("f")) throw SchemaError("f(table): missing key 'f'");
        std::array<std::string, 10> exprs;
        for (int i = 0; i < 10; ++i)
            exprs[i] = j.contains(slots[i]) ? j[slots[i]].get<std::string>() : std::string("0");
        std::string name = j.contains("name") ? j["name"].get<std::string>()
                                              : j["f"].get<std::string>();
        try {
            return expression_f(name, exprs);
        } catch (const ExpressionError& e) {
            throw SchemaError(std::string("f(table): ") + e.what());
        }
    }
    throw SchemaError("f: unknown kind '" + kind + "'");
}

namespace {

DeformationSpec deformation_from_json(const json& j, const SurfacePatch& patch, double alpha) {
    require_object(j, "deformation");
    check_keys(j, "deformation", {"center", "radius", "amplitude", "mode", "t_step"});
    auto center = get_vector(j, "center", 2, "deformation");
    auto radius = get_vector(j, "radius", 2, "deformation");
    double amp = get_number(j, "amplitude", "deformation");
    DeformationMode mode = DeformationMode::RelativeNormal;
    if (j.contains("mode")) {
        const std::string m = j["mode"].get<std::string>();
        if (m == "euclidean_normal")
            mode = DeformationMode::EuclideanNormal;
        else if (m == "relative_normal")
            mode = DeformationMode::RelativeNormal;
        else
            throw SchemaError("deformation: mode must be 'euclidean_normal' or 'relative_normal'");
    }
    std::optional<FunctionOfHK> f;
    if (mode == DeformationMode::RelativeNormal) f = manhart_f(alpha);
    DeformationSpec spec;
    try {
        spec = make_bump_spec(patch, center[0], center[1], radius[0], radius[1], amp, mode, f);
    } catch (const DomainError& e) {
        throw SchemaError(std::string("deformation: ") + e.what());
    }
    spec.t_step = get_number_or(j, "t_step", spec.t_step);
    return spec;
}

json tolerance_entry(const std::string& name, double value, double observed, bool pass) {
    return json{{"name", name}, {"tolerance", value}, {"observed", observed}, {"pass", pass}};
}

}  // namespace

CommandResult cmd_identity(const json& scenario, const RunOptions& opts) {
    require_object(scenario, "scenario");
    check_keys(scenario, "identity scenario",
               {"kind", "surface", "alpha", "deformation", "grid", "with_frozen_fd", "tolerance"});
    if (scenario.contains("kind") && scenario["kind"].get<std::string>() != "identity")
        throw SchemaError("identity scenario: kind must be 'identity'");

    double alpha = get_number(scenario, "alpha", "identity scenario");
    if (alpha == 1.0) throw SchemaError("identity scenario: alpha must satisfy alpha != 1");

    if (!scenario.contains("surface")) throw SchemaError("identity scenario: missing 'surface'");
    SurfacePatch patch = surface_from_json(scenario["surface"]);
    if (!scenario.contains("deformation"))
        throw SchemaError("identity scenario: missing 'deformation'");
    DeformationSpec spec = deformation_from_json(scenario["deformation"], patch, alpha);

    int grid = opts.grid_override > 0 ? opts.grid_override
                                      : get_int_or(scenario, "grid", 48);
    bool with_frozen = scenario.value("with_frozen_fd", false);

    double tol = get_number_or(scenario, "tolerance", alpha == 0.0 ? 1e-6 : 1e-4);
    tol *= opts.tolerance_scale;

    VariationReport rep = manhart_identity_report(patch, spec, alpha, grid, with_frozen);

    double ratio = rep.dF_fd != 0 ? rep.dArea_analytic / rep.dF_fd : 0.0;
    bool pass = rep.residual_identity <= tol && rep.residual_fd_vs_analytic <= tol;
    json tolerances = json::array();
    tolerances.push_back(tolerance_entry("residual_identity", tol, rep.residual_identity,
                                         rep.residual_identity <= tol));
    tolerances.push_back(tolerance_entry("residual_fd_vs_analytic", tol,
                                         rep.residual_fd_vs_analytic,
                                         rep.residual_fd_vs_analytic <= tol));
    if (rep.residual_frozen) {
        double ftol = 1e-3 * opts.tolerance_scale;
        bool fpass = *rep.residual_frozen <= ftol;
        tolerances.push_back(tolerance_entry("residual_frozen", ftol, *rep.residual_frozen, fpass));
        pass = pass && fpass;
    }

    CommandResult out;
    out.report = json{{"schema", "relgeo-report/1"},
                      {"command", "identity"},
                      {"alpha", alpha},
                      {"expected_ratio", rep.C},
                      {"ratio", ratio},
                      {"dF_fd", rep.dF_fd},
                      {"dF_analytic", rep.dF_analytic},
                      {"dArea_analytic", rep.dArea_analytic},
                      {"grid", grid},
                      {"tolerances", tolerances},
                      {"pass", pass}};
    if (rep.dArea_fd) out.report["dArea_fd"] = *rep.dArea_fd;
    out.exit_code = pass ? kExitOk : kExitTolerance;
    if (opts.want_csv) {
        std::ostringstream csv;
        csv << "alpha,surface,ratio,expected,dF_fd,dArea_analytic,residual_identity\n";
        csv << alpha << "," << patch.kind() << "," << ratio << "," << rep.C << "," << rep.dF_fd
            << "," << rep.dArea_analytic << "," << rep.residual_identity << "\n";
        out.csv = csv.str();
    }
    return out;
}

namespace {

struct LGrid {
    std::vector<double> values;
};

LGrid l_grid_from_json(const json& j, const std::string& what) {
    require_object(j, what);
    check_keys(j, what, {"min", "max", "n"});
    double lo = get_number(j, "min", what);
    double hi = get_number(j, "max", what);
    int n = get_int_or(j, "n", 0);
    if (n <= 0) throw SchemaError(what + ": grid must contain at least one value (n >= 1)");
    LGrid g;
    for (int i = 0; i < n; ++i)
        g.values.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    return g;
}

/// Deterministic (Phi, Psi) samples on the ellipsoid(1,1.2,1.5) and the
/// saddle z = (u^2 - v^2)/2, used for the C-scan of non-solving f.
std::vector<std::pair<double, double>> phi_psi_sample_set(const FunctionOfHK& f) {
    std::vector<std::pair<double, double>> samples;
    SurfacePatch ell = make_ellipsoid(1.0, 1.2, 1.5);
    const Rect& ed = ell.domain();
    SurfacePatch saddle =
        make_graph(Expression::parse("(u*u - v*v)/2"), Rect{-1.0, 1.0, -1.0, 1.0});
    for (int i = 1; i <= 6; ++i)
        for (int k = 0; k < 6; ++k) {
            double u = ed.u0 + (ed.u1 - ed.u0) * i / 7.0;
            double v = ed.v0 + (ed.v1 - ed.v0) * (k + 0.5) / 6.0;
            samples.emplace_back(phi_density(ell, u, v, f), psi_density(ell, u, v, f));
            double su = -0.8 + 1.6 * i / 7.0;
            double sv = -0.8 + 1.6 * (k + 0.5) / 6.0;
            samples.emplace_back(phi_density(saddle, su, sv, f),
                                 psi_density(saddle, su, sv, f));
        }
    return samples;
}

}  // namespace

CommandResult cmd_pde(const json& scenario, const RunOptions& opts) {
    require_object(scenario, "scenario");
    check_keys(scenario, "pde scenario",
               {"kind", "f", "C", "l1_grid", "l2_grid", "c_scan", "sphere_x", "tolerance"});
    if (scenario.contains("kind") && scenario["kind"].get<std::string>() != "pde")
        throw SchemaError("pde scenario: kind must be 'pde'");
    if (!scenario.contains("f")) throw SchemaError("pde scenario: missing 'f'");
    const json& fj = scenario["f"];
    FunctionOfHK f = f_from_json(fj);

    if (!scenario.contains("l1_grid")) throw SchemaError("pde scenario: missing 'l1_grid'");
    if (!scenario.contains("l2_grid")) throw SchemaError("pde scenario: missing 'l2_grid'");
    LGrid g1 = l_grid_from_json(scenario["l1_grid"], "l1_grid");
    LGrid g2 = l_grid_from_json(scenario["l2_grid"], "l2_grid");

    const bool is_manhart = fj["kind"].get<std::string>() == "manhart";
    double tol = get_number_or(scenario, "tolerance", 1e-10) * opts.tolerance_scale;

    CommandResult out;
    out.report = json{{"schema", "relgeo-report/1"}, {"command", "pde"}, {"f", f.name}};
    std::ostringstream csv;
    if (opts.want_csv) csv << "l1,l2,C,uv0,uv1,uv2,equiv0,equiv1,equiv2\n";

    if (is_manhart) {
        double alpha = fj["alpha"].get<double>();
        if (alpha == 1.0) throw SchemaError("pde scenario: alpha must satisfy alpha != 1");
        double C = get_number_or(scenario, "C", 1.0 / (1.0 - alpha));
        double max_uv = 0, max_equiv = 0;
        for (double l1 : g1.values)
            for (double l2 : g2.values) {
                PdeResiduals r = pde_residuals(f, C, l1, l2);
                max_uv = std::max(max_uv, r.max_uv());
                max_equiv = std::max(max_equiv, r.max_equiv());
                if (opts.want_csv)
                    csv << l1 << "," << l2 << "," << C << "," << r.uv_form[0] << ","
                        << r.uv_form[1] << "," << r.uv_form[2] << "," << r.equivalence[0] << ","
                        << r.equivalence[1] << "," << r.equivalence[2] << "\n";
            }

        std::vector<double> xs;
        if (scenario.contains("sphere_x")) {
            for (const auto& e : scenario["sphere_x"]) xs.push_back(e.get<double>());
        } else {
            for (int i = 0; i <= 10; ++i) xs.push_back(0.5 + 2.5 * i / 10.0);
        }
        SphereConditionReport sc = sphere_condition_check(f, C, xs);
        double exp_dev = std::abs(sc.fitted_exponent - sc.expected_exponent);

        bool pass = max_uv <= tol && max_equiv <= tol &&
                    exp_dev <= tol && sc.max_relative_deviation <= tol;
        json tolerances = json::array();
        tolerances.push_back(tolerance_entry("max_pde_residual", tol, max_uv, max_uv <= tol));
        tolerances.push_back(
            tolerance_entry("max_form_equivalence", tol, max_equiv, max_equiv <= tol));
        tolerances.push_back(tolerance_entry("sphere_exponent_deviation", tol, exp_dev,
                                             exp_dev <= tol));
        out.report["alpha"] = alpha;
        out.report["C"] = C;
        out.report["max_pde_residual"] = max_uv;
        out.report["max_form_equivalence"] = max_equiv;
        out.report["sphere_condition"] = json{{"fitted_exponent", sc.fitted_exponent},
                                              {"expected_exponent", sc.expected_exponent},
                                              {"q1", sc.q1},
                                              {"max_relative_deviation",
                                               sc.max_relative_deviation}};
        out.report["tolerances"] = tolerances;
        out.report["pass"] = pass;
        out.exit_code = pass ? kExitOk : kExitTolerance;
    } else {
        // A C-scan certifying that no constant makes f solve the system:
        // report the best (smallest) max residual over the l-grid, and the
        // Phi/Psi separation margin on fixed surface samples.
        double c_min = -10.0, c_max = 10.0, c_step = 0.01;
        if (scenario.contains("c_scan")) {
            const json& cs = scenario["c_scan"];
            check_keys(cs, "c_scan", {"min", "max", "step"});
            c_min = get_number(cs, "min", "c_scan");
            c_max = get_number(cs, "max", "c_scan");
            c_step = get_number_or(cs, "step", 0.01);
        }
        double best_resid = std::numeric_limits<double>::infinity(), best_c = c_min;
        for (double C = c_min; C <= c_max + 1e-12; C += c_step) {
            double max_uv = 0;
            for (double l1 : g1.values)
                for (double l2 : g2.values)
                    max_uv = std::max(max_uv, pde_residuals(f, C, l1, l2).max_uv());
            if (max_uv < best_resid) {
                best_resid = max_uv;
                best_c = C;
            }
            if (opts.want_csv) csv << ",," << C << "," << max_uv << ",,,,,\n";
        }
        double margin = phi_psi_separation(phi_psi_sample_set(f), c_min, c_max, c_step);
        double margin_tol = 0.1;
        bool pass = best_resid >= margin_tol && margin >= margin_tol;
        json tolerances = json::array();
        tolerances.push_back(json{{"name", "pde_separation_margin"},
                                  {"threshold", margin_tol},
                                  {"observed", best_resid},
                                  {"pass", best_resid >= margin_tol}});
        tolerances.push_back(json{{"name", "phi_psi_separation_margin"},
                                  {"threshold", margin_tol},
                                  {"observed", margin},
                                  {"pass", margin >= margin_tol}});
        out.report["c_scan"] = json{{"min", c_min}, {"max", c_max}, {"step", c_step}};
        out.report["best_C"] = best_c;
        out.report["pde_separation_margin"] = best_resid;
        out.report["phi_psi_separation_margin"] = margin;
        out.report["tolerances"] = tolerances;
        out.report["pass"] = pass;
        out.exit_code = pass ? kExitOk : kExitTolerance;
    }
    if (opts.want_csv) out.csv = csv.str();
    return out;
}

CommandResult cmd_sphere(const json& scenario, const RunOptions& opts) {
    require_object(scenario, "scenario");
    check_keys(scenario, "sphere scenario",
               {"kind", "surface", "alpha", "sigma", "grid", "origin", "tolerance"});
    if (scenario.contains("kind") && scenario["kind"].get<std::string>() != "sphere")
        throw SchemaError("sphere scenario: kind must be 'sphere'");
    if (!scenario.contains("surface")) throw SchemaError("sphere scenario: missing 'surface'");
    SurfacePatch patch = surface_from_json(scenario["surface"]);

    int grid_n = opts.grid_override > 0 ? opts.grid_override : get_int_or(scenario, "grid", 48);
    QuadratureGrid grid = build_grid(patch, grid_n);

    Eigen::Vector3d origin;
    if (scenario.contains("origin")) {
        auto o = get_vector(scenario, "origin", 3, "sphere scenario");
        origin = Eigen::Vector3d(o[0], o[1], o[2]);
    } else {
        origin = centroid_estimate(patch, grid);
    }

    std::vector<double> sigmas{-1.0, 0.0, 1.0};
    if (scenario.contains("sigma")) {
        sigmas.clear();
        for (const auto& e : scenario["sigma"]) sigmas.push_back(e.get<double>());
        if (sigmas.empty()) throw SchemaError("sphere scenario: 'sigma' must be non-empty");
    }

    const bool is_sphere = patch.kind() == "sphere";
    double zero_tol = get_number_or(scenario, "tolerance", 1e-9) * opts.tolerance_scale;
    double resid_tol = 1e-7 * opts.tolerance_scale;
    double div_tol = 1e-9 * opts.tolerance_scale;

    DivergenceReport div = divergence_identity_check(patch, grid, origin);
    bool pass = div.max_pointwise_residual <= div_tol;

    json tolerances = json::array();
    tolerances.push_back(tolerance_entry("divergence_pointwise", div_tol,
                                         div.max_pointwise_residual,
                                         div.max_pointwise_residual <= div_tol));

    json formula = json::array();
    for (double sigma : sigmas) {
        IntegralFormulaReport r = integral_formula_eval(patch, grid, sigma, origin);
        json entry{{"sigma", sigma},          {"lhs", r.lhs},
                   {"rhs1", r.rhs1},          {"rhs2", r.rhs2},
                   {"residual", r.residual},  {"nonnegative", r.nonnegative},
                   {"min_rhs1_integrand", r.min_rhs1_integrand},
                   {"min_rhs2_integrand", r.min_rhs2_integrand}};
        bool ok;
        if (is_sphere) {
            double worst = std::max({std::abs(r.lhs), std::abs(r.rhs1), std::abs(r.rhs2)});
            ok = worst <= zero_tol;
            tolerances.push_back(
                tolerance_entry("sphere_all_zero(sigma=" + std::to_string(sigma) + ")", zero_tol,
                                worst, ok));
        } else {
            ok = r.residual <= resid_tol && r.nonnegative;
            tolerances.push_back(
                tolerance_entry("identity_residual(sigma=" + std::to_string(sigma) + ")",
                                resid_tol, r.residual, r.residual <= resid_tol));
        }
        entry["pass"] = ok;
        pass = pass && ok;
        formula.push_back(entry);
    }

    CommandResult out;
    out.report = json{{"schema", "relgeo-report/1"},
                      {"command", "sphere"},
                      {"surface", patch.kind()},
                      {"grid", grid_n},
                      {"origin", {origin.x(), origin.y(), origin.z()}},
                      {"divergence", json{{"max_pointwise_residual", div.max_pointwise_residual},
                                          {"integral_residual", div.integral_residual}}},
                      {"integral_formula", formula}};

    if (scenario.contains("alpha")) {
        double alpha = scenario["alpha"].get<double>();
        if (alpha == 1.0) throw SchemaError("sphere scenario: alpha must satisfy alpha != 1");
        FunctionOfHK f = manhart_f(alpha);
        const Rect& d = patch.domain();
        double hmin = std::numeric_limits<double>::infinity();
        double hmax = -hmin, tmax = 0;
        const int nu = 20, nv = 10;
        for (int i = 1; i <= nu; ++i)
            for (int k = 0; k < nv; ++k) {
                double u = d.u0 + d.width_u() * i / (nu + 1.0);
                double v = d.v0 + d.width_v() * (k + 0.5) / nv;
                double h = relative_mean_curvature(patch, u, v, f);
                hmin = std::min(hmin, h);
                hmax = std::max(hmax, h);
                tmax = std::max(tmax,
                                relative_normal(patch, u, v, f).tangential_part.norm());
            }
        double h_spread = hmax - hmin;
        double const_tol = 1e-10 * opts.tolerance_scale;
        double tang_tol = 1e-12 * opts.tolerance_scale;
        bool hpass = h_spread <= const_tol, tpass = tmax <= tang_tol;
        if (is_sphere) pass = pass && hpass && tpass;
        tolerances.push_back(
            tolerance_entry("relative_mean_curvature_spread", const_tol, h_spread, hpass));
        tolerances.push_back(tolerance_entry("tangential_part_max", tang_tol, tmax, tpass));
        out.report["criticality"] = json{{"alpha", alpha},
                                         {"H_rel_min", hmin},
                                         {"H_rel_max", hmax},
                                         {"H_rel_spread", h_spread},
                                         {"max_tangential_norm", tmax}};
    }

    out.report["tolerances"] = tolerances;
    out.report["pass"] = pass;
    out.exit_code = pass ? kExitOk : kExitTolerance;

    if (opts.want_csv) {
        std::ostringstream csv;
        csv << "u,v,H,K,rho\n";
        for (const auto& [u, v] : grid.nodes) {
            CurvatureBundle b = curvature_bundle(patch, u, v);
            SupportSample s = support_function(patch, u, v, origin);
            csv << u << "," << v << "," << b.H << "," << b.K << "," << s.rho << "\n";
        }
        out.csv = csv.str();
    }
    return out;
}

CommandResult run_scenario(const json& scenario, const RunOptions& opts) {
    try {
        if (!scenario.is_object() || !scenario.contains("kind"))
            throw SchemaError("scenario: missing top-level 'kind'");
        const std::string kind = scenario["kind"].get<std::string>();
        if (kind == "identity") return cmd_identity(scenario, opts);
        if (kind == "pde") return cmd_pde(scenario, opts);
        if (kind == "sphere") return cmd_sphere(scenario, opts);
        throw SchemaError("scenario: unknown kind '" + kind + "'");
    } catch (const SchemaError& e) {
        CommandResult out;
        out.exit_code = kExitSchema;
        out.report = json{{"schema", "relgeo-report/1"}, {"error", e.what()},
                          {"error_class", "schema"}};
        return out;
    } catch (const std::exception& e) {
        // Guard / degeneracy / inversion / step failures: numerical guards.
        CommandResult out;
        out.exit_code = kExitGuard;
        out.report = json{{"schema", "relgeo-report/1"}, {"error", e.what()},
                          {"error_class", "numerical_guard"}};
        return out;
    }
}

}  // namespace relgeo
