#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "relgeo/scenario.hpp"

using namespace relgeo;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    fs::path dir = fs::temp_directory_path() / "relgeo_cli_tests";
    fs::create_directories(dir);
    return dir;
}

fs::path write_scenario(const std::string& name, const json& j) {
    fs::path p = scratch_dir() / name;
    std::ofstream(p) << j.dump(2);
    return p;
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(RELGEO_CLI_PATH) + " " + args + " > " +
                      (scratch_dir() / "stdout.json").string() + " 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json ellipsoid_descriptor() {
    return json{{"kind", "ellipsoid"}, {"semi_axes", {1.0, 1.2, 1.5}}};
}

json identity_scenario(double alpha) {
    return json{{"kind", "identity"},
                {"surface", ellipsoid_descriptor()},
                {"alpha", alpha},
                {"deformation",
                 json{{"center", {1.5, 3.0}}, {"radius", {0.4, 0.5}}, {"amplitude", 1.0},
                      {"t_step", 5e-4}}},
                {"grid", 128}};
}

}  // namespace

TEST_CASE("surface and f descriptors: schema validation") {
    CHECK_THROWS_AS(surface_from_json(json{{"kind", "cube"}}), SchemaError);
    CHECK_THROWS_AS(surface_from_json(json{{"kind", "sphere"}}), SchemaError);  // missing radius
    CHECK_THROWS_AS(surface_from_json(json{{"kind", "sphere"}, {"radius", 1.0}, {"typo", 1}}),
                    SchemaError);
    CHECK_THROWS_AS(
        surface_from_json(json{{"kind", "sphere"}, {"radius", 1.0}, {"orientation", "up"}}),
        SchemaError);
    SurfacePatch s = surface_from_json(
        json{{"kind", "sphere"}, {"radius", 2.0}, {"orientation", "outward"}});
    CHECK(s.orientation() == 1.0);

    CHECK_THROWS_AS(f_from_json(json{{"kind", "manhart"}}), SchemaError);  // missing alpha
    CHECK_THROWS_AS(f_from_json(json{{"kind", "manhart"}, {"alpha", 0.5}, {"extra", 1}}),
                    SchemaError);
    FunctionOfHK f = f_from_json(json{{"kind", "manhart"}, {"alpha", 0.5}});
    CHECK(f.f(1.0, 4.0) == doctest::Approx(2.0));
    FunctionOfHK t = f_from_json(json{{"kind", "table"}, {"f", "u*v"}, {"fu", "v"}, {"fv", "u"},
                                      {"fuv", "1"}});
    CHECK(t.f(2.0, 3.0) == doctest::Approx(6.0));
}

TEST_CASE("identity command in-process: alpha = 0 gives ratio 1") {
    CommandResult r = cmd_identity(identity_scenario(0.0), RunOptions{48, 1.0, false});
    CHECK(r.exit_code == kExitOk);
    CHECK(r.report["ratio"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.report["schema"] == "relgeo-report/1");
    CHECK(r.report["tolerances"].is_array());
}

TEST_CASE("identity command: alpha = 1 is a schema rejection") {
    CommandResult r = run_scenario(identity_scenario(1.0));
    CHECK(r.exit_code == kExitSchema);
    CHECK(r.report.contains("error"));
}

TEST_CASE("pde command in-process: manhart sweep passes, empty grid rejected") {
    json scen{{"kind", "pde"},
              {"f", json{{"kind", "manhart"}, {"alpha", 0.25}}},
              {"l1_grid", json{{"min", 0.5}, {"max", 3.0}, {"n", 5}}},
              {"l2_grid", json{{"min", 0.5}, {"max", 3.0}, {"n", 5}}}};
    CommandResult r = cmd_pde(scen);
    CHECK(r.exit_code == kExitOk);
    CHECK(r.report["max_pde_residual"].get<double>() <= 1e-10);
    CHECK(r.report["sphere_condition"]["expected_exponent"].get<double>() ==
          doctest::Approx(0.5));

    scen["l1_grid"]["n"] = 0;
    CommandResult bad = run_scenario(scen);
    CHECK(bad.exit_code == kExitSchema);
}

TEST_CASE("pde command: f = u reports a large separation margin") {
    json scen{{"kind", "pde"},
              {"f", json{{"kind", "table"}, {"f", "u"}, {"fu", "1"}}},
              {"l1_grid", json{{"min", 0.5}, {"max", 3.0}, {"n", 4}}},
              {"l2_grid", json{{"min", 0.5}, {"max", 3.0}, {"n", 4}}},
              {"c_scan", json{{"min", -10.0}, {"max", 10.0}, {"step", 0.05}}}};
    CommandResult r = cmd_pde(scen);
    CHECK(r.exit_code == kExitOk);  // expected failure-to-solve confirmed
    CHECK(r.report["pde_separation_margin"].get<double>() >= 0.1);
    CHECK(r.report["phi_psi_separation_margin"].get<double>() >= 0.1);
}

TEST_CASE("sphere command in-process: sphere all-zero, torus guard") {
    json scen{{"kind", "sphere"},
              {"surface", json{{"kind", "sphere"}, {"radius", 1.5}}},
              {"alpha", -0.5},
              {"grid", 24}};
    CommandResult r = cmd_sphere(scen);
    CHECK(r.exit_code == kExitOk);
    CHECK(r.report["criticality"]["H_rel_spread"].get<double>() <= 1e-10);
    CHECK(r.report["criticality"]["max_tangential_norm"].get<double>() <= 1e-12);

    json torus{{"kind", "sphere"},
               {"surface", json{{"kind", "torus"}, {"R", 2.0}, {"r", 0.5}}},
               {"grid", 8}};
    CommandResult rt = run_scenario(torus);
    CHECK(rt.exit_code == kExitGuard);
}

TEST_CASE("sphere command: ellipsoid identity residual within tolerance") {
    json scen{{"kind", "sphere"},
              {"surface", ellipsoid_descriptor()},
              {"sigma", {1.0}},
              {"grid", 64}};
    CommandResult r = cmd_sphere(scen);
    CHECK(r.exit_code == kExitOk);
    const json& entry = r.report["integral_formula"][0];
    CHECK(entry["residual"].get<double>() <= 1e-7);
    CHECK(entry["nonnegative"].get<bool>());
}

TEST_CASE("CLI binary: exit codes and report plumbing") {
    fs::path ok = write_scenario("identity_ok.json", identity_scenario(0.0));
    CHECK(run_cli("--grid 48 identity " + ok.string()) == 0);

    fs::path rejected = write_scenario("identity_alpha1.json", identity_scenario(1.0));
    CHECK(run_cli("identity " + rejected.string()) == 2);

    fs::path bad = scratch_dir() / "not_json.json";
    std::ofstream(bad) << "{не json";
    CHECK(run_cli("identity " + bad.string()) == 2);
    CHECK(run_cli("identity " + (scratch_dir() / "missing.json").string()) == 2);

    json scen{{"kind", "pde"},
              {"f", json{{"kind", "manhart"}, {"alpha", 0.25}}},
              {"l1_grid", json{{"min", 0.5}, {"max", 3.0}, {"n", 4}}},
              {"l2_grid", json{{"min", 0.5}, {"max", 3.0}, {"n", 4}}}};
    fs::path pde = write_scenario("pde_ok.json", scen);
    fs::path out1 = scratch_dir() / "report1.json";
    fs::path out2 = scratch_dir() / "report2.json";
    fs::path csv = scratch_dir() / "rows.csv";
    CHECK(run_cli("--json " + out1.string() + " --emit-csv " + csv.string() + " pde " +
                  pde.string()) == 0);
    CHECK(run_cli("--json " + out2.string() + " pde " + pde.string()) == 0);
    // Deterministic: identical scenario files give byte-identical reports.
    CHECK(slurp(out1) == slurp(out2));
    CHECK(slurp(csv).rfind("l1,l2,C", 0) == 0);

    // Mismatched subcommand/scenario kind is a schema error.
    CHECK(run_cli("sphere " + pde.string()) == 2);

    // Tolerance scaling: a crushed tolerance turns pass into tolerance failure.
    CHECK(run_cli("--tolerance-scale 1e-12 pde " + pde.string()) == 1);
}
