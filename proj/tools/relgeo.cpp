#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "relgeo/scenario.hpp"

namespace {

int run(const std::string& kind, const std::string& path, const relgeo::RunOptions& opts,
        const std::string& csv_path, const std::string& json_path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open scenario file '" << path << "'\n";
        return relgeo::kExitSchema;
    }
    nlohmann::json scenario;
    try {
        in >> scenario;
    } catch (const nlohmann::json::parse_error& e) {
        std::cerr << "error: scenario is not valid JSON: " << e.what() << "\n";
        return relgeo::kExitSchema;
    }
    if (scenario.is_object() && !scenario.contains("kind")) scenario["kind"] = kind;
    if (scenario.is_object() && scenario.contains("kind") &&
        scenario["kind"].is_string() && scenario["kind"].get<std::string>() != kind) {
        std::cerr << "error: scenario kind '" << scenario["kind"].get<std::string>()
                  << "' does not match command '" << kind << "'\n";
        return relgeo::kExitSchema;
    }

    relgeo::CommandResult result = relgeo::run_scenario(scenario, opts);
    const std::string report = result.report.dump(2) + "\n";
    std::cout << report;
    if (!json_path.empty()) {
        std::ofstream jout(json_path);
        jout << report;
    }
    if (!csv_path.empty()) {
        std::ofstream cout_csv(csv_path);
        cout_csv << result.csv;
    }
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relgeo: relative surface geometry scenario runner"};
    app.require_subcommand(1);

    relgeo::RunOptions opts;
    std::string csv_path, json_path;
    app.add_option("--grid", opts.grid_override, "Override the scenario grid resolution");
    app.add_option("--tolerance-scale", opts.tolerance_scale, "Scale all tolerances by X");
    app.add_option("--emit-csv", csv_path, "Write per-node/per-case CSV rows to PATH");
    app.add_option("--json", json_path, "Also write the JSON report to PATH");

    std::string identity_file, pde_file, sphere_file;
    CLI::App* identity = app.add_subcommand(
        "identity", "Variational equivalence of relative area and curvature functional");
    identity->add_option("file", identity_file, "Scenario JSON file")->required();
    CLI::App* pde = app.add_subcommand(
        "pde", "Characterizing PDE sweep and sphere power-law condition");
    pde->add_option("file", pde_file, "Scenario JSON file")->required();
    CLI::App* sphere = app.add_subcommand(
        "sphere", "Support-function integral formula and sphere criticality");
    sphere->add_option("file", sphere_file, "Scenario JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    opts.want_csv = !csv_path.empty();
    if (identity->parsed()) return run("identity", identity_file, opts, csv_path, json_path);
    if (pde->parsed()) return run("pde", pde_file, opts, csv_path, json_path);
    return run("sphere", sphere_file, opts, csv_path, json_path);
}
