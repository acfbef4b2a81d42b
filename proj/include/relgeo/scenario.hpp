#pragma once

#include <json.hpp>

#include "relgeo/variational.hpp"

namespace relgeo {

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exit-code contract shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitTolerance = 1;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitGuard = 3;

/// Builds a patch from a JSON descriptor, e.g.
///   {"kind": "ellipsoid", "semi_axes": [1.0, 1.2, 1.5], "orientation": "inward"}.
/// Unknown keys are rejected.
SurfacePatch surface_from_json(const nlohmann::json& j);

/// Builds an f-descriptor:
///   {"kind": "manhart", "alpha": 0.5, "q": [1,1,1]}
///   {"kind": "constant", "value": 2.0}
///   {"kind": "table", "f": "u*v", "fu": "v", ...}   (symbolic partials)
FunctionOfHK f_from_json(const nlohmann::json& j);

struct CommandResult {
    int exit_code = kExitOk;
    nlohmann::json report;
    std::string csv;  // optional per-node / per-case rows
};

struct RunOptions {
    int grid_override = 0;        // 0 = use scenario value
    double tolerance_scale = 1.0;
    bool want_csv = false;
};

/// Variational-equivalence scenario: compares the FD first variation of the
/// curvature functional against the analytic relative-area variation.
CommandResult cmd_identity(const nlohmann::json& scenario, const RunOptions& opts = {});

/// PDE-system scenario: sweeps an (l1, l2) grid, checks the two algebraic
/// forms and the sphere power-law condition; for non-Manhart f, scans C and
/// reports the separation margin.
CommandResult cmd_pde(const nlohmann::json& scenario, const RunOptions& opts = {});

/// Support-function / integral-formula scenario, plus the sphere-criticality
/// check (constant relative mean curvature, vanishing tangential part).
CommandResult cmd_sphere(const nlohmann::json& scenario, const RunOptions& opts = {});

/// Dispatch on scenario "kind"; catches guard/schema errors into exit codes.
CommandResult run_scenario(const nlohmann::json& scenario, const RunOptions& opts = {});

}  // namespace relgeo
