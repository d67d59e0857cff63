#pragma once

#include "chemo/evolve.hpp"
#include "chemo/model.hpp"
#include "chemo/steady.hpp"

#include <optional>
#include <string>
#include <vector>

namespace chemo {

/// Everything one CLI invocation needs, parsed from a flat `key = value` file.
struct RunConfig {
    Params params;
    int cells = 200;
    SchemeConfig scheme;
    SteadyTolerances tol;
    ProfileSpec u0;
    ProfileSpec v0;
    bool mass_from_profile = false;  ///< mass was computed by integrating u0
    bool allow_zero_mass = false;
    std::vector<double> chis{20, 40, 80, 160, 320};
    std::vector<int> refine_cells{100, 200, 400, 800};
    std::optional<double> fit_start;  ///< decay-fit window; defaults to [0.2, 0.8] t_end
    std::optional<double> fit_end;
    std::string out_dir = ".";

    Grid1D grid() const { return Grid1D(params.length, cells); }
    double fit_window_start() const { return fit_start.value_or(0.2 * scheme.t_end); }
    double fit_window_end() const { return fit_end.value_or(0.8 * scheme.t_end); }
};

/// Parses and validates a config. Keys:
///
///   capacity gamma chi length boundary_b mass cells dt t_end snapshots chis
///   refine_cells tol_mass tol_v upwind u0 v0 out_dir
///   sample_stride cfl_safety chemotaxis (semi_implicit|explicit) newton
///   fit_start fit_end allow_zero_mass
///
/// `chi` is required. Lists are comma separated, optionally in brackets.
/// Profiles are `reference`, `zero`, a coefficient list
/// (ascending powers) or a CSV path.
/// When `mass` is omitted it is the integral of u0 on the configured grid; when
/// both are present they must agree to 1e-4 relative.
///
/// Throws ConfigError carrying the key and line for unknown, duplicate or
/// malformed entries and for values that fail validation.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");

RunConfig load_config(const std::string& path);

}  // namespace chemo
