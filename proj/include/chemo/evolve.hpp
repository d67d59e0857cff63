#pragma once

#include "chemo/grid.hpp"
#include "chemo/model.hpp"
#include "chemo/steady.hpp"

#include <optional>
#include <string>
#include <vector>

namespace chemo {

/// How the chemotactic flux w S(u) enters the u-update.
enum class ChemotaxisMode {
    /// Face velocity and q(u) lagged, transported density taken at the new
    /// level. Conservative, positivity preserving, no CFL restriction.
    SemiImplicit,
    /// Fully explicit flux; every step checks dt <= cfl_safety dx / max|w|.
    Explicit,
};

struct SchemeConfig {
    double dt = 5e-4;
    double t_end = 100.0;
    double cfl_safety = 1.0;
    std::vector<double> snapshot_times;
    bool upwind = true;
    ChemotaxisMode chemotaxis = ChemotaxisMode::SemiImplicit;
    int sample_stride = 100;  ///< diagnostics every this many steps (and at the last step)

    void validate() const;
    long long total_steps() const;
};

struct TimeState {
    double t = 0.0;
    Field u;
    Field v;
};

/// Initial profile: the reference profiles, zero, a polynomial
/// (coefficients in ascending powers of x) or an (x, value) CSV file.
struct ProfileSpec {
    enum class Kind { Reference, Zero, Polynomial, CsvFile };
    Kind kind = Kind::Reference;
    std::vector<double> coefficients;
    std::string path;

    static ProfileSpec reference() { return {}; }
    static ProfileSpec zero() { return {Kind::Zero, {}, {}}; }
    static ProfileSpec polynomial(std::vector<double> c) { return {Kind::Polynomial, std::move(c), {}}; }
    static ProfileSpec csv_file(std::string p) { return {Kind::CsvFile, {}, std::move(p)}; }
};

enum class ProfileRole { Density, Oxygen };

/// The reference profiles are u0 = x^2 (3 - 2x) / 2 for the density and v0 = x^2 for the oxygen.
Field sample_profile(const ProfileSpec& spec, const Grid1D& grid, ProfileRole role);

/// Value at x = L: exact for analytic kinds, linear extrapolation from the last two cells otherwise.
double profile_value_at_end(const ProfileSpec& spec, const Grid1D& grid, ProfileRole role);

struct InitialOptions {
    /// Accept m = 0 (u0 identically zero): the system decouples into a heat equation for v.
    bool allow_zero_mass = false;
};

/// Samples and validates (u0, v0): 0 <= u0 < K, v0 >= 0, v0(L) = b and m = int u0 in (0, K L).
/// Throws ValidationError naming the offending cells.
TimeState initial_state(const Params& params, const Grid1D& grid, const ProfileSpec& u0, const ProfileSpec& v0,
                        const InitialOptions& opts = {});

/// Advances the IMEX finite-volume scheme by one step of size cfg.dt.
///
/// (1) face velocities w = chi v_x from v^n with the mirror ghost at x = 0 and
///     the Dirichlet ghost 2b - v_{n-1} at x = L;
/// (2) u: backward-Euler diffusion with D at the face average, chemotactic
///     flux w S(u) (upwinded on the sign of w, or the arithmetic mean when
///     upwind is off), zero flux on both boundary faces;
/// (3) v: backward-Euler diffusion with the consumption u^{n+1} v^{n+1} implicit;
/// (4) t += dt.
///
/// Throws StepSizeError in explicit mode when the CFL bound fails and
/// ConsistencyError if the discrete maximum principle for v is broken.
TimeState step(const TimeState& state, const Params& params, const SchemeConfig& cfg);

struct DiagnosticSample {
    double t = 0.0;
    double mass = 0.0;
    double u_min = 0.0;
    double u_max = 0.0;
    double v_min = 0.0;
    double v_max = 0.0;
    std::optional<double> dist_h1;  ///< sqrt(|u - U|_H1^2 + |v - V|_H1^2) when a steady reference is given
};

struct Trajectory {
    std::vector<TimeState> snapshots;
    std::vector<DiagnosticSample> diagnostics;
    double initial_mass = 0.0;
    double max_relative_mass_drift = 0.0;  ///< over every step, not only the samples
    double max_courant = 0.0;              ///< max dt |w| / dx over every step
};

/// H1 distance of (u, v) from the steady pair.
double steady_distance(const Field& u, const Field& v, const SteadyState& reference);

/// Integrates from `initial` to cfg.t_end. Snapshot k is recorded at step round(t_k / dt).
Trajectory run(const Params& params, const SchemeConfig& cfg, TimeState initial,
               const SteadyState* reference = nullptr);

Trajectory run(const Params& params, const Grid1D& grid, const SchemeConfig& cfg, const ProfileSpec& u0,
               const ProfileSpec& v0, const SteadyState* reference = nullptr, const InitialOptions& opts = {});

/// Snapshot file name embedding the time, e.g. "snapshot_t25.csv".
std::string snapshot_filename(double t);

void write_snapshot_csv(const std::string& path, const TimeState& s);
void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticSample>& diag);

}  // namespace chemo
