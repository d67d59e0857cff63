#pragma once

#include "chemo/evolve.hpp"
#include "chemo/grid.hpp"
#include "chemo/limit_profile.hpp"
#include "chemo/steady.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace chemo {

/// Perturbation of (u, v) from the steady state in antiderivative coordinates:
/// phi = int_0^x (u - U), psi = v - V.
struct PerturbationNorms {
    double phi_h2 = 0.0;
    double psi_h1 = 0.0;
    double total = 0.0;    ///< phi_h2^2 + psi_h1^2
    double phi_end = 0.0;  ///< phi(L) = int (u - U); zero when the masses agree
};

/// Throws ValidationError on grid mismatch or when psi(L), extrapolated from
/// the last two cells, exceeds `psi_end_tol` (the perturbation must keep v(L) = b).
PerturbationNorms perturbation_norms(const Field& u, const Field& v, const SteadyState& s,
                                     double psi_end_tol = 1e-3);

struct DecayReport {
    double alpha = 0.0;  ///< fitted rate in dist ~ c e^{-alpha t}
    double c = 0.0;
    double r2 = 0.0;
    double t_a = 0.0;
    double t_b = 0.0;
    int samples = 0;
};

inline constexpr int kMinDecaySamples = 8;

/// Least-squares line through (t, log dist_h1) over samples with t in [t_a, t_b].
/// Fewer than 8 samples, or samples without a distance, throw ValidationError;
/// a non-positive distance throws DomainError.
DecayReport decay_fit(const std::vector<DiagnosticSample>& diag, double t_a, double t_b);

/// Same fit on plain (t, value) pairs.
DecayReport decay_fit(const std::vector<double>& t, const std::vector<double>& values, double t_a, double t_b);

struct SweepRow {
    double chi = 0.0;
    std::optional<double> lambda;
    std::optional<double> log_lambda;
    std::optional<double> plateau_v0;
    std::optional<double> midpoint;
    std::optional<double> width;
    std::optional<double> l1_u;
    std::string error;  ///< empty on success
};

/// One assemble_steady + compare_to_limit per chi; failures are kept in their row.
std::vector<SweepRow> chi_sweep(const Params& base, const Grid1D& grid, const std::vector<double>& chis,
                                const SteadyTolerances& tol = {});

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

/// Observed order of convergence from a sequence of grids doubling in size.
struct RefinementReport {
    std::vector<int> cells;
    std::vector<double> values;  ///< the functional (or error) per grid
    std::vector<double> orders;  ///< one per consecutive pair of differences/errors
    std::optional<double> observed_order;  ///< finest estimate; empty when unavailable
    std::string note;
};

enum class RefinementMode {
    /// values converge to an unknown limit; orders from successive differences
    /// log2(|E_i - E_{i+1}| / |E_{i+1} - E_{i+2}|).
    SuccessiveDifferences,
    /// values are errors that tend to zero; orders log2(E_i / E_{i+1}).
    Errors,
};

/// Requires at least three cell counts, each twice the previous. Orders are
/// unavailable when a difference vanishes or the sequence is not strictly decreasing.
RefinementReport refinement_study(const std::function<double(int)>& functional, const std::vector<int>& cells,
                                  RefinementMode mode);

/// Steady ode_residual on each grid.
RefinementReport steady_residual_study(const Params& params, const std::vector<int>& cells,
                                       const SteadyTolerances& tol = {});

/// Evolves the same problem on every grid to cfg.t_end and measures the L2
/// distance of u from the finest solution restricted by cell averaging.
/// The finest grid is the reference, so the report has one fewer value than grids.
RefinementReport evolve_refinement_study(const Params& params, const std::vector<int>& cells, SchemeConfig cfg,
                                         const ProfileSpec& u0, const ProfileSpec& v0);

/// Block averages of a fine field onto a grid with cells / factor cells.
Field restrict_average(const Field& fine, int factor);

}  // namespace chemo
