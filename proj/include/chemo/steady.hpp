#pragma once

#include "chemo/grid.hpp"
#include "chemo/model.hpp"

namespace chemo {

struct SteadyTolerances {
    double mass = 1e-8;         ///< |int U - m| at the selected lambda
    double v = 1e-10;           ///< sup-norm gap/step of the monotone iteration
    double g_inverse = kGInverseTol;
    int max_iterations = 10000;
    /// Switch to Newton once the monotone gap is below 1e-3 (same tridiagonal structure).
    bool newton = false;
};

/// Solution of the reduced oxygen problem at one lambda.
struct VSolution {
    Field v;
    int iterations = 0;  ///< monotone (plus Newton) iterations performed
    double gap = 0.0;    ///< final sup-norm gap between upper and lower iterates
};

/// The non-constant steady state (U, V) together with lambda and solver diagnostics.
struct SteadyState {
    double lambda = 0.0;
    double log_lambda = 0.0;  ///< kept separately: lambda underflows once chi*b exceeds ~700
    Field U;
    Field V;
    double mass_residual = 0.0;
    double ode_residual = 0.0;
    double flux_residual = 0.0;
    int iterations = 0;
    int bisection_steps = 0;
};

struct LambdaRoot {
    double lambda = 0.0;
    double log_lambda = 0.0;
    double mass = 0.0;
    int bisection_steps = 0;
};

/// Shift mu of the Picard iteration: 1.25 times the largest central-difference
/// estimate of f'(s), f(s) = G^{-1}(lambda e^{chi s}) s, over 64 points of [0, b].
double picard_shift(const Params& params, double log_lambda, double g_tol = kGInverseTol);

/// Solves -V'' + G^{-1}(lambda e^{chi V}) V = 0, V'(0) = 0, V(L) = b on the cell-centred grid.
///
/// Two monotone sequences are run, one descending from the upper solution b
/// and one ascending from the lower solution 0. Each step solves
/// (-Delta_h + mu) V+ = mu V - f(V) with the mirror ghost at x = 0 and the
/// Dirichlet ghost 2b - V_{n-1} at x = L. The iteration ends once the two
/// sequences are within tol.v of each other and neither moved by more than
/// tol.v; their average is returned.
///
/// Throws SolverError when max_iterations is exhausted and ConsistencyError
/// if the upper iterate drops below the lower one by more than 10 eps.
VSolution solve_v_for_lambda(const Params& params, const Grid1D& grid, double lambda,
                             const SteadyTolerances& tol = {});
VSolution solve_v_for_log_lambda(const Params& params, const Grid1D& grid, double log_lambda,
                                 const SteadyTolerances& tol = {});

/// U_j = G^{-1}(lambda exp(chi V_j)), saturating at K(1 - 1e-14) where the root is closer to K than that.
Field density_from_v(const Params& params, const Field& v, double log_lambda, double g_tol = kGInverseTol);

/// int G^{-1}(lambda e^{chi V_lambda}) dx.
double mass_of_lambda(const Params& params, const Grid1D& grid, double lambda, const SteadyTolerances& tol = {});
double mass_of_log_lambda(const Params& params, const Grid1D& grid, double log_lambda,
                          const SteadyTolerances& tol = {});

/// Locates lambda_m with |mass(lambda_m) - m| <= tol.mass.
///
/// The bracket search works on s = lambda e^{chi b} = G(U(L)): it starts at
/// s = 1 and moves by decades within [1e-12, 1e12] until the mass straddles m,
/// then bisects on log lambda. Throws RangeError if the caps are reached.
LambdaRoot find_lambda(const Params& params, const Grid1D& grid, const SteadyTolerances& tol = {});

/// find_lambda, then U from V, residuals and the invariant checks.
SteadyState assemble_steady(const Params& params, const Grid1D& grid, const SteadyTolerances& tol = {});

/// sup over cells 2..n-3 of |V'' - U V|, V'' by the fourth-order five-point stencil.
double ode_residual(const Field& U, const Field& V);

/// sup over interior faces of |D(U) U' - chi S(U) V'| with U averaged to the face.
double flux_residual(const Params& params, const Field& U, const Field& V);

/// max over interior faces of (V')^2 - U V^2 (U, V face averages). Nonpositive when the gradient bound holds.
double gradient_bound_excess(const Field& U, const Field& V);

/// Throws ConsistencyError unless 0 < U < K, 0 < V <= b and both are nondecreasing (slack 1e-12).
void check_steady_invariants(const Params& params, const Field& U, const Field& V);

/// V(0) from the even extension about x = 0: (9 V_0 - V_1) / 8.
double value_at_origin(const Field& v);

}  // namespace chemo
