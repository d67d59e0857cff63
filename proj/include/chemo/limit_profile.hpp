#pragma once

#include "chemo/grid.hpp"
#include "chemo/model.hpp"
#include "chemo/steady.hpp"

#include <optional>
#include <string>

namespace chemo {

/// Closed-form chi -> infinity profiles: U is a step from 0 to K at
/// x* = L - m/K and V is flat on [0, x*] and solves V'' = K V on [x*, L].
struct LimitProfile {
    double interface = 0.0;  ///< x* = L - m/K
    double plateau = 0.0;    ///< 2b e^{m/sqrt K} / (1 + e^{2m/sqrt K})
    double c1 = 0.0;         ///< b e^{sqrt K L} / (1 + e^{2m/sqrt K})
    double c2 = 0.0;         ///< b e^{-sqrt K L + 2m/sqrt K} / (1 + e^{2m/sqrt K})
    double capacity = 1.0;
    double length = 1.0;
    double boundary_b = 1.0;
    double mass = 0.5;
};

LimitProfile make_limit_profile(const Params& params);

/// 0 left of x*, K right of it, K/2 at x*. DomainError outside [0, L].
double u_limit(const LimitProfile& p, double x);

/// Plateau left of x*, C1 e^{-sqrt K x} + C2 e^{sqrt K x} right of it.
double v_limit(const LimitProfile& p, double x);

/// d v_limit / dx evaluated on the right branch.
double v_limit_right_derivative(const LimitProfile& p, double x);

/// Distances of a finite-chi profile pair from the limit.
struct LimitMetrics {
    double l1_u = 0.0;   ///< int |U - U_inf|
    double sup_v = 0.0;  ///< max |V - V_inf|
    std::optional<double> width;     ///< x(U = 0.9K) - x(U = 0.1K)
    std::optional<double> midpoint;  ///< x(U = K/2)
};

/// First x where U reaches `level`, linearly interpolated between the
/// bracketing cell centres; empty if U starts at or above the level or never reaches it.
std::optional<double> crossing(const Field& U, double level);

LimitMetrics compare_to_limit(const Field& U, const Field& V, const LimitProfile& p);
LimitMetrics compare_to_limit(const SteadyState& s, const LimitProfile& p);

/// CSV "x,U_inf,V_inf" at the n + 1 nodes i L / n (both endpoints included).
void write_limit_csv(const std::string& path, const LimitProfile& p, int cells);

}  // namespace chemo
