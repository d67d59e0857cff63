#pragma once

namespace chemo {

/// Squeezing probability q(u) = ((1 - u/K)^+)^gamma and the functions derived from it.
struct QFamily {
    double capacity = 1.0;  ///< crowding capacity K
    double gamma = 1.0;

    void validate() const;
};

/// Problem parameters of the chemotaxis-consumption system on (0, L).
struct Params {
    double chi = 1.0;         ///< chemotactic coefficient
    double length = 1.0;      ///< domain length L
    double boundary_b = 1.0;  ///< oxygen level imposed at x = L
    double mass = 0.5;        ///< bacterial mass m, 0 < m < K L
    QFamily q;

    /// Checks positivity of all coefficients and 0 < m < K L.
    void validate() const;
    /// Same checks except the mass range (used by pure-diffusion runs with m = 0).
    void validate_coefficients() const;
};

inline constexpr double kGInverseTol = 1e-14;
inline constexpr int kGInverseMaxIter = 200;
/// Relative offset of the upper bracket of g_inverse below the capacity.
inline constexpr double kCapacityMargin = 1e-14;

/// q(u); zero for u >= K. Throws DomainError for u < 0.
double q_eval(const QFamily& q, double u);

/// q'(u) on [0, K).
double q_derivative(const QFamily& q, double u);

/// D(u) = q(u) - q'(u) u on [0, K). Throws DomainError outside.
double diffusivity(const QFamily& q, double u);

/// S(u) = q(u) u on [0, inf).
double sensitivity(const QFamily& q, double u);

/// G(u) = u / q(u) on [0, K). Throws DomainError outside.
double g_eval(const QFamily& q, double u);

/// G'(u) = D(u) / q(u)^2 on [0, K).
double g_derivative(const QFamily& q, double u);

/// Solves G(u) = w for u in [0, K).
///
/// gamma == 1 uses the closed form K w / (K + w). Other exponents run a
/// bracketed Newton iteration on log G(u) = log w. The iteration stops when
/// |G(u) - w| <= tol * max(1, w) or when the bracket has collapsed to
/// neighbouring doubles; near the capacity G is so steep that the second
/// condition is usually the one reached.
///
/// Throws CapacityError when w exceeds G(K (1 - kCapacityMargin)) and
/// SolverError (with the final bracket in the message) on iteration cap.
double g_inverse(const QFamily& q, double w, double tol = kGInverseTol);

}  // namespace chemo
