#include "chemo/steady.hpp"

#include "chemo/error.hpp"
#include "chemo/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace chemo {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kNewtonSwitchGap = 1e-3;
constexpr int kNewtonMaxIter = 50;
constexpr int kShiftSamples = 64;
constexpr double kShiftSafety = 1.25;
constexpr int kMaxBisection = 200;
constexpr double kScaledCapLog = 27.631021115928547;  // ln(1e12)

double exp_weight(const Params& p, double log_lambda, double s) {
    if (log_lambda == -std::numeric_limits<double>::infinity()) return 0.0;
    return std::exp(log_lambda + p.chi * s);
}

// Past G(K(1 - margin)) the root lies within K * margin of the capacity, so the
// upper bracket itself is returned.
double density_at(const Params& p, double log_lambda, double s, double g_tol) {
    try {
        return g_inverse(p.q, exp_weight(p, log_lambda, s), g_tol);
    } catch (const CapacityError&) {
        return p.q.capacity * (1.0 - kCapacityMargin);
    }
}

double reaction(const Params& p, double log_lambda, double s, double g_tol) {
    return density_at(p, log_lambda, s, g_tol) * s;
}

// f'(s) = U + s dU/ds with dU/ds = chi U q(U) / D(U).
double reaction_derivative(const Params& p, double log_lambda, double s, double g_tol) {
    const double u = density_at(p, log_lambda, s, g_tol);
    if (u == 0.0) return 0.0;
    return u + s * p.chi * u * q_eval(p.q, u) / diffusivity(p.q, u);
}

// -Delta_h with the mirror ghost on the left and the Dirichlet ghost on the right, plus `shift` on the diagonal.
Tridiagonal neg_laplacian(const Grid1D& grid, double shift) {
    const std::size_t n = grid.size();
    const double inv = 1.0 / (grid.dx() * grid.dx());
    Tridiagonal a(n);
    for (std::size_t j = 0; j < n; ++j) {
        a.lower[j] = j > 0 ? -inv : 0.0;
        a.upper[j] = j + 1 < n ? -inv : 0.0;
        a.diag[j] = 2.0 * inv + shift;
    }
    a.diag[0] = inv + shift;
    a.diag[n - 1] = 3.0 * inv + shift;
    return a;
}

double sup_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

std::string describe_iterations(int it, double gap, double move) {
    std::ostringstream os;
    os.precision(6);
    os << "monotone iteration did not converge after " << it << " iterations (gap " << gap << ", last move "
       << move << ")";
    return os.str();
}

class VSolver {
public:
    VSolver(const Params& p, const Grid1D& g, double log_lambda, const SteadyTolerances& tol)
        : p_(p), grid_(g), log_lambda_(log_lambda), tol_(tol), n_(g.size()) {
        const double dx = g.dx();
        bc_ = 2.0 * p.boundary_b / (dx * dx);
    }

    VSolution run() {
        const double mu = picard_shift(p_, log_lambda_, tol_.g_inverse);
        const Tridiagonal a = neg_laplacian(grid_, mu);

        std::vector<double> upper(n_, p_.boundary_b), lower(n_, 0.0);
        std::vector<double> next_up(n_), next_lo(n_), rhs(n_), scratch;

        double gap = p_.boundary_b;
        double move = gap;
        for (int it = 1; it <= tol_.max_iterations; ++it) {
            picard_rhs(upper, mu, rhs);
            solve_tridiagonal(a, rhs, next_up, scratch);
            picard_rhs(lower, mu, rhs);
            solve_tridiagonal(a, rhs, next_lo, scratch);

            gap = 0.0;
            for (std::size_t j = 0; j < n_; ++j) {
                const double d = next_up[j] - next_lo[j];
                if (d < -10.0 * kEps * std::max(1.0, std::abs(next_up[j]))) {
                    std::ostringstream os;
                    os.precision(17);
                    os << "monotone iteration lost ordering at cell " << j << " (upper " << next_up[j] << " < lower "
                       << next_lo[j] << ", shift " << mu << ")";
                    throw ConsistencyError(os.str());
                }
                gap = std::max(gap, std::abs(d));
            }
            move = std::max(sup_diff(next_up, upper), sup_diff(next_lo, lower));
            upper.swap(next_up);
            lower.swap(next_lo);

            if (gap < tol_.v && move < tol_.v) {
                std::vector<double> mid(n_);
                for (std::size_t j = 0; j < n_; ++j) mid[j] = 0.5 * (upper[j] + lower[j]);
                return {Field(grid_, std::move(mid)), it, gap};
            }
            if (tol_.newton && gap < kNewtonSwitchGap) {
                std::vector<double> mid(n_);
                for (std::size_t j = 0; j < n_; ++j) mid[j] = 0.5 * (upper[j] + lower[j]);
                return newton(std::move(mid), it, gap);
            }
        }
        throw SolverError(describe_iterations(tol_.max_iterations, gap, move));
    }

private:
    void picard_rhs(const std::vector<double>& v, double mu, std::vector<double>& rhs) const {
        for (std::size_t j = 0; j < n_; ++j) rhs[j] = mu * v[j] - reaction(p_, log_lambda_, v[j], tol_.g_inverse);
        rhs[n_ - 1] += bc_;
    }

    VSolution newton(std::vector<double> v, int iterations, double gap) const {
        const Tridiagonal base = neg_laplacian(grid_, 0.0);
        std::vector<double> residual(n_), delta(n_), scratch;
        for (int k = 1; k <= kNewtonMaxIter; ++k) {
            Tridiagonal jac = base;
            const auto lap = base.apply(v);
            for (std::size_t j = 0; j < n_; ++j) {
                residual[j] = -(lap[j] + reaction(p_, log_lambda_, v[j], tol_.g_inverse));
                jac.diag[j] += reaction_derivative(p_, log_lambda_, v[j], tol_.g_inverse);
            }
            residual[n_ - 1] += bc_;
            solve_tridiagonal(jac, residual, delta, scratch);
            double step = 0.0;
            for (std::size_t j = 0; j < n_; ++j) {
                v[j] += delta[j];
                step = std::max(step, std::abs(delta[j]));
            }
            if (step < 0.1 * tol_.v) return {Field(grid_, std::move(v)), iterations + k, gap};
        }
        throw SolverError("Newton refinement of the oxygen profile did not converge");
    }

    const Params& p_;
    const Grid1D& grid_;
    double log_lambda_;
    SteadyTolerances tol_;
    std::size_t n_;
    double bc_ = 0.0;
};

double safe_log(double lambda) {
    if (!(lambda >= 0.0) || std::isinf(lambda)) {
        throw DomainError("lambda must be finite and nonnegative");
    }
    return lambda == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(lambda);
}

}  // namespace

double picard_shift(const Params& params, double log_lambda, double g_tol) {
    const double b = params.boundary_b;
    const double h = 1e-6 * b;
    double fmax = 0.0;
    for (int i = 0; i < kShiftSamples; ++i) {
        const double s = b * i / (kShiftSamples - 1);
        const double lo = std::max(0.0, s - h);
        const double hi = std::min(b, s + h);
        const double slope =
            (reaction(params, log_lambda, hi, g_tol) - reaction(params, log_lambda, lo, g_tol)) / (hi - lo);
        fmax = std::max(fmax, slope);
    }
    return kShiftSafety * fmax;
}

VSolution solve_v_for_log_lambda(const Params& params, const Grid1D& grid, double log_lambda,
                                 const SteadyTolerances& tol) {
    params.validate_coefficients();
    if (!(tol.v > 0.0)) throw DomainError("solve_v_for_lambda: tolerance must be positive");
    if (log_lambda == -std::numeric_limits<double>::infinity()) {
        // f vanishes identically: the exact solution is the constant b.
        return {Field(grid, params.boundary_b), 0, 0.0};
    }
    if (std::isnan(log_lambda) || std::isinf(log_lambda)) throw DomainError("log lambda must be finite");
    return VSolver(params, grid, log_lambda, tol).run();
}

VSolution solve_v_for_lambda(const Params& params, const Grid1D& grid, double lambda, const SteadyTolerances& tol) {
    return solve_v_for_log_lambda(params, grid, safe_log(lambda), tol);
}

Field density_from_v(const Params& params, const Field& v, double log_lambda, double g_tol) {
    Field u(v.grid());
    for (std::size_t j = 0; j < v.size(); ++j) u[j] = density_at(params, log_lambda, v[j], g_tol);
    return u;
}

double mass_of_log_lambda(const Params& params, const Grid1D& grid, double log_lambda, const SteadyTolerances& tol) {
    const auto sol = solve_v_for_log_lambda(params, grid, log_lambda, tol);
    return integrate(density_from_v(params, sol.v, log_lambda, tol.g_inverse));
}

double mass_of_lambda(const Params& params, const Grid1D& grid, double lambda, const SteadyTolerances& tol) {
    return mass_of_log_lambda(params, grid, safe_log(lambda), tol);
}

LambdaRoot find_lambda(const Params& params, const Grid1D& grid, const SteadyTolerances& tol) {
    params.validate();
    if (std::abs(grid.length() - params.length) > 1e-12 * params.length) {
        throw ValidationError("find_lambda: grid length differs from params.length");
    }
    const double m = params.mass;
    const double offset = params.chi * params.boundary_b;  // log lambda = log s - chi b
    const double step = std::log(10.0);

    auto mass_at = [&](double log_lambda) { return mass_of_log_lambda(params, grid, log_lambda, tol); };

    double log_s = 0.0;
    double mass = mass_at(log_s - offset);
    if (std::abs(mass - m) <= tol.mass) return {std::exp(log_s - offset), log_s - offset, mass, 0};

    double lo, hi;
    if (mass < m) {
        lo = log_s;
        while (true) {
            log_s += step;
            if (log_s > kScaledCapLog * (1 + 1e-12)) {
                throw RangeError("find_lambda: mass stays below m up to lambda e^{chi b} = 1e12; m is too close to K L");
            }
            mass = mass_at(log_s - offset);
            if (std::abs(mass - m) <= tol.mass) return {std::exp(log_s - offset), log_s - offset, mass, 0};
            if (mass > m) break;
            lo = log_s;
        }
        hi = log_s;
    } else {
        hi = log_s;
        while (true) {
            log_s -= step;
            if (log_s < -kScaledCapLog * (1 + 1e-12)) {
                throw RangeError("find_lambda: mass stays above m down to lambda e^{chi b} = 1e-12; m is too small");
            }
            mass = mass_at(log_s - offset);
            if (std::abs(mass - m) <= tol.mass) return {std::exp(log_s - offset), log_s - offset, mass, 0};
            if (mass < m) break;
            hi = log_s;
        }
        lo = log_s;
    }

    double lo_l = lo - offset;
    double hi_l = hi - offset;
    for (int k = 1; k <= kMaxBisection; ++k) {
        const double mid = 0.5 * (lo_l + hi_l);
        if (mid == lo_l || mid == hi_l) {
            std::ostringstream os;
            os.precision(17);
            os << "find_lambda: bracket collapsed at log lambda = " << mid << " with |mass - m| = " << std::abs(mass - m)
               << " above tol_mass";
            throw SolverError(os.str());
        }
        mass = mass_at(mid);
        if (std::abs(mass - m) <= tol.mass) return {std::exp(mid), mid, mass, k};
        if (mass < m) {
            lo_l = mid;
        } else {
            hi_l = mid;
        }
    }
    throw SolverError("find_lambda: bisection step cap reached");
}

SteadyState assemble_steady(const Params& params, const Grid1D& grid, const SteadyTolerances& tol) {
    const LambdaRoot root = find_lambda(params, grid, tol);
    VSolution sol = solve_v_for_log_lambda(params, grid, root.log_lambda, tol);
    Field U = density_from_v(params, sol.v, root.log_lambda, tol.g_inverse);

    SteadyState s{
        .lambda = root.lambda,
        .log_lambda = root.log_lambda,
        .U = std::move(U),
        .V = std::move(sol.v),
        .iterations = sol.iterations,
        .bisection_steps = root.bisection_steps,
    };
    s.mass_residual = std::abs(integrate(s.U) - params.mass);
    s.ode_residual = ode_residual(s.U, s.V);
    s.flux_residual = flux_residual(params, s.U, s.V);
    check_steady_invariants(params, s.U, s.V);
    return s;
}

double ode_residual(const Field& U, const Field& V) {
    const std::size_t n = V.size();
    const double dx = V.grid().dx();
    const double inv = 1.0 / (12.0 * dx * dx);
    double r = 0.0;
    for (std::size_t j = 2; j + 2 < n; ++j) {
        const double vxx = (-V[j - 2] + 16.0 * V[j - 1] - 30.0 * V[j] + 16.0 * V[j + 1] - V[j + 2]) * inv;
        r = std::max(r, std::abs(vxx - U[j] * V[j]));
    }
    return r;
}

double flux_residual(const Params& params, const Field& U, const Field& V) {
    const double dx = V.grid().dx();
    double r = 0.0;
    for (std::size_t j = 1; j < V.size(); ++j) {
        const double uf = 0.5 * (U[j] + U[j - 1]);
        const double flux = diffusivity(params.q, uf) * (U[j] - U[j - 1]) / dx -
                            params.chi * sensitivity(params.q, uf) * (V[j] - V[j - 1]) / dx;
        r = std::max(r, std::abs(flux));
    }
    return r;
}

double gradient_bound_excess(const Field& U, const Field& V) {
    const double dx = V.grid().dx();
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < V.size(); ++j) {
        const double vx = (V[j] - V[j - 1]) / dx;
        const double uf = 0.5 * (U[j] + U[j - 1]);
        const double vf = 0.5 * (V[j] + V[j - 1]);
        worst = std::max(worst, vx * vx - uf * vf * vf);
    }
    return worst;
}

void check_steady_invariants(const Params& params, const Field& U, const Field& V) {
    constexpr double slack = 1e-12;
    const double K = params.q.capacity;
    const double b = params.boundary_b;
    for (std::size_t j = 0; j < U.size(); ++j) {
        if (!(U[j] > 0.0 && U[j] < K)) {
            throw ConsistencyError("steady state: U leaves (0, K) at cell " + std::to_string(j));
        }
        if (!(V[j] > 0.0 && V[j] <= b * (1.0 + slack))) {
            throw ConsistencyError("steady state: V leaves (0, b] at cell " + std::to_string(j));
        }
        if (j > 0 && (U[j] - U[j - 1] < -slack || V[j] - V[j - 1] < -slack)) {
            throw ConsistencyError("steady state: profile decreases at cell " + std::to_string(j));
        }
    }
}

double value_at_origin(const Field& v) { return (9.0 * v[0] - v[1]) / 8.0; }

}  // namespace chemo
