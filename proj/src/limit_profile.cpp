#include "chemo/limit_profile.hpp"

#include "chemo/csv.hpp"
#include "chemo/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace chemo {

namespace {

void require_inside(const LimitProfile& p, double x) {
    if (!(x >= 0.0 && x <= p.length)) throw DomainError("limit profile: x outside [0, L]");
}

}  // namespace

LimitProfile make_limit_profile(const Params& params) {
    params.validate();
    const double K = params.q.capacity;
    const double rk = std::sqrt(K);
    const double m = params.mass;
    const double b = params.boundary_b;
    const double L = params.length;
    const double denom = 1.0 + std::exp(2.0 * m / rk);
    return {
        .interface = L - m / K,
        .plateau = 2.0 * b * std::exp(m / rk) / denom,
        .c1 = b * std::exp(rk * L) / denom,
        .c2 = b * std::exp(-rk * L + 2.0 * m / rk) / denom,
        .capacity = K,
        .length = L,
        .boundary_b = b,
        .mass = m,
    };
}

double u_limit(const LimitProfile& p, double x) {
    require_inside(p, x);
    if (x < p.interface) return 0.0;
    if (x > p.interface) return p.capacity;
    return 0.5 * p.capacity;
}

double v_limit(const LimitProfile& p, double x) {
    require_inside(p, x);
    if (x <= p.interface) return p.plateau;
    // C1 e^{-rk x} + C2 e^{rk x} rewritten around x = L so nothing overflows for long domains.
    const double rk = std::sqrt(p.capacity);
    const double a = 2.0 * p.mass / rk;
    const double d = rk * (p.length - x);
    return p.boundary_b * (std::exp(d) + std::exp(a - d)) / (1.0 + std::exp(a));
}

double v_limit_right_derivative(const LimitProfile& p, double x) {
    require_inside(p, x);
    const double rk = std::sqrt(p.capacity);
    const double a = 2.0 * p.mass / rk;
    const double d = rk * (p.length - x);
    return rk * p.boundary_b * (std::exp(a - d) - std::exp(d)) / (1.0 + std::exp(a));
}

std::optional<double> crossing(const Field& U, double level) {
    if (U[0] >= level) return std::nullopt;
    const Grid1D& g = U.grid();
    for (std::size_t j = 1; j < U.size(); ++j) {
        if (U[j] >= level) {
            const double t = (level - U[j - 1]) / (U[j] - U[j - 1]);
            return g.center(static_cast<int>(j) - 1) + t * g.dx();
        }
    }
    return std::nullopt;
}

LimitMetrics compare_to_limit(const Field& U, const Field& V, const LimitProfile& p) {
    if (!(U.grid() == V.grid())) throw ValidationError("compare_to_limit: U and V grids differ");
    if (std::abs(U.grid().length() - p.length) > 1e-12 * p.length) {
        throw ValidationError("compare_to_limit: grid length differs from the profile's L");
    }
    const Grid1D& g = U.grid();
    LimitMetrics m;
    for (int j = 0; j < g.cells(); ++j) {
        const double x = g.center(j);
        m.l1_u += std::abs(U[j] - u_limit(p, x));
        m.sup_v = std::max(m.sup_v, std::abs(V[j] - v_limit(p, x)));
    }
    m.l1_u *= g.dx();

    const double K = p.capacity;
    m.midpoint = crossing(U, 0.5 * K);
    const auto lo = crossing(U, 0.1 * K);
    const auto hi = crossing(U, 0.9 * K);
    if (lo && hi) m.width = *hi - *lo;
    return m;
}

LimitMetrics compare_to_limit(const SteadyState& s, const LimitProfile& p) { return compare_to_limit(s.U, s.V, p); }

void write_limit_csv(const std::string& path, const LimitProfile& p, int cells) {
    if (cells < 1) throw ValidationError("write_limit_csv: cells must be positive");
    std::vector<double> x(cells + 1), u(cells + 1), v(cells + 1);
    for (int i = 0; i <= cells; ++i) {
        x[i] = i == cells ? p.length : p.length * i / cells;
        u[i] = u_limit(p, x[i]);
        v[i] = v_limit(p, x[i]);
    }
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    csv::write_table(out, {"x", "U_inf", "V_inf"}, {x, u, v});
}

}  // namespace chemo
