#include "chemo/model.hpp"

#include "chemo/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace chemo {

namespace {

std::string fmt_value(const char* name, double value) {
    std::ostringstream os;
    os.precision(17);
    os << name << " = " << value;
    return os.str();
}

void require_sub_capacity(const QFamily& q, double u, const char* fn) {
    if (!(u >= 0.0) || !(u < q.capacity)) {
        throw DomainError(std::string(fn) + ": requires 0 <= u < K, got " + fmt_value("u", u));
    }
}

}  // namespace

void QFamily::validate() const {
    if (!(capacity > 0.0) || !std::isfinite(capacity)) {
        throw ValidationError(fmt_value("capacity must be positive and finite, got capacity", capacity));
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw ValidationError(fmt_value("gamma must be positive and finite, got gamma", gamma));
    }
}

void Params::validate_coefficients() const {
    q.validate();
    if (!(chi > 0.0) || !std::isfinite(chi)) throw ValidationError(fmt_value("chi must be positive, got chi", chi));
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw ValidationError(fmt_value("length must be positive, got length", length));
    }
    if (!(boundary_b > 0.0) || !std::isfinite(boundary_b)) {
        throw ValidationError(fmt_value("boundary_b must be positive, got boundary_b", boundary_b));
    }
}

void Params::validate() const {
    validate_coefficients();
    const double cap = q.capacity * length;
    if (!(mass > 0.0) || !(mass < cap)) {
        std::ostringstream os;
        os.precision(17);
        os << "mass must lie in (0, K*L) = (0, " << cap << "), got mass = " << mass;
        throw ValidationError(os.str());
    }
}

double q_eval(const QFamily& q, double u) {
    if (!(u >= 0.0)) throw DomainError("q_eval: requires u >= 0, got " + fmt_value("u", u));
    const double free = 1.0 - u / q.capacity;
    if (free <= 0.0) return 0.0;
    return q.gamma == 1.0 ? free : std::pow(free, q.gamma);
}

double q_derivative(const QFamily& q, double u) {
    require_sub_capacity(q, u, "q_derivative");
    const double free = 1.0 - u / q.capacity;
    if (q.gamma == 1.0) return -1.0 / q.capacity;
    return -q.gamma / q.capacity * std::pow(free, q.gamma - 1.0);
}

double diffusivity(const QFamily& q, double u) {
    require_sub_capacity(q, u, "diffusivity");
    if (q.gamma == 1.0) return 1.0;
    const double s = u / q.capacity;
    const double free = 1.0 - s;
    return std::pow(free, q.gamma - 1.0) * (free + q.gamma * s);
}

double sensitivity(const QFamily& q, double u) { return q_eval(q, u) * u; }

double g_eval(const QFamily& q, double u) {
    require_sub_capacity(q, u, "g_eval");
    return u / q_eval(q, u);
}

double g_derivative(const QFamily& q, double u) {
    const double qu = q_eval(q, u);
    return diffusivity(q, u) / (qu * qu);
}

double g_inverse(const QFamily& q, double w, double tol) {
    if (!(w >= 0.0) || std::isinf(w)) {
        throw DomainError("g_inverse: requires finite w >= 0, got " + fmt_value("w", w));
    }
    if (!(tol > 0.0)) throw DomainError("g_inverse: tol must be positive");
    if (w == 0.0) return 0.0;

    const double K = q.capacity;
    const double hi_cap = K * (1.0 - kCapacityMargin);
    if (g_eval(q, hi_cap) < w) {
        throw CapacityError("g_inverse: " + fmt_value("w", w) +
                                " exceeds G at the upper bracket K(1 - 1e-14); the root is not resolvable",
                            w);
    }

    if (q.gamma == 1.0) return K * w / (K + w);

    const double log_w = std::log(w);
    double lo = 0.0;
    double hi = hi_cap;

    // gamma = 1 root as the starting guess; it sits inside (0, K).
    double u = K * w / (K + w);
    double best = u;
    double best_err = std::numeric_limits<double>::infinity();

    for (int it = 0; it < kGInverseMaxIter; ++it) {
        const double g = g_eval(q, u);
        const double err = std::abs(g - w);
        if (err < best_err) {
            best_err = err;
            best = u;
        }
        // Relative stop; stricter than tol * max(1, w) for small w.
        if (err <= tol * w) return u;

        if (g < w) {
            lo = u;
        } else {
            hi = u;
        }
        if (std::nextafter(lo, hi) >= hi) {
            // Bracket is two neighbouring doubles: nothing closer exists.
            const double e_lo = lo > 0.0 ? std::abs(g_eval(q, lo) - w) : w;
            const double e_hi = std::abs(g_eval(q, hi) - w);
            return e_lo <= e_hi ? lo : hi;
        }

        // Newton on h(u) = log u - gamma log(1 - u/K) - log w.
        const double h = std::log(u) - q.gamma * std::log1p(-u / K) - log_w;
        const double dh = 1.0 / u + q.gamma / (K - u);
        double next = u - h / dh;
        if (!(next > lo && next < hi) || next == u) {
            next = 0.5 * (lo + hi);
            if (next == u) next = (g < w) ? hi : lo;
        }
        u = next;
    }

    std::ostringstream os;
    os.precision(17);
    os << "g_inverse: no convergence for w = " << w << " after " << kGInverseMaxIter
       << " iterations; last bracket [" << lo << ", " << hi << "], best residual " << best_err
       << " at u = " << best;
    throw SolverError(os.str());
}

}  // namespace chemo
