#include "chemo/evolve.hpp"

#include "chemo/csv.hpp"
#include "chemo/error.hpp"
#include "chemo/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace chemo {

void SchemeConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ValidationError("t_end must be positive");
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw ValidationError("cfl_safety must lie in (0, 1]");
    if (sample_stride < 1) throw ValidationError("sample_stride must be at least 1");
    for (std::size_t k = 0; k < snapshot_times.size(); ++k) {
        const double t = snapshot_times[k];
        if (!(t >= 0.0 && t <= t_end * (1.0 + 1e-12))) throw ValidationError("snapshot times must lie in [0, t_end]");
        if (k > 0 && !(t > snapshot_times[k - 1])) throw ValidationError("snapshot times must be strictly increasing");
    }
}

long long SchemeConfig::total_steps() const { return std::llround(t_end / dt); }

namespace {

double reference_value(ProfileRole role, double x) {
    return role == ProfileRole::Density ? 0.5 * x * x * (3.0 - 2.0 * x) : x * x;
}

double poly_value(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::string list_cells(const std::vector<std::size_t>& cells) {
    std::ostringstream os;
    const std::size_t shown = std::min<std::size_t>(cells.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) os << (i ? ", " : "") << cells[i];
    if (cells.size() > shown) os << ", ... (" << cells.size() << " cells)";
    return os.str();
}

/// Reused buffers and the assembled systems of one integration.
class Stepper {
public:
    Stepper(const Params& p, const SchemeConfig& cfg, std::size_t n)
        : p_(p), cfg_(cfg), n_(n), umat_(n), vmat_(n), rhs_(n), w_(n + 1) {}

    /// Advances (u, v) in place; returns the Courant number dt max|w| / dx of this step.
    double advance(const Grid1D& grid, std::vector<double>& u, std::vector<double>& v) {
        const double dx = grid.dx();
        const double dt = cfg_.dt;
        const double r = dt / dx;
        const double K = p_.q.capacity;
        const double b = p_.boundary_b;

        // (1) face velocities. The boundary faces carry no u-flux, so only 1..n-1 matter below.
        double wmax = 0.0;
        for (std::size_t f = 1; f < n_; ++f) {
            w_[f] = p_.chi * (v[f] - v[f - 1]) / dx;
            wmax = std::max(wmax, std::abs(w_[f]));
        }
        w_[0] = 0.0;
        w_[n_] = p_.chi * 2.0 * (b - v[n_ - 1]) / dx;
        const double courant = r * wmax;

        if (cfg_.chemotaxis == ChemotaxisMode::Explicit && wmax > 0.0) {
            const double limit = cfg_.cfl_safety * dx / wmax;
            if (dt > limit) {
                std::ostringstream os;
                os.precision(6);
                os << "explicit chemotaxis step violates the CFL bound: dt = " << dt << " > " << limit
                   << " (max |w| = " << wmax << ")";
                throw StepSizeError(os.str(), limit);
            }
        }

        // (2) u-system, assembled face by face so every column sums to one.
        std::fill(umat_.lower.begin(), umat_.lower.end(), 0.0);
        std::fill(umat_.upper.begin(), umat_.upper.end(), 0.0);
        std::fill(umat_.diag.begin(), umat_.diag.end(), 1.0);
        std::copy(u.begin(), u.end(), rhs_.begin());
        const double u_face_cap = K * (1.0 - 1e-12);
        for (std::size_t f = 1; f < n_; ++f) {
            const std::size_t L = f - 1, R = f;
            // Coefficient evaluation only; the state itself is never modified.
            const double uf = std::clamp(0.5 * (u[L] + u[R]), 0.0, u_face_cap);
            const double a = r * diffusivity(p_.q, uf) / dx;
            const double qL = q_eval(p_.q, std::max(u[L], 0.0));
            const double qR = q_eval(p_.q, std::max(u[R], 0.0));

            // dt/dx * J_f = -a (u_R - u_L) + cL u_L + cR u_R
            double cL = 0.0, cR = 0.0;
            if (cfg_.upwind) {
                cL = r * std::max(w_[f], 0.0) * qL;
                cR = r * std::min(w_[f], 0.0) * qR;
            } else {
                cL = 0.5 * r * w_[f] * qL;
                cR = 0.5 * r * w_[f] * qR;
            }

            umat_.diag[L] += a;
            umat_.upper[L] -= a;
            umat_.diag[R] += a;
            umat_.lower[R] -= a;
            if (cfg_.chemotaxis == ChemotaxisMode::SemiImplicit) {
                umat_.diag[L] += cL;
                umat_.upper[L] += cR;
                umat_.lower[R] -= cL;
                umat_.diag[R] -= cR;
            } else {
                const double flux = cL * u[L] + cR * u[R];
                rhs_[L] -= flux;
                rhs_[R] += flux;
            }
        }
        solve_tridiagonal(umat_, rhs_, u, scratch_);

        // (3) v-system with the fresh u in the consumption term.
        const double s = dt / (dx * dx);
        double vcap = b;
        for (std::size_t j = 0; j < n_; ++j) {
            vcap = std::max(vcap, v[j]);
            vmat_.lower[j] = j > 0 ? -s : 0.0;
            vmat_.upper[j] = j + 1 < n_ ? -s : 0.0;
            vmat_.diag[j] = 1.0 + 2.0 * s + dt * u[j];
            rhs_[j] = v[j];
        }
        vmat_.diag[0] = 1.0 + s + dt * u[0];
        vmat_.diag[n_ - 1] = 1.0 + 3.0 * s + dt * u[n_ - 1];
        rhs_[n_ - 1] += 2.0 * b * s;
        solve_tridiagonal(vmat_, rhs_, v, scratch_);

        const double vtol = 1e-12 * std::max(1.0, vcap);
        for (std::size_t j = 0; j < n_; ++j) {
            if (!(v[j] >= 0.0 && v[j] <= vcap + vtol)) {
                std::ostringstream os;
                os.precision(17);
                os << "oxygen left [0, " << vcap << "] at cell " << j << ": v = " << v[j];
                throw ConsistencyError(os.str());
            }
        }
        return courant;
    }

private:
    const Params& p_;
    const SchemeConfig& cfg_;
    std::size_t n_;
    Tridiagonal umat_;
    Tridiagonal vmat_;
    std::vector<double> rhs_;
    std::vector<double> w_;
    std::vector<double> scratch_;
};

DiagnosticSample sample_diagnostics(const TimeState& s, const SteadyState* ref) {
    DiagnosticSample d{
        .t = s.t,
        .mass = integrate(s.u),
        .u_min = s.u.min(),
        .u_max = s.u.max(),
        .v_min = s.v.min(),
        .v_max = s.v.max(),
        .dist_h1 = std::nullopt,
    };
    if (ref) d.dist_h1 = steady_distance(s.u, s.v, *ref);
    return d;
}

}  // namespace

Field sample_profile(const ProfileSpec& spec, const Grid1D& grid, ProfileRole role) {
    switch (spec.kind) {
        case ProfileSpec::Kind::Reference:
            return Field::sample(grid, [role](double x) { return reference_value(role, x); });
        case ProfileSpec::Kind::Zero:
            return Field(grid, 0.0);
        case ProfileSpec::Kind::Polynomial:
            if (spec.coefficients.empty()) throw ValidationError("polynomial profile needs at least one coefficient");
            return Field::sample(grid, [&c = spec.coefficients](double x) { return poly_value(c, x); });
        case ProfileSpec::Kind::CsvFile:
            return read_field_csv(spec.path, grid);
    }
    throw ValidationError("unknown profile kind");
}

double profile_value_at_end(const ProfileSpec& spec, const Grid1D& grid, ProfileRole role) {
    const double L = grid.length();
    switch (spec.kind) {
        case ProfileSpec::Kind::Reference: return reference_value(role, L);
        case ProfileSpec::Kind::Zero: return 0.0;
        case ProfileSpec::Kind::Polynomial: return poly_value(spec.coefficients, L);
        case ProfileSpec::Kind::CsvFile: {
            const Field f = read_field_csv(spec.path, grid);
            const std::size_t n = f.size();
            return 1.5 * f[n - 1] - 0.5 * f[n - 2];
        }
    }
    throw ValidationError("unknown profile kind");
}

TimeState initial_state(const Params& params, const Grid1D& grid, const ProfileSpec& u0, const ProfileSpec& v0,
                        const InitialOptions& opts) {
    params.validate_coefficients();
    if (std::abs(grid.length() - params.length) > 1e-12 * params.length) {
        throw ValidationError("initial_state: grid length differs from params.length");
    }
    TimeState s{0.0, sample_profile(u0, grid, ProfileRole::Density), sample_profile(v0, grid, ProfileRole::Oxygen)};

    const double K = params.q.capacity;
    std::vector<std::size_t> bad_u, bad_v;
    for (std::size_t j = 0; j < s.u.size(); ++j) {
        if (!(s.u[j] >= 0.0 && s.u[j] < K)) bad_u.push_back(j);
        if (!(s.v[j] >= 0.0)) bad_v.push_back(j);
    }
    if (!bad_u.empty()) throw ValidationError("u0 must satisfy 0 <= u0 < K; offending cells: " + list_cells(bad_u));
    if (!bad_v.empty()) throw ValidationError("v0 must be nonnegative; offending cells: " + list_cells(bad_v));

    const double b = params.boundary_b;
    const double end = profile_value_at_end(v0, grid, ProfileRole::Oxygen);
    const double end_tol = v0.kind == ProfileSpec::Kind::CsvFile ? std::max(1e-9, grid.dx()) : 1e-9;
    if (std::abs(end - b) > end_tol * std::max(1.0, b)) {
        std::ostringstream os;
        os.precision(17);
        os << "v0(L) = " << end << " is incompatible with the boundary value b = " << b;
        throw ValidationError(os.str());
    }

    const double m = integrate(s.u);
    const double cap = K * params.length;
    if (m == 0.0 && opts.allow_zero_mass) return s;
    if (!(m > 0.0 && m < cap)) {
        std::ostringstream os;
        os.precision(17);
        os << "initial mass " << m << " lies outside (0, K L) = (0, " << cap << ")";
        throw ValidationError(os.str());
    }
    return s;
}

TimeState step(const TimeState& state, const Params& params, const SchemeConfig& cfg) {
    TimeState next = state;
    std::vector<double> u(state.u.values().begin(), state.u.values().end());
    std::vector<double> v(state.v.values().begin(), state.v.values().end());
    Stepper stepper(params, cfg, u.size());
    stepper.advance(state.u.grid(), u, v);
    next.u = Field(state.u.grid(), std::move(u));
    next.v = Field(state.v.grid(), std::move(v));
    next.t = state.t + cfg.dt;
    return next;
}

double steady_distance(const Field& u, const Field& v, const SteadyState& reference) {
    const double du = norm(u - reference.U, NormKind::H1);
    const double dv = norm(v - reference.V, NormKind::H1);
    return std::sqrt(du * du + dv * dv);
}

Trajectory run(const Params& params, const SchemeConfig& cfg, TimeState initial, const SteadyState* reference) {
    params.validate_coefficients();
    cfg.validate();
    if (reference && !(reference->U.grid() == initial.u.grid())) {
        throw ValidationError("run: steady reference lives on a different grid");
    }
    const Grid1D grid = initial.u.grid();
    const long long steps = cfg.total_steps();
    const double t0 = initial.t;

    std::vector<long long> snap_steps;
    for (double ts : cfg.snapshot_times) snap_steps.push_back(std::llround(ts / cfg.dt));
    std::size_t next_snap = 0;

    Trajectory traj;
    traj.initial_mass = integrate(initial.u);
    const double mass_scale = traj.initial_mass != 0.0 ? std::abs(traj.initial_mass) : 1.0;

    TimeState state = std::move(initial);
    auto record_snapshot = [&](long long k) {
        while (next_snap < snap_steps.size() && snap_steps[next_snap] == k) {
            traj.snapshots.push_back(state);
            ++next_snap;
        }
    };
    record_snapshot(0);
    traj.diagnostics.push_back(sample_diagnostics(state, reference));

    std::vector<double> u(state.u.values().begin(), state.u.values().end());
    std::vector<double> v(state.v.values().begin(), state.v.values().end());
    Stepper stepper(params, cfg, u.size());
    const double dx = grid.dx();

    for (long long k = 1; k <= steps; ++k) {
        traj.max_courant = std::max(traj.max_courant, stepper.advance(grid, u, v));

        double sum = 0.0;
        for (double x : u) sum += x;
        traj.max_relative_mass_drift =
            std::max(traj.max_relative_mass_drift, std::abs(dx * sum - traj.initial_mass) / mass_scale);

        const bool snap = next_snap < snap_steps.size() && snap_steps[next_snap] == k;
        const bool sample = k % cfg.sample_stride == 0 || k == steps;
        if (snap || sample) {
            state.t = t0 + static_cast<double>(k) * cfg.dt;
            std::copy(u.begin(), u.end(), state.u.values().begin());
            std::copy(v.begin(), v.end(), state.v.values().begin());
            if (snap) record_snapshot(k);
            if (sample) traj.diagnostics.push_back(sample_diagnostics(state, reference));
        }
    }
    return traj;
}

Trajectory run(const Params& params, const Grid1D& grid, const SchemeConfig& cfg, const ProfileSpec& u0,
               const ProfileSpec& v0, const SteadyState* reference, const InitialOptions& opts) {
    return run(params, cfg, initial_state(params, grid, u0, v0, opts), reference);
}

std::string snapshot_filename(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "snapshot_t%.10g.csv", t);
    return buf;
}

void write_snapshot_csv(const std::string& path, const TimeState& s) {
    write_fields_csv(path, {"u", "v"}, {&s.u, &s.v});
}

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticSample>& diag) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    out << "t,mass,u_min,u_max,v_min,v_max,dist_h1\n";
    for (const auto& d : diag) {
        out << csv::format_number(d.t) << ',' << csv::format_number(d.mass) << ',' << csv::format_number(d.u_min)
            << ',' << csv::format_number(d.u_max) << ',' << csv::format_number(d.v_min) << ','
            << csv::format_number(d.v_max) << ',' << csv::format_optional(d.dist_h1) << '\n';
    }
}

}  // namespace chemo
