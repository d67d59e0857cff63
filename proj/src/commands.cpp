#include "chemo/commands.hpp"

#include "chemo/analysis.hpp"
#include "chemo/error.hpp"
#include "chemo/limit_profile.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace chemo {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string out_path(const RunConfig& c, const std::string& name) { return (fs::path(c.out_dir) / name).string(); }

void write_json(const std::string& path, const ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    out << j.dump(2) << '\n';
}

ordered_json params_json(const Params& p) {
    return {{"capacity", p.q.capacity}, {"gamma", p.q.gamma},           {"chi", p.chi},
            {"length", p.length},       {"boundary_b", p.boundary_b}, {"mass", p.mass}};
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

int run_steady(const RunConfig& c) {
    const Grid1D grid = c.grid();
    const SteadyState s = assemble_steady(c.params, grid, c.tol);
    write_fields_csv(out_path(c, "steady.csv"), {"U", "V"}, {&s.U, &s.V});
    const ordered_json report{
        {"lambda", s.lambda},
        {"log_lambda", s.log_lambda},
        {"mass_residual", s.mass_residual},
        {"ode_residual", s.ode_residual},
        {"flux_residual", s.flux_residual},
        {"iterations", s.iterations},
        {"bisection_steps", s.bisection_steps},
        {"n", grid.cells()},
        {"params", params_json(c.params)},
    };
    write_json(out_path(c, "steady.json"), report);
    return kExitOk;
}

int run_limit(const RunConfig& c) {
    write_limit_csv(out_path(c, "limit.csv"), make_limit_profile(c.params), c.cells);
    return kExitOk;
}

int run_evolve(const RunConfig& c) {
    const Grid1D grid = c.grid();
    InitialOptions opts{.allow_zero_mass = c.allow_zero_mass};
    TimeState init = initial_state(c.params, grid, c.u0, c.v0, opts);

    // The scheme conserves the discrete mass of u0, so the reference carries that mass.
    std::optional<SteadyState> reference;
    if (c.params.mass > 0.0) {
        Params steady_params = c.params;
        steady_params.mass = integrate(init.u);
        reference = assemble_steady(steady_params, grid, c.tol);
    }

    const Trajectory tr = run(c.params, c.scheme, std::move(init), reference ? &*reference : nullptr);
    for (const auto& snap : tr.snapshots) write_snapshot_csv(out_path(c, snapshot_filename(snap.t)), snap);
    write_diagnostics_csv(out_path(c, "diagnostics.csv"), tr.diagnostics);

    ordered_json decay{
        {"window", {c.fit_window_start(), c.fit_window_end()}},
        {"initial_mass", tr.initial_mass},
        {"max_relative_mass_drift", tr.max_relative_mass_drift},
        {"max_courant", tr.max_courant},
    };
    if (reference) {
        try {
            const DecayReport d = decay_fit(tr.diagnostics, c.fit_window_start(), c.fit_window_end());
            decay["alpha"] = d.alpha;
            decay["c"] = d.c;
            decay["r2"] = d.r2;
            decay["samples"] = d.samples;
        } catch (const Error& e) {
            decay["fit_error"] = e.what();
        }
        const PerturbationNorms p0 = perturbation_norms(tr.snapshots.empty() ? reference->U : tr.snapshots.front().u,
                                                        tr.snapshots.empty() ? reference->V : tr.snapshots.front().v,
                                                        *reference, std::numeric_limits<double>::infinity());
        decay["first_snapshot_perturbation"] = {{"phi_h2", p0.phi_h2}, {"psi_h1", p0.psi_h1}, {"total", p0.total}};
    }
    write_json(out_path(c, "decay.json"), decay);
    return kExitOk;
}

int run_sweep(const RunConfig& c) {
    const auto rows = chi_sweep(c.params, c.grid(), c.chis, c.tol);
    write_sweep_csv(out_path(c, "sweep.csv"), rows);
    return kExitOk;
}

bool round_trip_ok(const QFamily& q, double w, double u) {
    const double err = std::abs(g_eval(q, u) - w);
    if (err <= 1e-12 * w) return true;
    // Otherwise no neighbouring double may do better.
    const double below = std::nextafter(u, 0.0);
    const double above = std::nextafter(u, q.capacity);
    const double e_lo = std::abs(g_eval(q, below) - w);
    const double e_hi = above < q.capacity ? std::abs(g_eval(q, above) - w) : INFINITY;
    return err <= e_lo && err <= e_hi;
}

template <class F>
VerifyCheck guarded(const std::string& name, F&& f) {
    VerifyCheck check{name, false, {}};
    try {
        f(check);
    } catch (const std::exception& e) {
        check.passed = false;
        check.detail = std::string("exception: ") + e.what();
    }
    return check;
}

int run_verify(const RunConfig& c) {
    const auto checks = verify_suite(c);
    ordered_json passed = ordered_json::array();
    ordered_json failed = ordered_json::array();
    for (const auto& ch : checks) {
        if (ch.passed) {
            passed.push_back(ch.name);
        } else {
            failed.push_back({{"name", ch.name}, {"detail", ch.detail}});
        }
    }
    write_json(out_path(c, "verify.json"), {{"passed", passed}, {"failed", failed}});
    return failed.empty() ? kExitOk : kExitVerifyFailed;
}

}  // namespace

std::vector<VerifyCheck> verify_suite(const RunConfig& c) {
    std::vector<VerifyCheck> out;

    for (double gamma : {0.5, 1.0, 2.0}) {
        out.push_back(guarded("g_inverse_round_trip_gamma_" + fmt(gamma), [&](VerifyCheck& ch) {
            const QFamily q{c.params.q.capacity, gamma};
            constexpr int samples = 1000;
            int bad = 0;
            double worst_w = 0.0;
            for (int i = 0; i < samples; ++i) {
                const double w = std::pow(10.0, -8.0 + 14.0 * i / (samples - 1));
                if (!round_trip_ok(q, w, g_inverse(q, w))) {
                    if (bad++ == 0) worst_w = w;
                }
            }
            ch.passed = bad == 0;
            ch.detail = std::to_string(bad) + " of 1000 samples on [1e-8, 1e6] not resolved" +
                        (bad ? ", first at w = " + fmt(worst_w) : std::string{});
        }));
    }

    out.push_back(guarded("gamma_1_closed_forms", [&](VerifyCheck& ch) {
        const QFamily q{c.params.q.capacity, 1.0};
        const double K = q.capacity;
        double worst_inv = 0.0, worst_d = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double w = std::pow(10.0, -8.0 + 14.0 * i / 999.0);
            const double exact = K * w / (K + w);
            worst_inv = std::max(worst_inv, std::abs(g_inverse(q, w) - exact) / exact);
            const double u = K * i / 1000.0;
            worst_d = std::max(worst_d, std::abs(diffusivity(q, u) - 1.0));
        }
        ch.passed = worst_inv <= 1e-12 && worst_d <= 4 * std::numeric_limits<double>::epsilon();
        ch.detail = "max relative inverse error " + fmt(worst_inv) + ", max |D - 1| " + fmt(worst_d);
    }));

    out.push_back(guarded("conservation_run", [&](VerifyCheck& ch) {
        SchemeConfig cfg = c.scheme;
        cfg.t_end = std::min(1.0, c.scheme.t_end);
        cfg.snapshot_times = {};
        const Trajectory tr = run(c.params, c.grid(), cfg, c.u0, c.v0);
        const double K = c.params.q.capacity;
        const double vcap = std::max(c.params.boundary_b, tr.diagnostics.front().v_max);
        bool bounds = true;
        for (const auto& d : tr.diagnostics) {
            bounds = bounds && d.u_min >= 0.0 && d.u_max <= K + 1e-8 && d.v_min >= 0.0 && d.v_max <= vcap + 1e-12;
        }
        ch.passed = tr.max_relative_mass_drift <= 1e-10 && bounds;
        ch.detail = "relative mass drift " + fmt(tr.max_relative_mass_drift) + " to t = " + fmt(cfg.t_end) +
                    (bounds ? ", bounds hold" : ", bounds violated");
    }));

    out.push_back(guarded("steady_refinement_order", [&](VerifyCheck& ch) {
        const RefinementReport r = steady_residual_study(c.params, c.refine_cells, c.tol);
        ch.passed = r.observed_order && std::abs(*r.observed_order - 2.0) <= 0.3;
        ch.detail = r.observed_order ? "observed order " + fmt(*r.observed_order) : r.note;
    }));

    out.push_back(guarded("steady_gradient_bound", [&](VerifyCheck& ch) {
        const SteadyState s = assemble_steady(c.params, c.grid(), c.tol);
        check_steady_invariants(c.params, s.U, s.V);
        const double excess = gradient_bound_excess(s.U, s.V);
        ch.passed = excess <= 1e-6 && s.mass_residual <= c.tol.mass;
        ch.detail = "max (V')^2 - U V^2 = " + fmt(excess) + ", mass residual " + fmt(s.mass_residual);
    }));

    out.push_back(guarded("lambda_zero_reduced_problem", [&](VerifyCheck& ch) {
        const VSolution v = solve_v_for_lambda(c.params, c.grid(), 0.0, c.tol);
        bool exact = true;
        for (std::size_t j = 0; j < v.v.size(); ++j) exact = exact && v.v[j] == c.params.boundary_b;
        ch.passed = exact;
        ch.detail = exact ? "V == b in every cell" : "V differs from b";
    }));

    return out;
}

int dispatch(const std::string& subcommand, const RunConfig& config, std::ostream& err) {
    try {
        fs::create_directories(config.out_dir);
        if (subcommand == "steady") return run_steady(config);
        if (subcommand == "limit") return run_limit(config);
        if (subcommand == "evolve") return run_evolve(config);
        if (subcommand == "sweep") return run_sweep(config);
        if (subcommand == "verify") return run_verify(config);
        throw ValidationError("unknown subcommand '" + subcommand + "'");
    } catch (...) {
        return report_exception(err);
    }
}

int report_exception(std::ostream& err) {
    ordered_json body;
    int code = kExitSolver;
    try {
        throw;
    } catch (const ConfigError& e) {
        body = {{"error", "config"}, {"message", e.what()}, {"key", e.key()}, {"line", e.line()}};
        code = kExitValidation;
    } catch (const ValidationError& e) {
        body = {{"error", "validation"}, {"message", e.what()}};
        code = kExitValidation;
    } catch (const DomainError& e) {
        body = {{"error", "domain"}, {"message", e.what()}};
        code = kExitValidation;
    } catch (const StepSizeError& e) {
        body = {{"error", "step_size"}, {"message", e.what()}, {"suggested_dt", e.suggested_dt()}};
    } catch (const SolverError& e) {
        body = {{"error", "solver"}, {"message", e.what()}};
    } catch (const ConsistencyError& e) {
        body = {{"error", "consistency"}, {"message", e.what()}};
    } catch (const fs::filesystem_error& e) {
        body = {{"error", "io"}, {"message", e.what()}};
        code = kExitValidation;
    } catch (const std::exception& e) {
        body = {{"error", "internal"}, {"message", e.what()}};
    }
    err << body.dump() << '\n';
    return code;
}

}  // namespace chemo
