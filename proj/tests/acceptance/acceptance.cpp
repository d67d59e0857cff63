// Acceptance suite: one [PASS]/[FAIL] line per criterion.
// Usage: chemo_acceptance [criterion...]   (no arguments runs 1 to 8)

#include "chemo/analysis.hpp"
#include "chemo/commands.hpp"
#include "chemo/config.hpp"
#include "chemo/error.hpp"
#include "chemo/limit_profile.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace chemo;
namespace fs = std::filesystem;

namespace {

const char* kReferenceConfig = "chi = 20\nlength = 1\nboundary_b = 1\ncapacity = 1\ngamma = 1\n"
                               "u0 = reference\nv0 = reference\ncells = 200\ndt = 0.0005\nt_end = 100\n";

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Outcome {
    bool passed = true;
    std::vector<std::string> parts;

    void check(bool ok, const std::string& what) {
        passed = passed && ok;
        parts.push_back(std::string(ok ? "ok " : "FAILED ") + what);
    }
};

Params reference_params() { return {.chi = 20, .length = 1, .boundary_b = 1, .mass = 0.25, .q = {}}; }

/// The full t = 100 reproduction run, computed once per process.
struct ReferenceRun {
    Params params;
    TimeState initial;
    SteadyState steady;
    Trajectory trajectory;
    double seconds = 0.0;
};

const ReferenceRun& reference_run() {
    static const ReferenceRun r = [] {
        const auto start = std::chrono::steady_clock::now();
        const Grid1D grid(1.0, 200);
        Params params = reference_params();
        TimeState initial = initial_state(params, grid, ProfileSpec::reference(), ProfileSpec::reference());
        params.mass = integrate(initial.u);
        SteadyState steady = assemble_steady(params, grid);
        SchemeConfig cfg;
        cfg.snapshot_times = {25, 50, 100};
        cfg.sample_stride = 100;
        Trajectory trajectory = run(params, cfg, initial, &steady);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return ReferenceRun{params, std::move(initial), std::move(steady), std::move(trajectory), seconds};
    }();
    return r;
}

const TimeState& snapshot_at(const Trajectory& tr, double t) {
    for (const auto& s : tr.snapshots) {
        if (std::abs(s.t - t) < 1e-9) return s;
    }
    throw ConsistencyError("no snapshot at t = " + num(t));
}

Outcome criterion_1() {
    Outcome o;
    const ReferenceRun& r = reference_run();
    const double m = integrate(r.initial.u);
    o.check(std::abs(m - 0.25) <= 1e-4, "mass " + num(m) + " within 0.25 +- 1e-4");
    const auto mid = crossing(snapshot_at(r.trajectory, 100).u, 0.5);
    o.check(mid && *mid >= 0.65 && *mid <= 0.85,
            "u(t=100) crosses K/2 at x = " + (mid ? num(*mid) : std::string("none")) + " (target [0.65, 0.85])");
    o.check(r.seconds <= 60.0, "runtime " + num(r.seconds) + " s <= 60 s");
    return o;
}

Outcome criterion_2() {
    Outcome o;
    const ReferenceRun& r = reference_run();
    const double d50 = steady_distance(snapshot_at(r.trajectory, 50).u, snapshot_at(r.trajectory, 50).v, r.steady);
    const double d100 = steady_distance(snapshot_at(r.trajectory, 100).u, snapshot_at(r.trajectory, 100).v, r.steady);
    o.check(d100 < d50, "H1 distance at t=100 (" + num(d100) + ") < at t=50 (" + num(d50) + ")");
    try {
        const DecayReport fit = decay_fit(r.trajectory.diagnostics, 20.0, 80.0);
        o.check(fit.alpha > 0.0 && fit.r2 >= 0.99,
                "decay fit on [20, 80]: alpha = " + num(fit.alpha) + ", R^2 = " + num(fit.r2));
    } catch (const Error& e) {
        o.check(false, std::string("decay fit on [20, 80]: ") + e.what());
    }
    const DecayReport early = decay_fit(r.trajectory.diagnostics, 0.5, 2.5);
    std::cout << "[INFO] criterion 2: decay fit on [0.5, 2.5]: alpha = " << num(early.alpha)
              << ", R^2 = " << num(early.r2) << "; distance floor " << num(d100) << "\n";
    return o;
}

Outcome criterion_3() {
    Outcome o;
    const ReferenceRun& r = reference_run();
    const Trajectory& tr = r.trajectory;
    o.check(tr.max_relative_mass_drift <= 1e-10, "max relative mass drift " + num(tr.max_relative_mass_drift));
    double u_lo = INFINITY, u_hi = -INFINITY, v_lo = INFINITY, v_hi = -INFINITY;
    for (const auto& d : tr.diagnostics) {
        u_lo = std::min(u_lo, d.u_min);
        u_hi = std::max(u_hi, d.u_max);
        v_lo = std::min(v_lo, d.v_min);
        v_hi = std::max(v_hi, d.v_max);
    }
    o.check(u_lo >= 0.0 && u_hi <= 1.0 + 1e-8, "u in [" + num(u_lo) + ", " + num(u_hi) + "]");
    o.check(v_lo >= 0.0 && v_hi <= 1.0 + 1e-12, "v in [" + num(v_lo) + ", " + num(v_hi) + "]");
    return o;
}

Outcome criterion_4() {
    Outcome o;
    const Params p = reference_params();
    const RefinementReport study = steady_residual_study(p, {100, 200, 400, 800});
    o.check(study.observed_order && std::abs(*study.observed_order - 2.0) <= 0.3,
            "ode_residual observed order " + (study.observed_order ? num(*study.observed_order) : study.note));

    double worst_mass = 0.0;
    bool monotone = true;
    for (int n : {100, 200, 400, 800}) {
        const SteadyState s = assemble_steady(p, Grid1D(1.0, n));
        worst_mass = std::max(worst_mass, s.mass_residual);
        for (std::size_t j = 1; j < s.U.size(); ++j) {
            monotone = monotone && s.U[j] - s.U[j - 1] >= -1e-12 && s.V[j] - s.V[j - 1] >= -1e-12;
        }
        if (n == 800) {
            const double excess = gradient_bound_excess(s.U, s.V);
            o.check(excess <= 1e-6, "max (V')^2 - U V^2 at n=800: " + num(excess));
        }
    }
    o.check(worst_mass <= 1e-8, "max |mass(lambda_m) - m| " + num(worst_mass));
    o.check(monotone, "U and V nondecreasing");
    return o;
}

Outcome criterion_5() {
    Outcome o;
    const Params p = reference_params();
    const std::vector<double> chis{20, 40, 80, 160, 320};
    const auto rows = chi_sweep(p, Grid1D(1.0, 200), chis);
    bool decreasing = true;
    std::ostringstream table;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (!rows[k].error.empty() || !rows[k].l1_u) {
            decreasing = false;
            table << " chi=" << num(rows[k].chi) << ":error";
            continue;
        }
        table << " chi=" << num(rows[k].chi) << ":" << num(*rows[k].l1_u);
        if (k > 0 && rows[k - 1].l1_u) decreasing = decreasing && *rows[k].l1_u < *rows[k - 1].l1_u;
    }
    o.check(decreasing, "l1_u strictly decreasing:" + table.str());
    const SweepRow& last = rows.back();
    const double v0 = last.plateau_v0.value_or(NAN);
    o.check(std::abs(v0 - 0.969537) <= 1e-2, "V(0) at chi=320 is " + num(v0) + " (target 0.969537 +- 0.01)");
    const double mid = last.midpoint.value_or(NAN);
    o.check(std::abs(mid - 0.75) <= 0.02, "midpoint at chi=320 is " + num(mid) + " (target 0.75 +- 0.02)");
    return o;
}

Outcome criterion_6() {
    Outcome o;
    for (double gamma : {0.5, 1.0, 2.0}) {
        const QFamily q{1.0, gamma};
        int bad = 0, capacity = 0;
        double first_bad = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double w = std::pow(10.0, -8.0 + 16.0 * i / 999.0);
            try {
                const double u = g_inverse(q, w);
                if (!(std::abs(g_eval(q, u) - w) <= 1e-12 * w)) {
                    if (bad++ == 0) first_bad = w;
                }
            } catch (const CapacityError&) {
                if (bad++ == 0) first_bad = w;
                ++capacity;
            }
        }
        o.check(bad == 0, "gamma=" + num(gamma) + " round trip on [1e-8, 1e8]: " + std::to_string(bad) +
                              "/1000 above 1e-12 relative" +
                              (bad ? " (first w = " + num(first_bad) + ", " + std::to_string(capacity) +
                                         " beyond the capacity bracket)"
                                   : std::string{}));
    }
    const QFamily q1{1.0, 1.0};
    double worst_closed = 0.0, worst_d = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double w = std::pow(10.0, -8.0 + 16.0 * i / 999.0);
        worst_closed = std::max(worst_closed, std::abs(g_inverse(q1, w) - w / (1.0 + w)) / (w / (1.0 + w)));
        worst_d = std::max(worst_d, std::abs(diffusivity(q1, i / 1000.0) - 1.0));
    }
    o.check(worst_closed <= 1e-12, "gamma=1 closed form, max relative deviation " + num(worst_closed));
    o.check(worst_d <= 4 * std::numeric_limits<double>::epsilon(), "diffusivity - 1 for gamma=1: " + num(worst_d));
    return o;
}

Outcome criterion_7() {
    Outcome o;
    const Params p = reference_params();
    const Grid1D grid(1.0, 200);
    TimeState s = initial_state(p, grid, ProfileSpec::zero(), ProfileSpec::reference(), {.allow_zero_mass = true});
    SchemeConfig cfg;
    cfg.t_end = 10.0;
    bool zero = true, monotone = true;
    double prev = norm(s.v - Field(grid, 1.0), NormKind::Linf);
    const double start = prev;
    for (long long k = 0; k < cfg.total_steps(); ++k) {
        s = step(s, p, cfg);
        for (std::size_t j = 0; j < s.u.size(); ++j) zero = zero && s.u[j] == 0.0;
        const double d = norm(s.v - Field(grid, 1.0), NormKind::Linf);
        monotone = monotone && d < prev;
        prev = d;
    }
    o.check(zero, "u stays identically zero over 20000 steps");
    o.check(monotone, "|v - b|_inf strictly decreasing from " + num(start) + " to " + num(prev));

    const VSolution v = solve_v_for_lambda(p, grid, 0.0);
    bool exact = true;
    for (std::size_t j = 0; j < v.v.size(); ++j) exact = exact && v.v[j] == 1.0;
    o.check(exact, "lambda = 0 gives V == b exactly");

    const fs::path dir = fs::temp_directory_path() / "chemo_acceptance_verify";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "reference.cfg") << kReferenceConfig;
    const std::string cmd = std::string(CHEMO_CLI_PATH) + " verify --config " + (dir / "reference.cfg").string() +
                            " --out-dir " + (dir / "out").string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    o.check(code == 0, "verify subcommand exit status " + std::to_string(code));
    return o;
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        files[fs::relative(entry.path(), dir).string()] = ss.str();
    }
    return files;
}

Outcome criterion_8() {
    Outcome o;
    const fs::path root = fs::temp_directory_path() / "chemo_acceptance_determinism";
    fs::remove_all(root);
    const RunConfig base = parse_config(kReferenceConfig);
    for (const char* sub : {"steady", "limit", "evolve", "sweep", "verify"}) {
        std::vector<std::map<std::string, std::string>> trees;
        for (int rep = 0; rep < 2; ++rep) {
            RunConfig c = base;
            c.out_dir = (root / sub / std::to_string(rep)).string();
            std::ostringstream err;
            const int code = dispatch(sub, c, err);
            if (code != kExitOk) o.check(false, std::string(sub) + " exited " + std::to_string(code) + ": " + err.str());
            trees.push_back(read_tree(c.out_dir));
        }
        const bool same = !trees[0].empty() && trees[0] == trees[1];
        o.check(same, std::string(sub) + ": " + std::to_string(trees[0].size()) + " files bitwise identical");
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::map<int, std::function<Outcome()>> criteria{
        {1, criterion_1}, {2, criterion_2}, {3, criterion_3}, {4, criterion_4},
        {5, criterion_5}, {6, criterion_6}, {7, criterion_7}, {8, criterion_8},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
    if (selected.empty()) {
        for (const auto& [k, _] : criteria) selected.push_back(k);
    }

    int failures = 0;
    for (int k : selected) {
        const auto it = criteria.find(k);
        if (it == criteria.end()) {
            std::cout << "[FAIL] criterion " << k << ": unknown criterion\n";
            ++failures;
            continue;
        }
        Outcome o;
        try {
            o = it->second();
        } catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        std::cout << (o.passed ? "[PASS]" : "[FAIL]") << " criterion " << k << ":";
        for (std::size_t i = 0; i < o.parts.size(); ++i) std::cout << (i ? "; " : " ") << o.parts[i];
        std::cout << "\n";
        failures += o.passed ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
