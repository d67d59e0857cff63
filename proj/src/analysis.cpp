#include "chemo/analysis.hpp"

#include "chemo/csv.hpp"
#include "chemo/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace chemo {

PerturbationNorms perturbation_norms(const Field& u, const Field& v, const SteadyState& s, double psi_end_tol) {
    if (!(u.grid() == s.U.grid()) || !(v.grid() == s.V.grid())) {
        throw ValidationError("perturbation_norms: fields and steady state live on different grids");
    }
    const Field phi = antiderivative(u - s.U);
    const Field psi = v - s.V;
    const std::size_t n = psi.size();

    const double psi_end = 1.5 * psi[n - 1] - 0.5 * psi[n - 2];
    if (std::abs(psi_end) > psi_end_tol) {
        std::ostringstream os;
        os.precision(6);
        os << "perturbation_norms: v - V does not vanish at x = L (extrapolated " << psi_end << ")";
        throw ValidationError(os.str());
    }

    // phi sits on the right faces; its left neighbour at x = 0 is phi = 0.
    const double dx = u.grid().dx();
    double second = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double left = j == 0 ? 0.0 : phi[j - 1];
        const double d2 = (phi[j + 1] - 2.0 * phi[j] + left) / (dx * dx);
        second += d2 * d2;
    }
    const double phi_h1 = norm(phi, NormKind::H1);
    PerturbationNorms out;
    out.phi_h2 = std::sqrt(phi_h1 * phi_h1 + dx * second);
    out.psi_h1 = norm(psi, NormKind::H1);
    out.total = out.phi_h2 * out.phi_h2 + out.psi_h1 * out.psi_h1;
    out.phi_end = phi[n - 1];
    return out;
}

DecayReport decay_fit(const std::vector<double>& t, const std::vector<double>& values, double t_a, double t_b) {
    if (t.size() != values.size()) throw ValidationError("decay_fit: series length mismatch");
    if (!(t_b > t_a)) throw ValidationError("decay_fit: window must satisfy t_a < t_b");

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_a || t[i] > t_b) continue;
        if (!(values[i] > 0.0)) {
            std::ostringstream os;
            os.precision(6);
            os << "decay_fit: non-positive distance " << values[i] << " at t = " << t[i];
            throw DomainError(os.str());
        }
        xs.push_back(t[i]);
        ys.push_back(std::log(values[i]));
    }
    if (static_cast<int>(xs.size()) < kMinDecaySamples) {
        throw ValidationError("decay_fit: need at least 8 samples in the window, found " + std::to_string(xs.size()));
    }

    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (intercept + slope * xs[i]);
        ss_res += e * e;
    }
    // A flat series is fitted exactly by the horizontal line.
    double r2 = syy > 0.0 ? 1.0 - ss_res / syy : (ss_res == 0.0 ? 1.0 : 0.0);
    r2 = std::clamp(r2, 0.0, 1.0);

    return {.alpha = -slope,
            .c = std::exp(intercept),
            .r2 = r2,
            .t_a = t_a,
            .t_b = t_b,
            .samples = static_cast<int>(xs.size())};
}

DecayReport decay_fit(const std::vector<DiagnosticSample>& diag, double t_a, double t_b) {
    std::vector<double> t, d;
    for (const auto& s : diag) {
        if (s.t < t_a || s.t > t_b) continue;
        if (!s.dist_h1) throw ValidationError("decay_fit: diagnostics carry no steady-state distance");
        t.push_back(s.t);
        d.push_back(*s.dist_h1);
    }
    return decay_fit(t, d, t_a, t_b);
}

std::vector<SweepRow> chi_sweep(const Params& base, const Grid1D& grid, const std::vector<double>& chis,
                                const SteadyTolerances& tol) {
    for (std::size_t k = 0; k < chis.size(); ++k) {
        if (!(chis[k] > 0.0)) throw ValidationError("chi_sweep: every chi must be positive");
        if (k > 0 && !(chis[k] > chis[k - 1])) throw ValidationError("chi_sweep: chis must be sorted ascending");
    }
    std::vector<SweepRow> rows;
    rows.reserve(chis.size());
    for (double chi : chis) {
        SweepRow row;
        row.chi = chi;
        try {
            Params p = base;
            p.chi = chi;
            const SteadyState s = assemble_steady(p, grid, tol);
            const LimitMetrics m = compare_to_limit(s, make_limit_profile(p));
            row.lambda = s.lambda;
            row.log_lambda = s.log_lambda;
            row.plateau_v0 = value_at_origin(s.V);
            row.midpoint = m.midpoint;
            row.width = m.width;
            row.l1_u = m.l1_u;
        } catch (const Error& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    out << "chi,lambda,plateau_v0,midpoint,width,l1_u_vs_limit\n";
    for (const auto& r : rows) {
        out << csv::format_number(r.chi) << ',' << csv::format_optional(r.lambda) << ','
            << csv::format_optional(r.plateau_v0) << ',' << csv::format_optional(r.midpoint) << ','
            << csv::format_optional(r.width) << ',' << csv::format_optional(r.l1_u) << '\n';
    }
}

namespace {

void require_doubling(const std::vector<int>& cells, std::size_t min_size) {
    if (cells.size() < min_size) {
        throw ValidationError("refinement study needs at least " + std::to_string(min_size) + " grids");
    }
    for (std::size_t k = 1; k < cells.size(); ++k) {
        if (cells[k] != 2 * cells[k - 1]) throw ValidationError("refinement study: each grid must double the last");
    }
}

RefinementReport orders_from_errors(RefinementReport report, const std::vector<double>& errs) {
    for (std::size_t k = 0; k + 1 < errs.size(); ++k) {
        const double a = errs[k], b = errs[k + 1];
        if (!(a > 0.0 && b > 0.0) || !std::isfinite(a) || !std::isfinite(b) || !(b < a)) {
            report.orders.clear();
            report.observed_order.reset();
            report.note = "unavailable: errors are not strictly decreasing and positive";
            return report;
        }
        report.orders.push_back(std::log2(a / b));
    }
    if (!report.orders.empty()) report.observed_order = report.orders.back();
    return report;
}

}  // namespace

RefinementReport refinement_study(const std::function<double(int)>& functional, const std::vector<int>& cells,
                                  RefinementMode mode) {
    require_doubling(cells, 3);
    RefinementReport report;
    report.cells = cells;
    for (int n : cells) report.values.push_back(functional(n));

    if (mode == RefinementMode::Errors) {
        const std::vector<double> errs = report.values;
        return orders_from_errors(std::move(report), errs);
    }

    std::vector<double> diffs;
    for (std::size_t k = 0; k + 1 < report.values.size(); ++k) {
        diffs.push_back(std::abs(report.values[k] - report.values[k + 1]));
    }
    return orders_from_errors(std::move(report), diffs);
}

RefinementReport steady_residual_study(const Params& params, const std::vector<int>& cells,
                                       const SteadyTolerances& tol) {
    return refinement_study(
        [&](int n) { return assemble_steady(params, Grid1D(params.length, n), tol).ode_residual; }, cells,
        RefinementMode::SuccessiveDifferences);
}

Field restrict_average(const Field& fine, int factor) {
    const int n_fine = fine.grid().cells();
    if (factor < 1 || n_fine % factor != 0) throw ValidationError("restrict_average: factor must divide the cell count");
    const Grid1D coarse(fine.grid().length(), n_fine / factor);
    Field out(coarse);
    for (int j = 0; j < coarse.cells(); ++j) {
        double s = 0.0;
        for (int k = 0; k < factor; ++k) s += fine[j * factor + k];
        out[j] = s / factor;
    }
    return out;
}

RefinementReport evolve_refinement_study(const Params& params, const std::vector<int>& cells, SchemeConfig cfg,
                                         const ProfileSpec& u0, const ProfileSpec& v0) {
    require_doubling(cells, 3);
    cfg.snapshot_times = {cfg.t_end};
    cfg.sample_stride = static_cast<int>(std::min<long long>(cfg.total_steps(), 1000000000LL));

    std::vector<Field> finals;
    for (int n : cells) {
        const Trajectory tr = run(params, Grid1D(params.length, n), cfg, u0, v0);
        finals.push_back(tr.snapshots.back().u);
    }
    const Field& finest = finals.back();
    RefinementReport report;
    report.cells = cells;
    for (std::size_t k = 0; k + 1 < finals.size(); ++k) {
        const Field ref = restrict_average(finest, finest.grid().cells() / cells[k]);
        report.values.push_back(norm(finals[k] - ref, NormKind::L2));
    }
    const std::vector<double> errs = report.values;
    return orders_from_errors(std::move(report), errs);
}

}  // namespace chemo
