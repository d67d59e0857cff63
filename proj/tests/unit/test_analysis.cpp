#include "chemo/analysis.hpp"
#include "chemo/error.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace chemo;

namespace {

Params reference_params() { return {.chi = 20, .length = 1, .boundary_b = 1, .mass = 0.25, .q = {}}; }

}  // namespace

TEST_CASE("decay fit is exact on log-linear data") {
    std::vector<double> t, d;
    for (int i = 0; i <= 40; ++i) {
        t.push_back(0.5 * i);
        d.push_back(3.0 * std::exp(-0.7 * t.back()));
    }
    const DecayReport r = decay_fit(t, d, 0.0, 20.0);
    CHECK(std::abs(r.alpha - 0.7) <= 1e-8);
    CHECK(r.c == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(r.r2 >= 1.0 - 1e-12);
    CHECK(r.samples == 41);
}

TEST_CASE("decay fit on a constant series") {
    std::vector<double> t, d;
    for (int i = 0; i < 10; ++i) {
        t.push_back(i);
        d.push_back(0.125);
    }
    const DecayReport r = decay_fit(t, d, 0.0, 9.0);
    CHECK(std::abs(r.alpha) <= 1e-12);
    CHECK(r.r2 >= 0.0);
    CHECK(r.r2 <= 1.0);
}

TEST_CASE("decay fit guards") {
    std::vector<double> t{0, 1, 2, 3, 4, 5, 6};
    std::vector<double> d(7, 1.0);
    CHECK_THROWS_AS(decay_fit(t, d, 0.0, 6.0), ValidationError);
    t.push_back(7);
    d.push_back(0.0);
    CHECK_THROWS_AS(decay_fit(t, d, 0.0, 7.0), DomainError);
    std::vector<DiagnosticSample> diag(10);
    for (int i = 0; i < 10; ++i) diag[i].t = i;
    CHECK_THROWS_AS(decay_fit(diag, 0.0, 9.0), ValidationError);
}

TEST_CASE("perturbation norms vanish at the steady state") {
    const SteadyState s = assemble_steady(reference_params(), Grid1D(1.0, 100));
    const PerturbationNorms n = perturbation_norms(s.U, s.V, s);
    CHECK(n.phi_h2 == 0.0);
    CHECK(n.psi_h1 == 0.0);
    CHECK(n.total == 0.0);
}

TEST_CASE("perturbation norms of the reference initial data") {
    const Params p = reference_params();
    const Grid1D g(1.0, 200);
    const SteadyState s = assemble_steady(p, g);
    const TimeState init = initial_state(p, g, ProfileSpec::reference(), ProfileSpec::reference());
    // Rescale u0 onto the steady mass so phi(L) vanishes.
    Field u = init.u;
    const double scale = integrate(s.U) / integrate(u);
    for (std::size_t j = 0; j < u.size(); ++j) u[j] *= scale;
    const PerturbationNorms n = perturbation_norms(u, init.v, s, 1e-2);
    CHECK(std::abs(n.phi_end) <= 1e-12);
    CHECK(n.total > 0.0);
    CHECK(std::isfinite(n.total));
    CHECK(n.total == doctest::Approx(n.phi_h2 * n.phi_h2 + n.psi_h1 * n.psi_h1));
}

TEST_CASE("perturbation norms require psi(L) = 0 and matching grids") {
    const SteadyState s = assemble_steady(reference_params(), Grid1D(1.0, 100));
    Field shifted = s.V;
    for (std::size_t j = 0; j < shifted.size(); ++j) shifted[j] += 0.01;
    CHECK_THROWS_AS(perturbation_norms(s.U, shifted, s), ValidationError);
    const Field other(Grid1D(1.0, 50), 0.0);
    CHECK_THROWS_AS(perturbation_norms(other, other, s), ValidationError);
}

TEST_CASE("single-element sweep equals a lone steady solve") {
    const Params p = reference_params();
    const Grid1D g(1.0, 100);
    const auto rows = chi_sweep(p, g, {20.0});
    REQUIRE(rows.size() == 1);
    const SteadyState s = assemble_steady(p, g);
    const LimitMetrics m = compare_to_limit(s, make_limit_profile(p));
    CHECK(rows[0].error.empty());
    CHECK(*rows[0].lambda == s.lambda);
    CHECK(*rows[0].l1_u == m.l1_u);
    CHECK(rows[0].midpoint == m.midpoint);
}

TEST_CASE("sweep trends and determinism") {
    const Params p = reference_params();
    const Grid1D g(1.0, 200);
    const std::vector<double> chis{20, 40, 80, 160, 320};
    const auto a = chi_sweep(p, g, chis);
    const auto b = chi_sweep(p, g, chis);
    for (std::size_t k = 0; k < chis.size(); ++k) {
        REQUIRE(a[k].error.empty());
        CHECK(*a[k].l1_u == *b[k].l1_u);
        if (k > 0) {
            CHECK(*a[k].l1_u < *a[k - 1].l1_u);
            CHECK(*a[k].midpoint < *a[k - 1].midpoint);
            CHECK(*a[k].plateau_v0 > *a[k - 1].plateau_v0);
        }
    }
}

TEST_CASE("sweep input validation and per-row failures") {
    const Params p = reference_params();
    const Grid1D g(1.0, 50);
    CHECK_THROWS_AS(chi_sweep(p, g, {40, 20}), ValidationError);
    CHECK_THROWS_AS(chi_sweep(p, g, {-1}), ValidationError);
    Params bad = p;
    bad.length = 2.0;  // mismatched with the grid
    const auto rows = chi_sweep(bad, g, {20});
    CHECK_FALSE(rows[0].error.empty());
    CHECK_FALSE(rows[0].lambda.has_value());
}

TEST_CASE("refinement study on a manufactured second-difference functional") {
    const auto functional = [](int n) {
        const Grid1D g(1.0, n);
        const Field f = Field::sample(g, [](double x) { return std::sin(x); });
        const double dx = g.dx();
        double worst = 0.0;
        for (int j = 1; j + 1 < n; ++j) {
            worst = std::max(worst, std::abs((f[j + 1] - 2 * f[j] + f[j - 1]) / (dx * dx) + f[j]));
        }
        return worst;
    };
    const RefinementReport r = refinement_study(functional, {50, 100, 200, 400}, RefinementMode::Errors);
    REQUIRE(r.observed_order.has_value());
    CHECK(*r.observed_order == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("refinement study degenerate inputs") {
    const RefinementReport flat = refinement_study([](int) { return 0.5; }, {10, 20, 40}, RefinementMode::SuccessiveDifferences);
    CHECK_FALSE(flat.observed_order.has_value());
    CHECK(flat.values.size() == 3);
    CHECK_FALSE(flat.note.empty());
    CHECK_THROWS_AS(refinement_study([](int) { return 1.0; }, {10, 20}, RefinementMode::Errors), ValidationError);
    CHECK_THROWS_AS(refinement_study([](int) { return 1.0; }, {10, 30, 60}, RefinementMode::Errors), ValidationError);
}

TEST_CASE("restriction by block averaging") {
    const Grid1D g(1.0, 8);
    const Field f(g, std::vector<double>{1, 3, 5, 7, 9, 11, 13, 15});
    const Field r = restrict_average(f, 2);
    CHECK(r.size() == 4);
    CHECK(r[0] == 2.0);
    CHECK(r[3] == 14.0);
    CHECK_THROWS_AS(restrict_average(f, 3), ValidationError);
}

TEST_CASE("sweep CSV layout") {
    const auto path = (std::filesystem::temp_directory_path() / "chemo_sweep.csv").string();
    SweepRow ok{.chi = 20, .lambda = 1.5, .plateau_v0 = 0.9, .midpoint = 0.8, .l1_u = 0.3};
    SweepRow failed{.chi = 40, .error = "boom"};
    write_sweep_csv(path, {ok, failed});
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "chi,lambda,plateau_v0,midpoint,width,l1_u_vs_limit\n20,1.5,0.90000000000000002,"
                      "0.80000000000000004,,0.29999999999999999\n40,,,,,\n");
    std::filesystem::remove(path);
}
