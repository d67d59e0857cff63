#include "chemo/config.hpp"
#include "chemo/error.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace chemo;

namespace {

const char* kReference = R"(# reproduction setup
chi = 20
length = 1
boundary_b = 1
capacity = 1
gamma = 1
u0 = reference
v0 = reference
cells = 200
dt = 0.0005
t_end = 100
)";

int error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

std::string error_key(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return {};
}

}  // namespace

TEST_CASE("reference configuration is accepted with defaults") {
    const RunConfig c = parse_config(kReference);
    CHECK(c.params.chi == 20.0);
    CHECK(c.cells == 200);
    CHECK(c.scheme.dt == 0.0005);
    CHECK(c.tol.mass == 1e-8);
    CHECK(c.tol.v == 1e-10);
    CHECK(c.scheme.upwind);
    CHECK(c.mass_from_profile);
    CHECK(c.params.mass == doctest::Approx(0.25).epsilon(1e-4));
    CHECK(c.scheme.snapshot_times == std::vector<double>{25, 50, 100});
    CHECK(c.chis == std::vector<double>{20, 40, 80, 160, 320});
    CHECK(c.refine_cells == std::vector<int>{100, 200, 400, 800});
    CHECK(c.fit_window_start() == 20.0);
    CHECK(c.fit_window_end() == 80.0);
}

TEST_CASE("lists, booleans and profiles") {
    const RunConfig c = parse_config("chi = 40\nsnapshots = [1, 2.5, 4]\nt_end = 4\nupwind = false\n"
                                     "u0 = 0, 0, 0.75\nchemotaxis = explicit\nmass = 0.25\n");
    CHECK(c.scheme.snapshot_times == std::vector<double>{1, 2.5, 4});
    CHECK_FALSE(c.scheme.upwind);
    CHECK(c.u0.kind == ProfileSpec::Kind::Polynomial);
    CHECK(c.scheme.chemotaxis == ChemotaxisMode::Explicit);
    CHECK(c.params.mass == 0.25);
}

TEST_CASE("mass outside (0, K L) is rejected") {
    CHECK_THROWS_AS(parse_config("chi = 20\nmass = 1.5\nu0 = 1.5\n"), ConfigError);
    CHECK(error_key("chi = 20\nmass = 1.5\n") == "mass");
}

TEST_CASE("mass must match the integral of an explicit u0") {
    CHECK(error_key("chi = 20\nu0 = reference\nmass = 0.2501\n") == "mass");
    CHECK_NOTHROW(parse_config("chi = 20\nu0 = reference\nmass = 0.25\n"));
}

TEST_CASE("unknown and duplicate keys name the key and line") {
    CHECK(error_key("chi = 20\nspeed = 3\n") == "speed");
    CHECK(error_line("chi = 20\nspeed = 3\n") == 2);
    CHECK(error_key("chi = 20\n# comment\nchi = 30\n") == "chi");
    CHECK(error_line("chi = 20\n# comment\nchi = 30\n") == 3);
}

TEST_CASE("malformed values") {
    CHECK(error_key("chi = abc\n") == "chi");
    CHECK(error_key("chi = 20\ncells = 2.5\n") == "cells");
    CHECK(error_key("chi = 20\nupwind = maybe\n") == "upwind");
    CHECK(error_key("chi = 20\ndt = -1\n") == "dt");
    CHECK(error_key("chi = 20\nchis = 40, 20\n") == "chis");
    CHECK(error_key("chi = 20\nrefine_cells = 100, 300, 600\n") == "refine_cells");
    CHECK(error_key("chi = 20\nsnapshots = 200\n") == "snapshots");
    CHECK(error_key("chi = 20\ncells = 2\n") == "cells");
    CHECK(error_key("chi = 20\nu0 = missing_file.csv\n") == "u0");
    CHECK(error_key("length = 1\n") == "chi");
    CHECK(error_line("chi = 20\nnot a pair\n") == 2);
}

TEST_CASE("reference profile keyword") {
    CHECK(parse_config("chi = 20\nu0 = reference\n").u0.kind == ProfileSpec::Kind::Reference);
    CHECK(parse_config("chi = 20\nmass = 0.25\n").u0.kind == ProfileSpec::Kind::Reference);
}

TEST_CASE("zero mass needs the explicit opt-in") {
    CHECK_THROWS_AS(parse_config("chi = 20\nu0 = zero\n"), ConfigError);
    const RunConfig c = parse_config("chi = 20\nu0 = zero\nallow_zero_mass = true\n");
    CHECK(c.params.mass == 0.0);
}
