#include "chemo/config.hpp"

#include "chemo/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace chemo {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

struct Entry {
    std::string value;
    int line = 0;
};

class Reader {
public:
    explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    int line(const std::string& key) const { return has(key) ? entries_.at(key).line : 0; }

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
        const int ln = line(key);
        std::string where = ln > 0 ? "line " + std::to_string(ln) + ": " : std::string{};
        throw ConfigError(key, ln, where + key + ": " + msg);
    }

    std::optional<double> number(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        return parse_number(key, entries_.at(key).value);
    }

    std::optional<int> integer(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        const std::string& s = entries_.at(key).value;
        int out = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec != std::errc{} || ptr != s.data() + s.size()) fail(key, "expected an integer, got '" + s + "'");
        return out;
    }

    std::optional<bool> boolean(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        const std::string& s = entries_.at(key).value;
        if (s == "true" || s == "1" || s == "yes") return true;
        if (s == "false" || s == "0" || s == "no") return false;
        fail(key, "expected true or false, got '" + s + "'");
    }

    std::optional<std::string> text(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        return entries_.at(key).value;
    }

    std::optional<std::vector<double>> numbers(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        return parse_list(key, entries_.at(key).value);
    }

    std::vector<double> parse_list(const std::string& key, std::string s) const {
        if (!s.empty() && s.front() == '[') {
            if (s.back() != ']') fail(key, "unterminated list");
            s = s.substr(1, s.size() - 2);
        }
        std::vector<double> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(parse_number(key, trim(item)));
        if (out.empty()) fail(key, "expected a non-empty list");
        return out;
    }

    double parse_number(const std::string& key, const std::string& s) const {
        double out = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(out)) {
            fail(key, "expected a number, got '" + s + "'");
        }
        return out;
    }

private:
    std::map<std::string, Entry> entries_;
};

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys{
        "capacity", "gamma",  "chi",   "length",        "boundary_b", "mass",       "cells",
        "dt",       "t_end",  "snapshots", "chis",      "refine_cells", "tol_mass", "tol_v",
        "upwind",   "u0",     "v0",    "out_dir",       "sample_stride", "cfl_safety", "chemotaxis",
        "newton",   "fit_start", "fit_end", "allow_zero_mass",
    };
    return keys;
}

bool looks_numeric(const std::string& s) {
    if (s.empty()) return false;
    const char c = s.front();
    return c == '[' || c == '-' || c == '+' || c == '.' || (c >= '0' && c <= '9');
}

ProfileSpec parse_profile(const Reader& r, const std::string& key, const std::string& base_dir) {
    const auto s = r.text(key);
    if (!s || *s == "reference") return ProfileSpec::reference();
    if (*s == "zero") return ProfileSpec::zero();
    if (looks_numeric(*s)) return ProfileSpec::polynomial(r.parse_list(key, *s));
    std::filesystem::path p(*s);
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    if (!std::filesystem::exists(p)) r.fail(key, "profile file '" + p.string() + "' does not exist");
    return ProfileSpec::csv_file(p.string());
}

template <class F>
void checked(const Reader& r, const std::string& key, F&& f) {
    try {
        f();
    } catch (const ConfigError&) {
        throw;
    } catch (const ValidationError& e) {
        r.fail(key, e.what());
    }
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
    std::map<std::string, Entry> entries;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(std::string_view(raw).substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("", line_no, "line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        const auto& keys = known_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ConfigError(key, line_no, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        if (entries.count(key)) {
            throw ConfigError(key, line_no,
                              "line " + std::to_string(line_no) + ": duplicate key '" + key + "' (first on line " +
                                  std::to_string(entries[key].line) + ")");
        }
        if (value.empty()) throw ConfigError(key, line_no, "line " + std::to_string(line_no) + ": empty value");
        entries[key] = {value, line_no};
    }

    const Reader r(std::move(entries));
    RunConfig c;

    c.params.q.capacity = r.number("capacity").value_or(1.0);
    c.params.q.gamma = r.number("gamma").value_or(1.0);
    const auto chi = r.number("chi");
    if (!chi) throw ConfigError("chi", 0, "chi: required key is missing");
    c.params.chi = *chi;
    c.params.length = r.number("length").value_or(1.0);
    c.params.boundary_b = r.number("boundary_b").value_or(1.0);
    checked(r, "capacity", [&] { c.params.q.validate(); });
    const auto positive = [&](const char* key, double v) {
        if (!(v > 0.0)) r.fail(key, "must be positive");
    };
    positive("gamma", c.params.q.gamma);
    positive("chi", c.params.chi);
    positive("length", c.params.length);
    positive("boundary_b", c.params.boundary_b);

    c.cells = r.integer("cells").value_or(200);
    checked(r, "cells", [&] { (void)c.grid(); });

    c.scheme.dt = r.number("dt").value_or(5e-4);
    c.scheme.t_end = r.number("t_end").value_or(100.0);
    c.scheme.snapshot_times = r.numbers("snapshots").value_or(
        std::vector<double>{0.25 * c.scheme.t_end, 0.5 * c.scheme.t_end, c.scheme.t_end});
    c.scheme.upwind = r.boolean("upwind").value_or(true);
    c.scheme.cfl_safety = r.number("cfl_safety").value_or(1.0);
    c.scheme.sample_stride = r.integer("sample_stride").value_or(100);
    if (const auto mode = r.text("chemotaxis")) {
        if (*mode == "semi_implicit") {
            c.scheme.chemotaxis = ChemotaxisMode::SemiImplicit;
        } else if (*mode == "explicit") {
            c.scheme.chemotaxis = ChemotaxisMode::Explicit;
        } else {
            r.fail("chemotaxis", "expected semi_implicit or explicit, got '" + *mode + "'");
        }
    }
    checked(r, "dt", [&] {
        if (!(c.scheme.dt > 0.0)) throw ValidationError("must be positive");
    });
    checked(r, "t_end", [&] {
        if (!(c.scheme.t_end > 0.0)) throw ValidationError("must be positive");
    });
    checked(r, "snapshots", [&] { c.scheme.validate(); });

    c.tol.mass = r.number("tol_mass").value_or(1e-8);
    c.tol.v = r.number("tol_v").value_or(1e-10);
    c.tol.newton = r.boolean("newton").value_or(false);
    checked(r, "tol_mass", [&] {
        if (!(c.tol.mass > 0.0)) throw ValidationError("must be positive");
    });
    checked(r, "tol_v", [&] {
        if (!(c.tol.v > 0.0)) throw ValidationError("must be positive");
    });

    if (const auto chis = r.numbers("chis")) c.chis = *chis;
    checked(r, "chis", [&] {
        for (std::size_t k = 0; k < c.chis.size(); ++k) {
            if (!(c.chis[k] > 0.0)) throw ValidationError("every chi must be positive");
            if (k > 0 && !(c.chis[k] > c.chis[k - 1])) throw ValidationError("must be sorted ascending");
        }
    });

    if (const auto refine = r.numbers("refine_cells")) {
        c.refine_cells.clear();
        for (double v : *refine) {
            if (v != std::floor(v) || v < 4 || v > 1e8) r.fail("refine_cells", "entries must be integers >= 4");
            c.refine_cells.push_back(static_cast<int>(v));
        }
    }
    checked(r, "refine_cells", [&] {
        if (c.refine_cells.size() < 3) throw ValidationError("needs at least three grids");
        for (std::size_t k = 1; k < c.refine_cells.size(); ++k) {
            if (c.refine_cells[k] != 2 * c.refine_cells[k - 1]) throw ValidationError("each grid must double the last");
        }
    });

    c.fit_start = r.number("fit_start");
    c.fit_end = r.number("fit_end");
    checked(r, "fit_end", [&] {
        if (!(c.fit_window_end() > c.fit_window_start())) throw ValidationError("fit window must satisfy start < end");
    });

    c.out_dir = r.text("out_dir").value_or(".");
    c.allow_zero_mass = r.boolean("allow_zero_mass").value_or(false);

    c.u0 = parse_profile(r, "u0", base_dir);
    c.v0 = parse_profile(r, "v0", base_dir);

    double profile_mass = 0.0;
    checked(r, "u0", [&] { profile_mass = integrate(sample_profile(c.u0, c.grid(), ProfileRole::Density)); });
    if (const auto mass = r.number("mass")) {
        c.params.mass = *mass;
        const bool explicit_profile = r.has("u0");
        if (explicit_profile && std::abs(*mass - profile_mass) > 1e-4 * std::max(std::abs(*mass), 1e-300)) {
            std::ostringstream os;
            os.precision(17);
            os << "mass = " << *mass << " disagrees with the integral of u0 (" << profile_mass << ")";
            r.fail("mass", os.str());
        }
    } else {
        c.params.mass = profile_mass;
        c.mass_from_profile = true;
    }
    const bool zero_ok = c.allow_zero_mass && c.params.mass == 0.0;
    if (!zero_ok) checked(r, r.has("mass") ? "mass" : "u0", [&] { c.params.validate(); });
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", 0, "cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const auto dir = std::filesystem::path(path).parent_path();
    return parse_config(ss.str(), dir.empty() ? "." : dir.string());
}

}  // namespace chemo
