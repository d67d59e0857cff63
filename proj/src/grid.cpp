#include "chemo/grid.hpp"

#include "chemo/csv.hpp"
#include "chemo/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

namespace chemo {

Grid1D::Grid1D(double length, int cells) : length_(length), cells_(cells), dx_(length / cells) {
    if (!(length > 0.0) || !std::isfinite(length)) throw ValidationError("grid: length must be positive");
    if (cells < 4) throw ValidationError("grid: at least 4 cells required, got " + std::to_string(cells));
}

std::vector<double> Grid1D::centers() const {
    std::vector<double> x(size());
    for (int j = 0; j < cells_; ++j) x[j] = center(j);
    return x;
}

Field::Field(const Grid1D& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

Field::Field(const Grid1D& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw ValidationError("field: expected " + std::to_string(grid_.size()) + " values, got " +
                              std::to_string(values_.size()));
    }
}

Field Field::sample(const Grid1D& grid, const std::function<double(double)>& f) {
    Field out(grid);
    for (int j = 0; j < grid.cells(); ++j) out[j] = f(grid.center(j));
    return out;
}

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

Field Field::operator-(const Field& other) const {
    if (!(grid_ == other.grid_)) throw ValidationError("field: grid mismatch");
    Field out(grid_);
    for (std::size_t j = 0; j < size(); ++j) out[j] = values_[j] - other[j];
    return out;
}

Field Field::operator+(const Field& other) const {
    if (!(grid_ == other.grid_)) throw ValidationError("field: grid mismatch");
    Field out(grid_);
    for (std::size_t j = 0; j < size(); ++j) out[j] = values_[j] + other[j];
    return out;
}

double integrate(const Field& f) {
    double sum = 0.0;
    for (double v : f.values()) sum += v;
    return f.grid().dx() * sum;
}

std::vector<double> face_gradient(const Field& f, FaceBoundary left, FaceBoundary right) {
    const std::size_t n = f.size();
    const double dx = f.grid().dx();
    std::vector<double> g(n + 1);
    for (std::size_t j = 1; j < n; ++j) g[j] = (f[j] - f[j - 1]) / dx;

    g[0] = left.kind == FaceBoundary::Kind::Dirichlet ? 2.0 * (f[0] - left.value) / dx : 0.0;
    g[n] = right.kind == FaceBoundary::Kind::Dirichlet ? 2.0 * (right.value - f[n - 1]) / dx : 0.0;
    return g;
}

double norm(const Field& f, NormKind kind) {
    const double dx = f.grid().dx();
    switch (kind) {
        case NormKind::Linf: {
            double m = 0.0;
            for (double v : f.values()) m = std::max(m, std::abs(v));
            return m;
        }
        case NormKind::L2:
        case NormKind::H1: {
            double sq = 0.0;
            for (double v : f.values()) sq += v * v;
            sq *= dx;
            if (kind == NormKind::H1) {
                double gsq = 0.0;
                for (std::size_t j = 1; j < f.size(); ++j) {
                    const double g = (f[j] - f[j - 1]) / dx;
                    gsq += g * g;
                }
                sq += dx * gsq;
            }
            return std::sqrt(sq);
        }
    }
    return 0.0;
}

Field antiderivative(const Field& f) {
    Field phi(f.grid());
    const double dx = f.grid().dx();
    double running = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        running += f[j];
        phi[j] = dx * running;
    }
    return phi;
}

void write_fields_csv(std::ostream& os, const std::vector<std::string>& names,
                      const std::vector<const Field*>& fields) {
    if (fields.empty()) throw ValidationError("write_fields_csv: no fields");
    const auto x = fields.front()->grid().centers();
    std::vector<std::string> header{"x"};
    header.insert(header.end(), names.begin(), names.end());
    std::vector<std::span<const double>> cols{x};
    for (const Field* f : fields) cols.push_back(f->values());
    csv::write_table(os, header, cols);
}

void write_fields_csv(const std::string& path, const std::vector<std::string>& names,
                      const std::vector<const Field*>& fields) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    write_fields_csv(out, names, fields);
}

Field read_field_csv(const std::string& path, const Grid1D& grid) {
    const auto table = csv::read_table_file(path);
    if (table.columns.size() < 2) throw ValidationError(path + ": expected columns x,value");
    const auto& x = table.columns[0];
    if (x.size() != grid.size()) {
        throw ValidationError(path + ": has " + std::to_string(x.size()) + " rows, grid has " +
                              std::to_string(grid.size()) + " cells");
    }
    for (int j = 0; j < grid.cells(); ++j) {
        if (std::abs(x[j] - grid.center(j)) > 1e-9 * grid.length()) {
            throw ValidationError(path + ": row " + std::to_string(j + 1) + " x does not match the cell centre");
        }
    }
    return Field(grid, table.columns[1]);
}

}  // namespace chemo
