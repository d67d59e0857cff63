#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace chemo {

/// Uniform cell-centred mesh on [0, L] with n cells.
class Grid1D {
public:
    Grid1D(double length, int cells);

    double length() const noexcept { return length_; }
    int cells() const noexcept { return cells_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(cells_); }
    double dx() const noexcept { return dx_; }
    /// Cell centre x_j = (j + 1/2) dx.
    double center(int j) const noexcept { return (j + 0.5) * dx_; }
    /// Face x_{j-1/2} = j dx, j = 0..n.
    double face(int j) const noexcept { return j * dx_; }
    std::vector<double> centers() const;

    bool operator==(const Grid1D& other) const noexcept {
        return cells_ == other.cells_ && length_ == other.length_;
    }

private:
    double length_;
    int cells_;
    double dx_;
};

/// Cell-centred samples of a scalar function.
class Field {
public:
    explicit Field(const Grid1D& grid, double fill = 0.0);
    Field(const Grid1D& grid, std::vector<double> values);

    /// Samples f at cell centres.
    static Field sample(const Grid1D& grid, const std::function<double(double)>& f);

    const Grid1D& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    double& operator[](std::size_t j) { return values_[j]; }
    double operator[](std::size_t j) const { return values_[j]; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    double min() const;
    double max() const;

    Field operator-(const Field& other) const;
    Field operator+(const Field& other) const;

private:
    Grid1D grid_;
    std::vector<double> values_;
};

/// Ghost rule used to complete the gradient on a boundary face.
struct FaceBoundary {
    enum class Kind {
        Mirror,     ///< ghost equals the adjacent cell: zero gradient
        Dirichlet,  ///< ghost is 2 value - adjacent cell: face value equals `value`
    };
    Kind kind = Kind::Mirror;
    double value = 0.0;

    static FaceBoundary mirror() { return {}; }
    static FaceBoundary dirichlet(double v) { return {Kind::Dirichlet, v}; }
};

enum class NormKind { L2, H1, Linf };

/// Midpoint rule dx * sum f_j.
double integrate(const Field& f);

/// n + 1 face differences; faces 1..n-1 are (f_j - f_{j-1}) / dx, the two
/// boundary faces follow the given ghost rules.
std::vector<double> face_gradient(const Field& f, FaceBoundary left = FaceBoundary::mirror(),
                                  FaceBoundary right = FaceBoundary::mirror());

/// Discrete L2, H1 (interior faces only) and max norms.
double norm(const Field& f, NormKind kind);

/// phi_j = dx * sum_{k <= j} f_k, i.e. the running integral at the right face of cell j.
Field antiderivative(const Field& f);

/// Writes columns "x,<name>..." with 17 significant digits.
void write_fields_csv(std::ostream& os, const std::vector<std::string>& names,
                      const std::vector<const Field*>& fields);
void write_fields_csv(const std::string& path, const std::vector<std::string>& names,
                      const std::vector<const Field*>& fields);

/// Reads a two-column (x, value) CSV onto `grid`; x must match the cell centres.
Field read_field_csv(const std::string& path, const Grid1D& grid);

}  // namespace chemo
