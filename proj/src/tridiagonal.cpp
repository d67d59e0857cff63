#include "chemo/tridiagonal.hpp"

#include "chemo/error.hpp"

#include <cmath>

namespace chemo {

std::vector<double> Tridiagonal::apply(std::span<const double> x) const {
    const std::size_t n = size();
    std::vector<double> y(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = diag[j] * x[j];
        if (j > 0) s += lower[j] * x[j - 1];
        if (j + 1 < n) s += upper[j] * x[j + 1];
        y[j] = s;
    }
    return y;
}

void solve_tridiagonal(const Tridiagonal& a, std::span<const double> rhs, std::span<double> x,
                       std::vector<double>& scratch) {
    const std::size_t n = a.size();
    if (rhs.size() != n || x.size() != n) throw ConsistencyError("tridiagonal: size mismatch");
    if (n == 0) return;
    scratch.resize(n);

    // Forward sweep: scratch holds the modified super-diagonal, x the modified rhs.
    double pivot = a.diag[0];
    if (pivot == 0.0 || !std::isfinite(pivot)) throw ConsistencyError("tridiagonal: singular pivot at row 0");
    scratch[0] = a.upper[0] / pivot;
    x[0] = rhs[0] / pivot;
    for (std::size_t j = 1; j < n; ++j) {
        pivot = a.diag[j] - a.lower[j] * scratch[j - 1];
        if (pivot == 0.0 || !std::isfinite(pivot)) {
            throw ConsistencyError("tridiagonal: singular pivot at row " + std::to_string(j));
        }
        scratch[j] = j + 1 < n ? a.upper[j] / pivot : 0.0;
        x[j] = (rhs[j] - a.lower[j] * x[j - 1]) / pivot;
    }
    for (std::size_t j = n - 1; j-- > 0;) x[j] -= scratch[j] * x[j + 1];
}

std::vector<double> solve_tridiagonal(const Tridiagonal& a, std::span<const double> rhs) {
    std::vector<double> x(a.size());
    std::vector<double> scratch;
    solve_tridiagonal(a, rhs, x, scratch);
    return x;
}

}  // namespace chemo
