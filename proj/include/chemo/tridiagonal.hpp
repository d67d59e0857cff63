#pragma once

#include <span>
#include <vector>

namespace chemo {

/// Tridiagonal matrix stored by diagonals. Row j reads
/// lower[j] x[j-1] + diag[j] x[j] + upper[j] x[j+1]; lower[0] and upper[n-1] are ignored.
struct Tridiagonal {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;

    explicit Tridiagonal(std::size_t n = 0) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
    std::size_t size() const noexcept { return diag.size(); }

    /// y = A x.
    std::vector<double> apply(std::span<const double> x) const;
};

/// Thomas algorithm without pivoting. Intended for the M-matrices assembled by
/// the steady and evolution solvers; a vanishing pivot throws ConsistencyError.
/// `scratch` must have the same size as the system and is overwritten.
void solve_tridiagonal(const Tridiagonal& a, std::span<const double> rhs, std::span<double> x,
                       std::vector<double>& scratch);

std::vector<double> solve_tridiagonal(const Tridiagonal& a, std::span<const double> rhs);

}  // namespace chemo
