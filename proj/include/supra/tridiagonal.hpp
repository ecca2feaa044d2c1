#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace supra {

class MatrixDegenerate : public std::runtime_error {
 public:
  MatrixDegenerate(std::size_t row, double pivot);
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// Crout (Thomas) elimination for a tridiagonal system without pivoting.
/// Row i reads lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i];
/// lower[0] and upper[n-1] are ignored. The solution overwrites `rhs`.
/// Workspace is kept between calls so repeated solves do not allocate.
class TridiagonalSolver {
 public:
  explicit TridiagonalSolver(std::size_t size = 0) : scratch_(size) {}

  void solve(std::span<const double> lower, std::span<const double> diag,
             std::span<const double> upper, std::span<double> rhs);

  /// Same with constant off-diagonals, the layout of the chain matrices.
  void solve(double off_diagonal, std::span<const double> diag, std::span<double> rhs);

 private:
  std::vector<double> scratch_;
};

/// True when |diag[i]| > |lower[i]| + |upper[i]| on every row.
bool strictly_diagonally_dominant(double off_diagonal, std::span<const double> diag);

}  // namespace supra
