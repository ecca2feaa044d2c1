#include "supra/tridiagonal.hpp"

#include <cmath>
#include <string>

namespace supra {

MatrixDegenerate::MatrixDegenerate(std::size_t row, double pivot)
    : std::runtime_error("zero pivot in tridiagonal elimination at row " +
                         std::to_string(row) + " (pivot " + std::to_string(pivot) + ")"),
      row_(row) {}

namespace {
constexpr double kPivotFloor = 1e-300;
}

void TridiagonalSolver::solve(std::span<const double> lower, std::span<const double> diag,
                              std::span<const double> upper, std::span<double> rhs) {
  const std::size_t n = diag.size();
  if (n == 0) return;
  if (scratch_.size() < n) scratch_.resize(n);

  // Forward sweep: L has diagonal l_i = diag_i - lower_i * w_{i-1}, U has unit
  // diagonal with superdiagonal w_i = upper_i / l_i.
  double pivot = diag[0];
  if (std::abs(pivot) < kPivotFloor) throw MatrixDegenerate(0, pivot);
  rhs[0] /= pivot;
  for (std::size_t i = 1; i < n; ++i) {
    scratch_[i - 1] = upper[i - 1] / pivot;
    pivot = diag[i] - lower[i] * scratch_[i - 1];
    if (std::abs(pivot) < kPivotFloor || !std::isfinite(pivot)) throw MatrixDegenerate(i, pivot);
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    rhs[i] -= scratch_[i] * rhs[i + 1];
  }
}

void TridiagonalSolver::solve(double off_diagonal, std::span<const double> diag,
                              std::span<double> rhs) {
  const std::size_t n = diag.size();
  if (n == 0) return;
  if (scratch_.size() < n) scratch_.resize(n);

  double pivot = diag[0];
  if (std::abs(pivot) < kPivotFloor) throw MatrixDegenerate(0, pivot);
  rhs[0] /= pivot;
  for (std::size_t i = 1; i < n; ++i) {
    scratch_[i - 1] = off_diagonal / pivot;
    pivot = diag[i] - off_diagonal * scratch_[i - 1];
    if (std::abs(pivot) < kPivotFloor || !std::isfinite(pivot)) throw MatrixDegenerate(i, pivot);
    rhs[i] = (rhs[i] - off_diagonal * rhs[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    rhs[i] -= scratch_[i] * rhs[i + 1];
  }
}

bool strictly_diagonally_dominant(double off_diagonal, std::span<const double> diag) {
  const std::size_t n = diag.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double offs = (i > 0 ? std::abs(off_diagonal) : 0.0) +
                        (i + 1 < n ? std::abs(off_diagonal) : 0.0);
    if (!(std::abs(diag[i]) > offs)) return false;
  }
  return true;
}

}  // namespace supra
