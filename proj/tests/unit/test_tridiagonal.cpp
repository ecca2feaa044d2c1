#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "supra/tridiagonal.hpp"

using namespace supra;

namespace {

// Dense Gaussian elimination with partial pivoting as the oracle.
std::vector<double> dense_solve(std::vector<std::vector<double>> m, std::vector<double> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    }
    std::swap(m[col], m[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= m[i][c] * x[c];
    x[i] = s / m[i][i];
  }
  return x;
}

}  // namespace

TEST_SUITE("tridiagonal") {

TEST_CASE("matches dense elimination on random dominant systems") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TridiagonalSolver solver;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial) * 3;
    std::vector<double> lower(n), diag(n), upper(n), rhs(n);
    std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      lower[i] = i ? u(rng) : 0.0;
      upper[i] = i + 1 < n ? u(rng) : 0.0;
      diag[i] = 2.5 + u(rng);
      rhs[i] = u(rng);
      dense[i][i] = diag[i];
      if (i) dense[i][i - 1] = lower[i];
      if (i + 1 < n) dense[i][i + 1] = upper[i];
    }
    const auto expected = dense_solve(dense, rhs);
    solver.solve(lower, diag, upper, rhs);
    for (std::size_t i = 0; i < n; ++i) CHECK(rhs[i] == doctest::Approx(expected[i]).epsilon(1e-13));
  }
}

TEST_CASE("constant off-diagonal overload agrees with the general one") {
  const std::vector<double> diag{3.0, 2.5, 4.0, 3.5, 2.2};
  std::vector<double> a{1.0, -2.0, 0.5, 3.0, -1.0};
  std::vector<double> b = a;
  const std::vector<double> off(diag.size(), -0.7);
  TridiagonalSolver solver;
  solver.solve(off, diag, off, a);
  solver.solve(-0.7, diag, b);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("hand-solved 2x2 system") {
  // [2 1; 1 3] x = [3; 5] -> x = (4/5, 7/5)
  std::vector<double> rhs{3.0, 5.0};
  TridiagonalSolver solver;
  solver.solve(1.0, std::vector<double>{2.0, 3.0}, rhs);
  CHECK(rhs[0] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(rhs[1] == doctest::Approx(1.4).epsilon(1e-15));
}

TEST_CASE("zero pivot is reported with its row") {
  // [1 1; 1 1] is singular; elimination hits a zero pivot on row 1
  std::vector<double> rhs{1.0, 1.0};
  TridiagonalSolver solver;
  CHECK_THROWS_AS(solver.solve(1.0, std::vector<double>{1.0, 1.0}, rhs), MatrixDegenerate);
  try {
    std::vector<double> again{1.0, 1.0};
    solver.solve(1.0, std::vector<double>{1.0, 1.0}, again);
  } catch (const MatrixDegenerate& err) {
    CHECK(err.row() == 1);
  }
  std::vector<double> one{1.0};
  CHECK_THROWS_AS(solver.solve(0.0, std::vector<double>{0.0}, one), MatrixDegenerate);
}

TEST_CASE("diagonal dominance check") {
  CHECK(strictly_diagonally_dominant(1.0, std::vector<double>{2.5, 2.5, 2.5}));
  CHECK_FALSE(strictly_diagonally_dominant(1.0, std::vector<double>{2.5, 2.0, 2.5}));
  // end rows have a single neighbour
  CHECK(strictly_diagonally_dominant(1.0, std::vector<double>{1.5, 2.5, 1.5}));
}

}  // TEST_SUITE
