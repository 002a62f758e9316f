#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "egedyn/common.hpp"
#include "egedyn/linalg.hpp"
#include "egedyn/rng.hpp"

using namespace ege;

namespace {

// Independent determinant oracle: literal cofactor expansion along the first
// row, O(n!). Shares no code with the production LU route.
Complex det_cofactor(const CMatrix& a) {
  const int n = int(a.rows());
  if (n == 0) return 1.0;
  if (n == 1) return a(0, 0);
  Complex sum = 0.0;
  double sign = 1.0;
  for (int c = 0; c < n; ++c, sign = -sign) {
    CMatrix sub(n - 1, n - 1);
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int k = 0; k < n; ++k) {
        if (k == c) continue;
        sub(r - 1, cc++) = a(r, k);
      }
    }
    sum += sign * a(0, c) * det_cofactor(sub);
  }
  return sum;
}

// Explicit submatrix construction oracles (1-based index sets).
CMatrix drop_rows_cols(const CMatrix& a, const std::vector<int>& rows,
                       const std::vector<int>& cols) {
  const int n = int(a.rows());
  std::vector<int> keep_r, keep_c;
  for (int r = 1; r <= n; ++r)
    if (std::find(rows.begin(), rows.end(), r) == rows.end()) keep_r.push_back(r);
  for (int c = 1; c <= n; ++c)
    if (std::find(cols.begin(), cols.end(), c) == cols.end()) keep_c.push_back(c);
  CMatrix sub(keep_r.size(), keep_c.size());
  for (size_t r = 0; r < keep_r.size(); ++r)
    for (size_t c = 0; c < keep_c.size(); ++c) sub(r, c) = a(keep_r[r] - 1, keep_c[c] - 1);
  return sub;
}

CMatrix select_rows_cols(const CMatrix& a, const std::vector<int>& rows,
                         const std::vector<int>& cols) {
  CMatrix sub(rows.size(), cols.size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < cols.size(); ++c) sub(r, c) = a(rows[r] - 1, cols[c] - 1);
  return sub;
}

CMatrix random_matrix(int n, rng::Stream& g) {
  CMatrix a(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a(r, c) = 0.70710678118654752440 * g.normal_pair();
  return a;
}

std::vector<Complex> sorted_spectrum(const CMatrix& a) {
  std::vector<Complex> e = eigenvalues_of(a);
  std::sort(e.begin(), e.end(), [](const Complex& x, const Complex& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return e;
}

}  // namespace

TEST_CASE("det matches the cofactor-expansion oracle") {
  CHECK(std::abs(det(CMatrix::Identity(3, 3)) - Complex(1.0)) < 1e-14);
  rng::Stream g(101, 0);
  for (int n = 1; n <= 6; ++n) {
    for (int rep = 0; rep < 4; ++rep) {
      const CMatrix a = random_matrix(n, g);
      const Complex want = det_cofactor(a);
      CHECK(std::abs(det(a) - want) <= 1e-11 * std::max(1.0, std::abs(want)));
    }
  }
  // exact for triangular inputs up to rounding
  CMatrix tri = CMatrix::Zero(4, 4);
  rng::Stream h(102, 0);
  for (int r = 0; r < 4; ++r)
    for (int c = r; c < 4; ++c) tri(r, c) = h.normal_pair();
  const Complex diag_prod = tri(0, 0) * tri(1, 1) * tri(2, 2) * tri(3, 3);
  CHECK(std::abs(det(tri) - diag_prod) <= 1e-13 * std::abs(diag_prod));
}

TEST_CASE("minor_det removes the listed rows and columns without a sign") {
  {
    MinorIndex idx;
    idx.rows = {1};
    idx.cols = {1};
    CHECK(std::abs(minor_det(CMatrix::Identity(3, 3), idx) - Complex(1.0)) < 1e-15);
  }
  rng::Stream g(103, 0);
  const CMatrix a = random_matrix(5, g);
  for (int r = 1; r <= 5; ++r)
    for (int c = 1; c <= 5; ++c) {
      MinorIndex idx;
      idx.rows = {r};
      idx.cols = {c};
      const Complex want = det_cofactor(drop_rows_cols(a, {r}, {c}));
      CHECK(std::abs(minor_det(a, idx) - want) <= 1e-11 * std::max(1.0, std::abs(want)));
    }
  MinorIndex bad;
  bad.rows = {0};
  bad.cols = {1};
  CHECK_THROWS_AS((void)minor_det(a, bad), ArgumentError);
}

TEST_CASE("char_poly of diag(1,2) at 0 is (2, -3, 2)") {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  const CharPolyEval e = char_poly(a, Complex(0.0, 0.0));
  CHECK(std::abs(e.value - Complex(2.0)) < 1e-14);
  CHECK(std::abs(e.d1 - Complex(-3.0)) < 1e-14);
  CHECK(std::abs(e.d2 - Complex(2.0)) < 1e-14);
}

TEST_CASE("char_poly minor-sum route agrees with the spectrum route") {
  rng::Stream g(104, 0);
  for (int n = 2; n <= 6; ++n) {
    const CMatrix a = random_matrix(n, g);
    const std::vector<Complex> eig = eigenvalues_of(a);
    const Complex lam = 2.0 * g.normal_pair();
    const CharPolyEval m = char_poly(a, lam);
    const CharPolyEval p = char_poly_from_spectrum(eig, lam);
    const auto rel = [](Complex x, Complex y) {
      return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1.0});
    };
    CHECK(rel(m.value, p.value) < 1e-10);
    CHECK(rel(m.d1, p.d1) < 1e-10);
    CHECK(rel(m.d2, p.d2) < 1e-10);
  }
}

TEST_CASE("principal minor sums are elementary symmetric polynomials") {
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  d(2, 2) = 3.0;
  CHECK(std::abs(principal_minor_sum(d, 2) - Complex(11.0)) < 1e-13);

  rng::Stream g(105, 0);
  for (int n = 2; n <= 6; ++n) {
    const CMatrix a = random_matrix(n, g);
    const std::vector<Complex> eig = eigenvalues_of(a);
    for (int k = 1; k <= n; ++k) {
      const Complex want = elementary_symmetric(eig, k);
      const ValueWithScale got = principal_minor_sum_scaled(a, k);
      CHECK(std::abs(got.value - want) <=
            1e-10 * std::max({got.scale, std::abs(want), 1.0}));
    }
  }
  CHECK_THROWS_AS((void)principal_minor_sum(d, 0), ArgumentError);
  CHECK_THROWS_AS((void)principal_minor_sum(d, 4), ArgumentError);
}

TEST_CASE("elementary_symmetric matches the direct expansion") {
  const std::vector<Complex> v = {1.0, 2.0, 3.0};
  CHECK(std::abs(elementary_symmetric(v, 1) - Complex(6.0)) < 1e-14);
  CHECK(std::abs(elementary_symmetric(v, 2) - Complex(11.0)) < 1e-14);
  CHECK(std::abs(elementary_symmetric(v, 3) - Complex(6.0)) < 1e-14);
}

TEST_CASE("compound_det selects the submatrix in index order") {
  CHECK(std::abs(compound_det(CMatrix::Identity(4, 4), {1, 2}, {1, 2}) - Complex(1.0)) <
        1e-15);
  rng::Stream g(106, 0);
  const CMatrix a = random_matrix(5, g);
  const std::vector<int> rows = {1, 3, 4};
  const std::vector<int> cols = {2, 3, 5};
  const Complex want = det_cofactor(select_rows_cols(a, rows, cols));
  CHECK(std::abs(compound_det(a, rows, cols) - want) <= 1e-12 * std::max(1.0, std::abs(want)));
  CHECK_THROWS_AS((void)compound_det(a, {1, 2}, {1}), ArgumentError);
  CHECK_THROWS_AS((void)compound_det(a, {2, 1}, {1, 2}), ArgumentError);
}

TEST_CASE("twice cofactor expansion reproduces det for every row pair") {
  CHECK(std::abs(twice_cofactor_det(CMatrix::Identity(3, 3), 1, 2) - Complex(1.0)) < 1e-14);
  rng::Stream g(107, 0);
  for (int n = 3; n <= 6; ++n) {
    const CMatrix a = random_matrix(n, g);
    const Complex d0 = det_cofactor(a);
    for (int k = 1; k <= n; ++k)
      for (int l = k + 1; l <= n; ++l) {
        const ValueWithScale tc = twice_cofactor_det_scaled(a, k, l);
        CHECK(std::abs(tc.value - d0) <= 1e-10 * std::max({tc.scale, std::abs(d0), 1.0}));
      }
  }
  const CMatrix a = random_matrix(3, g);
  CHECK_THROWS_AS((void)twice_cofactor_det(a, 2, 2), ArgumentError);
  CHECK_THROWS_AS((void)twice_cofactor_det(a, 3, 1), ArgumentError);
}

TEST_CASE("Cauchy-Binet expansion of product compound minors") {
  rng::Stream g(108, 0);
  const int n = 4;
  const CMatrix a = random_matrix(n, g);
  const CMatrix b = random_matrix(n, g);
  const CMatrix ab = a * b;
  const std::vector<std::vector<int>> subsets2 = {{1, 2}, {1, 3}, {1, 4},
                                                  {2, 3}, {2, 4}, {3, 4}};
  for (const auto& alpha : subsets2)
    for (const auto& beta : subsets2) {
      Complex sum = 0.0;
      for (const auto& gamma : subsets2)
        sum += compound_det(a, alpha, gamma) * compound_det(b, gamma, beta);
      const Complex lhs = compound_det(ab, alpha, beta);
      CHECK(std::abs(lhs - sum) <= 1e-11 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("squared-minor-sum residual vanishes for every evaluation point") {
  // diagonal matrix: both sides are explicit products
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = Complex(1.0, 0.5);
  d(1, 1) = Complex(-2.0, 0.0);
  d(2, 2) = Complex(0.0, 1.0);
  CHECK(std::abs(squared_minor_sum_residual(d, Complex(0.3, -0.7))) < 1e-12);

  rng::Stream g(109, 0);
  for (int n = 2; n <= 6; ++n) {
    const CMatrix a = random_matrix(n, g);
    const std::vector<Complex> eig = eigenvalues_of(a);
    const Complex lam = 1.5 * g.normal_pair();
    const ValueWithScale r1 = squared_minor_sum_residual_scaled(a, lam);
    CHECK(std::abs(r1.value) <= 1e-10 * std::max(r1.scale, 1.0));
    const ValueWithScale r2 = squared_minor_sum_residual_scaled(a, eig[0]);
    CHECK(std::abs(r2.value) <= 1e-10 * std::max(r2.scale, 1.0));
  }
}

TEST_CASE("inverse-pair sum over distinct points vanishes") {
  CHECK(std::abs(offdiag_inverse_pair_sum({Complex(0.0), Complex(1.0), Complex(2.0)})) <
        1e-14);
  rng::Stream g(110, 0);
  for (int n = 3; n <= 8; ++n) {
    std::vector<Complex> z(n);
    for (auto& v : z) v = g.normal_pair();
    const ValueWithScale s = offdiag_inverse_pair_sum_scaled(z);
    CHECK(std::abs(s.value) <= 1e-11 * std::max(s.scale, 1.0));
  }
  CHECK_THROWS_AS((void)offdiag_inverse_pair_sum({Complex(1.0), Complex(1.0), Complex(2.0)}),
                  ArgumentError);
}

TEST_CASE("eigenvalues_of recovers a diagonal spectrum") {
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = Complex(-1.0, 0.0);
  d(1, 1) = Complex(0.5, 0.25);
  d(2, 2) = Complex(2.0, -1.0);
  const std::vector<Complex> eig = sorted_spectrum(d);
  CHECK(std::abs(eig[0] - Complex(-1.0, 0.0)) < 1e-12);
  CHECK(std::abs(eig[1] - Complex(0.5, 0.25)) < 1e-12);
  CHECK(std::abs(eig[2] - Complex(2.0, -1.0)) < 1e-12);
}
