#include "egedyn/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace ege {

namespace {

// Submatrix with the 0-based rows/cols in `cut` removed (cut sorted).
CMatrix remove_rows_cols(const CMatrix& a, const std::vector<int>& cut_rows,
                         const std::vector<int>& cut_cols) {
  const int n = int(a.rows());
  CMatrix out(n - int(cut_rows.size()), n - int(cut_cols.size()));
  int ri = 0;
  for (int i = 0; i < n; ++i) {
    if (std::find(cut_rows.begin(), cut_rows.end(), i) != cut_rows.end()) continue;
    int ci = 0;
    for (int j = 0; j < n; ++j) {
      if (std::find(cut_cols.begin(), cut_cols.end(), j) != cut_cols.end()) continue;
      out(ri, ci++) = a(i, j);
    }
    ++ri;
  }
  return out;
}

// det of the submatrix with one or two 0-based rows/cols removed.
Complex det_removed(const CMatrix& a, std::vector<int> rows, std::vector<int> cols) {
  std::sort(rows.begin(), rows.end());
  std::sort(cols.begin(), cols.end());
  return det(remove_rows_cols(a, rows, cols));
}

void check_square_finite(const CMatrix& a) {
  require(a.rows() == a.cols(), "matrix must be square");
  require(a.allFinite(), "matrix entries must be finite");
}

// Enumerates k-subsets of {0..n-1} in lexicographic order.
bool next_subset(std::vector<int>& s, int n) {
  const int k = int(s.size());
  int i = k - 1;
  while (i >= 0 && s[i] == n - k + i) --i;
  if (i < 0) return false;
  ++s[i];
  for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
  return true;
}

}  // namespace

void MinorIndex::validate(int n) const {
  require(rows.size() == cols.size(), "minor index: row/col cardinality mismatch");
  require(rows.size() == 1 || rows.size() == 2, "minor index: need 1 or 2 indices");
  for (const auto& set : {rows, cols}) {
    for (int v : set) require(v >= 1 && v <= n, "minor index out of range");
    if (set.size() == 2) require(set[0] != set[1], "minor index: duplicate entry");
  }
}

Complex det(const CMatrix& a) {
  check_square_finite(a);
  const int n = int(a.rows());
  if (n == 0) return {1.0, 0.0};
  if (n == 1) return a(0, 0);
  return a.partialPivLu().determinant();
}

Complex minor_det(const CMatrix& a, const MinorIndex& idx) {
  check_square_finite(a);
  idx.validate(int(a.rows()));
  std::vector<int> r, c;
  for (int v : idx.rows) r.push_back(v - 1);
  for (int v : idx.cols) c.push_back(v - 1);
  return det_removed(a, r, c);
}

Complex compound_det(const CMatrix& a, const std::vector<int>& rows,
                     const std::vector<int>& cols) {
  check_square_finite(a);
  require(rows.size() == cols.size(), "compound: row/col cardinality mismatch");
  const int n = int(a.rows());
  const int r = int(rows.size());
  require(r >= 1 && r <= n, "compound: bad cardinality");
  for (const auto& set : {rows, cols})
    for (size_t i = 0; i < set.size(); ++i) {
      require(set[i] >= 1 && set[i] <= n, "compound: index out of range");
      if (i) require(set[i] > set[i - 1], "compound: indices must increase");
    }
  CMatrix sub(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) sub(i, j) = a(rows[i] - 1, cols[j] - 1);
  return det(sub);
}

CharPolyEval char_poly(const CMatrix& a, Complex lambda) {
  check_square_finite(a);
  const int n = int(a.rows());
  CMatrix m = -a;
  m.diagonal().array() += lambda;
  CharPolyEval out;
  out.value = det(m);
  out.d1 = {0.0, 0.0};
  for (int k = 0; k < n; ++k) out.d1 += det_removed(m, {k}, {k});
  out.d2 = {0.0, 0.0};
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) out.d2 += det_removed(m, {k, l}, {k, l});
  out.d2 *= 2.0;
  return out;
}

CharPolyEval char_poly_from_spectrum(const std::vector<Complex>& eig, Complex lambda) {
  const int n = int(eig.size());
  CharPolyEval out;
  out.value = {1.0, 0.0};
  for (int j = 0; j < n; ++j) out.value *= lambda - eig[j];
  out.d1 = {0.0, 0.0};
  for (int k = 0; k < n; ++k) {
    Complex p{1.0, 0.0};
    for (int j = 0; j < n; ++j)
      if (j != k) p *= lambda - eig[j];
    out.d1 += p;
  }
  out.d2 = {0.0, 0.0};
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      Complex p{1.0, 0.0};
      for (int m = 0; m < n; ++m)
        if (m != j && m != k) p *= lambda - eig[m];
      out.d2 += p;
    }
  out.d2 *= 2.0;
  return out;
}

ValueWithScale principal_minor_sum_scaled(const CMatrix& a, int k) {
  check_square_finite(a);
  const int n = int(a.rows());
  require(k >= 1 && k <= n, "principal minor order out of range");
  std::vector<int> s(k);
  for (int i = 0; i < k; ++i) s[i] = i;
  Complex sum{0.0, 0.0};
  double scale = 0.0;
  do {
    CMatrix sub(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) sub(i, j) = a(s[i], s[j]);
    const Complex d = det(sub);
    sum += d;
    scale = std::max(scale, std::abs(d));
  } while (next_subset(s, n));
  return {sum, scale};
}

Complex principal_minor_sum(const CMatrix& a, int k) {
  return principal_minor_sum_scaled(a, k).value;
}

ValueWithScale twice_cofactor_det_scaled(const CMatrix& a, int k1, int l1) {
  check_square_finite(a);
  const int n = int(a.rows());
  require(n >= 2, "need at least a 2x2 matrix");
  require(k1 >= 1 && l1 <= n && k1 < l1, "need 1 <= k < l <= N");
  const int k = k1 - 1, l = l1 - 1;  // 0-based from here on
  const auto sgn = [](int e) { return (e % 2 == 0) ? 1.0 : -1.0; };

  Complex sum{0.0, 0.0};
  double scale = 0.0;
  const auto add = [&](Complex term) {
    sum += term;
    scale = std::max(scale, std::abs(term));
  };

  // Expansion along row k; the diagonal hit stays unexpanded.
  add(a(k, k) * det_removed(a, {k}, {k}));
  // Row-k hit at column l, row-l hit at column q.
  add(-a(k, l) * a(l, k) * det_removed(a, {k, l}, {l, k}));
  for (int q = 0; q < n; ++q) {
    if (q == k || q == l) continue;
    // signs carry the 1-based parity of the removed positions
    const double s = (q < l) ? sgn(k1 + (q + 1) - 1) : sgn(k1 + (q + 1));
    add(s * a(k, l) * a(l, q) * det_removed(a, {k, l}, {l, q}));
  }
  // Row-k hit at column p != k,l, row-l hit back at column k.
  for (int p = 0; p < n; ++p) {
    if (p == k || p == l) continue;
    const double s = (p > k) ? sgn(l1 + (p + 1) - 1) : sgn(l1 + (p + 1));
    add(s * a(k, p) * a(l, k) * det_removed(a, {k, l}, {p, k}));
  }
  // Generic case: columns p (row k) and q (row l), p != k,l, q != k,p.
  for (int p = 0; p < n; ++p) {
    if (p == k || p == l) continue;
    for (int q = 0; q < n; ++q) {
      if (q == k || q == p) continue;
      const double s =
          (p > q) ? sgn(k1 + l1 + (p + 1) + (q + 1) - 1) : sgn(k1 + l1 + (p + 1) + (q + 1));
      add(s * a(k, p) * a(l, q) * det_removed(a, {k, l}, {p, q}));
    }
  }
  return {sum, scale};
}

Complex twice_cofactor_det(const CMatrix& a, int k, int l) {
  return twice_cofactor_det_scaled(a, k, l).value;
}

ValueWithScale squared_minor_sum_residual_scaled(const CMatrix& a, Complex lambda) {
  check_square_finite(a);
  const int n = int(a.rows());
  CMatrix m = -a;
  m.diagonal().array() += lambda;
  const CMatrix m2 = m * m;

  Complex lhs{0.0, 0.0};
  double scale = 0.0;
  for (int k = 0; k < n; ++k) {
    const Complex d = det_removed(m2, {k}, {k});
    lhs += d;
    scale = std::max(scale, std::abs(d));
  }

  const std::vector<Complex> mu = eigenvalues_of(a);
  const Complex d1 = char_poly_from_spectrum(mu, lambda).d1;
  Complex bracket = d1 * d1;
  scale = std::max(scale, std::abs(bracket));
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      Complex p = (lambda - mu[k]) * (lambda - mu[l]);
      for (int q = 0; q < n; ++q)
        if (q != k && q != l) p *= (lambda - mu[q]) * (lambda - mu[q]);
      bracket -= 2.0 * p;
      scale = std::max(scale, 2.0 * std::abs(p));
    }
  return {lhs - bracket, scale};
}

Complex squared_minor_sum_residual(const CMatrix& a, Complex lambda) {
  return squared_minor_sum_residual_scaled(a, lambda).value;
}

ValueWithScale offdiag_inverse_pair_sum_scaled(const std::vector<Complex>& z) {
  const int n = int(z.size());
  require(n >= 3, "need at least 3 points");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) require(z[i] != z[j], "points must be distinct");
  Complex sum{0.0, 0.0};
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (int k = j + 1; k < n; ++k) {
        if (k == i) continue;
        const Complex term = 1.0 / ((z[i] - z[j]) * (z[i] - z[k]));
        sum += term;
        scale = std::max(scale, std::abs(term));
      }
    }
  return {sum, scale};
}

Complex offdiag_inverse_pair_sum(const std::vector<Complex>& z) {
  return offdiag_inverse_pair_sum_scaled(z).value;
}

Complex elementary_symmetric(const std::vector<Complex>& vals, int k) {
  const int n = int(vals.size());
  require(k >= 0 && k <= n, "symmetric polynomial order out of range");
  // p(x) = prod(x - v_i) built incrementally; e_k = (-1)^k * coeff[k].
  std::vector<Complex> coeff(n + 1, Complex{0.0, 0.0});
  coeff[0] = {1.0, 0.0};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j >= 1; --j) coeff[j] -= vals[i] * coeff[j - 1];
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return sign * coeff[k];
}

std::vector<Complex> eigenvalues_of(const CMatrix& a) {
  check_square_finite(a);
  if (a.rows() == 1) return {a(0, 0)};
  Eigen::ComplexEigenSolver<CMatrix> es(a, /*computeEigenvectors=*/false);
  std::vector<Complex> out(a.rows());
  for (int i = 0; i < a.rows(); ++i) out[i] = es.eigenvalues()(i);
  return out;
}

}  // namespace ege
