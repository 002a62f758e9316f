#pragma once

#include <vector>

#include "egedyn/common.hpp"

namespace ege {

// Row/column removal sets in the 1-based convention used by the docs and CLI
// (A_{k|l} removes row k and column l; A_{kl|pq} removes two of each).
// Internal code is 0-based; this type is the boundary.
struct MinorIndex {
  std::vector<int> rows;  // 1 or 2 indices, 1-based, duplicate-free
  std::vector<int> cols;  // same cardinality as rows

  void validate(int n) const;
};

struct CharPolyEval {
  Complex value;  // f(lambda)   = det(lambda I - A)
  Complex d1;     // f'(lambda)  in lambda
  Complex d2;     // f''(lambda)
};

// Value of an identity-check expression together with the largest magnitude
// among its summands. Relative errors are measured against `scale`, because
// Vandermonde-type sums cancel across many orders of magnitude.
struct ValueWithScale {
  Complex value;
  double scale;
};

// Determinant via LU with partial pivoting. det of a 0x0 matrix is 1.
Complex det(const CMatrix& a);

// Determinant of the submatrix with idx's rows/columns removed. No cofactor
// sign is applied.
Complex minor_det(const CMatrix& a, const MinorIndex& idx);

// Determinant of the submatrix selecting `rows` x `cols` (1-based, strictly
// increasing, equal cardinality).
Complex compound_det(const CMatrix& a, const std::vector<int>& rows,
                     const std::vector<int>& cols);

// f, f', f'' of the characteristic polynomial f(lambda) = det(lambda I - A),
// evaluated through minor sums: f' = sum_k det((lambda I-A)_{k|k}),
// f'' = 2 sum_{k<l} det((lambda I-A)_{kl|kl}).
CharPolyEval char_poly(const CMatrix& a, Complex lambda);

// Same three values from a known spectrum: f = prod(lambda - mu_j),
// f' = sum_k prod_{j != k}, f'' = 2 sum_{j<k} prod_{m != j,k}. The two routes
// must agree; the identity suite checks that.
CharPolyEval char_poly_from_spectrum(const std::vector<Complex>& eig, Complex lambda);

// Sum of all k x k principal minors; equals the k-th elementary symmetric
// polynomial of the eigenvalues.
Complex principal_minor_sum(const CMatrix& a, int k);
ValueWithScale principal_minor_sum_scaled(const CMatrix& a, int k);

// Literal eight-term double cofactor expansion of det(A) along rows k then l
// (1-based, k < l). Must reproduce det(A); evaluated term by term on purpose.
Complex twice_cofactor_det(const CMatrix& a, int k, int l);
ValueWithScale twice_cofactor_det_scaled(const CMatrix& a, int k, int l);

// sum_k det(((lambda I - A)^2)_{k|k})
// minus the product form f'(lambda)^2 - 2 sum_{k<l} (lambda-mu_k)(lambda-mu_l)
// prod_{m != k,l} (lambda-mu_m)^2 over the eigenvalues mu of A. Zero for every
// lambda; at an eigenvalue the bracket collapses to f'(mu_i)^2.
Complex squared_minor_sum_residual(const CMatrix& a, Complex lambda);
ValueWithScale squared_minor_sum_residual_scaled(const CMatrix& a, Complex lambda);

// sum_i sum_{j<k; j,k != i} 1/((z_i-z_j)(z_i-z_k)) over distinct points; the
// pair terms cancel exactly, so the value is zero up to rounding.
Complex offdiag_inverse_pair_sum(const std::vector<Complex>& z);
ValueWithScale offdiag_inverse_pair_sum_scaled(const std::vector<Complex>& z);

// Elementary symmetric polynomial e_k of the given values (test-side route of
// the principal-minor identity).
Complex elementary_symmetric(const std::vector<Complex>& vals, int k);

// Eigenvalues only (no vectors), unsorted. Plumbing shared by the identity
// checks that need a spectrum.
std::vector<Complex> eigenvalues_of(const CMatrix& a);

}  // namespace ege
