#pragma once

#include <vector>

#include "egedyn/config.hpp"
#include "egedyn/report.hpp"

namespace ege {

// Report batteries driven by the canonical config document (see
// default_config): each suite reads its own section plus the top-level seed
// and returns one VerificationReport per check. Where a suite contains plain
// Monte-Carlo z-tests, `threshold` is the |z| pass limit.

// Deterministic linear-algebra identities behind the SDE derivation
// (characteristic-polynomial routes, principal minors vs elementary symmetric
// polynomials, double cofactor expansion, Cauchy-Binet, the squared-minor-sum
// identity and the antisymmetric inverse-pair sum). Section: "identities".
std::vector<VerificationReport> run_identity_suite(const Json& cfg, int threads);

// Overlap and coefficient bridges: determinant route vs eigenvector route,
// diagonal lower bound, row sums, conjugate symmetry, the two coefficient
// contractions, the Hermitian limit, and a meta-check that a deliberately
// wrong orientation of the determinant route visibly disagrees.
// Section: "verify.bridge".
std::vector<VerificationReport> run_bridge_suite(const Json& cfg, int threads);

// Implicit-function first derivatives vs central finite differences,
// gradient-product identities, and the Laplacian (dual determinant route +
// finite differences). Section: "verify.derivatives".
std::vector<VerificationReport> run_derivative_suite(const Json& cfg, int threads);

// One-step conditional-mean checks of the eigenvalue drift on a frozen
// well-separated state, one report per eigenvalue index.
// Section: "verify.drift".
std::vector<VerificationReport> run_drift_suite(const Json& cfg, int threads,
                                                double threshold = 3.0);

// Strong-order scaling of the residual after subtracting the predicted
// martingale increment and drift. Section: "verify.martingale".
std::vector<VerificationReport> run_martingale_suite(const Json& cfg, int threads);

// Realized quadratic (co)variations along ensembles of tracked paths against
// the overlap-driven rates, every component pair plus the complex brackets.
// Section: "verify.qv".
std::vector<VerificationReport> run_qv_suite(const Json& cfg, int threads,
                                             double threshold = 3.0);

// Increment covariance structure of the matrix process itself.
// Section: "verify.entry_covariance". threshold <= 0 picks the per-family
// default.
std::vector<VerificationReport> run_entry_covariance_suite(const Json& cfg, int threads,
                                                           double threshold = 0.0);

// Median-of-means drift test of the reciprocal Vandermonde product along
// tracked paths. Section: "verify.vandermonde".
std::vector<VerificationReport> run_vandermonde_suite(const Json& cfg, int threads,
                                                      double threshold = 3.0);

// Positive minimum gaps and unambiguous tracking across replica ensembles.
// Section: "verify.non_collision".
std::vector<VerificationReport> run_non_collision_suite(const Json& cfg, int threads);

// The 2x2 closed-form battery: overlap drift, overlap quadratic variation,
// negative covariation with the squared gap, and the exponential law of the
// rescaled overlap excess. Section: "two_by_two".
std::vector<VerificationReport> run_two_by_two_suite(const Json& cfg, int threads);

// Spectral statistics on static ensembles: elliptic support, semicircle at
// tau = 1, weak non-hermiticity scaling (plus control), and the radial
// overlap profile. Section: "stats".
std::vector<VerificationReport> run_stats_suite(const Json& cfg, int threads);

// Everything the `verify` subcommand runs: bridge, derivatives, entry
// covariance, drift, martingale order, quadratic variation, Vandermonde
// martingale, non-collision — in that order. When the planned family exceeds
// 50 simultaneous reports the Monte-Carlo |z| limit widens from 3 to 4
// (multiple-comparison allowance); deterministic tolerances are unaffected.
std::vector<VerificationReport> run_verify_suite(const Json& cfg, int threads);

}  // namespace ege
