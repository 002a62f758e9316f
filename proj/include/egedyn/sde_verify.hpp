#pragma once

#include <string>
#include <vector>

#include "egedyn/common.hpp"
#include "egedyn/process.hpp"
#include "egedyn/report.hpp"
#include "egedyn/spectral.hpp"

namespace ege {

// ---------------------------------------------------------------------------
// Real coordinates of the matrix path.
//
// J = c1 H1 + i c2 H2 with H1, H2 Hermitian, c1 = sqrt((1+tau)/2),
// c2 = sqrt((1-tau)/2). The 2N^2 independent real coordinates are ordered
//   x_kk (k = 1..N),
//   (x_kl, y_kl) for k < l in row-major order,      [H1 entries]
//   alpha_kk (k = 1..N),
//   (alpha_kl, beta_kl) for k < l,                  [H2 entries]
// where H1_kk = x_kk, H1_kl = (x_kl + i y_kl)/sqrt(2) and likewise for H2.
// Each coordinate is an independent standard Brownian motion under the
// matrix dynamics, which is what makes gradient inner products meaningful.
// ---------------------------------------------------------------------------

std::vector<double> coords_from_state(const CMatrix& j, double tau);
CMatrix state_from_coords(const std::vector<double>& coords, int n, double tau);

// d lambda_i / d coordinate via the implicit function theorem:
// g_eta = -f_eta / f_lambda evaluated at (lambda_i, J), where f is the
// characteristic polynomial det(lambda I - J). Re(g) and Im(g) are the
// gradients of lambda_i^R and lambda_i^I. f_eta comes from closed forms in
// the first minors D_pq = det((lambda I - J)_{p|q}); f_lambda = sum_k D_kk.
std::vector<Complex> eigenvalue_gradient(const CMatrix& j, double tau, Complex lambda_i);

// ---------------------------------------------------------------------------
// Quadratic-variation targets.
// ---------------------------------------------------------------------------

struct QVTarget {
  enum class Kind {
    RR,           // <Re lambda_i, Re lambda_j>
    II,           // <Im lambda_i, Im lambda_j>
    RI,           // <Re lambda_i, Im lambda_j>
    ComplexHolo,  // <lambda_i, lambda_j>           (sum of plain products)
    ComplexMixed  // <lambda_i, conj(lambda_j)>     (sum of mixed products)
  };
  Kind kind = Kind::RR;
  int i = 0, j = 0;  // 0-based eigenvalue indices

  std::string label() const;
};

// Theory rates per unit time, given the overlap matrix at one instant:
//   RR:  i==j -> (O_ii + tau)/2,  i!=j -> Re(O_ij)/2
//   II:  i==j -> (O_ii - tau)/2,  i!=j -> Re(O_ij)/2
//   RI:  i==j -> 0,               i!=j -> -Im(O_ij)/2
//   ComplexHolo:  i==j -> tau,    i!=j -> 0
//   ComplexMixed: O_ij
Complex qv_theory_rate(const QVTarget& target, const CMatrix& overlaps, double tau);

// Realized covariation sum_s (step increments) against the trapezoid
// integral of the theory rate along the recorded overlap path. Off-diagonal
// targets need the trajectory recorded with record_full_overlaps. The
// standard error comes from the per-step residuals (independent steps).
VerificationReport verify_qv(const Trajectory& traj, const QVTarget& target);

// Replica ensemble: per replica r the difference D_r = realized - integrated
// theory; reports mean(D_r) against 0 with the ensemble standard error.
// Trajectories use streams derived from (cfg.seed, "qv", r).
std::vector<VerificationReport> verify_qv_ensemble(const SimConfig& cfg,
                                                   const std::vector<QVTarget>& targets,
                                                   int replicas, int threads = 1,
                                                   double threshold = 3.0);

// ---------------------------------------------------------------------------
// Frozen-state one-step verifications.
// ---------------------------------------------------------------------------

// E[d lambda_i]/dt over `draws` one-step increments from the frozen state
// against tau * sum_{j != i} 1/(lambda_i - lambda_j).
VerificationReport verify_drift(const MatrixState& state, const SimConfig& cfg, int i,
                                long draws, int threads = 1, double threshold = 3.0);

// Residual d lambda_i - (sum_kl c_kl dJ_kl + drift dt) over a dyadic dt sweep
// dt_k = cfg.dt * 2^-k, k = 0..5; the RMS residual must scale as O(dt)
// (fitted log-log exponent within 1.0 +- 0.15). N=1 short-circuits to an
// exactness check (lambda = J_11 is linear). For tau=1 the predicted
// increments must be real within 1e-10.
VerificationReport verify_martingale_term(const MatrixState& state, const SimConfig& cfg,
                                          int i, long draws, int threads = 1);

// ---------------------------------------------------------------------------
// Finite-difference certifications (deterministic).
// ---------------------------------------------------------------------------

// Central differences of lambda_i over all 2N^2 coordinates vs the implicit
// closed form; h defaults to 1e-5 * (1 + ||J||_F). Reports the max relative
// error (scale = largest gradient entry); tolerance 1e-5.
VerificationReport verify_implicit_derivatives(const MatrixState& state, double tau, int i,
                                               double h = 0.0);

// Inner products of the closed-form gradients vs the overlap theory:
//   i == j: grad R . grad R = (O_ii + tau)/2, grad I . grad I = (O_ii - tau)/2,
//           grad R . grad I = 0
//   i != j: gradR_i . gradR_j = gradI_i . gradI_j = Re(O_ij)/2,
//           gradR_i . gradI_j = -Im(O_ij)/2, gradI_i . gradR_j = +Im(O_ij)/2
// with O_ij from the determinant quotient. Deterministic, tolerance 1e-7.
VerificationReport verify_gradient_products(const MatrixState& state, double tau, int i,
                                            int j);

// Second-difference Laplacian of lambda_i over all coordinates vs
// 2 tau sum_{j != i} 1/(lambda_i - lambda_j) (equivalently
// tau f_ll/f_l; both routes are computed and must agree). h defaults to
// 1e-4 * (1 + ||J||_F); tolerance 1e-3 relative, 1e-4 absolute when tau = 0.
VerificationReport verify_laplacian(const MatrixState& state, double tau, int i,
                                    double h = 0.0);

// ---------------------------------------------------------------------------
// Path-level verifications.
// ---------------------------------------------------------------------------

// U(lambda) = prod_{i<j} 1/(lambda_i - lambda_j) along replica paths;
// ensemble location of U(t_m) - U(0) at `checkpoints` evenly spaced times
// must be 0 within 3 robust standard errors. The location estimate is
// median-of-means over 20 contiguous replica blocks (U is heavy-tailed; the
// plain mean and a kurtosis > 100 warning ride along in details).
VerificationReport verify_vandermonde_martingale(const SimConfig& cfg, long replicas,
                                                 int checkpoints = 5, int threads = 1,
                                                 double threshold = 3.0);

// Minimum pairwise eigenvalue gap over all replicas and recorded times;
// passes iff strictly positive everywhere (and no tracking ambiguity).
VerificationReport non_collision_report(const std::vector<Trajectory>& trajectories);

}  // namespace ege
