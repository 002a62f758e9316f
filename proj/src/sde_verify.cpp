#include "egedyn/sde_verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "egedyn/linalg.hpp"
#include "egedyn/threads.hpp"

namespace ege {

namespace {

constexpr double kSqrtHalf = 0.70710678118654752440;

struct Coeffs {
  double c1, c2;
};

Coeffs tau_coeffs(double tau) {
  require(tau >= -1.0 && tau <= 1.0, "tau must lie in [-1, 1]");
  return {std::sqrt((1.0 + tau) / 2.0), std::sqrt((1.0 - tau) / 2.0)};
}

// Eigenvalue of the perturbed matrix continuing base eigenvalue i.
Complex matched_eigenvalue(const std::vector<Complex>& base, const CMatrix& j, int i) {
  const std::vector<Complex> next = eigenvalues_of(j);
  const MatchResult m = match_eigenvalues(base, next);
  return next[m.perm[i]];
}

Complex pairwise_drift(const std::vector<Complex>& eig, double tau, int i) {
  Complex s{0.0, 0.0};
  for (size_t k = 0; k < eig.size(); ++k)
    if (int(k) != i) s += 1.0 / (eig[i] - eig[k]);
  return tau * s;
}

double sq(double x) { return x * x; }

}  // namespace

std::vector<double> coords_from_state(const CMatrix& j, double tau) {
  const int n = int(j.rows());
  require(j.cols() == n && n >= 1, "square matrix required");
  const Coeffs c = tau_coeffs(tau);
  const CMatrix h1 = c.c1 > 0 ? CMatrix(((j + j.adjoint()) / (2.0 * c.c1)).eval())
                              : CMatrix(CMatrix::Zero(n, n));
  const CMatrix h2 = c.c2 > 0 ? CMatrix(((j - j.adjoint()) / (Complex(0.0, 2.0) * c.c2)).eval())
                              : CMatrix(CMatrix::Zero(n, n));
  std::vector<double> out;
  out.reserve(2 * n * n);
  for (int k = 0; k < n; ++k) out.push_back(h1(k, k).real());
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      out.push_back(h1(k, l).real() / kSqrtHalf);
      out.push_back(h1(k, l).imag() / kSqrtHalf);
    }
  for (int k = 0; k < n; ++k) out.push_back(h2(k, k).real());
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      out.push_back(h2(k, l).real() / kSqrtHalf);
      out.push_back(h2(k, l).imag() / kSqrtHalf);
    }
  return out;
}

CMatrix state_from_coords(const std::vector<double>& coords, int n, double tau) {
  require(n >= 1 && long(coords.size()) == 2L * n * n, "coordinate count must be 2 N^2");
  const Coeffs c = tau_coeffs(tau);
  CMatrix h1 = CMatrix::Zero(n, n), h2 = CMatrix::Zero(n, n);
  size_t p = 0;
  for (int k = 0; k < n; ++k) h1(k, k) = coords[p++];
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      h1(k, l) = Complex(coords[p], coords[p + 1]) * kSqrtHalf;
      h1(l, k) = std::conj(h1(k, l));
      p += 2;
    }
  for (int k = 0; k < n; ++k) h2(k, k) = coords[p++];
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      h2(k, l) = Complex(coords[p], coords[p + 1]) * kSqrtHalf;
      h2(l, k) = std::conj(h2(k, l));
      p += 2;
    }
  return c.c1 * h1 + Complex(0.0, c.c2) * h2;
}

std::vector<Complex> eigenvalue_gradient(const CMatrix& j, double tau, Complex lambda_i) {
  const int n = int(j.rows());
  require(j.cols() == n && n >= 1, "square matrix required");
  const Coeffs c = tau_coeffs(tau);

  CMatrix m = -j;
  m.diagonal().array() += lambda_i;
  CMatrix d(n, n);  // first minors D_pq = det(M_{p|q}), no cofactor sign
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) d(p, q) = minor_det(m, MinorIndex{{p + 1}, {q + 1}});
  const Complex f_l = d.diagonal().sum();  // d/dlambda det(M) = sum_k D_kk
  require(std::abs(f_l) > 0.0, "eigenvalue is not simple: f_lambda = 0");

  // df/dJ_pq = -(-1)^{p+q} D_pq; the chain rule through the coordinate map
  // gives, for k < l with sgn = (-1)^{k+l}:
  //   f_{x_kk} = -c1 D_kk                f_{a_kk} = -i c2 D_kk
  //   f_{x_kl} = -(c1/r2) sgn (D_kl + D_lk)
  //   f_{y_kl} = -i (c1/r2) sgn (D_kl - D_lk)
  //   f_{a_kl} = -i (c2/r2) sgn (D_kl + D_lk)
  //   f_{b_kl} = +(c2/r2) sgn (D_kl - D_lk)
  std::vector<Complex> grad;
  grad.reserve(2 * n * n);
  for (int k = 0; k < n; ++k) grad.push_back(-c.c1 * d(k, k) / f_l);
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      const double sgn = ((k + l) % 2 == 0) ? 1.0 : -1.0;
      const Complex sum = d(k, l) + d(l, k), dif = d(k, l) - d(l, k);
      grad.push_back(-c.c1 * kSqrtHalf * sgn * sum / f_l);
      grad.push_back(-Complex(0.0, 1.0) * c.c1 * kSqrtHalf * sgn * dif / f_l);
    }
  for (int k = 0; k < n; ++k)
    grad.push_back(-Complex(0.0, 1.0) * c.c2 * d(k, k) / f_l);
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      const double sgn = ((k + l) % 2 == 0) ? 1.0 : -1.0;
      const Complex sum = d(k, l) + d(l, k), dif = d(k, l) - d(l, k);
      grad.push_back(-Complex(0.0, 1.0) * c.c2 * kSqrtHalf * sgn * sum / f_l);
      grad.push_back(c.c2 * kSqrtHalf * sgn * dif / f_l);
    }
  // grad = -f_eta / f_lambda, folded in above via the /f_l factors; the
  // leading minus signs belong to f_eta, so flip once more here.
  for (auto& g : grad) g = -g;
  return grad;
}

// ---------------------------------------------------------------------------
// Quadratic variation.
// ---------------------------------------------------------------------------

std::string QVTarget::label() const {
  const char* k = nullptr;
  switch (kind) {
    case Kind::RR: k = "RR"; break;
    case Kind::II: k = "II"; break;
    case Kind::RI: k = "RI"; break;
    case Kind::ComplexHolo: k = "holo"; break;
    case Kind::ComplexMixed: k = "mixed"; break;
  }
  return std::string("qv_") + k + "[" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
         "]";
}

Complex qv_theory_rate(const QVTarget& t, const CMatrix& overlaps, double tau) {
  const int n = int(overlaps.rows());
  require(t.i >= 0 && t.i < n && t.j >= 0 && t.j < n, "target indices out of range");
  const Complex o = overlaps(t.i, t.j);
  switch (t.kind) {
    case QVTarget::Kind::RR:
      return t.i == t.j ? Complex((o.real() + tau) / 2.0) : Complex(o.real() / 2.0);
    case QVTarget::Kind::II:
      return t.i == t.j ? Complex((o.real() - tau) / 2.0) : Complex(o.real() / 2.0);
    case QVTarget::Kind::RI:
      return t.i == t.j ? Complex(0.0) : Complex(-o.imag() / 2.0);
    case QVTarget::Kind::ComplexHolo:
      return t.i == t.j ? Complex(tau) : Complex(0.0);
    case QVTarget::Kind::ComplexMixed:
      return o;
  }
  return {};
}

namespace {

// Per-step realized increment product for a target.
Complex qv_step_product(const QVTarget& t, Complex dli, Complex dlj) {
  switch (t.kind) {
    case QVTarget::Kind::RR: return Complex(dli.real() * dlj.real());
    case QVTarget::Kind::II: return Complex(dli.imag() * dlj.imag());
    case QVTarget::Kind::RI: return Complex(dli.real() * dlj.imag());
    case QVTarget::Kind::ComplexHolo: return dli * dlj;
    case QVTarget::Kind::ComplexMixed: return dli * std::conj(dlj);
  }
  return {};
}

Complex qv_rate_at(const Trajectory& traj, const QVTarget& t, double tau, size_t s) {
  if (t.kind == QVTarget::Kind::ComplexHolo)  // rate is overlap-free
    return t.i == t.j ? Complex(tau) : Complex(0.0);
  if (t.i == t.j) {
    const double oii = traj.diag_overlaps[s][t.i];
    switch (t.kind) {
      case QVTarget::Kind::RR: return Complex((oii + tau) / 2.0);
      case QVTarget::Kind::II: return Complex((oii - tau) / 2.0);
      case QVTarget::Kind::RI: return Complex(0.0);
      default: return Complex(oii);  // ComplexMixed
    }
  }
  require(!traj.full_overlaps.empty(), "off-diagonal target needs recorded full overlaps");
  return qv_theory_rate(t, traj.full_overlaps[s], tau);
}

struct QVPathResult {
  Complex realized{0.0, 0.0};
  Complex theory{0.0, 0.0};
  double se_re = 0.0, se_im = 0.0;  // single-path step-residual error
};

QVPathResult qv_along_path(const Trajectory& traj, const QVTarget& t) {
  const size_t steps = traj.times.size() - 1;
  const double tau = traj.config.tau.tau;
  QVPathResult r;
  std::vector<Complex> resid(steps);
  for (size_t s = 0; s < steps; ++s) {
    const double dt = traj.times[s + 1] - traj.times[s];
    const Complex dli = traj.paths[s + 1][t.i] - traj.paths[s][t.i];
    const Complex dlj = traj.paths[s + 1][t.j] - traj.paths[s][t.j];
    const Complex prod = qv_step_product(t, dli, dlj);
    const Complex rate = 0.5 * (qv_rate_at(traj, t, tau, s) + qv_rate_at(traj, t, tau, s + 1));
    r.realized += prod;
    r.theory += rate * dt;
    resid[s] = prod - rate * dt;
  }
  Complex mean{0.0, 0.0};
  for (const Complex& x : resid) mean += x;
  mean /= double(steps);
  double vr = 0.0, vi = 0.0;
  for (const Complex& x : resid) {
    vr += sq(x.real() - mean.real());
    vi += sq(x.imag() - mean.imag());
  }
  r.se_re = std::sqrt(vr);
  r.se_im = std::sqrt(vi);
  return r;
}

}  // namespace

VerificationReport verify_qv(const Trajectory& traj, const QVTarget& target) {
  require(traj.times.size() >= 2, "trajectory must hold at least one step");
  const int n = traj.config.N;
  require(target.i >= 0 && target.i < n && target.j >= 0 && target.j < n,
          "target indices out of range");
  const QVPathResult r = qv_along_path(traj, target);
  VerificationReport rep = make_mc_report(target.label(), r.theory, r.realized, r.se_re,
                                          r.se_im, long(traj.times.size()) - 1, 3.0);
  rep.details["tau"] = traj.config.tau.tau;
  rep.details["horizon"] = traj.times.back() - traj.times.front();
  return rep;
}

std::vector<VerificationReport> verify_qv_ensemble(const SimConfig& cfg,
                                                   const std::vector<QVTarget>& targets,
                                                   int replicas, int threads,
                                                   double threshold) {
  cfg.validate();
  require(replicas >= 2, "ensemble needs at least 2 replicas");
  bool need_full = false;
  for (const QVTarget& t : targets) {
    require(t.i >= 0 && t.i < cfg.N && t.j >= 0 && t.j < cfg.N, "target indices out of range");
    if (t.i != t.j) need_full = true;
  }
  SimConfig sub = cfg;
  sub.seed = rng::derive_seed(cfg.seed, "qv");
  TrajectoryOptions opts;
  opts.record_full_overlaps = need_full;

  const size_t nt = targets.size();
  // slot[r][k]: per-replica difference realized - theory for target k, plus
  // the raw pair for the details block.
  std::vector<std::vector<QVPathResult>> slot(replicas, std::vector<QVPathResult>(nt));
  std::vector<char> ambiguous(replicas, 0);
  parallel_chunks(replicas, 1, threads, [&](long, long begin, long) {
    const long r = begin;
    const Trajectory traj = simulate_trajectory(sub, uint64_t(r), opts);
    for (size_t k = 0; k < nt; ++k) slot[r][k] = qv_along_path(traj, targets[k]);
    ambiguous[r] = traj.any_ambiguous_match ? 1 : 0;
  });

  long n_ambiguous = 0;
  for (char a : ambiguous) n_ambiguous += a;

  std::vector<VerificationReport> out;
  out.reserve(nt);
  for (size_t k = 0; k < nt; ++k) {
    ComplexAccumulator diff, realized, theory;
    for (int r = 0; r < replicas; ++r) {
      diff.add(slot[r][k].realized - slot[r][k].theory);
      realized.add(slot[r][k].realized);
      theory.add(slot[r][k].theory);
    }
    VerificationReport rep =
        make_mc_report(targets[k].label(), Complex(0.0, 0.0), diff.mean(),
                       diff.re.stderr_of_mean(), diff.im.stderr_of_mean(), replicas,
                       threshold);
    rep.details["tau"] = cfg.tau.tau;
    rep.details["realized_mean"] = {realized.mean().real(), realized.mean().imag()};
    rep.details["theory_mean"] = {theory.mean().real(), theory.mean().imag()};
    if (n_ambiguous > 0) rep.details["ambiguous_matches"] = n_ambiguous;
    out.push_back(std::move(rep));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Frozen-state one-step verifications.
// ---------------------------------------------------------------------------

VerificationReport verify_drift(const MatrixState& state, const SimConfig& cfg, int i,
                                long draws, int threads, double threshold) {
  const int n = int(state.J.rows());
  require(i >= 0 && i < n, "eigenvalue index out of range");
  require(draws >= 100, "need at least 100 draws");
  const std::vector<Complex> base = eigenvalues_of(state.J);
  const Complex theory = pairwise_drift(base, cfg.tau.tau, i);

  const long chunk = 4096;
  const long chunks = num_chunks(draws, chunk);
  std::vector<ComplexAccumulator> slot(chunks);
  const uint64_t op_seed = rng::derive_seed(cfg.seed, "drift");
  parallel_chunks(draws, chunk, threads, [&](long c, long begin, long end) {
    ComplexAccumulator acc;
    for (long d = begin; d < end; ++d) {
      rng::Stream g(op_seed, uint64_t(d));
      const CMatrix dj = sample_coupled_hermitian_pair(n, cfg.tau.tau, cfg.dt, g);
      const Complex next = matched_eigenvalue(base, state.J + dj, i);
      acc.add((next - base[i]) / cfg.dt);
    }
    slot[c] = acc;
  });
  ComplexAccumulator acc;
  for (const auto& a : slot) acc.merge(a);

  VerificationReport rep = make_mc_report(
      "eigenvalue_drift[i=" + std::to_string(i + 1) + ",tau=" + std::to_string(cfg.tau.tau) +
          ",N=" + std::to_string(n) + "]",
      theory, acc.mean(), acc.re.stderr_of_mean(), acc.im.stderr_of_mean(), draws, threshold);
  rep.details["dt"] = cfg.dt;
  return rep;
}

VerificationReport verify_martingale_term(const MatrixState& state, const SimConfig& cfg,
                                          int i, long draws, int threads) {
  const int n = int(state.J.rows());
  require(i >= 0 && i < n, "eigenvalue index out of range");
  require(draws >= 50, "need at least 50 draws per sweep level");
  const std::vector<Complex> base = eigenvalues_of(state.J);
  const double scale = 1.0 + state.J.norm();

  if (n == 1) {
    // lambda = J_11 exactly: the residual is pure floating-point rounding.
    double worst = 0.0;
    const uint64_t op_seed = rng::derive_seed(cfg.seed, "mart_resid");
    for (long d = 0; d < draws; ++d) {
      rng::Stream g(op_seed, uint64_t(d));
      const CMatrix dj = sample_coupled_hermitian_pair(1, cfg.tau.tau, cfg.dt, g);
      const Complex next = eigenvalues_of(state.J + dj)[0];
      worst = std::max(worst, std::abs(next - base[0] - dj(0, 0)));
    }
    VerificationReport rep = make_identity_report("martingale_residual[N=1]",
                                                  worst / scale, 1e-14, draws);
    rep.details["kind"] = "exact_linearity";
    return rep;
  }

  const Complex drift = pairwise_drift(base, cfg.tau.tau, i);
  const CMatrix coeff = martingale_coefficients(state, base, i);

  constexpr int kLevels = 6;
  std::vector<double> rms(kLevels), log_dt(kLevels);
  double max_imag_pred = 0.0;  // tau = 1 only: predicted increments stay real
  const uint64_t op_seed = rng::derive_seed(cfg.seed, "mart_resid");
  for (int k = 0; k < kLevels; ++k) {
    const double dt = cfg.dt * std::pow(2.0, -k);
    const long chunk = 2048;
    const long chunks = num_chunks(draws, chunk);
    std::vector<Accumulator> slot(chunks);
    std::vector<double> imag_slot(chunks, 0.0);
    parallel_chunks(draws, chunk, threads, [&](long c, long begin, long end) {
      Accumulator acc;
      double imx = 0.0;
      for (long d = begin; d < end; ++d) {
        rng::Stream g(op_seed, uint64_t(k) * uint64_t(draws) + uint64_t(d));
        const CMatrix dj = sample_coupled_hermitian_pair(n, cfg.tau.tau, dt, g);
        const Complex next = matched_eigenvalue(base, state.J + dj, i);
        const Complex predicted = (coeff.array() * dj.array()).sum() + drift * dt;
        acc.add(std::norm(next - base[i] - predicted));
        imx = std::max(imx, std::abs(predicted.imag()));
      }
      slot[c] = acc;
      imag_slot[c] = imx;
    });
    Accumulator acc;
    for (long c = 0; c < chunks; ++c) {
      acc.merge(slot[c]);
      max_imag_pred = std::max(max_imag_pred, imag_slot[c]);
    }
    rms[k] = std::sqrt(acc.mean());
    log_dt[k] = std::log(dt);
  }

  // Least-squares slope of log RMS vs log dt.
  double mx = 0.0, my = 0.0;
  std::vector<double> log_rms(kLevels);
  for (int k = 0; k < kLevels; ++k) {
    require(rms[k] > 0.0, "degenerate residual sweep");
    log_rms[k] = std::log(rms[k]);
    mx += log_dt[k];
    my += log_rms[k];
  }
  mx /= kLevels;
  my /= kLevels;
  double sxx = 0.0, sxy = 0.0;
  for (int k = 0; k < kLevels; ++k) {
    sxx += sq(log_dt[k] - mx);
    sxy += (log_dt[k] - mx) * (log_rms[k] - my);
  }
  const double slope = sxy / sxx;
  double ss_res = 0.0;
  for (int k = 0; k < kLevels; ++k)
    ss_res += sq(log_rms[k] - my - slope * (log_dt[k] - mx));
  const double slope_se = std::sqrt(ss_res / double(kLevels - 2) / sxx);

  constexpr double kSlopeTol = 0.15;
  VerificationReport rep;
  rep.name = "martingale_residual_order[i=" + std::to_string(i + 1) +
             ",tau=" + std::to_string(cfg.tau.tau) + ",N=" + std::to_string(n) + "]";
  rep.theory = 1.0;
  rep.estimate = slope;
  rep.stderr_total = slope_se;
  rep.z = std::abs(slope - 1.0) / kSlopeTol;
  rep.samples = draws * kLevels;
  rep.pass = std::abs(slope - 1.0) <= kSlopeTol;
  rep.details["rms_per_level"] = rms;
  rep.details["dt_top"] = cfg.dt;
  rep.details["slope_tolerance"] = kSlopeTol;
  if (cfg.tau.tau == 1.0) {
    rep.details["max_imag_predicted"] = max_imag_pred;
    rep.pass = rep.pass && max_imag_pred <= 1e-10;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Finite-difference certifications.
// ---------------------------------------------------------------------------

VerificationReport verify_implicit_derivatives(const MatrixState& state, double tau, int i,
                                               double h) {
  const int n = int(state.J.rows());
  require(i >= 0 && i < n, "eigenvalue index out of range");
  // Round-trip the coordinates first: at |tau| = 1 half the coordinates do
  // not act, and the reference matrix must be the one the coordinates see.
  const std::vector<double> base_coords = coords_from_state(state.J, tau);
  const CMatrix j0 = state_from_coords(base_coords, n, tau);
  if (h <= 0.0) h = 1e-5 * (1.0 + j0.norm());
  const std::vector<Complex> base = eigenvalues_of(j0);
  const std::vector<Complex> grad = eigenvalue_gradient(j0, tau, base[i]);

  const size_t m = base_coords.size();
  double worst = 0.0, scale = 0.0;
  for (size_t e = 0; e < m; ++e) {
    std::vector<double> c = base_coords;
    c[e] = base_coords[e] + h;
    const Complex up = matched_eigenvalue(base, state_from_coords(c, n, tau), i);
    c[e] = base_coords[e] - h;
    const Complex dn = matched_eigenvalue(base, state_from_coords(c, n, tau), i);
    const Complex fd = (up - dn) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - grad[e]));
    scale = std::max({scale, std::abs(fd), std::abs(grad[e])});
  }
  const double rel = worst / std::max(scale, 1e-12);
  VerificationReport rep = make_identity_report(
      "implicit_derivatives[i=" + std::to_string(i + 1) + ",tau=" + std::to_string(tau) +
          ",N=" + std::to_string(n) + "]",
      rel, 1e-5, long(m));
  rep.details["h"] = h;
  return rep;
}

VerificationReport verify_gradient_products(const MatrixState& state, double tau, int i,
                                            int j) {
  const int n = int(state.J.rows());
  require(i >= 0 && i < n && j >= 0 && j < n, "eigenvalue indices out of range");
  const std::vector<Complex> eig = eigenvalues_of(state.J);
  const std::vector<Complex> gi = eigenvalue_gradient(state.J, tau, eig[i]);
  const std::vector<Complex> gj = (i == j) ? gi : eigenvalue_gradient(state.J, tau, eig[j]);

  const size_t m = gi.size();
  double rr = 0.0, ii = 0.0, ri = 0.0, ir = 0.0;
  for (size_t e = 0; e < m; ++e) {
    rr += gi[e].real() * gj[e].real();
    ii += gi[e].imag() * gj[e].imag();
    ri += gi[e].real() * gj[e].imag();
    ir += gi[e].imag() * gj[e].real();
  }

  const Complex o = overlap_det(state, eig, i, j);
  double worst = 0.0;
  Json checks;
  auto check = [&](const char* name, double lhs, double rhs) {
    const double err = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
    worst = std::max(worst, err);
    checks[name] = {lhs, rhs};
  };
  if (i == j) {
    check("gradR.gradR", rr, (o.real() + tau) / 2.0);
    check("gradI.gradI", ii, (o.real() - tau) / 2.0);
    check("gradR.gradI", ri, 0.0);
  } else {
    check("gradRi.gradRj", rr, o.real() / 2.0);
    check("gradIi.gradIj", ii, o.real() / 2.0);
    check("gradRi.gradIj", ri, -o.imag() / 2.0);
    check("gradIi.gradRj", ir, o.imag() / 2.0);
  }
  VerificationReport rep = make_identity_report(
      "gradient_products[i=" + std::to_string(i + 1) + ",j=" + std::to_string(j + 1) +
          ",tau=" + std::to_string(tau) + ",N=" + std::to_string(n) + "]",
      worst, 1e-7, long(m));
  rep.details["checks"] = checks;
  return rep;
}

VerificationReport verify_laplacian(const MatrixState& state, double tau, int i, double h) {
  const int n = int(state.J.rows());
  require(i >= 0 && i < n, "eigenvalue index out of range");
  const std::vector<double> base_coords = coords_from_state(state.J, tau);
  const CMatrix j0 = state_from_coords(base_coords, n, tau);
  if (h <= 0.0) h = 1e-4 * (1.0 + j0.norm());
  const std::vector<Complex> base = eigenvalues_of(j0);

  // Theory, two routes: the pairwise sum and the characteristic-polynomial
  // second logarithmic derivative; they must agree before the FD comparison.
  Complex theory{0.0, 0.0};
  for (int k = 0; k < n; ++k)
    if (k != i) theory += 1.0 / (base[i] - base[k]);
  theory *= 2.0 * tau;
  const CharPolyEval cp = char_poly(j0, base[i]);
  require(std::abs(cp.d1) > 0.0, "eigenvalue is not simple: f_lambda = 0");
  const Complex theory_cp = tau * cp.d2 / cp.d1;
  require(std::abs(theory - theory_cp) <= 1e-8 * (1.0 + std::abs(theory)),
          "laplacian theory routes disagree");

  Complex fd{0.0, 0.0};
  for (size_t e = 0; e < base_coords.size(); ++e) {
    std::vector<double> c = base_coords;
    c[e] = base_coords[e] + h;
    const Complex up = matched_eigenvalue(base, state_from_coords(c, n, tau), i);
    c[e] = base_coords[e] - h;
    const Complex dn = matched_eigenvalue(base, state_from_coords(c, n, tau), i);
    fd += (up + dn - 2.0 * base[i]) / (h * h);
  }

  const double tol = (tau == 0.0) ? 1e-4 : 1e-3;
  const double scale = std::max(1.0, std::abs(theory));
  const double err =
      std::max(std::abs(fd.real() - theory.real()), std::abs(fd.imag() - theory.imag())) /
      scale;
  VerificationReport rep = make_identity_report(
      "laplacian[i=" + std::to_string(i + 1) + ",tau=" + std::to_string(tau) +
          ",N=" + std::to_string(n) + "]",
      err, tol, long(2 * base_coords.size()));
  rep.theory = theory;
  rep.estimate = fd;
  rep.details["h"] = h;
  return rep;
}

// ---------------------------------------------------------------------------
// Path-level verifications.
// ---------------------------------------------------------------------------

namespace {

Complex vandermonde_inverse(const std::vector<Complex>& eig) {
  Complex prod{1.0, 0.0};
  for (size_t a = 0; a < eig.size(); ++a)
    for (size_t b = a + 1; b < eig.size(); ++b) prod *= eig[a] - eig[b];
  return 1.0 / prod;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

VerificationReport verify_vandermonde_martingale(const SimConfig& cfg, long replicas,
                                                 int checkpoints, int threads,
                                                 double threshold) {
  cfg.validate();
  require(cfg.N >= 2, "U is constant for N < 2");
  require(checkpoints >= 1 && cfg.steps >= checkpoints, "need at least one step per checkpoint");
  constexpr int kBlocks = 20;
  require(replicas >= kBlocks * 2, "need at least 2 replicas per median-of-means block");

  SimConfig sub = cfg;
  sub.seed = rng::derive_seed(cfg.seed, "vandermonde");
  std::vector<long> marks(checkpoints);
  for (int m = 0; m < checkpoints; ++m)
    marks[m] = ((m + 1) * cfg.steps) / checkpoints;  // final mark = cfg.steps

  // u[r][m]: U at checkpoint m minus U at t=0 for replica r.
  std::vector<std::vector<Complex>> u(replicas, std::vector<Complex>(checkpoints));
  std::vector<double> u_final_re(replicas), u_final_im(replicas);
  parallel_chunks(replicas, 1, threads, [&](long, long begin, long) {
    const long r = begin;
    const Trajectory traj = simulate_trajectory(sub, uint64_t(r));
    const Complex u0 = vandermonde_inverse(traj.paths[0]);
    for (int m = 0; m < checkpoints; ++m)
      u[r][m] = vandermonde_inverse(traj.paths[marks[m]]) - u0;
    u_final_re[r] = u[r][checkpoints - 1].real() + u0.real();
    u_final_im[r] = u[r][checkpoints - 1].imag() + u0.imag();
  });

  // Median-of-means over contiguous replica blocks, per checkpoint and
  // component; robust s.e. = 1.2533 sd(block means)/sqrt(blocks).
  double worst_z = 0.0, worst_dev_re = 0.0, worst_dev_im = 0.0, worst_se = 0.0;
  int worst_m = 0;
  Json per_checkpoint = Json::array();
  ComplexAccumulator plain_final;
  for (int m = 0; m < checkpoints; ++m) {
    std::vector<double> bm_re, bm_im;
    for (int b = 0; b < kBlocks; ++b) {
      const long lo = (replicas * b) / kBlocks, hi = (replicas * (b + 1)) / kBlocks;
      ComplexAccumulator acc;
      for (long r = lo; r < hi; ++r) acc.add(u[r][m]);
      bm_re.push_back(acc.re.mean());
      bm_im.push_back(acc.im.mean());
    }
    const double med_re = median_of(bm_re), med_im = median_of(bm_im);
    Accumulator sre, sim;
    for (int b = 0; b < kBlocks; ++b) {
      sre.add(bm_re[b]);
      sim.add(bm_im[b]);
    }
    const double se_re = 1.2533141373155003 * std::sqrt(sre.variance() / kBlocks);
    const double se_im = 1.2533141373155003 * std::sqrt(sim.variance() / kBlocks);
    const double z_re = se_re > 0 ? std::abs(med_re) / se_re : (med_re == 0 ? 0 : 1e18);
    const double z_im = se_im > 0 ? std::abs(med_im) / se_im : (med_im == 0 ? 0 : 1e18);
    const double z = std::max(z_re, z_im);
    per_checkpoint.push_back({{"step", marks[m]},
                              {"mom_deviation", {med_re, med_im}},
                              {"stderr", {se_re, se_im}},
                              {"z", z}});
    if (z >= worst_z) {
      worst_z = z;
      worst_dev_re = med_re;
      worst_dev_im = med_im;
      worst_se = std::sqrt(se_re * se_re + se_im * se_im);
      worst_m = m;
    }
  }
  for (long r = 0; r < replicas; ++r) plain_final.add(u[r][checkpoints - 1]);

  VerificationReport rep;
  rep.name = "vandermonde_martingale[tau=" + std::to_string(cfg.tau.tau) +
             ",N=" + std::to_string(cfg.N) + "]";
  rep.theory = Complex(0.0, 0.0);
  rep.estimate = Complex(worst_dev_re, worst_dev_im);
  rep.stderr_total = worst_se;
  rep.z = worst_z;
  rep.samples = replicas;
  rep.pass = worst_z <= threshold;
  rep.details["checkpoints"] = per_checkpoint;
  rep.details["worst_checkpoint_step"] = marks[worst_m];
  rep.details["plain_mean_final_deviation"] = {plain_final.mean().real(),
                                               plain_final.mean().imag()};
  rep.details["plain_mean_stderr"] = {plain_final.re.stderr_of_mean(),
                                      plain_final.im.stderr_of_mean()};
  const double kurt =
      std::max(sample_kurtosis(u_final_re), sample_kurtosis(u_final_im));
  rep.details["final_kurtosis"] = kurt;
  if (kurt > 100.0) rep.details["heavy_tail_warning"] = true;
  // Local martingality is proven; mean constancy is a heuristic certificate.
  rep.details["certificate"] = "heuristic: local martingale, integrability unproven";
  return rep;
}

VerificationReport non_collision_report(const std::vector<Trajectory>& trajectories) {
  require(!trajectories.empty(), "need at least one trajectory");
  double min_gap = std::numeric_limits<double>::infinity();
  Accumulator per_replica_min;
  long ambiguous = 0;
  for (const Trajectory& traj : trajectories) {
    double path_min = std::numeric_limits<double>::infinity();
    for (double g : traj.min_gaps) path_min = std::min(path_min, g);
    min_gap = std::min(min_gap, path_min);
    if (traj.config.N > 1) per_replica_min.add(path_min);
    if (traj.any_ambiguous_match) ++ambiguous;
  }
  VerificationReport rep;
  rep.name = "non_collision[N=" + std::to_string(trajectories.front().config.N) +
             ",tau=" + std::to_string(trajectories.front().config.tau.tau) + "]";
  rep.theory = Complex(0.0, 0.0);
  rep.estimate = std::isfinite(min_gap) ? min_gap : 0.0;  // N=1: vacuous
  rep.stderr_total = 0.0;
  rep.z = 0.0;
  rep.samples = long(trajectories.size());
  // The certificate is about the recorded gaps alone. Matching ambiguity
  // (eigenvalues passing within one step's motion) is a bookkeeping
  // diagnostic for identity tracking, not a collision, so it is reported
  // but does not fail the check.
  rep.pass = min_gap > 0.0;
  rep.details["min_gap"] = std::isfinite(min_gap) ? min_gap : -1.0;
  rep.details["mean_per_replica_min_gap"] =
      per_replica_min.n > 0 ? per_replica_min.mean() : -1.0;
  rep.details["ambiguous_replicas"] = ambiguous;
  if (!std::isfinite(min_gap)) rep.details["vacuous"] = true;
  return rep;
}

}  // namespace ege
