#include "egedyn/process.hpp"

#include <cmath>
#include <limits>

#include "egedyn/linalg.hpp"
#include "egedyn/report.hpp"
#include "egedyn/threads.hpp"

namespace ege {

void SimConfig::validate() const {
  require(N >= 1, "N must be positive");
  require(dt > 0.0 && std::isfinite(dt), "dt must be positive");
  require(steps >= 1, "steps must be positive");
  require(std::isfinite(dt * double(steps)), "dt*steps must be finite");
  require(replicas >= 1, "replicas must be positive");
  if (initial.kind == Initial::Kind::Diagonal) {
    require(int(initial.diag.size()) == N, "diagonal initial needs N entries");
    for (size_t i = 0; i < initial.diag.size(); ++i)
      for (size_t j = i + 1; j < initial.diag.size(); ++j)
        require(initial.diag[i] != initial.diag[j],
                "diagonal initial entries must be pairwise distinct");
  }
  if (initial.kind == Initial::Kind::SampledSimple)
    require(initial.scale > 0.0 && std::isfinite(initial.scale),
            "initial scale must be positive");
}

namespace {

// Hermitian Gaussian matrix with per-entry variance `var`; draw order is part
// of the determinism contract: row-major over the upper triangle, diagonal
// first within each row.
CMatrix hermitian_gaussian(int n, double var, rng::Stream& g) {
  const double sd = std::sqrt(var);
  const double sdo = std::sqrt(var / 2.0);
  CMatrix h(n, n);
  for (int k = 0; k < n; ++k) {
    h(k, k) = Complex(sd * g.normal(), 0.0);
    for (int l = k + 1; l < n; ++l) {
      const double re = sdo * g.normal();
      const double im = sdo * g.normal();
      h(k, l) = Complex(re, im);
      h(l, k) = Complex(re, -im);  // bitwise conjugate symmetry
    }
  }
  return h;
}

}  // namespace

CMatrix sample_coupled_hermitian_pair(int n, double tau, double var, rng::Stream& g) {
  const double c1 = std::sqrt((1.0 + tau) / 2.0);
  const double c2 = std::sqrt((1.0 - tau) / 2.0);
  // Both factors are always drawn so the same stream describes the same
  // underlying Brownian motions whatever tau is.
  const CMatrix h1 = hermitian_gaussian(n, var, g);
  const CMatrix h2 = hermitian_gaussian(n, var, g);
  if (c2 == 0.0) return c1 * h1;  // tau = 1: exactly Hermitian
  if (c1 == 0.0) return Complex(0.0, c2) * h2;  // tau = -1: exactly anti-Hermitian
  return c1 * h1 + Complex(0.0, c2) * h2;
}

CMatrix sample_increment(const SimConfig& cfg, rng::Stream& g) {
  cfg.validate();
  return sample_coupled_hermitian_pair(cfg.N, cfg.tau.tau, cfg.dt, g);
}

MatrixState advance(const MatrixState& state, const SimConfig& cfg, rng::Stream& g) {
  require(state.J.rows() == cfg.N && state.J.cols() == cfg.N,
          "state dimension does not match config");
  MatrixState next;
  next.t = state.t + cfg.dt;
  next.J = state.J + sample_increment(cfg, g);
  return next;
}

MatrixState sample_static(const SimConfig& cfg, double t, rng::Stream& g) {
  require(t > 0.0 && std::isfinite(t), "static sample needs t > 0");
  MatrixState s;
  s.t = t;
  s.J = sample_coupled_hermitian_pair(cfg.N, cfg.tau.tau, t, g);
  return s;
}

MatrixState make_initial(const SimConfig& cfg, rng::Stream& g) {
  cfg.validate();
  MatrixState s;
  s.t = 0.0;
  switch (cfg.initial.kind) {
    case Initial::Kind::Zero:
      s.J = CMatrix::Zero(cfg.N, cfg.N);
      return s;
    case Initial::Kind::Diagonal: {
      s.J = CMatrix::Zero(cfg.N, cfg.N);
      for (int i = 0; i < cfg.N; ++i) s.J(i, i) = cfg.initial.diag[i];
      return s;
    }
    case Initial::Kind::SampledSimple:
      break;
  }
  constexpr int kMaxAttempts = 256;
  constexpr double kGapFloor = 1e-6;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    CMatrix j = cfg.initial.scale * sample_coupled_hermitian_pair(cfg.N, cfg.tau.tau, 1.0, g);
    if (cfg.N == 1) {
      s.J = j;
      return s;
    }
    const std::vector<Complex> mu = eigenvalues_of(j);
    double gap = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < mu.size(); ++i)
      for (size_t k = i + 1; k < mu.size(); ++k) gap = std::min(gap, std::abs(mu[i] - mu[k]));
    if (gap > kGapFloor) {
      s.J = j;
      return s;
    }
  }
  throw DegeneracyError("could not sample a simple-spectrum initial state", 0.0, 0.0);
}

rng::Stream replica_stream(const SimConfig& cfg, std::string_view tag, uint64_t replica) {
  return rng::Stream(rng::derive_seed(cfg.seed, tag), replica);
}

std::vector<VerificationReport> entry_covariance_reports(const SimConfig& cfg, long draws,
                                                         int threads, double threshold) {
  cfg.validate();
  require(draws >= 100, "need at least 100 draws");
  const int n = cfg.N;
  const double dt = cfg.dt;

  // Per (k,l) with k <= l: accumulate |dJ_kl|^2 (modulus statistic) and
  // dJ_kl * dJ_lk (the correlated product; expectation tau * dt). Pairs with
  // k > l are redundant by construction (dJ is built from Hermitian blocks).
  const int pairs = n * (n + 1) / 2;
  const long chunk = 2048;
  const long chunks = num_chunks(draws, chunk);
  std::vector<std::vector<Accumulator>> mod_slot(chunks,
                                                 std::vector<Accumulator>(pairs));
  std::vector<std::vector<ComplexAccumulator>> prod_slot(
      chunks, std::vector<ComplexAccumulator>(pairs));
  const uint64_t op_seed = rng::derive_seed(cfg.seed, "entry_cov");
  parallel_chunks(draws, chunk, threads, [&](long c, long begin, long end) {
    for (long d = begin; d < end; ++d) {
      rng::Stream g(op_seed, uint64_t(d));
      const CMatrix dj = sample_coupled_hermitian_pair(n, cfg.tau.tau, dt, g);
      int p = 0;
      for (int k = 0; k < n; ++k)
        for (int l = k; l < n; ++l, ++p) {
          mod_slot[c][p].add(std::norm(dj(k, l)));
          prod_slot[c][p].add(dj(k, l) * dj(l, k));
        }
    }
  });
  std::vector<Accumulator> mod(pairs);
  std::vector<ComplexAccumulator> prod(pairs);
  for (long c = 0; c < chunks; ++c)
    for (int p = 0; p < pairs; ++p) {
      mod[p].merge(mod_slot[c][p]);
      prod[p].merge(prod_slot[c][p]);
    }

  std::vector<VerificationReport> out;
  if (threshold <= 0.0) threshold = z_threshold(size_t(2 * pairs));
  int p = 0;
  for (int k = 0; k < n; ++k)
    for (int l = k; l < n; ++l, ++p) {
      const std::string suffix =
          "[" + std::to_string(k + 1) + "," + std::to_string(l + 1) + "]";
      VerificationReport mod_rep = make_mc_report(
          "entry_modulus" + suffix, dt, mod[p].mean(), mod[p].stderr_of_mean(), 0.0,
          draws, threshold);
      const double rel = std::abs(mod[p].mean() - dt) / dt;
      mod_rep.details["relative_error"] = rel;
      if (draws >= 1000000) mod_rep.pass = mod_rep.pass && rel <= 0.01;
      out.push_back(std::move(mod_rep));

      VerificationReport prod_rep = make_mc_report(
          "entry_product" + suffix, cfg.tau.tau * dt, prod[p].mean(),
          prod[p].re.stderr_of_mean(), prod[p].im.stderr_of_mean(), draws, threshold);
      if (draws >= 1000000 && cfg.tau.tau != 0.0) {
        const double prel = std::abs(Complex(prod[p].mean()) - Complex(cfg.tau.tau * dt)) /
                            std::abs(cfg.tau.tau * dt);
        prod_rep.details["relative_error"] = prel;
        prod_rep.pass = prod_rep.pass && prel <= 0.01;
      }
      out.push_back(std::move(prod_rep));
    }
  return out;
}

VerificationReport entry_covariance_report(const SimConfig& cfg, long draws, int threads) {
  const std::vector<VerificationReport> all = entry_covariance_reports(cfg, draws, threads);
  size_t worst = 0;
  for (size_t i = 1; i < all.size(); ++i)
    if (all[i].z > all[worst].z) worst = i;
  VerificationReport rep = all[worst];
  rep.details["statistics_checked"] = all.size();
  rep.details["all_pass"] = all_pass(all);
  rep.pass = all_pass(all);
  rep.name = "entry_covariance[worst=" + rep.name + "]";
  return rep;
}

}  // namespace ege
