#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

#include "egedyn/common.hpp"
#include "egedyn/rng.hpp"

namespace ege {

// Interpolation parameter between the Hermitian (+1) and anti-Hermitian (-1)
// Gaussian matrix processes; controls the entry correlation
// E[dJ_kl dJ_lk] = tau dt.
struct Hermiticity {
  double tau = 0.0;
  Hermiticity() = default;
  explicit Hermiticity(double t) : tau(t) {
    require(t >= -1.0 && t <= 1.0 && std::isfinite(t), "tau must lie in [-1, 1]");
  }
};

struct MatrixState {
  double t = 0.0;
  CMatrix J;
};

struct Initial {
  enum class Kind { Zero, Diagonal, SampledSimple };
  Kind kind = Kind::SampledSimple;
  std::vector<Complex> diag;  // Kind::Diagonal: N pairwise distinct entries
  double scale = 1.0;         // Kind::SampledSimple: static draw scaled by this
};

struct SimConfig {
  int N = 2;
  Hermiticity tau{};
  double dt = 1e-3;
  long steps = 100;
  uint64_t seed = 1;
  int replicas = 1;
  Initial initial;

  void validate() const;
};

// One matrix increment over cfg.dt: dJ = c1 dH1 + i c2 dH2 with independent
// Hermitian Gaussian increments dH1, dH2 (diagonal real N(0,dt), off-diagonal
// (g1+i g2)/sqrt(2)), c1 = sqrt((1+tau)/2), c2 = sqrt((1-tau)/2). Hermitian
// symmetry of dH1/dH2 is enforced bitwise in construction; a zero coefficient
// drops its term entirely, so tau = +-1 increments are exactly (anti-)Hermitian.
// Always consumes 2 N^2 normals, so a given stream yields the same underlying
// Brownian motions for every tau.
CMatrix sample_increment(const SimConfig& cfg, rng::Stream& g);

// Same construction with an explicit per-entry variance (increment over `var`
// time units); sample_increment uses var = cfg.dt.
CMatrix sample_coupled_hermitian_pair(int n, double tau, double var, rng::Stream& g);

// Exact one-step transition: entries are literal Brownian motions, so there is
// no discretization error at grid points.
MatrixState advance(const MatrixState& state, const SimConfig& cfg, rng::Stream& g);

// One-shot draw of J(t) from a zero start (single Gaussian per entry).
MatrixState sample_static(const SimConfig& cfg, double t, rng::Stream& g);

// Materializes cfg.initial at t = 0. SampledSimple rejects and resamples until
// the minimum eigenvalue gap exceeds 1e-6 (the SDE needs a simple spectrum).
MatrixState make_initial(const SimConfig& cfg, rng::Stream& g);

// Derives the generator stream for (replica, operation tag) from cfg.seed.
rng::Stream replica_stream(const SimConfig& cfg, std::string_view tag, uint64_t replica);

struct VerificationReport;  // defined in report.hpp

// Monte-Carlo check of the increment covariance structure:
// E|dJ_kl|^2 = dt and E[dJ_kl dJ_lk] = tau dt for every entry pair, each
// within 3 standard errors (relative error <= 1% at 1e6 draws). Returns one
// report per checked statistic; the single-report form keeps the worst z.
std::vector<VerificationReport> entry_covariance_reports(const SimConfig& cfg, long draws,
                                                         int threads, double threshold = 0.0);
VerificationReport entry_covariance_report(const SimConfig& cfg, long draws, int threads);

}  // namespace ege
