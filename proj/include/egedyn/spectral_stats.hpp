#pragma once

#include <cstdint>
#include <vector>

#include "egedyn/common.hpp"
#include "egedyn/process.hpp"
#include "egedyn/report.hpp"

namespace ege {

// Static-ensemble configuration: `samples` independent draws of J(t); all
// law checks operate on the scaled spectrum z = lambda / sqrt(N t), which
// makes them t-invariant. `alpha` parameterizes the weak non-hermiticity
// regime 1 - tau = alpha / N used by the scaling sweep only.
struct StatsConfig {
  int N = 200;
  Hermiticity tau{};
  double t = 1.0;
  long samples = 20;
  double alpha = 1.0;
  int bins = 10;
  uint64_t seed = 1;

  void validate() const;
};

// Fraction of scaled eigenvalues inside the (1+eps)-inflated ellipse with
// semiaxes (1+tau, 1-tau), eps = 0.05, pooled over samples; passes when the
// fraction is >= 0.99. A uniformity chi^2 over equal-area elliptical cells
// rides along in details (diagnostic only). Requires |tau| < 1.
VerificationReport elliptic_law_check(const StatsConfig& cfg, int threads = 1);

// KS distance between scaled real eigenvalues and the semicircle CDF
// F(x) = 1/2 + x sqrt(4-x^2)/(4 pi) + asin(x/2)/pi; passes at KS <= 0.05.
// Requires tau = 1; raw eigenvalues must be real within 1e-10.
VerificationReport semicircle_check(const StatsConfig& cfg, int threads = 1);

// Sets tau = 1 - alpha/N for each N in the sweep, pools std(Im z) per N, and
// fits the log-log slope against N: passes at slope -1 +- 0.25. With
// `fixed_tau_control` set, tau is frozen at 0.5 — a fixed point of the
// strong non-hermiticity regime, where std(Im z) is N-independent — and the
// expected slope is 0. alpha = 0 is the Hermitian edge: every std must
// vanish to 1e-10.
VerificationReport weak_nonhermiticity_scaling(const StatsConfig& base,
                                               const std::vector<int>& n_sweep,
                                               bool fixed_tau_control = false,
                                               int threads = 1);

// Bins scaled eigenvalues by |z| and compares the per-bin mean of O_ii / N
// with 1 - |z|^2; passes when every bulk bin (center <= 0.8) agrees within
// 15%. Edge bins are reported but excluded. Requires tau = 0.
VerificationReport chalker_mehlig_profile(const StatsConfig& cfg, int threads = 1);

// The pooled scaled eigenvalue cloud of the elliptic check (same streams),
// for CSV export.
std::vector<Complex> pooled_scaled_eigenvalues(const StatsConfig& cfg, int threads = 1);

}  // namespace ege
