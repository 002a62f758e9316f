#include "egedyn/spectral_stats.hpp"

#include <algorithm>
#include <cmath>

#include "egedyn/linalg.hpp"
#include "egedyn/spectral.hpp"
#include "egedyn/threads.hpp"

namespace ege {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kAsymptoticN = 50;

SimConfig sim_for(const StatsConfig& cfg, double tau) {
  SimConfig sim;
  sim.N = cfg.N;
  sim.tau = Hermiticity(tau);
  sim.seed = cfg.seed;
  return sim;
}

// All scaled eigenvalue draws for one (N, tau, t) block, sample-parallel,
// concatenated in sample order.
std::vector<Complex> scaled_cloud(const StatsConfig& cfg, double tau,
                                  std::string_view tag, int threads) {
  const SimConfig sim = sim_for(cfg, tau);
  const double scale = 1.0 / std::sqrt(double(cfg.N) * cfg.t);
  std::vector<Complex> cloud(size_t(cfg.samples) * cfg.N);
  const uint64_t op_seed = rng::derive_seed(cfg.seed, tag);
  parallel_chunks(cfg.samples, 1, threads, [&](long, long begin, long) {
    const long s = begin;
    rng::Stream g(op_seed, uint64_t(s));
    const MatrixState state = sample_static(sim, cfg.t, g);
    const std::vector<Complex> eig = eigenvalues_of(state.J);
    for (int i = 0; i < cfg.N; ++i) cloud[size_t(s) * cfg.N + i] = eig[i] * scale;
  });
  return cloud;
}

}  // namespace

void StatsConfig::validate() const {
  require(N >= 2, "N must be at least 2");
  require(samples >= 1, "samples must be positive");
  require(t > 0.0 && std::isfinite(t), "t must be positive");
  require(alpha >= 0.0 && std::isfinite(alpha), "alpha must be nonnegative");
  require(bins >= 1, "bins must be positive");
}

std::vector<Complex> pooled_scaled_eigenvalues(const StatsConfig& cfg, int threads) {
  cfg.validate();
  return scaled_cloud(cfg, cfg.tau.tau, "elliptic", threads);
}

VerificationReport elliptic_law_check(const StatsConfig& cfg, int threads) {
  cfg.validate();
  require(std::abs(cfg.tau.tau) < 1.0, "elliptic law needs |tau| < 1");
  constexpr double kEps = 0.05;
  const double a = 1.0 + cfg.tau.tau, b = 1.0 - cfg.tau.tau;
  const std::vector<Complex> cloud = scaled_cloud(cfg, cfg.tau.tau, "elliptic", threads);

  // Inside-fraction of the inflated ellipse; chi^2 over equal-area cells of
  // the exact ellipse (uniform there maps to uniform on the unit disk).
  const int rings = 4, sectors = std::max(4, cfg.bins);
  std::vector<long> cells(size_t(rings) * sectors, 0);
  long inside = 0, in_disk = 0;
  for (const Complex& z : cloud) {
    const double u = z.real() / a, v = z.imag() / b;
    const double r2 = u * u + v * v;
    if (r2 <= (1.0 + kEps) * (1.0 + kEps)) ++inside;
    if (r2 <= 1.0) {
      ++in_disk;
      const int ring = std::min(rings - 1, int(r2 * rings));
      const double theta = std::atan2(v, u);
      const int sector =
          std::min(sectors - 1, int((theta + kPi) / (2.0 * kPi) * sectors));
      ++cells[size_t(ring) * sectors + sector];
    }
  }
  const double n = double(cloud.size());
  const double fraction = double(inside) / n;
  const double expected = double(in_disk) / double(rings * sectors);
  double chi2 = 0.0;
  for (long c : cells) chi2 += (c - expected) * (c - expected) / expected;
  const int dof = rings * sectors - 1;

  VerificationReport rep;
  rep.name = "elliptic_law[tau=" + std::to_string(cfg.tau.tau) +
             ",N=" + std::to_string(cfg.N) + "]";
  rep.theory = 1.0;
  rep.estimate = fraction;
  rep.stderr_total = std::sqrt(std::max(fraction * (1.0 - fraction), 0.0) / n);
  rep.z = (1.0 - fraction) / 0.01;  // pass rule: fraction >= 0.99
  rep.samples = long(n);
  rep.pass = fraction >= 0.99;
  rep.details["pass_rule"] = "inside_fraction >= 0.99 (inflation eps = 0.05)";
  rep.details["semiaxes"] = {a, b};
  rep.details["chi2_uniformity"] = chi2;
  rep.details["chi2_dof"] = dof;
  rep.details["chi2_z"] = (chi2 - dof) / std::sqrt(2.0 * dof);
  rep.details["asymptotic_regime"] = cfg.N >= kAsymptoticN;
  return rep;
}

VerificationReport semicircle_check(const StatsConfig& cfg, int threads) {
  cfg.validate();
  if (cfg.tau.tau != 1.0) throw ArgumentError("semicircle law needs tau = 1");
  const SimConfig sim = sim_for(cfg, 1.0);
  const double scale = 1.0 / std::sqrt(double(cfg.N) * cfg.t);

  std::vector<double> xs(size_t(cfg.samples) * cfg.N);
  std::vector<double> max_im(size_t(cfg.samples), 0.0);
  const uint64_t op_seed = rng::derive_seed(cfg.seed, "semicircle");
  parallel_chunks(cfg.samples, 1, threads, [&](long, long begin, long) {
    const long s = begin;
    rng::Stream g(op_seed, uint64_t(s));
    const MatrixState state = sample_static(sim, cfg.t, g);
    const std::vector<Complex> eig = eigenvalues_of(state.J);
    double im = 0.0;
    for (int i = 0; i < cfg.N; ++i) {
      im = std::max(im, std::abs(eig[i].imag()));
      xs[size_t(s) * cfg.N + i] = eig[i].real() * scale;
    }
    max_im[s] = im;
  });
  const double worst_im = *std::max_element(max_im.begin(), max_im.end());
  require(worst_im <= 1e-10, "tau = 1 eigenvalues drifted off the real axis");

  const auto cdf = [](double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * kPi) + std::asin(x / 2.0) / kPi;
  };
  const double d = ks_statistic(xs, cdf);

  constexpr double kKsTol = 0.05;
  VerificationReport rep;
  rep.name = "semicircle[N=" + std::to_string(cfg.N) + "]";
  rep.theory = 0.0;
  rep.estimate = d;
  rep.stderr_total = 0.0;
  rep.z = d / kKsTol;
  rep.samples = long(xs.size());
  rep.pass = d <= kKsTol;
  rep.details["ks_tolerance"] = kKsTol;
  rep.details["max_abs_imag"] = worst_im;
  rep.details["asymptotic_regime"] = cfg.N >= kAsymptoticN;
  return rep;
}

VerificationReport weak_nonhermiticity_scaling(const StatsConfig& base,
                                               const std::vector<int>& n_sweep,
                                               bool fixed_tau_control, int threads) {
  base.validate();
  require(n_sweep.size() >= 2 || base.alpha == 0.0, "sweep needs at least two sizes");
  for (int n : n_sweep) require(n >= 2, "sweep sizes must be at least 2");

  // Hermitian edge: tau = 1 exactly for every N, no scaling left to fit.
  if (base.alpha == 0.0) {
    double worst = 0.0;
    for (int n : n_sweep) {
      StatsConfig cfg = base;
      cfg.N = n;
      const std::vector<Complex> cloud = scaled_cloud(cfg, 1.0, "weak_nh", threads);
      for (const Complex& z : cloud) worst = std::max(worst, std::abs(z.imag()));
    }
    VerificationReport rep = make_identity_report("weak_nonhermiticity[alpha=0]",
                                                  worst, 1e-10, long(n_sweep.size()));
    rep.details["kind"] = "hermitian_edge";
    return rep;
  }

  std::vector<double> log_n, log_std, stds;
  // The control must sit in the strong non-hermiticity regime, where
  // std(Im z) converges to a constant. Freezing tau at the sweep's own
  // 1 - alpha/N values would keep N(1-tau) of order alpha across the whole
  // sweep — still inside the weak/strong crossover, where the spread keeps
  // decaying and the flat-line theory does not apply.
  constexpr double kStrongControlTau = 0.5;
  for (int n : n_sweep) {
    StatsConfig cfg = base;
    cfg.N = n;
    const double tau = fixed_tau_control ? kStrongControlTau : 1.0 - base.alpha / double(n);
    require(tau >= -1.0, "alpha too large for the smallest sweep size");
    const std::vector<Complex> cloud = scaled_cloud(cfg, tau, "weak_nh", threads);
    Accumulator acc;
    for (const Complex& z : cloud) acc.add(z.imag());
    const double sd = std::sqrt(acc.variance());
    require(sd > 0.0, "degenerate imaginary-part spread");
    log_n.push_back(std::log(double(n)));
    log_std.push_back(std::log(sd));
    stds.push_back(sd);
  }

  const size_t m = log_n.size();
  double mx = 0.0, my = 0.0;
  for (size_t k = 0; k < m; ++k) {
    mx += log_n[k];
    my += log_std[k];
  }
  mx /= double(m);
  my /= double(m);
  double sxx = 0.0, sxy = 0.0;
  for (size_t k = 0; k < m; ++k) {
    sxx += (log_n[k] - mx) * (log_n[k] - mx);
    sxy += (log_n[k] - mx) * (log_std[k] - my);
  }
  const double slope = sxy / sxx;
  double ss_res = 0.0;
  for (size_t k = 0; k < m; ++k) {
    const double r = log_std[k] - my - slope * (log_n[k] - mx);
    ss_res += r * r;
  }
  const double slope_se = m > 2 ? std::sqrt(ss_res / double(m - 2) / sxx) : 0.0;

  const double target = fixed_tau_control ? 0.0 : -1.0;
  constexpr double kTol = 0.25;
  VerificationReport rep;
  rep.name = std::string("weak_nonhermiticity") +
             (fixed_tau_control ? "_control" : "") +
             "[alpha=" + std::to_string(base.alpha) + "]";
  rep.theory = target;
  rep.estimate = slope;
  rep.stderr_total = slope_se;
  rep.z = std::abs(slope - target) / kTol;
  rep.samples = long(m) * base.samples;
  rep.pass = std::abs(slope - target) <= kTol;
  rep.details["n_sweep"] = n_sweep;
  rep.details["std_im_scaled"] = stds;
  rep.details["slope_tolerance"] = kTol;
  // The scaling exponent is the tested content; the limiting density's
  // normalization is not used (its displayed prefactor and exponent imply
  // different variances, so only the 1/N rate is a safe target).
  return rep;
}

VerificationReport chalker_mehlig_profile(const StatsConfig& cfg, int threads) {
  cfg.validate();
  if (cfg.tau.tau != 0.0) throw ArgumentError("overlap profile check needs tau = 0");
  const SimConfig sim = sim_for(cfg, 0.0);
  const double scale = 1.0 / std::sqrt(double(cfg.N) * cfg.t);
  const int bins = cfg.bins;

  // Per-sample decompose; bin O_ii/N and 1-|z|^2 by |z| on [0, 1). Bins are
  // equal-area annuli (uniform in r^2): under the circular law every bin then
  // collects the same expected number of eigenvalues, where equal-width bins
  // would starve the innermost one and let single heavy-tailed overlaps
  // dominate its mean.
  std::vector<std::vector<Accumulator>> ratio_slot(
      size_t(cfg.samples), std::vector<Accumulator>(bins));
  std::vector<std::vector<Accumulator>> theory_slot = ratio_slot;
  const uint64_t op_seed = rng::derive_seed(cfg.seed, "overlap_profile");
  parallel_chunks(cfg.samples, 1, threads, [&](long, long begin, long) {
    const long s = begin;
    rng::Stream g(op_seed, uint64_t(s));
    const MatrixState state = sample_static(sim, cfg.t, g);
    const SpectralFrame frame = decompose(state);
    for (int i = 0; i < cfg.N; ++i) {
      const Complex z = frame.eigenvalues[i] * scale;
      const double r = std::abs(z);
      if (r >= 1.0) continue;
      const int bin = std::min(bins - 1, int(r * r * bins));
      ratio_slot[s][bin].add(frame.overlaps(i, i).real() / double(cfg.N));
      theory_slot[s][bin].add(1.0 - r * r);
    }
  });
  std::vector<Accumulator> ratio(bins), theory(bins);
  for (long s = 0; s < cfg.samples; ++s)
    for (int b = 0; b < bins; ++b) {
      ratio[b].merge(ratio_slot[s][b]);
      theory[b].merge(theory_slot[s][b]);
    }

  constexpr double kTol = 0.15;
  double worst = 0.0;
  Json bins_json = Json::array();
  bool pass = true;
  for (int b = 0; b < bins; ++b) {
    const double r_lo = std::sqrt(double(b) / bins);
    const double r_hi = std::sqrt(double(b + 1) / bins);
    const double center = (r_lo + r_hi) / 2.0;
    const bool bulk = center <= 0.8;
    const double mean_ratio =
        theory[b].n > 0 && theory[b].mean() > 0 ? ratio[b].mean() / theory[b].mean() : 0.0;
    const double dev = std::abs(mean_ratio - 1.0);
    if (bulk && theory[b].n > 0) {
      pass = pass && dev <= kTol;
      worst = std::max(worst, dev);
    }
    bins_json.push_back({{"center", center},
                         {"r_lo", r_lo},
                         {"r_hi", r_hi},
                         {"count", ratio[b].n},
                         {"mean_overlap_over_n", ratio[b].mean()},
                         {"mean_theory", theory[b].mean()},
                         {"ratio", mean_ratio},
                         {"bulk", bulk}});
  }

  VerificationReport rep;
  rep.name = "overlap_profile[N=" + std::to_string(cfg.N) + "]";
  rep.theory = 1.0;
  rep.estimate = 1.0 + worst;  // worst bulk-bin ratio deviation
  rep.stderr_total = 0.0;
  rep.z = worst / kTol;
  rep.samples = cfg.samples * long(cfg.N);
  rep.pass = pass;
  rep.details["bins"] = bins_json;
  rep.details["bulk_tolerance"] = kTol;
  rep.details["asymptotic_regime"] = cfg.N >= kAsymptoticN;
  return rep;
}

}  // namespace ege
