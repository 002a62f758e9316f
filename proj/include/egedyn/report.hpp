#pragma once

#include <nlohmann/json.hpp>
#include <functional>
#include <string>
#include <vector>

#include "egedyn/common.hpp"

namespace ege {

using Json = nlohmann::ordered_json;

// One certified comparison: an estimate against a theory value. Statistical
// checks carry a standard error and z-score; deterministic identity checks
// carry a tolerance in `details` and use z = |error| / tolerance.
struct VerificationReport {
  std::string name;
  Complex theory{0.0, 0.0};
  Complex estimate{0.0, 0.0};
  double stderr_total = 0.0;  // sqrt(se_re^2 + se_im^2) for complex estimands
  double z = 0.0;             // max(|z_re|, |z_im|) for complex estimands
  long samples = 0;
  bool pass = false;
  Json details;  // optional flags (asymptotic_regime, warnings, per-bin data)

  Json to_json() const;
};

Json reports_to_json(const std::vector<VerificationReport>& reports);
void print_report_lines(const std::vector<VerificationReport>& reports);
bool all_pass(const std::vector<VerificationReport>& reports);

// Spec policy: z <= 3 for a report family of up to 50 simultaneous reports,
// z <= 4 beyond that (Bonferroni-style widening).
double z_threshold(size_t simultaneous_reports);

// Builds a Monte-Carlo report from per-component estimates and standard
// errors; z = max of the component z-scores.
VerificationReport make_mc_report(const std::string& name, Complex theory, Complex estimate,
                                  double se_re, double se_im, long samples, double threshold);

// Builds a deterministic identity report: estimate is the measured relative
// error, theory 0; pass iff error <= tol; z = error / tol.
VerificationReport make_identity_report(const std::string& name, double rel_err, double tol,
                                        long cases);

// Streaming mean/variance for real samples.
struct Accumulator {
  long n = 0;
  double sum = 0.0, sum_sq = 0.0;
  void add(double x) {
    ++n;
    sum += x;
    sum_sq += x * x;
  }
  void merge(const Accumulator& o) {
    n += o.n;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
  double mean() const { return n ? sum / double(n) : 0.0; }
  double variance() const;  // unbiased
  double stderr_of_mean() const;
};

struct ComplexAccumulator {
  Accumulator re, im;
  void add(Complex x) {
    re.add(x.real());
    im.add(x.imag());
  }
  void merge(const ComplexAccumulator& o) {
    re.merge(o.re);
    im.merge(o.im);
  }
  Complex mean() const { return {re.mean(), im.mean()}; }
};

// Kolmogorov-Smirnov distance of `data` against a CDF, and the asymptotic
// p-value with the finite-sample adjustment (sqrt(n)+0.12+0.11/sqrt(n))*D.
double ks_statistic(std::vector<double> data, const std::function<double(double)>& cdf);
double ks_pvalue(double d, long n);

// Excess-free (plain) sample kurtosis E[(x-m)^4]/s^4; heavy-tail flag source.
double sample_kurtosis(const std::vector<double>& x);

}  // namespace ege
