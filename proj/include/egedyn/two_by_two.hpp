#pragma once

#include "egedyn/common.hpp"
#include "egedyn/process.hpp"
#include "egedyn/report.hpp"

namespace ege {

// Closed-form overlap data of a 2x2 matrix. Both overlaps are real:
// O11 = (||J||_2^2 - 2 Re(l1 conj(l2))) / |l1-l2|^2, O12 = 1 - O11, and
// O11 = O22, O12 = O21.
struct TwoByTwoFrame {
  double t = 0.0;
  CMatrix J;
  Complex l1, l2;  // l1 takes the principal square-root branch
  double o11 = 1.0;
  double o12 = 0.0;
  double gap2 = 0.0;  // |l1 - l2|^2
};

TwoByTwoFrame closed_form_overlaps(const CMatrix& j, double t = 0.0);

// One-step conditional mean of dO11/dt from a frozen state versus
// ((2 O11 - 1)^2 + 1)/gap2 - tau (2 O11 - 1) * 2 Re(1/(l1-l2)^2).
VerificationReport verify_o11_drift(const MatrixState& state, const SimConfig& cfg,
                                    long draws, int threads);

// One-step E[(dO11)^2]/dt versus
// 4 O11 (2 O11 - 1)(O11 - 1)/gap2 - 2 tau O11 (O11 - 1) * 2 Re(1/(l1-l2)^2).
VerificationReport verify_o11_qv(const MatrixState& state, const SimConfig& cfg,
                                 long draws, int threads);

// Pathwise realized covariation of O11 with the squared gap versus
// -8 int O11 (O11 - 1) dt; also asserts the realized value is <= 0 within
// noise.
VerificationReport verify_negative_covariation(const SimConfig& cfg, int replicas,
                                               int threads);

// Static draws at time t from a zero start: Y = (O11 - 1) gap2 / (t (1 - tau^2))
// is distributed Exp(1). Reports the KS test, the mean (theory 1), and
// correlation diagnostics of Y against (Re l1, Im l1, gap2).
VerificationReport verify_exponential_law(const SimConfig& cfg, double t, long samples,
                                          int threads);

}  // namespace ege
