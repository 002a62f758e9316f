#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "egedyn/rng.hpp"
#include "egedyn/spectral.hpp"
#include "egedyn/two_by_two.hpp"

using namespace ege;

namespace {

CMatrix hand_matrix() {
  CMatrix j(2, 2);
  j << Complex(1.0), Complex(1.0), Complex(0.0), Complex(-1.0);
  return j;
}

}  // namespace

TEST_CASE("hand-computed closed forms for [[1,1],[0,-1]]") {
  const TwoByTwoFrame f = closed_form_overlaps(hand_matrix());
  CHECK(f.gap2 == doctest::Approx(4.0));
  CHECK(f.o11 == doctest::Approx(1.25));
  CHECK(f.o12 == doctest::Approx(-0.25));
  // trace / determinant pin the pair {1, -1}
  CHECK(std::abs(f.l1 + f.l2) < 1e-14);
  CHECK(std::abs(f.l1 * f.l2 + Complex(1.0)) < 1e-14);
}

TEST_CASE("closed forms agree with the full decomposition") {
  rng::Stream g(311, 0);
  int done = 0;
  while (done < 25) {
    CMatrix j(2, 2);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) j(r, c) = 0.70710678118654752440 * g.normal_pair();
    const TwoByTwoFrame f = closed_form_overlaps(j);
    if (f.gap2 < 0.25) continue;  // keep the comparison well conditioned
    ++done;
    MatrixState st;
    st.J = j;
    const SpectralFrame sf = decompose(st);
    CHECK(std::abs(f.o11 - sf.overlaps(0, 0).real()) < 1e-10);
    CHECK(std::abs(f.o11 - sf.overlaps(1, 1).real()) < 1e-10);
    CHECK(std::abs(f.o12 - sf.overlaps(0, 1).real()) < 1e-10);
    CHECK(std::abs(sf.overlaps(0, 1).imag()) < 1e-10);
    // same spectrum as a set
    const double direct = std::min(std::abs(f.l1 - sf.eigenvalues[0]) + std::abs(f.l2 - sf.eigenvalues[1]),
                                   std::abs(f.l1 - sf.eigenvalues[1]) + std::abs(f.l2 - sf.eigenvalues[0]));
    CHECK(direct < 1e-10);
    // row-sum and lower-bound structure
    CHECK(f.o11 + f.o12 == doctest::Approx(1.0));
    CHECK(f.o11 >= 1.0);
    CHECK(f.gap2 == doctest::Approx(std::norm(f.l1 - f.l2)));
  }
}

TEST_CASE("degenerate and malformed inputs are rejected") {
  CHECK_THROWS_AS((void)closed_form_overlaps(CMatrix::Identity(2, 2)), DegeneracyError);
  CHECK_THROWS_AS((void)closed_form_overlaps(CMatrix::Identity(3, 3)), ArgumentError);
}

TEST_CASE("frozen-state drift of O11 reproduces the closed-form rate") {
  MatrixState st;
  st.J = hand_matrix();
  SimConfig cfg;
  cfg.N = 2;
  cfg.tau = Hermiticity(0.0);
  cfg.dt = 1e-4;
  cfg.steps = 1;
  cfg.seed = 5150;
  const VerificationReport r = verify_o11_drift(st, cfg, 4000, 1);
  // O11 = 5/4, gap2 = 4, tau = 0:  ((2 O11 - 1)^2 + 1)/gap2 = 13/16
  CHECK(r.theory.real() == doctest::Approx(13.0 / 16.0));
  CHECK(r.theory.imag() == doctest::Approx(0.0));
  CHECK(r.samples == 4000);
  CHECK(r.stderr_total > 0.0);
}

TEST_CASE("frozen-state quadratic variation of O11 reproduces the closed-form rate") {
  MatrixState st;
  st.J = hand_matrix();
  SimConfig cfg;
  cfg.N = 2;
  cfg.tau = Hermiticity(0.0);
  cfg.dt = 1e-4;
  cfg.steps = 1;
  cfg.seed = 5151;
  const VerificationReport r = verify_o11_qv(st, cfg, 30000, 1);
  // 4 O11 (2 O11 - 1)(O11 - 1)/gap2 = 15/32 at tau = 0
  CHECK(r.theory.real() == doctest::Approx(15.0 / 32.0));
  CHECK(r.pass);
}

TEST_CASE("exponential-law preconditions") {
  SimConfig cfg;
  cfg.N = 2;
  cfg.tau = Hermiticity(1.0);
  cfg.seed = 7;
  CHECK_THROWS_AS((void)verify_exponential_law(cfg, 1.0, 2000, 1), ArgumentError);
  cfg.tau = Hermiticity(0.0);
  CHECK_THROWS_AS((void)verify_exponential_law(cfg, 1.0, 100, 1), ArgumentError);
  CHECK_THROWS_AS((void)verify_exponential_law(cfg, 0.0, 2000, 1), ArgumentError);
  SimConfig three = cfg;
  three.N = 3;
  CHECK_THROWS_AS((void)verify_exponential_law(three, 1.0, 2000, 1), ArgumentError);
}

TEST_CASE("covariation preconditions") {
  SimConfig cfg;
  cfg.N = 3;
  cfg.tau = Hermiticity(0.0);
  CHECK_THROWS_AS((void)verify_negative_covariation(cfg, 10, 1), ArgumentError);
  cfg.N = 2;
  cfg.tau = Hermiticity(1.0);
  CHECK_THROWS_AS((void)verify_negative_covariation(cfg, 10, 1), ArgumentError);
}
