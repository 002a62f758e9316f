#include <doctest.h>

#include <cmath>
#include <complex>

#include "egedyn/linalg.hpp"
#include "egedyn/process.hpp"
#include "egedyn/report.hpp"
#include "egedyn/rng.hpp"

using namespace ege;

namespace {

SimConfig basic(int n, double tau, double dt = 1e-3) {
  SimConfig cfg;
  cfg.N = n;
  cfg.tau = Hermiticity(tau);
  cfg.dt = dt;
  cfg.seed = 2024;
  return cfg;
}

}  // namespace

TEST_CASE("tau = +1 increments are exactly Hermitian, tau = -1 anti-Hermitian") {
  {
    rng::Stream g(7, 0);
    const CMatrix dj = sample_increment(basic(4, 1.0), g);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) CHECK(dj(r, c) == std::conj(dj(c, r)));
  }
  {
    rng::Stream g(7, 0);
    const CMatrix dj = sample_increment(basic(4, -1.0), g);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) CHECK(dj(r, c) == -std::conj(dj(c, r)));
  }
}

TEST_CASE("a stream fixes the underlying Brownian pair for every tau") {
  // same (seed, stream): tau = +-1 increments are the Hermitian and
  // anti-Hermitian parts of the same draw scaled by sqrt(2)
  rng::Stream g1(11, 3), g2(11, 3), g3(11, 3);
  const CMatrix h = sample_increment(basic(3, 1.0), g1);
  const CMatrix s = sample_increment(basic(3, -1.0), g2);
  const CMatrix mix = sample_increment(basic(3, 0.0), g3);
  const double inv_sqrt2 = 0.70710678118654752440;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      CHECK(std::abs(mix(r, c) - inv_sqrt2 * (h(r, c) + s(r, c))) < 1e-15);
}

TEST_CASE("increments are deterministic in (seed, stream) and distinct across streams") {
  rng::Stream a(5, 1), b(5, 1), c(5, 2);
  const SimConfig cfg = basic(3, 0.4);
  const CMatrix da = sample_increment(cfg, a);
  const CMatrix db = sample_increment(cfg, b);
  const CMatrix dc = sample_increment(cfg, c);
  CHECK((da - db).cwiseAbs().maxCoeff() == 0.0);
  CHECK((da - dc).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("advance adds one increment and one time step") {
  const SimConfig cfg = basic(3, 0.6);
  MatrixState state;
  state.t = 0.25;
  state.J = CMatrix::Zero(3, 3);
  rng::Stream g(9, 4), h(9, 4);
  const MatrixState next = advance(state, cfg, g);
  const CMatrix dj = sample_increment(cfg, h);
  CHECK(next.t == doctest::Approx(0.25 + cfg.dt));
  CHECK((next.J - dj).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("static samples at tau = 1 are Hermitian and match entry variance t") {
  const SimConfig cfg = basic(3, 1.0);
  rng::Stream g(13, 0);
  const MatrixState st = sample_static(cfg, 2.0, g);
  CHECK(st.t == 2.0);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) CHECK(st.J(r, c) == std::conj(st.J(c, r)));

  // E|J_kl|^2 = t for the off-diagonal of the general process
  const SimConfig c2 = basic(2, 0.3);
  Accumulator acc;
  for (int d = 0; d < 20000; ++d) {
    rng::Stream s(31, uint64_t(d));
    const MatrixState draw = sample_static(c2, 0.7, s);
    acc.add(std::norm(draw.J(0, 1)));
  }
  CHECK(std::abs(acc.mean() - 0.7) <= 4.0 * acc.stderr_of_mean());
  CHECK_THROWS_AS((void)sample_static(c2, 0.0, g), ArgumentError);
}

TEST_CASE("initial conditions materialize as configured") {
  rng::Stream g(17, 0);
  {
    SimConfig cfg = basic(3, 0.0);
    cfg.initial.kind = Initial::Kind::Zero;
    const MatrixState st = make_initial(cfg, g);
    CHECK(st.t == 0.0);
    CHECK(st.J.cwiseAbs().maxCoeff() == 0.0);
  }
  {
    SimConfig cfg = basic(2, 0.0);
    cfg.initial.kind = Initial::Kind::Diagonal;
    cfg.initial.diag = {Complex(1.0, 0.0), Complex(-1.0, 0.5)};
    const MatrixState st = make_initial(cfg, g);
    CHECK(st.J(0, 0) == Complex(1.0, 0.0));
    CHECK(st.J(1, 1) == Complex(-1.0, 0.5));
    CHECK(st.J(0, 1) == Complex(0.0, 0.0));
  }
  {
    SimConfig cfg = basic(4, 0.5);
    cfg.initial.kind = Initial::Kind::SampledSimple;
    const MatrixState st = make_initial(cfg, g);
    const std::vector<Complex> eig = eigenvalues_of(st.J);
    double min_gap = 1e300;
    for (size_t i = 0; i < eig.size(); ++i)
      for (size_t j = i + 1; j < eig.size(); ++j)
        min_gap = std::min(min_gap, std::abs(eig[i] - eig[j]));
    CHECK(min_gap > 1e-6);
  }
}

TEST_CASE("entry covariance reports match the increment correlation structure") {
  for (const double tau : {0.0, 0.7, -1.0}) {
    SimConfig cfg = basic(3, tau, 1.0);
    const std::vector<VerificationReport> reps = entry_covariance_reports(cfg, 40000, 1);
    CHECK(reps.size() == 12);  // 6 entry pairs x {modulus, product}
    for (const auto& r : reps) {
      CAPTURE(r.name);
      CHECK(r.pass);
    }
  }
  const VerificationReport worst = entry_covariance_report(basic(2, 0.5, 1.0), 20000, 1);
  CHECK(worst.pass);
  CHECK(worst.details.at("statistics_checked").get<int>() == 6);
}

TEST_CASE("config validation rejects out-of-range parameters") {
  CHECK_THROWS_AS(Hermiticity(2.0), ArgumentError);
  CHECK_THROWS_AS(Hermiticity(-1.5), ArgumentError);
  SimConfig cfg = basic(2, 0.0);
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  cfg = basic(0, 0.0);
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  cfg = basic(2, 0.0);
  cfg.steps = 0;
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
}

TEST_CASE("replica streams are deterministic and tag-separated") {
  const SimConfig cfg = basic(2, 0.0);
  rng::Stream a = replica_stream(cfg, "path", 3);
  rng::Stream b = replica_stream(cfg, "path", 3);
  rng::Stream c = replica_stream(cfg, "path", 4);
  rng::Stream d = replica_stream(cfg, "drift", 3);
  const uint64_t xa = a.next_u64();
  CHECK(xa == b.next_u64());
  CHECK(xa != c.next_u64());
  CHECK(xa != d.next_u64());
}
