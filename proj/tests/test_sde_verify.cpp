#include <doctest.h>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "egedyn/rng.hpp"
#include "egedyn/sde_verify.hpp"
#include "egedyn/spectral.hpp"

using namespace ege;

namespace {

CMatrix random_matrix(int n, rng::Stream& g) {
  CMatrix a(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a(r, c) = 0.70710678118654752440 * g.normal_pair();
  return a;
}

CMatrix hermitize(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

MatrixState state_of(const CMatrix& j) {
  MatrixState s;
  s.J = j;
  return s;
}

CMatrix sorted_diag(double a, double b) {
  CMatrix j = CMatrix::Zero(2, 2);
  j(0, 0) = a;
  j(1, 1) = b;
  return j;
}

}  // namespace

TEST_CASE("coordinates round-trip through the matrix") {
  rng::Stream g(411, 0);
  {
    const CMatrix j = random_matrix(4, g);
    const std::vector<double> x = coords_from_state(j, 0.5);
    CHECK(x.size() == 32);
    const CMatrix back = state_from_coords(x, 4, 0.5);
    CHECK((back - j).norm() < 1e-12 * std::max(1.0, j.norm()));
  }
  {
    // Hermitian matrices live entirely in the H1 block when tau = 1
    const CMatrix j = hermitize(random_matrix(3, g));
    const std::vector<double> x = coords_from_state(j, 1.0);
    for (size_t k = 9; k < 18; ++k) CHECK(std::abs(x[k]) < 1e-12);
    const CMatrix back = state_from_coords(x, 3, 1.0);
    CHECK((back - j).norm() < 1e-12 * std::max(1.0, j.norm()));
  }
}

TEST_CASE("N=1 gradient is the entry sensitivity") {
  for (const double tau : {0.0, 0.5, 1.0, -1.0}) {
    CMatrix j(1, 1);
    j(0, 0) = Complex(0.4, tau * tau - 0.5);
    if (std::abs(tau - 1.0) < 1e-12) j(0, 0) = Complex(0.4, 0.0);
    if (std::abs(tau + 1.0) < 1e-12) j(0, 0) = Complex(0.0, 0.4);
    const std::vector<Complex> grad = eigenvalue_gradient(j, tau, j(0, 0));
    CHECK(grad.size() == 2);
    // d lambda / d x11 = c1, d lambda / d alpha11 = i c2
    CHECK(std::abs(grad[0] - Complex(std::sqrt((1 + tau) / 2))) < 1e-12);
    CHECK(std::abs(grad[1] - Complex(0.0, std::sqrt((1 - tau) / 2))) < 1e-12);
  }
}

TEST_CASE("gradient matches an independent finite difference in one coordinate") {
  rng::Stream g(412, 0);
  const double tau = 0.3;
  const CMatrix j = random_matrix(3, g);
  const SpectralFrame f = decompose(state_of(j));
  const int i = 1;
  const std::vector<Complex> grad = eigenvalue_gradient(j, tau, f.eigenvalues[i]);
  std::vector<double> x = coords_from_state(j, tau);
  const double h = 1e-6 * (1.0 + j.norm());
  for (const size_t eta : {size_t(0), size_t(4), x.size() - 1}) {
    std::vector<double> xp = x, xm = x;
    xp[eta] += h;
    xm[eta] -= h;
    const SpectralFrame fp = decompose(state_of(state_from_coords(xp, 3, tau)));
    const SpectralFrame fm = decompose(state_of(state_from_coords(xm, 3, tau)));
    const Complex fd = (fp.eigenvalues[i] - fm.eigenvalues[i]) / (2 * h);
    CHECK(std::abs(fd - grad[eta]) < 1e-6 * (1.0 + std::abs(grad[eta])));
  }
}

TEST_CASE("finite-difference truncation shrinks quadratically with h") {
  rng::Stream g(413, 0);
  const double tau = 0.0;
  CMatrix j;
  SpectralFrame f;
  do {
    j = random_matrix(3, g);
    f = decompose(state_of(j));
  } while (f.min_gap < 0.3);
  const std::vector<Complex> grad = eigenvalue_gradient(j, tau, f.eigenvalues[0]);
  std::vector<double> x = coords_from_state(j, tau);
  auto fd_err = [&](double h) {
    std::vector<double> xp = x, xm = x;
    xp[2] += h;
    xm[2] -= h;
    const Complex fd = (decompose(state_of(state_from_coords(xp, 3, tau))).eigenvalues[0] -
                        decompose(state_of(state_from_coords(xm, 3, tau))).eigenvalues[0]) /
                       (2 * h);
    return std::abs(fd - grad[2]);
  };
  const double h = 1e-3 * (1.0 + j.norm());
  const double e1 = fd_err(h);
  const double e2 = fd_err(2 * h);
  CHECK(e2 / e1 > 2.0);  // central differences: error ~ h^2, ratio ~ 4
  CHECK(e2 / e1 < 8.0);
}

TEST_CASE("implicit-derivative certification passes on separated spectra") {
  rng::Stream g(414, 0);
  for (const double tau : {0.0, 0.7}) {
    CMatrix j;
    SpectralFrame f;
    do {
      j = random_matrix(3, g);
      f = decompose(state_of(j));
    } while (f.min_gap < 0.3);
    const VerificationReport r = verify_implicit_derivatives(state_of(j), tau, 0);
    CHECK(r.pass);
    CHECK(r.name.find("implicit") != std::string::npos);
  }
}

TEST_CASE("gradient inner products reproduce the overlap theory") {
  rng::Stream g(415, 0);
  {
    CMatrix j;
    SpectralFrame f;
    do {
      j = random_matrix(3, g);
      f = decompose(state_of(j));
    } while (f.min_gap < 0.3);
    for (int i = 0; i < 3; ++i)
      for (int jj = 0; jj < 3; ++jj) CHECK(verify_gradient_products(state_of(j), 0.4, i, jj).pass);
  }
  {
    // Hermitian case: O = I, grad R . grad R = (1+tau)/2 on the diagonal
    CMatrix j;
    do {
      j = hermitize(random_matrix(3, g));
    } while (decompose(state_of(j)).min_gap < 0.3);
    CHECK(verify_gradient_products(state_of(j), 1.0, 0, 0).pass);
    CHECK(verify_gradient_products(state_of(j), 1.0, 0, 2).pass);
  }
}

TEST_CASE("Laplacian routes agree and match the repulsion sum") {
  {
    // sorted diag(-1, 1), tau=1, i=1 (lambda=+1): 2 tau / (1 - (-1)) = 1
    const VerificationReport r = verify_laplacian(state_of(sorted_diag(-1.0, 1.0)), 1.0, 1);
    CHECK(r.pass);
    CHECK(r.theory.real() == doctest::Approx(1.0).epsilon(1e-6));
  }
  {
    // tau = 0: harmonic coordinates, Laplacian 0
    rng::Stream g(416, 0);
    CMatrix j;
    SpectralFrame f;
    do {
      j = random_matrix(3, g);
      f = decompose(state_of(j));
    } while (f.min_gap < 0.3);
    const VerificationReport r = verify_laplacian(state_of(j), 0.0, 1);
    CHECK(r.pass);
    CHECK(std::abs(r.theory) < 1e-14);
  }
}

TEST_CASE("one-step drift matches the eigenvalue repulsion") {
  // sorted diag(-1, 1), tau=1, i=1: drift = 1/(1-(-1)) = +0.5
  MatrixState st = state_of(sorted_diag(-1.0, 1.0));
  SimConfig cfg;
  cfg.N = 2;
  cfg.tau = Hermiticity(1.0);
  cfg.dt = 1e-4;
  cfg.steps = 1;
  cfg.seed = 616;
  const VerificationReport r = verify_drift(st, cfg, 1, 20000, 1);
  CHECK(r.theory.real() == doctest::Approx(0.5));
  CHECK(std::abs(r.theory.imag()) < 1e-14);
  CHECK(r.pass);
}

TEST_CASE("martingale residual scales linearly in dt") {
  {
    // N = 1 short-circuits to exact linearity
    MatrixState st;
    st.J = CMatrix::Zero(1, 1);
    st.J(0, 0) = Complex(0.2, 0.1);
    SimConfig cfg;
    cfg.N = 1;
    cfg.tau = Hermiticity(0.0);
    cfg.dt = 1e-3;
    cfg.steps = 1;
    cfg.seed = 77;
    const VerificationReport r = verify_martingale_term(st, cfg, 0, 200, 1);
    CHECK(r.pass);
    CHECK(r.details.at("kind").get<std::string>() == "exact_linearity");
  }
  {
    rng::Stream g(417, 0);
    CMatrix j;
    SpectralFrame f;
    do {
      j = random_matrix(3, g);
      f = decompose(state_of(j));
    } while (f.min_gap < 0.5);
    SimConfig cfg;
    cfg.N = 3;
    cfg.tau = Hermiticity(0.5);
    cfg.dt = 1e-3;
    cfg.steps = 1;
    cfg.seed = 78;
    const VerificationReport r = verify_martingale_term(state_of(j), cfg, 0, 400, 1);
    CHECK(r.pass);
    const double slope = r.estimate.real();
    CHECK(slope == doctest::Approx(1.0).epsilon(0.15));
  }
  {
    // Hermitian dynamics must predict real increments
    MatrixState st = state_of(sorted_diag(-1.0, 1.0));
    SimConfig cfg;
    cfg.N = 2;
    cfg.tau = Hermiticity(1.0);
    cfg.dt = 1e-3;
    cfg.steps = 1;
    cfg.seed = 79;
    const VerificationReport r = verify_martingale_term(st, cfg, 1, 300, 1);
    CHECK(r.pass);
    CHECK(r.details.at("max_imag_predicted").get<double>() <= 1e-10);
  }
}

TEST_CASE("QV theory rates from the overlap matrix") {
  CMatrix o = CMatrix::Identity(2, 2);
  const double tau = 0.6;
  CHECK(qv_theory_rate({QVTarget::Kind::RR, 0, 0}, o, tau).real() ==
        doctest::Approx((1.0 + tau) / 2));
  CHECK(qv_theory_rate({QVTarget::Kind::II, 0, 0}, o, tau).real() ==
        doctest::Approx((1.0 - tau) / 2));
  CHECK(std::abs(qv_theory_rate({QVTarget::Kind::RI, 0, 0}, o, tau)) < 1e-15);
  CHECK(qv_theory_rate({QVTarget::Kind::ComplexHolo, 0, 0}, o, tau).real() == doctest::Approx(tau));
  CHECK(std::abs(qv_theory_rate({QVTarget::Kind::ComplexHolo, 0, 1}, o, tau)) < 1e-15);
  CHECK(qv_theory_rate({QVTarget::Kind::ComplexMixed, 0, 1}, o, tau).real() ==
        doctest::Approx(0.0));
  o(0, 1) = Complex(0.2, -0.3);
  CHECK(qv_theory_rate({QVTarget::Kind::RR, 0, 1}, o, tau).real() == doctest::Approx(0.1));
  CHECK(qv_theory_rate({QVTarget::Kind::RI, 0, 1}, o, tau).real() == doctest::Approx(0.15));
  CHECK(qv_theory_rate({QVTarget::Kind::ComplexMixed, 0, 1}, o, tau) == Complex(0.2, -0.3));
  CHECK_THROWS_AS((void)qv_theory_rate({QVTarget::Kind::RR, 0, 5}, o, tau), ArgumentError);
}

TEST_CASE("realized QV along a short path") {
  SimConfig cfg;
  cfg.N = 2;
  cfg.tau = Hermiticity(0.5);
  cfg.dt = 1e-3;
  cfg.steps = 50;
  cfg.seed = 515;
  TrajectoryOptions opts;
  opts.record_full_overlaps = true;
  const Trajectory traj = simulate_trajectory(cfg, 0, opts);
  // holomorphic diagonal bracket integrates a constant: theory = tau * T exactly
  const VerificationReport holo = verify_qv(traj, {QVTarget::Kind::ComplexHolo, 0, 0});
  CHECK(holo.theory.real() == doctest::Approx(cfg.tau.tau * cfg.dt * double(cfg.steps)));
  CHECK(std::abs(holo.theory.imag()) < 1e-15);
  CHECK(holo.pass);
  CHECK(verify_qv(traj, {QVTarget::Kind::ComplexHolo, 0, 1}).pass);
  CHECK(verify_qv(traj, {QVTarget::Kind::ComplexMixed, 0, 0}).pass);
  CHECK(verify_qv(traj, {QVTarget::Kind::RR, 0, 1}).pass);
  // labels are self-describing
  CHECK(QVTarget{QVTarget::Kind::RR, 0, 1}.label().find("1") != std::string::npos);
}

TEST_CASE("non-collision certificate reflects the recorded gaps") {
  SimConfig cfg;
  cfg.N = 3;
  cfg.tau = Hermiticity(0.0);
  cfg.dt = 1e-3;
  cfg.steps = 20;
  cfg.seed = 88;
  std::vector<Trajectory> trajs;
  for (int r = 0; r < 3; ++r) trajs.push_back(simulate_trajectory(cfg, uint64_t(r)));
  const VerificationReport rep = non_collision_report(trajs);
  CHECK(rep.pass);
  CHECK(rep.estimate.real() > 0.0);
  trajs[1].min_gaps[4] = 0.0;
  CHECK_FALSE(non_collision_report(trajs).pass);
}
