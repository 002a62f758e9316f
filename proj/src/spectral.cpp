#include "egedyn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

#include "egedyn/linalg.hpp"

namespace ege {

namespace {

constexpr double kDegeneracyFactor = 1e-8;

double pairwise_min_gap(const std::vector<Complex>& mu) {
  double gap = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < mu.size(); ++i)
    for (size_t j = i + 1; j < mu.size(); ++j) gap = std::min(gap, std::abs(mu[i] - mu[j]));
  return gap;
}

// Minimum-cost assignment over a dense square cost matrix; returns the column
// assigned to each row. Shortest-augmenting-path formulation with potentials,
// O(n^3).
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
  const int n = int(cost.size());
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = std::numeric_limits<double>::infinity();
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

double assignment_cost(const std::vector<std::vector<double>>& cost,
                       const std::vector<int>& perm) {
  double s = 0.0;
  for (size_t i = 0; i < perm.size(); ++i) s += cost[i][perm[i]];
  return s;
}

}  // namespace

SpectralFrame decompose(const MatrixState& state) {
  require(state.J.rows() == state.J.cols(), "matrix must be square");
  require(state.J.allFinite(), "matrix entries must be finite");
  const int n = int(state.J.rows());
  SpectralFrame f;
  f.t = state.t;

  if (n == 1) {
    f.eigenvalues = {state.J(0, 0)};
    f.right_vecs = CMatrix::Identity(1, 1);
    f.left_vecs = CMatrix::Identity(1, 1);
    f.overlaps = CMatrix::Identity(1, 1);
    f.min_gap = std::numeric_limits<double>::infinity();
    f.max_residual = 0.0;
    return f;
  }

  Eigen::ComplexEigenSolver<CMatrix> es(state.J, /*computeEigenvectors=*/true);
  require(es.info() == Eigen::Success, "eigendecomposition failed to converge");

  // Canonical order: lexicographic in (Re, Im). Path identity is maintained
  // separately by match_paths.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Complex la = es.eigenvalues()(a), lb = es.eigenvalues()(b);
    if (la.real() != lb.real()) return la.real() < lb.real();
    return la.imag() < lb.imag();
  });

  f.eigenvalues.resize(n);
  f.right_vecs.resize(n, n);
  for (int i = 0; i < n; ++i) {
    f.eigenvalues[i] = es.eigenvalues()(order[i]);
    f.right_vecs.col(i) = es.eigenvectors().col(order[i]);
  }

  // Gauge: unit norm, first nonzero component real positive.
  for (int i = 0; i < n; ++i) {
    f.right_vecs.col(i).normalize();
    for (int k = 0; k < n; ++k) {
      const Complex v = f.right_vecs(k, i);
      if (std::abs(v) > 1e-12) {
        f.right_vecs.col(i) *= std::conj(v) / std::abs(v);
        break;
      }
    }
  }

  f.min_gap = pairwise_min_gap(f.eigenvalues);
  const double scale = state.J.norm();
  if (!(f.min_gap > kDegeneracyFactor * scale))
    throw DegeneracyError("spectrum numerically degenerate", f.min_gap, state.t);

  // Left vectors via inversion: rows of R^-1 are L_i^*, which makes
  // biorthogonality exact to solver precision.
  const CMatrix linv = f.right_vecs.partialPivLu().inverse();
  require(linv.allFinite(), "right-eigenvector matrix numerically singular");
  f.left_vecs = linv.adjoint();

  const CMatrix gl = linv * linv.adjoint();          // GL(i,j) = L_i* L_j
  const CMatrix gr = f.right_vecs.adjoint() * f.right_vecs;  // GR(i,j) = R_i* R_j
  f.overlaps = gl.cwiseProduct(gr.transpose());      // O_ij = (L_i* L_j)(R_j* R_i)

  double res = 0.0;
  for (int i = 0; i < n; ++i) {
    CMatrix shifted = state.J;
    shifted.diagonal().array() -= f.eigenvalues[i];
    res = std::max(res, (shifted * f.right_vecs.col(i)).norm());
  }
  f.max_residual = res;
  return f;
}

Complex overlap_eigvec(const SpectralFrame& frame, int i, int j) {
  const int n = int(frame.eigenvalues.size());
  require(i >= 0 && i < n && j >= 0 && j < n, "overlap index out of range");
  const Complex ll = (frame.left_vecs.col(i).adjoint() * frame.left_vecs.col(j))(0, 0);
  const Complex rr = (frame.right_vecs.col(j).adjoint() * frame.right_vecs.col(i))(0, 0);
  return ll * rr;
}

Complex overlap_det(const MatrixState& state, const std::vector<Complex>& eigenvalues,
                    int i, int j) {
  const int n = int(state.J.rows());
  require(int(eigenvalues.size()) == n, "eigenvalue count mismatch");
  require(i >= 0 && i < n && j >= 0 && j < n, "overlap index out of range");

  Complex denom{1.0, 0.0};
  for (int p = 0; p < n; ++p)
    if (p != i) denom *= eigenvalues[i] - eigenvalues[p];
  Complex denom_j{1.0, 0.0};
  for (int q = 0; q < n; ++q)
    if (q != j) denom_j *= eigenvalues[j] - eigenvalues[q];
  denom *= std::conj(denom_j);
  if (denom == Complex{0.0, 0.0})
    throw DegeneracyError("repeated eigenvalue in overlap denominator",
                          pairwise_min_gap(eigenvalues), state.t);

  CMatrix mi = -state.J;
  mi.diagonal().array() += eigenvalues[i];
  CMatrix mj = -state.J;
  mj.diagonal().array() += eigenvalues[j];
  const CMatrix prod = mi * mj.adjoint();

  Complex num{0.0, 0.0};
  for (int k = 0; k < n; ++k) {
    MinorIndex idx{{k + 1}, {k + 1}};
    num += minor_det(prod, idx);
  }
  return num / denom;
}

CMatrix martingale_coefficients(const MatrixState& state,
                                const std::vector<Complex>& eigenvalues, int i) {
  const int n = int(state.J.rows());
  require(int(eigenvalues.size()) == n, "eigenvalue count mismatch");
  require(i >= 0 && i < n, "eigenvalue index out of range");
  Complex denom{1.0, 0.0};
  for (int j = 0; j < n; ++j)
    if (j != i) denom *= eigenvalues[i] - eigenvalues[j];
  if (denom == Complex{0.0, 0.0})
    throw DegeneracyError("repeated eigenvalue in SDE coefficient denominator",
                          pairwise_min_gap(eigenvalues), state.t);

  CMatrix m = -state.J;
  m.diagonal().array() += eigenvalues[i];
  CMatrix c(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      MinorIndex idx{{k + 1}, {l + 1}};
      const double sign = ((k + l) % 2 == 0) ? 1.0 : -1.0;
      c(k, l) = sign * minor_det(m, idx) / denom;
    }
  return c;
}

MatchResult match_eigenvalues(const std::vector<Complex>& prev,
                              const std::vector<Complex>& next) {
  const int n = int(prev.size());
  require(int(next.size()) == n, "eigenvalue set size mismatch");
  MatchResult res;
  if (n == 1) {
    res.perm = {0};
    res.cost = std::norm(prev[0] - next[0]);
    res.second_best_cost = res.cost;
    res.ambiguous = false;
    return res;
  }

  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  double cmax = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cost[i][j] = std::norm(prev[i] - next[j]);
      cmax = std::max(cmax, cost[i][j]);
    }
  res.perm = hungarian(cost);
  res.cost = assignment_cost(cost, res.perm);

  // Second-best assignment: best solution that differs from the optimum,
  // found by forbidding each optimal edge in turn.
  const double forbid = (cmax + 1.0) * double(n) * 16.0;
  double second = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double saved = cost[i][res.perm[i]];
    cost[i][res.perm[i]] = forbid;
    const std::vector<int> alt = hungarian(cost);
    const double alt_cost = assignment_cost(cost, alt);
    if (alt_cost < forbid)  // a real assignment avoiding the forbidden edge
      second = std::min(second, alt_cost);
    cost[i][res.perm[i]] = saved;
  }
  res.second_best_cost = second;
  res.ambiguous = second <= 1.1 * res.cost;
  return res;
}

MatchResult match_paths(const SpectralFrame& prev, const SpectralFrame& next) {
  return match_eigenvalues(prev.eigenvalues, next.eigenvalues);
}

void apply_permutation(SpectralFrame& frame, const std::vector<int>& perm) {
  const int n = int(frame.eigenvalues.size());
  SpectralFrame out = frame;
  for (int i = 0; i < n; ++i) {
    out.eigenvalues[i] = frame.eigenvalues[perm[i]];
    out.right_vecs.col(i) = frame.right_vecs.col(perm[i]);
    out.left_vecs.col(i) = frame.left_vecs.col(perm[i]);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.overlaps(i, j) = frame.overlaps(perm[i], perm[j]);
  frame = std::move(out);
}

namespace {

void record_frame(Trajectory& tr, const SpectralFrame& f, bool full) {
  const int n = int(f.eigenvalues.size());
  tr.times.push_back(f.t);
  tr.paths.push_back(f.eigenvalues);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = f.overlaps(i, i).real();
  tr.diag_overlaps.push_back(std::move(diag));
  tr.min_gaps.push_back(f.min_gap);
  if (full) tr.full_overlaps.push_back(f.overlaps);
}

}  // namespace

Trajectory simulate_trajectory(const SimConfig& cfg, uint64_t replica,
                               const TrajectoryOptions& opts) {
  cfg.validate();
  rng::Stream stream = replica_stream(cfg, "path", replica);
  Trajectory tr;
  tr.config = cfg;
  MatrixState state = make_initial(cfg, stream);
  SpectralFrame frame = decompose(state);
  record_frame(tr, frame, opts.record_full_overlaps);
  for (long s = 0; s < cfg.steps; ++s) {
    state = advance(state, cfg, stream);
    SpectralFrame next = decompose(state);
    const MatchResult m = match_paths(frame, next);
    tr.any_ambiguous_match |= m.ambiguous;
    apply_permutation(next, m.perm);
    frame = std::move(next);
    record_frame(tr, frame, opts.record_full_overlaps);
  }
  return tr;
}

Trajectory track_states(const std::vector<MatrixState>& states, const SimConfig& cfg,
                        const TrajectoryOptions& opts) {
  require(!states.empty(), "need at least one state");
  Trajectory tr;
  tr.config = cfg;
  SpectralFrame frame = decompose(states.front());
  record_frame(tr, frame, opts.record_full_overlaps);
  for (size_t s = 1; s < states.size(); ++s) {
    SpectralFrame next = decompose(states[s]);
    const MatchResult m = match_paths(frame, next);
    tr.any_ambiguous_match |= m.ambiguous;
    apply_permutation(next, m.perm);
    frame = std::move(next);
    record_frame(tr, frame, opts.record_full_overlaps);
  }
  return tr;
}

void Trajectory::write_csv(std::ostream& os) const {
  const int n = config.N;
  os << "t";
  for (int i = 1; i <= n; ++i) os << ",re_l" << i << ",im_l" << i;
  for (int i = 1; i <= n; ++i) os << ",o" << i << i;
  os << ",min_gap\n";
  char buf[32];
  const auto put = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    os << buf;
  };
  for (size_t s = 0; s < times.size(); ++s) {
    put(times[s]);
    for (int i = 0; i < n; ++i) {
      os << ',';
      put(paths[s][i].real());
      os << ',';
      put(paths[s][i].imag());
    }
    for (int i = 0; i < n; ++i) {
      os << ',';
      put(diag_overlaps[s][i]);
    }
    os << ',';
    put(min_gaps[s]);
    os << '\n';
  }
}

}  // namespace ege
