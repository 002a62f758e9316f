#pragma once

#include <iosfwd>
#include <vector>

#include "egedyn/common.hpp"
#include "egedyn/process.hpp"

namespace ege {

// Complete spectral data of one matrix snapshot. Right vectors are unit-norm
// columns with the first nonzero component rotated real positive; left
// vectors come from inverting the right-eigenvector matrix, so L_i* R_j =
// delta_ij by construction and the overlap matrix O_ij = (L_i* L_j)(R_j* R_i)
// is gauge-independent.
struct SpectralFrame {
  double t = 0.0;
  std::vector<Complex> eigenvalues;
  CMatrix right_vecs;  // columns R_i
  CMatrix left_vecs;   // columns L_i
  CMatrix overlaps;    // O_ij
  double min_gap = 0.0;
  double max_residual = 0.0;  // max_i ||(J - lambda_i I) R_i||_2
};

// Matched eigenvalue paths along one replica. paths[s][i] continues
// paths[s-1][i]; a positive min_gap at every recorded step certifies
// non-collision on the grid.
struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<Complex>> paths;        // (steps+1) x N
  std::vector<std::vector<double>> diag_overlaps; // (steps+1) x N, O_ii
  std::vector<double> min_gaps;
  std::vector<CMatrix> full_overlaps;  // filled only when requested
  SimConfig config;
  bool any_ambiguous_match = false;

  void write_csv(std::ostream& os) const;
};

struct TrajectoryOptions {
  bool record_full_overlaps = false;
};

struct MatchResult {
  std::vector<int> perm;  // perm[i] = index in `next` continuing path i
  double cost = 0.0;
  double second_best_cost = 0.0;
  bool ambiguous = false;  // second best within 10% of best
};

// Dense nonsymmetric eigendecomposition. Eigenvalues are sorted
// lexicographically by (Re, Im); throws DegeneracyError when
// min_gap <= 1e-8 * ||J||_F.
SpectralFrame decompose(const MatrixState& state);

// Gauge-invariant eigenvector overlap (L_i* L_j)(R_j* R_i), 0-based indices.
Complex overlap_eigvec(const SpectralFrame& frame, int i, int j);

// Determinant route for the same overlap:
// sum_k det(((l_i I - J)(l_j I - J)*)_{k|k}) /
// [prod_{p != i}(l_i - l_p) * conj(prod_{q != j}(l_j - l_q))].
Complex overlap_det(const MatrixState& state, const std::vector<Complex>& eigenvalues,
                    int i, int j);

// Coefficient matrix of dJ_kl in the d lambda_i SDE:
// c_kl = (-1)^(k+l) det((l_i I - J)_{k|l}) / prod_{j != i}(l_i - l_j).
// Equals conj(L_i[k]) R_i[l]; the unit tests check that bridge.
CMatrix martingale_coefficients(const MatrixState& state,
                                const std::vector<Complex>& eigenvalues, int i);

// Optimal assignment (Hungarian) between two eigenvalue sets under
// squared-distance cost, with a second-best solve for ambiguity detection.
MatchResult match_eigenvalues(const std::vector<Complex>& prev,
                              const std::vector<Complex>& next);

// Same assignment applied to whole frames.
MatchResult match_paths(const SpectralFrame& prev, const SpectralFrame& next);

// Reorders a frame in place so that entry perm[i] moves to slot i.
void apply_permutation(SpectralFrame& frame, const std::vector<int>& perm);

// Advances the matrix path for cfg.steps steps, decomposing and matching at
// every grid point.
Trajectory simulate_trajectory(const SimConfig& cfg, uint64_t replica = 0,
                               const TrajectoryOptions& opts = {});

// Same tracking over an externally supplied matrix path (used by refinement
// tests that need shared underlying increments at two grid resolutions).
Trajectory track_states(const std::vector<MatrixState>& states, const SimConfig& cfg,
                        const TrajectoryOptions& opts = {});

}  // namespace ege
