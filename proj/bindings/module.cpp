// Python face of the library: matrix sampling, spectral decomposition with
// eigenvector overlaps, trajectory simulation, and the deterministic
// identity-check primitives. Thin wrappers only — all numerics live in the
// C++ core.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "egedyn/config.hpp"
#include "egedyn/linalg.hpp"
#include "egedyn/process.hpp"
#include "egedyn/rng.hpp"
#include "egedyn/spectral.hpp"
#include "egedyn/two_by_two.hpp"

namespace py = pybind11;
using namespace ege;

namespace {

SimConfig basic_config(int n, double tau, double dt, long steps, uint64_t seed) {
  SimConfig cfg;
  cfg.N = n;
  cfg.tau = Hermiticity(tau);
  cfg.dt = dt;
  cfg.steps = steps;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "matrix Brownian motion, eigenvalue trajectories, and eigenvector overlaps";
  m.attr("__version__") = kVersion;

  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<DegeneracyError>(m, "DegeneracyError", PyExc_RuntimeError);

  py::class_<SpectralFrame>(m, "SpectralFrame")
      .def_readonly("t", &SpectralFrame::t)
      .def_readonly("eigenvalues", &SpectralFrame::eigenvalues)
      .def_readonly("right_vecs", &SpectralFrame::right_vecs)
      .def_readonly("left_vecs", &SpectralFrame::left_vecs)
      .def_readonly("overlaps", &SpectralFrame::overlaps)
      .def_readonly("min_gap", &SpectralFrame::min_gap)
      .def_readonly("max_residual", &SpectralFrame::max_residual);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("times", &Trajectory::times)
      .def_readonly("paths", &Trajectory::paths)
      .def_readonly("diag_overlaps", &Trajectory::diag_overlaps)
      .def_readonly("min_gaps", &Trajectory::min_gaps)
      .def_readonly("full_overlaps", &Trajectory::full_overlaps)
      .def_readonly("any_ambiguous_match", &Trajectory::any_ambiguous_match);

  py::class_<TwoByTwoFrame>(m, "TwoByTwoFrame")
      .def_readonly("l1", &TwoByTwoFrame::l1)
      .def_readonly("l2", &TwoByTwoFrame::l2)
      .def_readonly("o11", &TwoByTwoFrame::o11)
      .def_readonly("o12", &TwoByTwoFrame::o12)
      .def_readonly("gap2", &TwoByTwoFrame::gap2);

  m.def(
      "sample_static",
      [](int n, double tau, double t, uint64_t seed) {
        const SimConfig cfg = basic_config(n, tau, 1e-3, 1, seed);
        rng::Stream g = replica_stream(cfg, "static", 0);
        return sample_static(cfg, t, g).J;
      },
      py::arg("n"), py::arg("tau"), py::arg("t") = 1.0, py::arg("seed") = 1,
      "One draw of the matrix at time t (entry variance t, correlation tau).");

  m.def(
      "decompose",
      [](const CMatrix& j, double t) {
        MatrixState st;
        st.t = t;
        st.J = j;
        return decompose(st);
      },
      py::arg("j"), py::arg("t") = 0.0,
      "Eigenvalues (sorted by real then imaginary part), biorthogonal "
      "eigenvectors, and the overlap matrix.");

  m.def(
      "simulate",
      [](int n, double tau, double dt, long steps, uint64_t seed, uint64_t replica,
         bool full_overlaps) {
        const SimConfig cfg = basic_config(n, tau, dt, steps, seed);
        TrajectoryOptions opts;
        opts.record_full_overlaps = full_overlaps;
        return simulate_trajectory(cfg, replica, opts);
      },
      py::arg("n"), py::arg("tau"), py::arg("dt"), py::arg("steps"), py::arg("seed") = 1,
      py::arg("replica") = 0, py::arg("full_overlaps") = false,
      "Simulate one replica path of matched eigenvalues with diagonal overlaps.");

  m.def(
      "overlap_det",
      [](const CMatrix& j, const std::vector<Complex>& eig, int i, int jj) {
        MatrixState st;
        st.J = j;
        return overlap_det(st, eig, i, jj);
      },
      py::arg("j"), py::arg("eigenvalues"), py::arg("i"), py::arg("jj"),
      "Overlap O_ij via the double-minor determinant sum (no eigenvectors).");

  m.def("closed_form_overlaps", [](const CMatrix& j) { return closed_form_overlaps(j); },
        py::arg("j"), "Closed-form 2x2 eigenvalues, overlaps, and squared gap.");

  // deterministic identity-check primitives
  m.def("det", &det, py::arg("a"));
  m.def(
      "char_poly",
      [](const CMatrix& a, Complex lam) {
        const CharPolyEval e = char_poly(a, lam);
        return py::make_tuple(e.value, e.d1, e.d2);
      },
      py::arg("a"), py::arg("lam"),
      "(f, f', f'') of det(lambda I - A) via principal-minor sums.");
  m.def("principal_minor_sum", &principal_minor_sum, py::arg("a"), py::arg("k"));
  m.def("elementary_symmetric", &elementary_symmetric, py::arg("values"), py::arg("k"));
  m.def("twice_cofactor_det", &twice_cofactor_det, py::arg("a"), py::arg("k"), py::arg("l"),
        "Eight-term double cofactor expansion along rows k < l (1-based).");
  m.def("squared_minor_sum_residual", &squared_minor_sum_residual, py::arg("a"),
        py::arg("lam"));
  m.def("offdiag_inverse_pair_sum", &offdiag_inverse_pair_sum, py::arg("z"));
  m.def("eigenvalues_of", &eigenvalues_of, py::arg("a"), "Eigenvalues only, unsorted.");
}
