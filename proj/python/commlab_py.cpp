#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "commlab/anderson.hpp"
#include "commlab/errors.hpp"
#include "commlab/idealseq.hpp"
#include "commlab/liealg.hpp"
#include "commlab/minimize.hpp"
#include "commlab/numkit.hpp"
#include "commlab/selfcomm.hpp"
#include "commlab/staircase.hpp"

namespace py = pybind11;
using namespace commlab;

namespace {

py::dict report_dict(const SolveReport& r) {
  py::list rows;
  for (const auto& c : r.checks) {
    rows.append(py::make_tuple(c.name, c.measured, c.tolerance, c.pass));
  }
  py::dict d;
  d["command"] = r.command;
  d["checks"] = rows;
  d["passed"] = r.passed();
  return d;
}

py::object optional_bool(const std::optional<bool>& v) {
  return v ? py::bool_(*v) : py::object(py::none());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Commutator and self-commutator toolkit (C++ core).";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<ConstructionError>(m, "ConstructionError", base.ptr());
  py::register_exception<VerificationError>(m, "VerificationError", base.ptr());
  py::register_exception<ConsistencyError>(m, "ConsistencyError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  m.def("commutator", &numkit::commutator, py::arg("a"), py::arg("b"));
  m.def("self_commutator", &numkit::self_commutator, py::arg("y"));
  m.def("trace_norm", &numkit::trace_norm, py::arg("a"));
  m.def("format_matrix", &numkit::format_matrix, py::arg("a"));
  m.def("parse_matrix", &numkit::parse_matrix, py::arg("text"));

  m.def(
      "identity_checks",
      [](std::size_t n, double tol) {
        py::dict out;
        for (const auto& row : anderson::identity_checks(n, tol).rows) out[py::str(row.name)] = row.residual;
        return out;
      },
      py::arg("n"), py::arg("tolerance") = 1e-12);
  m.def(
      "verify_positive_commutator",
      [](const std::string& family, std::size_t block_count, double tol) {
        const auto w = anderson::WeightSequence::parse(family, block_count + 1);
        const auto r = anderson::verify_positive_commutator(w, block_count, tol);
        py::dict d;
        d["dimension"] = r.dimension;
        d["interior_diagonal"] = r.interior_diagonal();
        d["off_tridiagonal_mass"] = r.off_tridiagonal_mass;
        d["interior_lu_mass"] = r.interior_lu_mass;
        d["interior_positive"] = r.interior_positive;
        return d;
      },
      py::arg("family"), py::arg("block_count"), py::arg("tolerance") = 1e-10);

  m.def(
      "staircase_form",
      [](const std::vector<ComplexMatrix>& ops, bool selfadjoint) {
        const auto r = staircase::staircase_form(ops, selfadjoint);
        return py::make_tuple(r.unitary, r.transformed, r.band_profile);
      },
      py::arg("ops"), py::arg("selfadjoint") = false);
  m.def("band_bound", &staircase::band_bound, py::arg("n"), py::arg("op_count"),
        py::arg("selfadjoint"));

  m.def(
      "solve_type_A",
      [](const ComplexMatrix& t) {
        const auto s = selfcomm::solve_type_A(t);
        return py::make_tuple(s.solution, s.residual);
      },
      py::arg("t"), "Returns (Y, residual) with [Y*, Y] = T.");
  m.def(
      "solve_type_C",
      [](const ComplexMatrix& t) {
        if (t.rows() % 2 != 0) throw DomainError("type C needs an even dimension");
        const auto j = selfcomm::make_anticonjugation(static_cast<std::size_t>(t.rows()) / 2);
        const auto s = selfcomm::solve_type_C(t, j);
        return py::make_tuple(s.solution, report_dict(s.report));
      },
      py::arg("t"), "Solver for the standard anti-conjugation on C^{2m}.");
  m.def(
      "project_sp",
      [](const ComplexMatrix& x) {
        return selfcomm::project_sp(x, selfcomm::make_anticonjugation(x.rows() / 2));
      },
      py::arg("x"));

  m.def(
      "killing_form",
      [](const ComplexMatrix& x, const ComplexMatrix& w) {
        const liealg::SlRootData roots(static_cast<std::size_t>(x.rows()) - 1, false);
        return liealg::killing_form(x, w, roots.basis());
      },
      py::arg("x"), py::arg("w"), "Killing form of sl(n), n = x.rows.");
  m.def(
      "solve_sl",
      [](const ComplexMatrix& a) {
        const auto s = liealg::solve_sl(a);
        return py::make_tuple(s.solution, s.coefficients, report_dict(s.report));
      },
      py::arg("a"));

  m.def(
      "minimize_commutator",
      [](const ComplexMatrix& target, std::size_t restarts, std::uint64_t seed,
         std::size_t max_iters) {
        minimize::MinimizeConfig c;
        c.target = target;
        c.restarts = restarts;
        c.seed = seed;
        c.max_iters = max_iters;
        minimize::MinimizeResult r;
        {
          py::gil_scoped_release nogil;
          r = minimize::minimize_commutator(c);
        }
        py::dict d;
        d["a"] = r.best_a;
        d["b"] = r.best_b;
        d["objective"] = r.objective;
        d["feasibility"] = r.feasibility;
        d["lower_bound"] = r.lower_bound;
        d["certified"] = r.certified;
        return d;
      },
      py::arg("target"), py::arg("restarts") = 50, py::arg("seed") = 0,
      py::arg("max_iters") = 20000);
  m.def("lower_bound_certificate", &minimize::lower_bound_certificate, py::arg("target"));
  m.def(
      "optimal_pair",
      [] {
        const auto p = minimize::verify_optimal_pair();
        return py::make_tuple(p.a, p.b);
      },
      "The explicit optimal pair for diag(-1, 1/3, 1/3, 1/3).");

  m.def(
      "classify_hsii",
      [](const std::string& family) {
        const auto c = idealseq::classify_hsii(idealseq::SequenceFamily::parse(family));
        return py::make_tuple(optional_bool(c.in_trace_class), optional_bool(c.in_commutator_class));
      },
      py::arg("family"));
  m.def("arithmetic_mean_sequence", &idealseq::arithmetic_mean_sequence, py::arg("values"));
}
