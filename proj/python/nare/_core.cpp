#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "nare/diagnostics.hpp"
#include "nare/error.hpp"
#include "nare/problem.hpp"
#include "nare/sda.hpp"
#include "nare/shift.hpp"
#include "nare/si.hpp"
#include "nare/spectra.hpp"

namespace py = pybind11;
using namespace nare;

namespace {

py::array_t<double> to_numpy(const DenseMatrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  auto buf = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) buf(i, j) = m(i, j);
  return out;
}

py::array_t<double> to_numpy(const Vector& v) { return py::array_t<double>(v.size(), v.data()); }

DenseMatrix from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw NareError(ErrorKind::InvalidSize, "expected a 2-d array");
  DenseMatrix m(a.shape(0), a.shape(1));
  auto buf = a.unchecked<2>();
  for (py::ssize_t i = 0; i < a.shape(0); ++i)
    for (py::ssize_t j = 0; j < a.shape(1); ++j) m(i, j) = buf(i, j);
  return m;
}

ShiftMode parse_mode(const std::string& mode) {
  if (mode == "single") return ShiftMode::Single;
  if (mode == "double") return ShiftMode::Double;
  throw NareError(ErrorKind::InvalidInput, "mode must be 'single' or 'double'");
}

py::dict solution_dict(const Solution& s) {
  py::dict d;
  d["x"] = to_numpy(s.x);
  if (s.y) d["y"] = to_numpy(*s.y);
  d["iterations"] = s.iterations;
  d["converged"] = s.converged;
  d["res"] = s.res_final();
  d["err"] = s.err_final();
  d["res_history"] = s.res_history;
  d["err_history"] = s.err_history;
  d["gamma"] = s.gamma;
  d["tol"] = s.tol;
  return d;
}

py::dict spectrum_dict(const SpectrumReport& r) {
  py::dict d;
  py::list roots;
  for (const auto& root : r.free_roots) {
    py::dict item;
    item["value"] = root.value;
    item["lo"] = root.bracket.lo;
    item["hi"] = root.bracket.hi;
    item["residual"] = root.residual;
    item["tangent"] = root.tangent;
    roots.append(item);
  }
  d["fixed_roots"] = r.fixed_roots;
  d["free_roots"] = roots;
  d["values"] = r.all_values();
  d["on_region_boundary"] = r.on_region_boundary;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Riccati equation solvers for transport theory";

  static py::exception<NareError> nare_error(m, "NareError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const NareError& e) {
      py::object err = nare_error;
      err.attr("kind") = to_string(e.kind());
      PyErr_SetString(nare_error.ptr(), e.what());
    }
  });

  py::class_<TransportProblem>(m, "TransportProblem")
      .def_property_readonly("n", &TransportProblem::size)
      .def_property_readonly("alpha", [](const TransportProblem& p) { return p.params.alpha; })
      .def_property_readonly("c", [](const TransportProblem& p) { return p.params.c; })
      .def_property_readonly("nodes", [](const TransportProblem& p) { return to_numpy(p.params.nodes); })
      .def_property_readonly("weights", [](const TransportProblem& p) { return to_numpy(p.params.weights); })
      .def_property_readonly("q", [](const TransportProblem& p) { return to_numpy(p.q); })
      .def_property_readonly("delta", [](const TransportProblem& p) { return to_numpy(p.delta); })
      .def_property_readonly("gamma", [](const TransportProblem& p) { return to_numpy(p.gamma); })
      .def_property_readonly("a", [](const TransportProblem& p) { return to_numpy(p.quad.a); })
      .def_property_readonly("b", [](const TransportProblem& p) { return to_numpy(p.quad.b); })
      .def_property_readonly("c_matrix", [](const TransportProblem& p) { return to_numpy(p.quad.c); })
      .def_property_readonly("d", [](const TransportProblem& p) { return to_numpy(p.quad.d); })
      .def_property_readonly("is_critical", &TransportProblem::is_critical)
      .def("blocks", [](const TransportProblem& p) {
        auto [mm, hh] = assemble_blocks(p);
        return py::make_tuple(to_numpy(mm), to_numpy(hh));
      });

  m.def("quadrature_problem", &build_quadrature_problem, py::arg("n"), py::arg("alpha") = 0.0, py::arg("c") = 1.0,
        "Problem on the composite 4-point Gauss-Legendre rule.");
  m.def(
      "problem_from_nodes",
      [](Vector weights, Vector nodes, double alpha, double c) {
        TransportParams p{alpha, c, std::move(weights), std::move(nodes)};
        return build_problem(std::move(p));
      },
      py::arg("weights"), py::arg("nodes"), py::arg("alpha") = 0.0, py::arg("c") = 1.0);

  m.def(
      "sda",
      [](const TransportProblem& p, std::optional<double> eta, std::optional<double> xi, std::optional<double> gamma,
         std::optional<double> tol, int max_iter) {
        std::optional<ShiftSpec> shift;
        if (eta || xi) {
          const ShiftMode mode = xi.value_or(0.0) != 0.0 ? ShiftMode::Double : ShiftMode::Single;
          ShiftSpec def = default_shift(p, mode);
          shift = make_shift(p, eta.value_or(def.eta), xi.value_or(def.xi), mode);
        }
        SdaConfig cfg{gamma, tol, max_iter, StopRule::Either};
        return solution_dict(sda_solve(p, shift, cfg));
      },
      py::arg("problem"), py::arg("eta") = py::none(), py::arg("xi") = py::none(), py::arg("gamma") = py::none(),
      py::arg("tol") = py::none(), py::arg("max_iter") = 100,
      "Doubling solver; giving eta (and optionally xi != 0) applies a single (double) shift.");

  m.def(
      "si",
      [](const TransportProblem& p, std::optional<double> eta, std::optional<double> xi, std::optional<double> tol,
         int max_iter) {
        SiConfig cfg{tol, max_iter, StopRule::Either};
        if (!eta && !xi) return solution_dict(si_solve(p, cfg));
        const ShiftMode mode = xi.value_or(0.0) != 0.0 ? ShiftMode::Double : ShiftMode::Single;
        const ShiftSpec shift = make_shift(p, eta.value_or(0.0), xi.value_or(0.0), mode, /*relaxed=*/true);
        return solution_dict(si_shifted_solve(p, shift, cfg));
      },
      py::arg("problem"), py::arg("eta") = py::none(), py::arg("xi") = py::none(), py::arg("tol") = py::none(),
      py::arg("max_iter") = 10000, "Simple iteration; eta/xi select the low-rank shifted form.");

  m.def(
      "default_shift",
      [](const TransportProblem& p, const std::string& mode) {
        const ShiftSpec s = default_shift(p, parse_mode(mode));
        return py::make_tuple(s.eta, s.xi);
      },
      py::arg("problem"), py::arg("mode") = "double");

  m.def(
      "shifted_coefficients",
      [](const TransportProblem& p, double eta, double xi) {
        const ShiftMode mode = xi == 0.0 ? ShiftMode::Single : ShiftMode::Double;
        const auto q = shifted_coefficients(p, make_shift(p, eta, xi, mode));
        return py::make_tuple(to_numpy(q.a), to_numpy(q.b), to_numpy(q.c), to_numpy(q.d));
      },
      py::arg("problem"), py::arg("eta"), py::arg("xi") = 0.0, "(A, B, C, D) of the shifted equation.");

  m.def("eigenvalues_m", [](const TransportProblem& p) { return spectrum_dict(eigenvalues_m(p)); });
  m.def(
      "eigenvalues_m_shifted",
      [](const TransportProblem& p, double eta, double xi) {
        return spectrum_dict(eigenvalues_m_shifted(p, make_shift(p, eta, xi, ShiftMode::Double)));
      },
      py::arg("problem"), py::arg("eta"), py::arg("xi"));
  m.def("g_functions", [](const TransportProblem& p, double lambda) {
    const GValues g = g_functions(p, lambda);
    return py::make_tuple(g.g1, g.g2, g.g3);
  });

  m.def(
      "normalized_residual",
      [](const TransportProblem& p, const py::array_t<double, py::array::c_style | py::array::forcecast>& x) {
        return normalized_residual(p, from_numpy(x));
      },
      py::arg("problem"), py::arg("x"));
  m.def(
      "solution_identities",
      [](const TransportProblem& p, const py::array_t<double, py::array::c_style | py::array::forcecast>& x) {
        const IdentityGaps g = solution_identities(p, from_numpy(x));
        py::dict d;
        d["xv1_minus_v2"] = g.xv1_minus_v2;
        d["u2x_plus_u1"] = g.u2x_plus_u1;
        d["symmetry_gap"] = g.symmetry_gap;
        return d;
      },
      py::arg("problem"), py::arg("x"));
  m.def(
      "certify_m_matrix",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
        return std::string(to_string(certify_m_matrix(from_numpy(a))));
      },
      py::arg("a"));
}
