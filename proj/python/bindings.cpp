#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lfbsde/config.hpp"
#include "lfbsde/report.hpp"

namespace py = pybind11;
using namespace lfbsde;

namespace {

// Reports cross the boundary as JSON text; the package decodes them.
std::string dumps(const Json& j) { return j.dump(); }

CoeffMatrix matrix_from(const std::array<double, 3>& f, const std::array<double, 3>& b,
                        const std::array<double, 3>& sigma) {
  return CoeffMatrix::from_rows(f, b, sigma);
}

std::tuple<double, double, double, double> coeffs_of(const Cubic& p) { return {p.c3, p.c2, p.c1, p.c0}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Linear FBSDE well-posedness criteria, transforms and Monte Carlo solver.";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<CoeffMatrix>(m, "CoeffMatrix")
      .def(py::init(&matrix_from), py::arg("f"), py::arg("b"), py::arg("sigma"))
      .def("flat", &CoeffMatrix::flat)
      .def("__eq__", [](const CoeffMatrix& a, const CoeffMatrix& b) { return a == b; })
      .def("__repr__", [](const CoeffMatrix& c) { return "CoeffMatrix(" + to_json(c).dump() + ")"; });

  py::class_<LinearFBSDE>(m, "LinearFBSDE")
      .def(py::init([](const CoeffMatrix& c, double h, double x0, double T) { return LinearFBSDE{c, h, x0, T}; }),
           py::arg("coeffs"), py::arg("h"), py::arg("x0") = 1.0, py::arg("T") = 1.0)
      .def_readwrite("coeffs", &LinearFBSDE::coeffs)
      .def_readwrite("h", &LinearFBSDE::h)
      .def_readwrite("x0", &LinearFBSDE::x0)
      .def_readwrite("T", &LinearFBSDE::T);

  py::class_<LQProblem>(m, "LQProblem")
      .def(py::init([](double A, double B, double C, double D, double R, double S, double N, double Q, double x0,
                       double T) { return LQProblem{A, B, C, D, R, S, N, Q, x0, T}; }),
           py::arg("A"), py::arg("B"), py::arg("C"), py::arg("D"), py::arg("R"), py::arg("S"), py::arg("N"),
           py::arg("Q"), py::arg("x0") = 1.0, py::arg("T") = 1.0);

  m.def("l_poly", [](const CoeffMatrix& c) { return coeffs_of(l_poly(c)); });
  m.def("h_poly", [](const CoeffMatrix& c) { return coeffs_of(h_poly(c)); });
  m.def("real_roots", [](double c3, double c2, double c1, double c0) { return real_roots(Cubic{c3, c2, c1, c0}); });

  m.def("_check_monotonicity", [](const LinearFBSDE& f) { return dumps(to_json(check_monotonicity(f.coeffs, f.h))); });
  m.def("_check_lemma38", [](const LinearFBSDE& f) { return dumps(to_json(check_lemma38(f))); });
  m.def("_check_thm39", [](const LinearFBSDE& f) { return dumps(to_json(check_thm39(f))); });
  m.def("_equiv_B", [](const CoeffMatrix& c, double p) { return dumps(to_json(equiv_B(c, p))); });
  m.def("_equiv_C", [](const CoeffMatrix& c, double q) { return dumps(to_json(equiv_C(c, q))); });
  m.def("_transform", [](const LinearFBSDE& f, double mm, double n, double c) {
    return dumps(to_json(transform_system(f, TransformParams::make(mm, n, c))));
  });
  m.def("_integrate", [](const LinearFBSDE& f, double dt) { return dumps(to_json(integrate_dominating(f, dt))); });
  m.def(
      "_verify",
      [](const LinearFBSDE& f, double dt, std::size_t paths, std::uint64_t seed) {
        py::gil_scoped_release release;
        return dumps(to_json(verify_instance(f, dt, paths, seed)));
      },
      py::arg("f"), py::arg("dt"), py::arg("paths"), py::arg("seed"));
  m.def(
      "_solve_lq",
      [](const LQProblem& lq, bool printed, double dt, std::size_t paths, std::uint64_t seed) {
        py::gil_scoped_release release;
        LqOptions opts;
        opts.use_printed_fbsde = printed;
        opts.dt = dt;
        opts.n_paths = paths;
        opts.seed = seed;
        return dumps(to_json(solve_lq(lq, opts)));
      },
      py::arg("lq"), py::arg("printed"), py::arg("dt"), py::arg("paths"), py::arg("seed"));
  m.def("_parse_config", [](const std::string& text) {
    const ParsedConfig cfg = parse_config(text);
    return cfg.is_fbsde() ? dumps(to_json(cfg.fbsde())) : dumps(to_json(cfg.lq()));
  });

#ifdef VERSION_INFO
#define LFBSDE_STR(x) #x
#define LFBSDE_XSTR(x) LFBSDE_STR(x)
  m.attr("__version__") = LFBSDE_XSTR(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
