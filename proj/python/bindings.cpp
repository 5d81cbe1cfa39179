#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "acipmaps/construct.hpp"
#include "acipmaps/distortion.hpp"
#include "acipmaps/transfer.hpp"

namespace py = pybind11;
using namespace acipmaps;

namespace {

py::dict report_dict(const DistortionReport& r) {
  py::list levels;
  for (const auto& l : r.levels) {
    py::dict d;
    d["k"] = l.k;
    d["D"] = l.D;
    d["exact"] = l.exact;
    d["witness"] = l.witness;
    d["lower_bound"] = l.lower_bound;
    levels.append(d);
  }
  py::dict out;
  out["verdict"] = to_string(r.verdict);
  out["reason"] = r.reason;
  out["dini"] = to_string(r.dini);
  out["lambda"] = r.lambda;
  out["sigma"] = r.sigma;
  out["C"] = r.C;
  out["plateau_increase"] = r.plateau_increase;
  out["levels"] = levels;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Expanding circle maps with prescribed invariant densities";

  py::class_<Modulus>(m, "Modulus")
      .def("__call__", &Modulus::operator())
      .def("integral", &Modulus::integral)
      .def_property_readonly("t_omega", &Modulus::t_omega)
      .def_property_readonly("descriptor", &Modulus::descriptor)
      .def("__repr__", [](const Modulus& w) { return "Modulus('" + w.descriptor() + "')"; });
  m.def("parse_modulus", &parse_modulus);
  m.def("make_holder", &make_holder, py::arg("alpha"), py::arg("C") = 1.0);
  m.def("make_log_nondini", &make_log_nondini);
  m.def("make_almost_lipschitz", &make_almost_lipschitz);
  m.def("make_zero", &make_zero);
  m.def("is_in_K", [](const Modulus& w) { return is_in_K(w).passed(); });
  m.def(
      "dini_classify",
      [](const Modulus& w, double sigma, int k_max) {
        DiniOptions o;
        o.sigma = sigma;
        o.k_max = k_max;
        const DiniResult r = dini_classify(w, o);
        py::dict d;
        d["verdict"] = to_string(r.verdict);
        d["integral"] = r.integral;
        d["partial_sum"] = r.partial_sums.back();
        return d;
      },
      py::arg("omega"), py::arg("sigma") = 2.0, py::arg("k_max") = 10000);

  py::class_<DensityProfile>(m, "DensityProfile")
      .def("__call__", &DensityProfile::operator())
      .def("cumulative", &DensityProfile::cumulative)
      .def("inverse_cumulative", &DensityProfile::inverse_cumulative)
      .def_property_readonly("certified",
                             [](const DensityProfile& d) { return d.certification().passed(); })
      .def_property_readonly("min_rho",
                             [](const DensityProfile& d) { return d.certification().min_rho; });
  m.def("build_density", &build_density);
  m.def("uniform_density", &uniform_density);

  py::class_<ExpandingCircleMap>(m, "ExpandingCircleMap")
      .def("__call__", &ExpandingCircleMap::eval)
      .def("deriv", &ExpandingCircleMap::deriv)
      .def("branch", &ExpandingCircleMap::branch)
      .def("branch_deriv", &ExpandingCircleMap::branch_deriv)
      .def("inverse_branch", &ExpandingCircleMap::inverse_branch)
      .def_property_readonly("breakpoint", &ExpandingCircleMap::breakpoint)
      .def_property_readonly("lambda_", &ExpandingCircleMap::lambda)
      .def_property_readonly("sigma", &ExpandingCircleMap::sigma)
      .def_property_readonly("path",
                             [](const ExpandingCircleMap& f) { return f.provenance().path; })
      .def("orbit", [](const ExpandingCircleMap& f, double x, int n) { return iterate(f, x, n); });
  m.def("doubling_map", &doubling_map);
  m.def("linear_two_branch", &linear_two_branch);
  m.def("build_frho", &build_frho);
  m.def("build_F_omega_member", &build_F_omega_member, py::arg("omega"), py::arg("seed") = 1);
  m.def(
      "lebesgue_extend",
      [](std::function<double(double)> f1, std::function<double(double)> df1, double a) {
        return lebesgue_extend(FirstBranch{std::move(f1), std::move(df1), {}}, a);
      },
      py::arg("f1"), py::arg("df1"), py::arg("a") = 0.5);
  m.def("check_extension_condition", &check_extension_condition);
  m.def("certify_map", [](const ExpandingCircleMap& f) { return certify_map(f).passed(); });
  m.def("check_c1_circle", [](const ExpandingCircleMap& f, double tol) {
    const GluingReport g = check_c1_circle(f, tol);
    return py::make_tuple(g.passed, g.interior_residual, g.endpoint_residual);
  }, py::arg("f"), py::arg("tol") = 1e-8);

  m.def(
      "invariance_residual",
      [](const ExpandingCircleMap& f, const DensityProfile& rho, int n) {
        return invariance_residual(f, rho, n);
      },
      py::arg("f"), py::arg("rho"), py::arg("n") = 1 << 12);
  m.def(
      "lebesgue_residual",
      [](const ExpandingCircleMap& f, int n) {
        return invariance_residual(f, [](double) { return 1.0; }, n);
      },
      py::arg("f"), py::arg("n") = 1 << 12);
  m.def(
      "transfer_apply",
      [](const ExpandingCircleMap& f, std::vector<double> values) {
        return transfer_apply(f, GridFunction(std::move(values))).values();
      },
      "Transfer operator on nodal values at j/n, j = 0..n (n a power of two).");
  m.def(
      "birkhoff_average",
      [](const ExpandingCircleMap& f, std::function<double(double)> obs, double x0, int n,
         std::uint64_t seed) {
        BirkhoffOptions o;
        o.seed = seed;
        return birkhoff_average(f, obs, x0, n, o);
      },
      py::arg("f"), py::arg("observable"), py::arg("x0"), py::arg("n"), py::arg("seed") = 1);
  m.def(
      "crosscheck_system_S",
      [](const DensityProfile& rho, int n) { return crosscheck_system_S(rho, n).deviation; },
      py::arg("rho"), py::arg("n_steps") = 1 << 12);
  m.def(
      "crosscheck_lebesgue_ode",
      [](const ExpandingCircleMap& f, int n) { return crosscheck_lebesgue_ode(f, n).deviation; },
      py::arg("f"), py::arg("n_steps") = 1 << 12);
  m.def(
      "classify_distortion",
      [](const ExpandingCircleMap& f, const Modulus& w, int k_max) {
        return report_dict(classify_distortion(f, w, k_max));
      },
      py::arg("f"), py::arg("omega"), py::arg("k_max") = 20);
}
