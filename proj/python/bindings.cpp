#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "sqgfront/acceptance.hpp"
#include "sqgfront/evolution.hpp"
#include "sqgfront/paradiff.hpp"
#include "sqgfront/parallel.hpp"
#include "sqgfront/wavepacket.hpp"

namespace py = pybind11;
using namespace sqg;

namespace {

Field field_from_array(const GridSpec& g, py::array_t<double> values) {
  auto buf = values.request();
  if (buf.ndim != 1 || buf.shape[0] != g.num_points)
    throw std::invalid_argument("values must be 1-D with N entries");
  const double* p = static_cast<const double*>(buf.ptr);
  return Field(g, std::vector<double>(p, p + g.num_points));
}

py::array_t<double> to_array(const std::vector<double>& v) {
  return py::array_t<double>(py::buffer_info(
      const_cast<double*>(v.data()), sizeof(double),
      py::format_descriptor<double>::format(), 1,
      {static_cast<py::ssize_t>(v.size())},
      {static_cast<py::ssize_t>(sizeof(double))}));
}

py::array_t<cd> to_carray(const std::vector<cd>& v) {
  return py::array_t<cd>(py::buffer_info(
      const_cast<cd*>(v.data()), sizeof(cd),
      py::format_descriptor<cd>::format(), 1,
      {static_cast<py::ssize_t>(v.size())},
      {static_cast<py::ssize_t>(sizeof(cd))}));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "SQG front equation: pseudospectral evolution, paradifferential "
            "probes, and wave-packet scattering diagnostics";

  py::class_<GridSpec>(m, "Grid")
      .def_readonly("L", &GridSpec::half_length)
      .def_readonly("N", &GridSpec::num_points)
      .def_property_readonly("dx", &GridSpec::dx)
      .def_property_readonly("nyquist", &GridSpec::nyquist)
      .def("points",
           [](const GridSpec& g) {
             std::vector<double> x(g.num_points);
             for (int j = 0; j < g.num_points; ++j) x[j] = g.point(j);
             return to_array(x);
           })
      .def("wavenumbers",
           [](const GridSpec& g) {
             std::vector<double> xi(g.num_points);
             for (int m = 0; m < g.num_points; ++m) xi[m] = g.wavenumber(m);
             return to_array(xi);
           })
      .def("__repr__", [](const GridSpec& g) {
        return "Grid(L=" + std::to_string(g.half_length) +
               ", N=" + std::to_string(g.num_points) + ")";
      });

  py::class_<Field>(m, "Field")
      .def_property_readonly("grid", &Field::grid)
      .def("values", [](const Field& f) { return to_array(f.values()); })
      .def("spectrum", [](const Field& f) { return to_carray(f.spectrum()); })
      .def("l2_norm", &Field::l2_norm)
      .def("linf_norm", &Field::linf_norm);

  m.def("make_grid", &make_grid, py::arg("L"), py::arg("N"));
  m.def("field", &field_from_array, py::arg("grid"), py::arg("values"));
  m.def("set_num_threads", &set_num_threads);

  // spectral core
  m.def("spectral_shift", &spectral_shift, py::arg("f"), py::arg("y"));
  m.def("derivative", &derivative);
  m.def("log_derivative", [](const Field& f) {
    return apply_multiplier(f, mult_log_derivative(f.grid()));
  });
  m.def("lp_project",
        [](const Field& f, double lam) { return lp_project(f, lam); },
        py::arg("f"), py::arg("band"));
  m.def("dyadic_bands", &dyadic_bands);
  m.def("sobolev_norm", &sobolev_norm, py::arg("f"), py::arg("s"));
  m.def("y_norm", &y_norm, py::arg("f"), py::arg("delta"));
  m.def("x_norm", [](const Field& f, double t, double s) {
    XNormResult r = x_norm(f, t, s);
    return py::make_tuple(r.value, r.boundary_warning);
  });
  m.def("frequency_envelope", [](const Field& f, double s, double de) {
    FrequencyEnvelope env = frequency_envelope(f, s, de);
    return py::make_tuple(to_array(env.lambdas), to_array(env.values));
  });

  // front operator
  m.def("f_shape", &f_shape);
  m.def("f_shape_deriv", &f_shape_deriv);
  py::class_<QuadratureScheme>(m, "Quadrature")
      .def_readonly("y_max", &QuadratureScheme::y_max)
      .def_readonly("grading", &QuadratureScheme::grading)
      .def("nodes", [](const QuadratureScheme& q) { return to_array(q.nodes); })
      .def("weights",
           [](const QuadratureScheme& q) { return to_array(q.weights); });
  m.def("make_quadrature", &make_quadrature, py::arg("y_max"), py::arg("n_y"),
        py::arg("grading"));
  m.def("diff_quotient", &diff_quotient, py::arg("f"), py::arg("y"),
        py::arg("absolute") = false);
  m.def("apply_A", &apply_A, py::arg("phi"), py::arg("v"), py::arg("quad"));
  m.def("pv_unit_constant", []() { return pv_unit_constant().value; });
  m.def("b0_symbol", &b0_symbol, py::arg("phi"), py::arg("quad"));
  m.def("rhs", &rhs, py::arg("phi"), py::arg("quad"), py::arg("oversample") = 1);
  m.def("paralin_residual", &paralin_residual, py::arg("phi"), py::arg("v"),
        py::arg("quad"), py::arg("cutoff"));

  // paradifferential calculus
  py::class_<ParaCutoff>(m, "Cutoff")
      .def_readonly("M", &ParaCutoff::M)
      .def("chi", &ParaCutoff::chi)
      .def("highpass", &ParaCutoff::highpass);
  m.def("make_cutoff", &make_cutoff, py::arg("M"));
  m.def("apply_Ta", &apply_Ta, py::arg("a"), py::arg("u"), py::arg("cutoff"));
  m.def("operator_norm",
        [](const Field& a, const ParaCutoff& c) { return operator_norm(a, c); });
  m.def("choose_M",
        [](double R, double r, double s, const std::vector<Field>& samples) {
          ChooseMResult res = choose_M(R, r, s, samples);
          return py::make_tuple(res.success, res.M, res.achieved_norm);
        });
  m.def("modified_energy", &modified_energy, py::arg("phi"), py::arg("v"),
        py::arg("s"), py::arg("cutoff"));

  // evolution
  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("dt", &SolverConfig::dt)
      .def_readwrite("t_final", &SolverConfig::t_final)
      .def_readwrite("record_stride", &SolverConfig::record_stride)
      .def_readwrite("y_max", &SolverConfig::y_max)
      .def_readwrite("n_y", &SolverConfig::n_y)
      .def_readwrite("grading", &SolverConfig::grading)
      .def_readwrite("oversample", &SolverConfig::oversample)
      .def_readwrite("nonlinear", &SolverConfig::nonlinear)
      .def_readwrite("monitor_s", &SolverConfig::monitor_s)
      .def_readwrite("monitor_delta", &SolverConfig::monitor_delta);
  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("blew_up", &Trajectory::blew_up)
      .def("times",
           [](const Trajectory& t) {
             std::vector<double> out;
             for (const auto& [tt, f] : t.snapshots) out.push_back(tt);
             return to_array(out);
           })
      .def("snapshot",
           [](const Trajectory& t, std::size_t i) { return t.snapshots.at(i).second; })
      .def("monitors", [](const Trajectory& t) {
        py::dict d;
        std::vector<double> ts, mass, hs, y, x, rhs;
        for (const auto& m : t.monitors) {
          ts.push_back(m.t);
          mass.push_back(m.mass);
          hs.push_back(m.hs);
          y.push_back(m.y);
          x.push_back(m.x);
          rhs.push_back(m.rhs_norm);
        }
        d["t"] = to_array(ts);
        d["mass"] = to_array(mass);
        d["Hs"] = to_array(hs);
        d["Y"] = to_array(y);
        d["X"] = to_array(x);
        d["rhs_norm"] = to_array(rhs);
        return d;
      });
  m.def("evolve", &evolve, py::arg("phi0"), py::arg("config"));
  m.def("step_ifrk4", &step_ifrk4, py::arg("phi"), py::arg("t"),
        py::arg("config"));
  m.def("mass", &mass);
  m.def("scaling_transform", [](double t, const Field& f, double kappa) {
    auto [t2, g] = scaling_transform(t, f, kappa);
    return py::make_tuple(t2, g);
  });

  // wave packets and scattering
  m.def("dispersion_point", [](double v) {
    DispersionPoint p = dispersion_point(v);
    py::dict d;
    d["v"] = p.v;
    d["xi_v"] = p.xi_v;
    d["a"] = p.a_value;
    d["a_second"] = p.a_second;
    d["phase"] = p.phase;
    return d;
  });
  m.def("velocity_band", [](double lam, int count) {
    return velocity_band(lam).sample(count);
  });
  m.def("build_packet", [](double v, double t, const GridSpec& g) {
    return to_carray(build_packet(v, t, g).values);
  });
  m.def("gamma_profile",
        [](const Field& phi, double t, double lam, const std::vector<double>& vels) {
          ProfileRow row = gamma_profile(phi, t, lam, vels);
          return py::make_tuple(to_carray(row.gamma), row.admissible);
        });
  m.def("cubic_Q", &cubic_Q, py::arg("phi"), py::arg("quad"));
  m.def("q_constant", &q_constant, py::arg("xi"));
  m.def("fit_scattering",
        [](double lam, const std::vector<double>& times,
           const std::vector<double>& vels,
           const std::vector<std::vector<cd>>& gammas) {
          ProfileRecord rec;
          rec.lambda = lam;
          for (std::size_t i = 0; i < times.size(); ++i) {
            ProfileRow row;
            row.t = times[i];
            row.lambda = lam;
            row.velocities = vels;
            row.gamma = gammas.at(i);
            row.admissible.assign(vels.size(), true);
            rec.rows.push_back(row);
          }
          ScatteringFit fit = fit_scattering(rec);
          py::list out;
          for (const auto& r : fit.rows) {
            py::dict d;
            d["v"] = r.v;
            d["W"] = r.W;
            d["slope_fit"] = r.slope_fit;
            d["slope_pred"] = r.slope_pred;
            d["residual"] = r.residual;
            out.append(d);
          }
          return out;
        });

  m.def("run_quick_suite", []() {
    py::list out;
    for (const auto& r : run_quick_suite()) {
      py::dict d;
      d["id"] = r.id;
      d["name"] = r.name;
      d["pass"] = r.pass;
      d["detail"] = r.detail;
      out.append(d);
    }
    return out;
  });
}
