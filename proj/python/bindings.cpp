#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "yaglom/catalog.hpp"
#include "yaglom/driver.hpp"
#include "yaglom/evaluate.hpp"
#include "yaglom/field_io.hpp"
#include "yaglom/parallel.hpp"
#include "yaglom/solver.hpp"
#include "yaglom/synth.hpp"
#include "yaglom/systems.hpp"

namespace py = pybind11;
using namespace yaglom;

namespace {

// numpy array shape (n, n, n), C order, interpreted as [z, y, x] so the
// contiguous axis matches the x-fastest field layout.
ScalarField scalar_from_array(const PeriodicGrid& g, py::array_t<double, py::array::c_style> a) {
  if (a.ndim() != 3 || a.shape(0) != g.n || a.shape(1) != g.n || a.shape(2) != g.n) {
    throw config_error("array must have shape (n, n, n)");
  }
  std::vector<double> data(a.data(), a.data() + g.size());
  return ScalarField(g, std::move(data));
}

py::array_t<double> to_array(const ScalarField& f) {
  const int n = f.grid().n;
  py::array_t<double> out({n, n, n});
  std::copy(f.data().begin(), f.data().end(), out.mutable_data());
  return out;
}

VectorField3 vector_from_array(const PeriodicGrid& g,
                               py::array_t<double, py::array::c_style> a) {
  if (a.ndim() != 4 || a.shape(0) != 3 || a.shape(1) != g.n || a.shape(2) != g.n ||
      a.shape(3) != g.n) {
    throw config_error("array must have shape (3, n, n, n)");
  }
  VectorField3 v(g);
  const double* p = a.data();
  for (int c = 0; c < 3; ++c) {
    std::copy(p + c * g.size(), p + (c + 1) * g.size(), v[c].data().begin());
  }
  return v;
}

py::array_t<double> to_array(const VectorField3& v) {
  const int n = v.grid().n;
  py::array_t<double> out({3, n, n, n});
  double* p = out.mutable_data();
  for (int c = 0; c < 3; ++c) {
    std::copy(v[c].data().begin(), v[c].data().end(), p + c * v.grid().size());
  }
  return out;
}

SymTensorField3 tensor_from_array(const PeriodicGrid& g,
                                  py::array_t<double, py::array::c_style> a) {
  if (a.ndim() != 4 || a.shape(0) != 6 || a.shape(1) != g.n || a.shape(2) != g.n ||
      a.shape(3) != g.n) {
    throw config_error("array must have shape (6, n, n, n)");
  }
  SymTensorField3 t(g);
  const double* p = a.data();
  for (int c = 0; c < 6; ++c) {
    std::copy(p + c * g.size(), p + (c + 1) * g.size(), t[c].data().begin());
  }
  return t;
}

py::array_t<double> to_array(const SymTensorField3& t) {
  const int n = t.grid().n;
  py::array_t<double> out({6, n, n, n});
  double* p = out.mutable_data();
  for (int c = 0; c < 6; ++c) {
    std::copy(t[c].data().begin(), t[c].data().end(), p + c * t.grid().size());
  }
  return out;
}

// Accepts {"name": array} with shapes (n,n,n), (3,n,n,n) or (6,n,n,n).
FieldSet fieldset_from_dict(const PeriodicGrid& g, const py::dict& slots, double alpha) {
  FieldSet fs(g, alpha);
  for (auto item : slots) {
    const std::string name = py::cast<std::string>(item.first);
    auto arr = py::cast<py::array_t<double, py::array::c_style | py::array::forcecast>>(
        item.second);
    if (arr.ndim() == 3) {
      fs.set(name, scalar_from_array(g, arr));
    } else if (arr.ndim() == 4 && arr.shape(0) == 3) {
      fs.set(name, vector_from_array(g, arr));
    } else if (arr.ndim() == 4 && arr.shape(0) == 6) {
      fs.set(name, tensor_from_array(g, arr));
    } else {
      throw config_error("slot '" + name + "': unsupported array shape");
    }
  }
  return fs;
}

py::dict report_to_dict(const LawReport& rep) {
  py::dict d;
  d["entry"] = rep.entry;
  d["d_extrapolated"] = rep.d_extrapolated;
  d["s_extrapolated"] = rep.s_extrapolated;
  d["ratio"] = rep.ratio;
  d["verdict"] = to_string(rep.verdict);
  d["d_fit_kind"] = to_string(rep.d_fit.kind);
  d["s_fit_kind"] = to_string(rep.s_fit.kind);
  d["notes"] = rep.notes;
  return d;
}

ShiftMethod method_of(const std::string& name) {
  if (name == "trilinear") return ShiftMethod::trilinear;
  if (name == "fourier_phase") return ShiftMethod::fourier_phase;
  throw config_error("unknown shift method: " + name);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Duchon-Robert dissipation functionals and Yaglom 4/3-law diagnostics "
            "on periodic 3D fields";

  py::register_exception<config_error>(m, "ConfigError");
  py::register_exception<io_error>(m, "IoError");
  py::register_exception<numerical_error>(m, "NumericalError");

  py::class_<PeriodicGrid>(m, "Grid")
      .def(py::init<int, double>(), py::arg("n"), py::arg("length") = 2.0 * std::numbers::pi)
      .def_readonly("n", &PeriodicGrid::n)
      .def_readonly("length", &PeriodicGrid::length)
      .def_property_readonly("spacing", &PeriodicGrid::spacing)
      .def_property_readonly("max_mode", &PeriodicGrid::max_mode)
      .def("__repr__", [](const PeriodicGrid& g) {
        return "Grid(n=" + std::to_string(g.n) + ", length=" + std::to_string(g.length) + ")";
      });

  m.def("set_threads", &par::set_thread_count,
        "Worker thread count; results are identical for every setting");

  // generators
  m.def(
      "gaussian_scalar",
      [](const PeriodicGrid& g, double slope, int k_min, int k_max, std::uint64_t seed,
         double amplitude) {
        return to_array(gaussian_scalar(g, {slope, k_min, k_max, seed, amplitude}));
      },
      py::arg("grid"), py::arg("slope") = 5.0 / 3.0, py::arg("k_min") = 1, py::arg("k_max") = 0,
      py::arg("seed") = 0, py::arg("amplitude") = 1.0);
  m.def(
      "gaussian_divfree",
      [](const PeriodicGrid& g, double slope, int k_min, int k_max, std::uint64_t seed,
         double amplitude) {
        return to_array(gaussian_divfree(g, {slope, k_min, k_max, seed, amplitude}));
      },
      py::arg("grid"), py::arg("slope") = 5.0 / 3.0, py::arg("k_min") = 1, py::arg("k_max") = 0,
      py::arg("seed") = 0, py::arg("amplitude") = 1.0);
  m.def(
      "abc_flow",
      [](const PeriodicGrid& g, double A, double B, double C) {
        return to_array(abc_flow(g, A, B, C));
      },
      py::arg("grid"), py::arg("A") = 1.0, py::arg("B") = 1.0, py::arg("C") = 1.0);
  m.def("taylor_green", [](const PeriodicGrid& g) { return to_array(taylor_green(g)); });
  m.def(
      "fractional_scalar",
      [](const PeriodicGrid& g, double holder, std::uint64_t seed) {
        return to_array(fractional_scalar(g, holder, seed));
      },
      py::arg("grid"), py::arg("holder"), py::arg("seed") = 0);
  m.def(
      "fractional_divfree",
      [](const PeriodicGrid& g, double holder, std::uint64_t seed) {
        return to_array(fractional_divfree(g, holder, seed));
      },
      py::arg("grid"), py::arg("holder"), py::arg("seed") = 0);

  // spectral operators
  m.def("spectral_derivative",
        [](const PeriodicGrid& g, py::array_t<double, py::array::c_style> f, int axis) {
          return to_array(spectral_derivative(scalar_from_array(g, f), axis));
        });
  m.def("divergence", [](const PeriodicGrid& g, py::array_t<double, py::array::c_style> v) {
    return to_array(divergence(vector_from_array(g, v)));
  });
  m.def("curl", [](const PeriodicGrid& g, py::array_t<double, py::array::c_style> v) {
    return to_array(curl(vector_from_array(g, v)));
  });
  m.def("project_divfree", [](const PeriodicGrid& g, py::array_t<double, py::array::c_style> v) {
    return to_array(project_divfree(vector_from_array(g, v)));
  });
  m.def("helmholtz_filter",
        [](const PeriodicGrid& g, py::array_t<double, py::array::c_style> v, double alpha) {
          return to_array(helmholtz_filter(vector_from_array(g, v), alpha));
        });
  m.def("strain", [](const PeriodicGrid& g, py::array_t<double, py::array::c_style> v) {
    return to_array(strain(vector_from_array(g, v)));
  });
  m.def("elsasser", [](const PeriodicGrid& g, py::array_t<double, py::array::c_style> v,
                       py::array_t<double, py::array::c_style> b) {
    auto [u, h] = elsasser(vector_from_array(g, v), vector_from_array(g, b));
    return py::make_tuple(to_array(u), to_array(h));
  });
  m.def(
      "pressure_poisson",
      [](const PeriodicGrid& g, py::array_t<double, py::array::c_style> v, py::object b) {
        VectorField3 vf = vector_from_array(g, v);
        if (b.is_none()) return to_array(pressure_poisson(vf));
        VectorField3 bf =
            vector_from_array(g, py::cast<py::array_t<double, py::array::c_style>>(b));
        return to_array(pressure_poisson(vf, &bf));
      },
      py::arg("grid"), py::arg("v"), py::arg("b") = py::none());

  // increments
  m.def(
      "shifted",
      [](const PeriodicGrid& g, py::array_t<double, py::array::c_style> f, Vec3 l,
         const std::string& method) {
        return to_array(shifted(scalar_from_array(g, f), l, method_of(method)));
      },
      py::arg("grid"), py::arg("f"), py::arg("l"), py::arg("method") = "fourier_phase");
  m.def(
      "increment",
      [](const PeriodicGrid& g, py::array_t<double, py::array::c_style> f, Vec3 l,
         const std::string& method) {
        return to_array(increment(scalar_from_array(g, f), l, method_of(method)));
      },
      py::arg("grid"), py::arg("f"), py::arg("l"), py::arg("method") = "fourier_phase");
  m.def("longitudinal",
        [](const PeriodicGrid& g, py::array_t<double, py::array::c_style> v, Vec3 l) {
          return to_array(longitudinal(vector_from_array(g, v), l));
        });

  m.def("catalog_ids", [] {
    std::vector<std::string> ids;
    for (const auto& e : catalog()) ids.push_back(e.id);
    return ids;
  });
  m.def("catalog_notes", [](const std::string& id) { return catalog_entry(id).notes; });

  // law machinery
  m.def(
      "structure_curve",
      [](const PeriodicGrid& g, const std::string& entry_id, const py::dict& slots,
         std::vector<double> lambdas, int sphere_count, double alpha) {
        FieldSet fs = fieldset_from_dict(g, slots, alpha);
        const auto& entry = catalog_entry(entry_id);
        resolve_slots(entry, fs);
        EntryEvaluator ev(entry, fs);
        StructureCurve c = ev.structure_curve(lambdas, sphere_rule(sphere_count));
        py::dict out;
        out["lambdas"] = c.lambdas;
        out["g"] = c.g;
        out["terms"] = c.term_breakdown;
        return out;
      },
      py::arg("grid"), py::arg("entry"), py::arg("slots"), py::arg("lambdas"),
      py::arg("sphere_count") = 48, py::arg("alpha") = 0.0);
  m.def(
      "dissipation_sweep",
      [](const PeriodicGrid& g, const std::string& entry_id, const py::dict& slots,
         std::vector<double> epsilons, int sphere_count, int radial_count, double alpha) {
        FieldSet fs = fieldset_from_dict(g, slots, alpha);
        const auto& entry = catalog_entry(entry_id);
        resolve_slots(entry, fs);
        EntryEvaluator ev(entry, fs);
        return ev.dissipation_sweep(epsilons, radial_count, sphere_rule(sphere_count),
                                    MollifierProfile::standard_bump());
      },
      py::arg("grid"), py::arg("entry"), py::arg("slots"), py::arg("epsilons"),
      py::arg("sphere_count") = 48, py::arg("radial_count") = 32, py::arg("alpha") = 0.0);
  m.def(
      "dissipation_field",
      [](const PeriodicGrid& g, const std::string& entry_id, const py::dict& slots, double eps,
         int sphere_count, int radial_count, double alpha) {
        FieldSet fs = fieldset_from_dict(g, slots, alpha);
        const auto& entry = catalog_entry(entry_id);
        resolve_slots(entry, fs);
        EntryEvaluator ev(entry, fs);
        BallQuadrature ball = ball_rule(radial_count, sphere_rule(sphere_count), eps);
        return to_array(ev.dissipation_direct(ball).values);
      },
      py::arg("grid"), py::arg("entry"), py::arg("slots"), py::arg("eps"),
      py::arg("sphere_count") = 48, py::arg("radial_count") = 32, py::arg("alpha") = 0.0);
  m.def("law_check", [](const std::string& entry_id, std::vector<double> lambdas,
                        std::vector<double> g_values,
                        std::vector<std::pair<double, double>> d_sweep) {
    StructureCurve c;
    c.entry = entry_id;
    c.lambdas = std::move(lambdas);
    c.g = std::move(g_values);
    c.term_breakdown.assign(c.g.size(), {});
    return report_to_dict(law_check(c, d_sweep));
  });

  // regularity
  m.def(
      "scaling_exponent",
      [](const PeriodicGrid& g, py::array_t<double, py::array::c_style> f, double p,
         std::vector<double> lambdas, int sphere_count) {
        RegularityEstimate est =
            f.ndim() == 3
                ? scaling_exponent(scalar_from_array(g, f), p, lambdas, sphere_rule(sphere_count))
                : scaling_exponent(vector_from_array(g, f), p, lambdas,
                                   sphere_rule(sphere_count));
        py::dict out;
        out["exponent"] = est.exponent;
        out["norm_order"] = est.norm_order;
        out["residual"] = est.residual;
        out["stderr_slope"] = est.stderr_slope;
        out["prefactor_trend"] = est.prefactor_trend;
        return out;
      },
      py::arg("grid"), py::arg("f"), py::arg("p"), py::arg("lambdas"),
      py::arg("sphere_count") = 32);
  m.def(
      "conservation_predictor",
      [](double alpha_exp, double beta_exp, double r1, double r2) {
        RegularityEstimate a, b;
        a.exponent = alpha_exp;
        b.exponent = beta_exp;
        ConservationPrediction p = conservation_predictor(a, b, r1, r2);
        py::dict out;
        out["conserved"] = p.conserved;
        out["combo"] = p.combo;
        out["note"] = p.note;
        return out;
      },
      py::arg("alpha"), py::arg("beta"), py::arg("r1") = 3.0, py::arg("r2") = 3.0);

  // solver
  m.def(
      "advect",
      [](const PeriodicGrid& g, py::array_t<double, py::array::c_style> v,
         py::array_t<double, py::array::c_style> theta0, double dt, int steps, int stride) {
        SnapshotSeries s =
            advect(vector_from_array(g, v), scalar_from_array(g, theta0), dt, steps, stride);
        py::list snaps;
        for (const auto& th : s.theta) snaps.append(to_array(th));
        py::dict out;
        out["times"] = s.times;
        out["theta"] = snaps;
        return out;
      },
      py::arg("grid"), py::arg("v"), py::arg("theta0"), py::arg("dt"), py::arg("steps"),
      py::arg("stride") = 1);

  // field files
  m.def("write_field", [](const std::string& path, const PeriodicGrid& g,
                          py::array_t<double, py::array::c_style> a) {
    if (a.ndim() == 3) {
      write_field(path, scalar_from_array(g, a));
    } else if (a.ndim() == 4 && a.shape(0) == 3) {
      write_field(path, vector_from_array(g, a));
    } else if (a.ndim() == 4 && a.shape(0) == 6) {
      write_field(path, tensor_from_array(g, a));
    } else {
      throw config_error("unsupported array shape for field file");
    }
  });
  m.def("read_field", [](const std::string& path) {
    LoadedField lf = read_field(path);
    py::dict out;
    out["n"] = lf.grid.n;
    out["length"] = lf.grid.length;
    out["ncomp"] = lf.ncomp;
    if (lf.ncomp == 1) out["data"] = to_array(lf.as_scalar());
    if (lf.ncomp == 3) out["data"] = to_array(lf.as_vector());
    if (lf.ncomp == 6) out["data"] = to_array(lf.as_tensor());
    return out;
  });

  m.attr("__version__") = kToolVersion;
}
