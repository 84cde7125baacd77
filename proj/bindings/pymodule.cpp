// Python bindings. Thin by design: rationals cross the boundary as int, str
// ("p/q" or a decimal literal), float or Fraction; unbounded integers as
// python int; reports as plain dicts mirroring the CLI JSON.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "ahm/config.hpp"
#include "ahm/errors.hpp"
#include "ahm/exact.hpp"
#include "ahm/harness.hpp"
#include "ahm/iterate.hpp"
#include "ahm/maps.hpp"
#include "ahm/rates.hpp"
#include "ahm/schedules.hpp"
#include "ahm/spaces.hpp"
#include "ahm/trace_io.hpp"
#include "ahm/verify.hpp"

namespace py = pybind11;
using namespace py::literals;

namespace {

py::int_ to_py(const ahm::BigInt& z) {
  PyObject* obj = PyLong_FromString(z.get_str().c_str(), nullptr, 10);
  if (!obj) throw py::error_already_set();
  return py::reinterpret_steal<py::int_>(obj);
}

ahm::BigInt bigint_arg(py::handle v) {
  return ahm::BigInt(py::str(v).cast<std::string>(), 10);
}

ahm::BigRat rat_arg(py::handle v) {
  if (py::isinstance<py::int_>(v)) return ahm::BigRat(bigint_arg(v));
  if (py::isinstance<py::float_>(v)) return ahm::rat_from_shortest_decimal(v.cast<double>());
  const std::string s = py::str(v).cast<std::string>();
  if (s.find('/') != std::string::npos) {
    ahm::BigRat r;
    if (mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0)
      throw ahm::ValidationError("not a rational: " + s);
    if (r.get_den() == 0) throw ahm::ValidationError("zero denominator: " + s);
    r.canonicalize();
    return r;
  }
  return ahm::rat_from_decimal(s);
}

py::object json_to_py(const nlohmann::json& j) {
  using nlohmann::json;
  switch (j.type()) {
    case json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case json::value_t::number_integer:
      return py::int_(j.get<std::int64_t>());
    case json::value_t::number_unsigned:
      return py::int_(j.get<std::uint64_t>());
    case json::value_t::number_float:
      return py::float_(j.get<double>());
    case json::value_t::string:
      return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (const auto& e : j) out.append(json_to_py(e));
      return out;
    }
    case json::value_t::object: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it) out[py::str(it.key())] = json_to_py(it.value());
      return out;
    }
    default:
      return py::none();
  }
}

nlohmann::json py_to_json(py::handle obj) {
  const std::string dumped =
      py::module_::import("json").attr("dumps")(obj).cast<std::string>();
  return nlohmann::json::parse(dumped);
}

ahm::Point point_arg(py::handle obj) {
  if (py::isinstance<py::dict>(obj)) {
    auto d = py::reinterpret_borrow<py::dict>(obj);
    ahm::SpiderCoord c;
    c.ray = d["ray"].cast<std::uint32_t>();
    c.radius = d["radius"].cast<double>();
    return c;
  }
  return obj.cast<std::vector<double>>();
}

py::object point_out(const ahm::Point& p) {
  if (const auto* v = std::get_if<std::vector<double>>(&p)) return py::cast(*v);
  const auto& c = std::get<ahm::SpiderCoord>(p);
  return py::dict("ray"_a = c.ray, "radius"_a = c.radius);
}

// Space handles cross the boundary inside a value wrapper so the shared_ptr-
// to-const alias never has to be a pybind holder type.
struct PySpace {
  ahm::SpacePtr ptr;
};

const char* status_str(ahm::CheckStatus s) {
  switch (s) {
    case ahm::CheckStatus::Verified:
      return "verified";
    case ahm::CheckStatus::Violated:
      return "violated";
    default:
      return "skipped_budget";
  }
}

const char* kind_str(ahm::ModulusKind k) {
  switch (k) {
    case ahm::ModulusKind::RateOfConvergence:
      return "convergence";
    case ahm::ModulusKind::RateOfDivergence:
      return "divergence";
    default:
      return "cauchy";
  }
}

ahm::ModulusKind kind_arg(const std::string& s) {
  if (s == "convergence") return ahm::ModulusKind::RateOfConvergence;
  if (s == "divergence") return ahm::ModulusKind::RateOfDivergence;
  if (s == "cauchy") return ahm::ModulusKind::CauchyModulus;
  throw ahm::ValidationError("unknown modulus kind \"" + s +
                             "\" (expected convergence, divergence or cauchy)");
}

ahm::Gamma3Route route_arg(const std::string& s) {
  if (s == "general") return ahm::Gamma3Route::GeneralEta;
  if (s == "tilde") return ahm::Gamma3Route::TildeEta;
  if (s == "cat0") return ahm::Gamma3Route::Cat0;
  throw ahm::ValidationError("unknown route \"" + s + "\" (expected general, tilde or cat0)");
}

ahm::Modulus modulus_arg(py::handle obj, ahm::ModulusKind kind, const std::string& label) {
  if (py::isinstance<ahm::Modulus>(obj)) return obj.cast<ahm::Modulus>();
  auto fn = obj.cast<py::function>();
  return ahm::Modulus(
      [fn](const ahm::BigInt& k) -> ahm::BigInt { return bigint_arg(fn(to_py(k))); }, kind,
      label);
}

py::dict modulus_report_py(const ahm::ModulusReport& r) {
  py::list hyps;
  for (const auto& h : r.hypotheses) {
    py::list entries;
    for (const auto& e : h.entries) {
      py::dict ed("k"_a = to_py(e.k), "status"_a = status_str(e.status));
      if (e.witness_n) {
        ed["witness_n"] = py::int_(*e.witness_n);
        ed["lhs"] = e.lhs;
        ed["rhs"] = e.rhs;
      }
      if (!e.note.empty()) ed["note"] = e.note;
      entries.append(std::move(ed));
    }
    hyps.append(py::dict("hypothesis"_a = h.hypothesis, "applicable"_a = h.applicable,
                         "verified"_a = h.n_verified, "violated"_a = h.n_violated,
                         "skipped"_a = h.n_skipped, "entries"_a = std::move(entries)));
  }
  return py::dict("budget"_a = r.budget, "passed"_a = r.passed(), "hypotheses"_a = std::move(hyps));
}

py::dict inequality_report_py(const ahm::InequalityReport& r) {
  py::list results;
  for (const auto& q : r.results) {
    py::dict d("name"_a = q.name, "passed"_a = q.passed, "checked"_a = q.checked,
               "worst_slack"_a = q.worst_slack);
    if (q.witness_n) d["witness_n"] = py::int_(*q.witness_n);
    results.append(std::move(d));
  }
  return py::dict("tol"_a = r.tol, "passed"_a = r.passed(), "results"_a = std::move(results));
}

ahm::AxiomCheckOptions ax_opts(std::uint64_t n_samples, std::uint64_t seed, double tol) {
  ahm::AxiomCheckOptions o;
  o.n_samples = n_samples;
  o.seed = seed;
  o.tol = tol;
  return o;
}

py::dict quadratic_py(const ahm::QuadraticRates& q) {
  return py::dict("Lambda"_a = to_py(q.Lambda), "Sigma3"_a = to_py(q.Sigma3),
                  "Theta"_a = to_py(q.Theta), "Sigma4"_a = to_py(q.Sigma4),
                  "Sigma5"_a = to_py(q.Sigma5));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Alternating Halpern/Mann iteration toolkit: W-hyperbolic spaces, nonexpansive "
            "maps, the alternating iteration and its exact rate certificates.";
  m.attr("__version__") = "0.1.0";

  auto base = py::register_exception<ahm::Error>(m, "AhmError", PyExc_RuntimeError);
  py::register_exception<ahm::StructuralError>(m, "StructuralError", base.ptr());
  py::register_exception<ahm::DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ahm::CapabilityError>(m, "CapabilityError", base.ptr());
  py::register_exception<ahm::ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ahm::ArithmeticFailure>(m, "ArithmeticFailure", base.ptr());

  // ---- spaces ----

  py::class_<PySpace>(m, "Space")
      .def_property_readonly("name", [](const PySpace& s) { return s.ptr->name(); })
      .def_property_readonly("is_cat0", [](const PySpace& s) { return s.ptr->is_cat0(); })
      .def_property_readonly("has_modulus", [](const PySpace& s) { return s.ptr->has_modulus(); })
      .def_property_readonly("vector_dim",
                             [](const PySpace& s) -> py::object {
                               if (auto d = s.ptr->vector_dim()) return py::int_(*d);
                               return py::none();
                             })
      .def_property_readonly("ray_count",
                             [](const PySpace& s) -> py::object {
                               if (auto r = s.ptr->ray_count()) return py::int_(*r);
                               return py::none();
                             })
      .def("dist",
           [](const PySpace& s, py::handle x, py::handle y) {
             return s.ptr->dist(point_arg(x), point_arg(y));
           })
      .def("comb",
           [](const PySpace& s, py::handle x, py::handle y, double lam) {
             return point_out(s.ptr->comb(point_arg(x), point_arg(y), lam));
           },
           "x"_a, "y"_a, "lam"_a)
      .def("modulus",
           [](const PySpace& s, double r, double eps) { return s.ptr->modulus(r, eps); })
      .def("modulus_tilde",
           [](const PySpace& s, double r, double eps) { return s.ptr->modulus_tilde(r, eps); })
      .def("origin", [](const PySpace& s) { return point_out(s.ptr->origin()); })
      .def("__repr__", [](const PySpace& s) { return "<Space " + s.ptr->name() + ">"; });

  m.def("euclidean", [](std::uint32_t dim) { return PySpace{ahm::make_euclidean(dim)}; }, "dim"_a);
  m.def("spider", [](std::uint32_t rays) { return PySpace{ahm::make_spider(rays)}; }, "rays"_a);
  m.def("lp", [](std::uint32_t dim, double p) { return PySpace{ahm::make_lp(dim, p)}; }, "dim"_a,
        "p"_a);
  m.def("broken_comb_space",
        [](std::uint32_t dim) { return PySpace{ahm::make_broken_comb_space(dim)}; }, "dim"_a);
  m.def("fake_modulus_space",
        [](std::uint32_t dim, double eta) { return PySpace{ahm::make_fake_modulus_space(dim, eta)}; },
        "dim"_a, "eta"_a);

  m.def(
      "check_w_axioms",
      [](const PySpace& s, std::uint64_t n_samples, std::uint64_t seed, double tol) {
        return json_to_py(ahm::check_w_axioms(*s.ptr, ax_opts(n_samples, seed, tol)).to_json());
      },
      "space"_a, py::kw_only(), "n_samples"_a = 2000, "seed"_a = 42, "tol"_a = 1e-9);
  m.def(
      "check_ucw_inequality",
      [](const PySpace& s, std::uint64_t n_samples, std::uint64_t seed, double tol) {
        return json_to_py(ahm::check_ucw_inequality(*s.ptr, ax_opts(n_samples, seed, tol)).to_json());
      },
      "space"_a, py::kw_only(), "n_samples"_a = 2000, "seed"_a = 42, "tol"_a = 1e-9);

  // ---- maps ----

  py::class_<ahm::Map>(m, "Map")
      .def("__call__", [](const ahm::Map& f, py::handle x) { return point_out(f(point_arg(x))); })
      .def_property_readonly("label", &ahm::Map::label)
      .def_property_readonly("space", [](const ahm::Map& f) { return PySpace{f.space()}; })
      .def_property_readonly("fixed_point",
                             [](const ahm::Map& f) -> py::object {
                               if (f.fixed_point()) return point_out(*f.fixed_point());
                               return py::none();
                             })
      .def("__repr__", [](const ahm::Map& f) { return "<Map " + f.label() + ">"; });

  m.def("identity", [](const PySpace& s) { return ahm::make_identity(s.ptr); }, "space"_a);
  m.def("constant",
        [](const PySpace& s, py::handle value) { return ahm::make_constant(s.ptr, point_arg(value)); },
        "space"_a, "value"_a);
  m.def("rotation2d",
        [](const PySpace& s, double angle) { return ahm::make_rotation2d(s.ptr, angle); }, "space"_a,
        "angle"_a);
  m.def("radial_scale",
        [](const PySpace& s, double lam, py::handle center) {
          return ahm::make_radial_scale(s.ptr, lam, point_arg(center));
        },
        "space"_a, "lam"_a, "center"_a);
  m.def("ray_permutation",
        [](const PySpace& s, std::vector<std::uint32_t> perm) {
          return ahm::make_ray_permutation(s.ptr, std::move(perm));
        },
        "space"_a, "perm"_a);
  m.def("projection_ball",
        [](const PySpace& s, py::handle center, double radius) {
          return ahm::make_projection_ball(s.ptr, point_arg(center), radius);
        },
        "space"_a, "center"_a, "radius"_a);
  m.def("reflection",
        [](const PySpace& s, py::handle center) {
          return ahm::make_reflection(s.ptr, point_arg(center));
        },
        "space"_a, "center"_a);
  m.def("compose", &ahm::make_compose, "f"_a, "g"_a);
  m.def("average", &ahm::make_average, "f"_a, "lam"_a);
  m.def("expansive_scale",
        [](const PySpace& s, double factor) { return ahm::make_expansive_scale(s.ptr, factor); },
        "space"_a, "factor"_a);

  m.def(
      "check_nonexpansive",
      [](const ahm::Map& f, std::uint64_t n_samples, std::uint64_t seed, double tol) {
        return json_to_py(ahm::check_nonexpansive(f, ax_opts(n_samples, seed, tol)).to_json());
      },
      "map"_a, py::kw_only(), "n_samples"_a = 2000, "seed"_a = 42, "tol"_a = 1e-9);

  // ---- schedules ----

  py::class_<ahm::Modulus>(m, "Modulus")
      .def(py::init([](py::function fn, const std::string& kind, const std::string& label,
                       bool nondecreasing) {
             return ahm::Modulus(
                 [fn](const ahm::BigInt& k) -> ahm::BigInt { return bigint_arg(fn(to_py(k))); },
                 kind_arg(kind), label, nondecreasing);
           }),
           "fn"_a, "kind"_a, "label"_a = "", py::kw_only(), "nondecreasing"_a = false)
      .def_static("from_table",
                  [](const std::vector<py::int_>& values, const std::string& kind,
                     const std::string& label) {
                    std::vector<ahm::BigInt> tab;
                    tab.reserve(values.size());
                    for (const auto& v : values) tab.push_back(bigint_arg(v));
                    return ahm::Modulus::from_table(std::move(tab), kind_arg(kind), label);
                  },
                  "values"_a, "kind"_a, "label"_a = "")
      .def("__call__", [](const ahm::Modulus& f, py::int_ k) { return to_py(f(bigint_arg(k))); })
      .def_property_readonly("kind", [](const ahm::Modulus& f) { return kind_str(f.kind()); })
      .def_property_readonly("label", &ahm::Modulus::label)
      .def_property_readonly("nondecreasing", &ahm::Modulus::nondecreasing)
      .def("__repr__",
           [](const ahm::Modulus& f) { return "<Modulus " + f.label() + ">"; });

  m.def("monotonize", &ahm::monotonize, "modulus"_a);

  py::class_<ahm::Schedule>(m, "Schedule")
      .def_readonly("label", &ahm::Schedule::label)
      .def("alpha", [](const ahm::Schedule& s, std::uint64_t n) { return s.alpha(n); }, "n"_a)
      .def("beta", [](const ahm::Schedule& s, std::uint64_t n) { return s.beta(n); }, "n"_a)
      .def("alpha_exact",
           [](const ahm::Schedule& s, std::uint64_t n) { return s.alpha_exact(n).get_str(); },
           "n"_a)
      .def("beta_exact",
           [](const ahm::Schedule& s, std::uint64_t n) { return s.beta_exact(n).get_str(); }, "n"_a)
      .def_property_readonly("lambda_cap",
                             [](const ahm::Schedule& s) -> py::object {
                               if (s.lambda_cap) return to_py(*s.lambda_cap);
                               return py::none();
                             })
      .def_property_readonly("sigma1",
                             [](const ahm::Schedule& s) -> py::object {
                               return s.sigma1 ? py::cast(*s.sigma1) : py::none();
                             })
      .def_property_readonly("sigma2",
                             [](const ahm::Schedule& s) -> py::object {
                               return s.sigma2 ? py::cast(*s.sigma2) : py::none();
                             })
      .def_property_readonly("sigma3",
                             [](const ahm::Schedule& s) -> py::object {
                               return s.sigma3 ? py::cast(*s.sigma3) : py::none();
                             })
      .def_property_readonly("sigma4",
                             [](const ahm::Schedule& s) -> py::object {
                               return s.sigma4 ? py::cast(*s.sigma4) : py::none();
                             })
      .def("__repr__", [](const ahm::Schedule& s) { return "<Schedule " + s.label + ">"; });

  m.def("canonical_linear_schedule",
        [](py::handle beta) { return ahm::canonical_linear_schedule(rat_arg(beta)); }, "beta"_a);
  m.def("harmonic_schedule",
        [](py::handle beta) { return ahm::harmonic_schedule(rat_arg(beta)); }, "beta"_a);

  m.def(
      "verify_moduli",
      [](const ahm::Schedule& s, std::uint64_t budget) {
        return modulus_report_py(ahm::verify_moduli(s, budget));
      },
      "schedule"_a, "budget"_a = 100000);

  // ---- iteration ----

  py::class_<ahm::Trace>(m, "Trace")
      .def_property_readonly("x",
                             [](const ahm::Trace& t) {
                               py::list out;
                               for (const auto& p : t.x) out.append(point_out(p));
                               return out;
                             })
      .def_property_readonly("y",
                             [](const ahm::Trace& t) {
                               py::list out;
                               for (const auto& p : t.y) out.append(point_out(p));
                               return out;
                             })
      .def_readonly("d_xx", &ahm::Trace::d_xx)
      .def_readonly("d_yy", &ahm::Trace::d_yy)
      .def_readonly("d_xy", &ahm::Trace::d_xy)
      .def_readonly("d_Tx", &ahm::Trace::d_Tx)
      .def_readonly("d_Ux", &ahm::Trace::d_Ux)
      .def_readonly("d_Ty", &ahm::Trace::d_Ty)
      .def_readonly("d_Uy", &ahm::Trace::d_Uy)
      .def_readonly("d_xp", &ahm::Trace::d_xp)
      .def_readonly("d_yp", &ahm::Trace::d_yp)
      .def_readonly("d_Txu", &ahm::Trace::d_Txu)
      .def_readonly("alpha", &ahm::Trace::alpha)
      .def_readonly("beta", &ahm::Trace::beta)
      .def_readonly("M_p", &ahm::Trace::M_p)
      .def_readonly("K", &ahm::Trace::K)
      .def_readonly("n_max", &ahm::Trace::n_max)
      .def_readonly("schedule_label", &ahm::Trace::schedule_label)
      .def_property_readonly("variant",
                             [](const ahm::Trace& t) { return ahm::variant_name(t.variant); })
      .def("__repr__", [](const ahm::Trace& t) {
        return "<Trace " + ahm::variant_name(t.variant) + " n_max=" + std::to_string(t.n_max) +
               ">";
      });

  m.def(
      "run_hm",
      [](const PySpace& space, const ahm::Map& T, const ahm::Map& U, py::handle u, py::handle x0,
         py::handle p, const ahm::Schedule& schedule, std::uint64_t n_max,
         std::optional<std::uint64_t> K, const std::string& variant, double tol) {
        ahm::IterationProblem pb;
        pb.space = space.ptr;
        pb.T = T;
        pb.U = U;
        pb.u = point_arg(u);
        pb.x0 = point_arg(x0);
        pb.p = point_arg(p);
        pb.schedule = schedule;
        pb.K_override = K;
        pb.validate(tol);
        return ahm::run_variant(ahm::variant_from_name(variant), pb, n_max);
      },
      "space"_a, "T"_a, "U"_a, "u"_a, "x0"_a, "p"_a, "schedule"_a, "n_max"_a, py::kw_only(),
      "K"_a = py::none(), "variant"_a = "general", "tol"_a = 1e-9);

  m.def(
      "check_trace_inequalities",
      [](const ahm::Trace& t, double tol) {
        return inequality_report_py(ahm::check_trace_inequalities(t, tol));
      },
      "trace"_a, "tol"_a = 1e-9);

  m.def("write_trace_csv", &ahm::write_trace_csv, "trace"_a, "path"_a);
  m.def("write_constants_json", &ahm::write_constants_json, "trace"_a, "name"_a, "path"_a);

  // ---- rates ----

  m.def(
      "linear_rates",
      [](py::int_ K, py::int_ k) {
        const auto r = ahm::linear_rates(bigint_arg(K), bigint_arg(k));
        return py::dict("Sigma1"_a = to_py(r.Sigma1), "Sigma2"_a = to_py(r.Sigma2));
      },
      "K"_a, "k"_a);
  m.def("lambda_from_beta", [](py::handle beta) { return to_py(ahm::lambda_from_beta(rat_arg(beta))); },
        "beta"_a);
  m.def(
      "quadratic_rates",
      [](py::int_ K, py::handle beta, py::int_ k) {
        return quadratic_py(ahm::quadratic_rates(bigint_arg(K), rat_arg(beta), bigint_arg(k)));
      },
      "K"_a, "beta"_a, "k"_a);
  m.def(
      "quadratic_rates_lambda",
      [](py::int_ K, py::int_ Lambda, py::int_ k) {
        return quadratic_py(
            ahm::quadratic_rates_lambda(bigint_arg(K), bigint_arg(Lambda), bigint_arg(k)));
      },
      "K"_a, "Lambda"_a, "k"_a);

  py::class_<ahm::RateContext>(m, "RateContext")
      .def_property_readonly("K", [](const ahm::RateContext& c) { return to_py(c.K); })
      .def_property_readonly("Lambda",
                             [](const ahm::RateContext& c) -> py::object {
                               if (c.Lambda) return to_py(*c.Lambda);
                               return py::none();
                             })
      .def_property(
          "delta",
          [](const ahm::RateContext& c) -> py::object {
            return c.delta ? py::cast(*c.delta) : py::none();
          },
          [](ahm::RateContext& c, const ahm::Modulus& d) { c.delta = d; });

  m.def(
      "rate_context",
      [](const ahm::Schedule& s, py::int_ K, std::optional<PySpace> space) {
        return ahm::make_rate_context(s, bigint_arg(K), space ? space->ptr : nullptr);
      },
      "schedule"_a, "K"_a, "space"_a = py::none());

  m.def("delta_from_sigma1", [](py::int_ K) { return ahm::delta_from_sigma1(bigint_arg(K)); },
        "K"_a);
  m.def("delta_from_gamma1", &ahm::delta_from_gamma1, "ctx"_a);

  m.def("chi", [](const ahm::RateContext& c, py::int_ k) { return to_py(ahm::chi(c, bigint_arg(k))); },
        "ctx"_a, "k"_a);
  m.def("gamma1",
        [](const ahm::RateContext& c, py::int_ k) { return to_py(ahm::gamma1(c, bigint_arg(k))); },
        "ctx"_a, "k"_a);
  m.def("gamma2",
        [](const ahm::RateContext& c, py::int_ k) { return to_py(ahm::gamma2(c, bigint_arg(k))); },
        "ctx"_a, "k"_a);

  m.def(
      "sharp_p",
      [](const ahm::RateContext& c, py::int_ k, const std::string& route) {
        return to_py(ahm::sharp_p(c, bigint_arg(k), route_arg(route)));
      },
      "ctx"_a, "k"_a, "route"_a = "general");
  m.def(
      "ucw_rates",
      [](const ahm::RateContext& c, py::int_ k, const std::string& route) {
        const auto r = ahm::ucw_rates(c, bigint_arg(k), route_arg(route));
        return py::dict("P"_a = to_py(r.P), "Gamma3"_a = to_py(r.Gamma3),
                        "Omega"_a = to_py(r.Omega), "Gamma4"_a = to_py(r.Gamma4),
                        "Gamma5"_a = to_py(r.Gamma5), "Gamma6"_a = to_py(r.Gamma6));
      },
      "ctx"_a, "k"_a, "route"_a = "general");
  m.def(
      "ucw_rates_tilde",
      [](const ahm::RateContext& c, py::int_ k) {
        const auto r = ahm::ucw_rates_tilde(c, bigint_arg(k));
        return py::dict("P_tilde"_a = to_py(r.P_tilde), "Gamma3_tilde"_a = to_py(r.Gamma3_tilde));
      },
      "ctx"_a, "k"_a);
  m.def(
      "cat0_rates",
      [](py::int_ K, py::int_ Lambda, const ahm::Modulus& delta, const ahm::Modulus& sigma1,
         py::int_ k) {
        const auto r =
            ahm::cat0_rates(bigint_arg(K), bigint_arg(Lambda), delta, sigma1, bigint_arg(k));
        return py::dict("P0"_a = to_py(r.P0), "Gamma0"_a = to_py(r.Gamma0));
      },
      "K"_a, "Lambda"_a, "delta"_a, "sigma1"_a, "k"_a);

  m.def(
      "qxu_rate",
      [](py::handle theta, py::handle chi_m, py::int_ L, py::int_ k) {
        return to_py(ahm::qxu_rate(modulus_arg(theta, ahm::ModulusKind::RateOfDivergence, "theta"),
                                   modulus_arg(chi_m, ahm::ModulusKind::CauchyModulus, "chi"),
                                   bigint_arg(L), bigint_arg(k)));
      },
      "theta"_a, "chi"_a, "L"_a, "k"_a);
  m.def("sabach_bound", &ahm::sabach_bound, "L"_a, "J"_a, "gamma"_a, "n"_a);

  m.def("ceil_ln", [](py::handle x) { return ahm::exact::ceil_ln(rat_arg(x)); }, "x"_a);
  m.def("ceil_exp", [](py::handle q) { return to_py(ahm::exact::ceil_exp(rat_arg(q))); }, "q"_a);

  // ---- verification ----

  py::class_<ahm::TraceView>(m, "TraceView")
      .def_static("from_trace", &ahm::TraceView::from_trace, "trace"_a)
      .def_property_readonly("n_max", [](const ahm::TraceView& v) { return v.n_max; })
      .def("seq",
           [](const ahm::TraceView& v, const std::string& q) {
             return v.seq(ahm::quantity_from_name(q));
           },
           "quantity"_a);

  m.def("read_trace_csv", &ahm::read_trace_csv, "path"_a);

  m.def(
      "check_rate",
      [](const ahm::TraceView& view, const std::string& quantity, py::function rate,
         const std::string& label, std::uint64_t k_max, double tol) {
        ahm::RateClaim claim;
        claim.quantity = ahm::quantity_from_name(quantity);
        claim.rate = [rate](const ahm::BigInt& k) -> ahm::BigInt {
          return bigint_arg(rate(to_py(k)));
        };
        claim.label = label.empty() ? quantity + " rate" : label;
        return json_to_py(ahm::check_rate(view, claim, k_max, tol).to_json());
      },
      "view"_a, "quantity"_a, "rate"_a, py::kw_only(), "label"_a = "", "k_max"_a = 100,
      "tol"_a = 1e-12);

  m.def(
      "check_pointwise_bound",
      [](const ahm::TraceView& view, const std::string& quantity,
         const std::function<double(std::uint64_t)>& bound, const std::string& label, double tol) {
        return json_to_py(
            ahm::check_pointwise_bound(view, ahm::quantity_from_name(quantity), bound, label, tol)
                .to_json());
      },
      "view"_a, "quantity"_a, "bound"_a, py::kw_only(), "label"_a = "pointwise bound",
      "tol"_a = 1e-12);

  m.def(
      "qxu_synthetic_check",
      [](const std::function<double(std::uint64_t)>& a,
         const std::function<double(std::uint64_t)>& c, double s0, py::handle theta,
         py::handle chi_m, py::int_ L, std::uint64_t k_max, std::uint64_t budget, double tol) {
        return json_to_py(
            ahm::qxu_synthetic_check(
                a, c, s0, modulus_arg(theta, ahm::ModulusKind::RateOfDivergence, "theta"),
                modulus_arg(chi_m, ahm::ModulusKind::CauchyModulus, "chi"), bigint_arg(L), k_max,
                budget, tol)
                .to_json());
      },
      "a"_a, "c"_a, "s0"_a, "theta"_a, "chi"_a, "L"_a, py::kw_only(), "k_max"_a = 10,
      "budget"_a = 100000, "tol"_a = 1e-12);

  m.def(
      "sabach_synthetic_check",
      [](double L, std::uint64_t N, std::uint64_t J, double gamma,
         const std::function<double(std::uint64_t)>& c, double s0, std::uint64_t budget,
         double tol) {
        return json_to_py(ahm::sabach_synthetic_check(L, N, J, gamma, c, s0, budget, tol).to_json());
      },
      "L"_a, "N"_a, "J"_a, "gamma"_a, "c"_a, "s0"_a, py::kw_only(), "budget"_a = 100000,
      "tol"_a = 1e-12);

  m.def(
      "cross_consistency_suite",
      [](std::uint64_t K_max, std::uint64_t Lambda_max, std::uint64_t k_max) {
        return json_to_py(ahm::cross_consistency_suite(K_max, Lambda_max, k_max).to_json());
      },
      "K_max"_a = 3, "Lambda_max"_a = 4, "k_max"_a = 20);

  // ---- configuration and the full battery ----

  py::class_<ahm::ExperimentConfig>(m, "Config")
      .def_static("load", &ahm::ExperimentConfig::load, "path"_a)
      .def_static("from_dict",
                  [](py::handle obj) { return ahm::ExperimentConfig::from_json(py_to_json(obj)); },
                  "data"_a)
      .def_readonly("name", &ahm::ExperimentConfig::name)
      .def_readonly("schedule_kind", &ahm::ExperimentConfig::schedule_kind)
      .def_property_readonly("space", [](const ahm::ExperimentConfig& c) { return PySpace{c.space}; })
      .def_property_readonly("variant",
                             [](const ahm::ExperimentConfig& c) { return ahm::variant_name(c.variant); })
      .def_readonly("schedule", &ahm::ExperimentConfig::schedule)
      .def_readwrite("n_max", &ahm::ExperimentConfig::n_max)
      .def_readwrite("k_max", &ahm::ExperimentConfig::k_max)
      .def_readwrite("budget", &ahm::ExperimentConfig::budget)
      .def_readwrite("tol", &ahm::ExperimentConfig::tol)
      .def_readwrite("seed", &ahm::ExperimentConfig::seed)
      .def("__repr__",
           [](const ahm::ExperimentConfig& c) { return "<Config " + c.name + ">"; });

  m.def(
      "run",
      [](const ahm::ExperimentConfig& cfg, std::optional<std::string> variant,
         std::optional<std::uint64_t> n_max) {
        auto pb = cfg.problem();
        pb.validate(cfg.tol);
        const ahm::Variant v = variant ? ahm::variant_from_name(*variant) : cfg.variant;
        return ahm::run_variant(v, pb, n_max.value_or(cfg.n_max));
      },
      "config"_a, py::kw_only(), "variant"_a = py::none(), "n_max"_a = py::none());

  m.def(
      "applicable_claims",
      [](const ahm::ExperimentConfig& cfg) {
        py::list out;
        for (const auto& c : ahm::applicable_claims(cfg))
          out.append(py::dict("quantity"_a = ahm::quantity_name(c.quantity), "label"_a = c.label));
        return out;
      },
      "config"_a);

  m.def(
      "verify_battery",
      [](const ahm::ExperimentConfig& cfg, const std::string& injection,
         std::optional<std::uint64_t> budget, std::optional<std::uint64_t> k_max,
         std::optional<double> tol, std::optional<std::uint64_t> seed,
         std::optional<std::string> import_csv, bool axiom_checks) {
        ahm::BatteryOptions opts;
        opts.budget = budget;
        opts.k_max = k_max;
        opts.tol = tol;
        opts.seed = seed;
        opts.injection = ahm::injection_from_name(injection);
        opts.run_axiom_checks = axiom_checks;
        ahm::TraceView imported;
        if (import_csv) {
          imported = ahm::read_trace_csv(*import_csv);
          opts.imported = &imported;
        }
        return json_to_py(ahm::run_verify_battery(cfg, opts).to_json());
      },
      "config"_a, py::kw_only(), "injection"_a = "none", "budget"_a = py::none(),
      "k_max"_a = py::none(), "tol"_a = py::none(), "seed"_a = py::none(),
      "import_csv"_a = py::none(), "axiom_checks"_a = true);
}
