#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "sievelab/arith.hpp"
#include "sievelab/calibration.hpp"
#include "sievelab/correlations.hpp"
#include "sievelab/integrals.hpp"
#include "sievelab/kernels.hpp"
#include "sievelab/verify.hpp"

namespace py = pybind11;
using namespace sievelab;

namespace {

py::object fraction(const Rational& q) {
  static py::object Fraction = py::module_::import("fractions").attr("Fraction");
  return Fraction(to_string(q));
}

py::object number(const Number& v) {
  if (v.is_exact()) return fraction(v.exact());
  return py::float_(v.approx());
}

Rational rational_from(const py::handle& obj) {
  return parse_rational(py::str(obj).cast<std::string>());
}

KernelFamily family_from(const std::string& s) {
  if (s == "W") return KernelFamily::W;
  if (s == "S") return KernelFamily::S;
  throw py::value_error("kernel family must be 'W' or 'S'");
}

py::dict report_dict(const ResidualReport& r) {
  py::dict d;
  d["lemma"] = std::string(to_string(r.lemma));
  d["lhs"] = number(r.lhs);
  d["rhs_main"] = number(r.rhs_main);
  d["residual"] = number(r.residual);
  d["normalizer"] = number(r.normalizer);
  d["ratio"] = r.ratio;
  return d;
}

py::dict record_dict(const ExperimentRecord& r) {
  py::dict d;
  d["N"] = r.N;
  d["h"] = r.h;
  d["Q"] = r.Q;
  d["theta_eff"] = r.theta_eff;
  d["lambda_eff"] = r.lambda_eff;
  d["preset"] = std::string(to_string(r.preset));
  d["seed"] = r.seed ? py::object(py::int_(*r.seed)) : py::object(py::none());
  d["J"] = number(r.J);
  d["I"] = number(r.I);
  d["rep_L2"] = number(r.rep_L2);
  d["rep_L1"] = number(r.rep_L1);
  d["resid_L1"] = r.resid_L1;
  d["resid_L2"] = r.resid_L2;
  d["resid_THM"] = r.resid_THM;
  d["bound_main"] = py::int_(py::str(r.bound_main.get_str()));
  d["ratio_J"] = r.ratio_J;
  d["ratio_I"] = r.ratio_I;
  return d;
}

Number mean_for(const GFunction& g, std::int64_t h, Mode mode) {
  return mode == Mode::exact ? Number(mean_value(g, h)) : Number(mean_value_float(g, h));
}

}  // namespace

PYBIND11_MODULE(_sievelab, m) {
  m.doc() = "Sieve functions, short-interval integrals and correlation checks";

  py::class_<GFunction>(m, "GFunction")
      .def_property_readonly("support_bound", &GFunction::support_bound)
      .def_property_readonly("preset", [](const GFunction& g) { return std::string(to_string(g.preset())); })
      .def_property_readonly("seed", [](const GFunction& g) { return g.seed(); })
      .def("value", [](const GFunction& g, std::int64_t q) { return fraction(g.value(q)); })
      .def("values", [](const GFunction& g) {
        py::list out;
        for (std::int64_t q = 1; q <= g.support_bound(); ++q) out.append(fraction(g.value(q)));
        return out;
      });

  py::class_<SieveTable>(m, "SieveTable")
      .def_property_readonly("lo", &SieveTable::lo)
      .def_property_readonly("hi", &SieveTable::hi)
      .def_property_readonly("g", &SieveTable::g)
      .def("value", [](const SieveTable& f, std::int64_t n) {
        f.require(n, n, "SieveTable.value");
        return fraction(f.value(n));
      })
      .def("values", [](const SieveTable& f) {
        py::list out;
        for (std::int64_t n = f.lo(); n <= f.hi(); ++n) out.append(fraction(f.value(n)));
        return out;
      })
      .def("sup_norm", [](const SieveTable& f) { return fraction(f.sup_norm()); });

  m.def(
      "make_g",
      [](const std::string& preset, std::int64_t Q, std::optional<std::uint64_t> seed,
         py::object bound) {
        std::optional<Rational> b;
        if (!bound.is_none()) b = rational_from(bound);
        return make_g(parse_preset(preset), Q, seed, b);
      },
      py::arg("preset"), py::arg("Q"), py::arg("seed") = py::none(), py::arg("bound") = py::none());
  m.def(
      "g_from_values",
      [](const py::list& values) {
        std::vector<Rational> v;
        for (const auto& x : values) v.push_back(rational_from(x));
        return GFunction::from_values(v);
      },
      py::arg("values"));
  m.def("sieve", &sieve_f, py::arg("g"), py::arg("lo"), py::arg("hi"), py::arg("workers") = 1);
  m.def("mean_value", [](const GFunction& g, std::int64_t h) { return fraction(mean_value(g, h)); },
        py::arg("g"), py::arg("h"));
  m.def("dyadic_sum", [](const SieveTable& f, std::int64_t N) { return fraction(dyadic_sum(f, N)); },
        py::arg("f"), py::arg("N"));

  m.def("kernel_value",
        [](const std::string& family, std::int64_t h, std::int64_t a) {
          return kernel_value({family_from(family), h}, a);
        },
        py::arg("family"), py::arg("h"), py::arg("a"));
  m.def("sum_W_over_multiples",
        [](std::int64_t h, std::int64_t q) { return fraction(sum_W_over_multiples(h, q)); },
        py::arg("h"), py::arg("q"));
  m.def("fourier_W", &fourier_W, py::arg("h"), py::arg("beta"));
  m.def("fourier_W_scaled", &fourier_W_scaled, py::arg("h"), py::arg("ell"), py::arg("beta"));
  m.def("fejer_S", &fejer_S, py::arg("h"), py::arg("j"), py::arg("q"));
  m.def("cos_sum", &cos_sum, py::arg("X"), py::arg("theta"));
  m.def("sin_sum", &sin_sum, py::arg("X"), py::arg("theta"));
  m.def("dist_to_int", &dist_to_int, py::arg("r"));

  m.def(
      "selberg_integral",
      [](const SieveTable& f, std::int64_t N, std::int64_t h, const std::string& mode) {
        const Mode md = parse_mode(mode);
        return number(selberg_integral(f, N, h, mean_for(f.g(), h, md), md).value);
      },
      py::arg("f"), py::arg("N"), py::arg("h"), py::arg("mode") = "exact");
  m.def(
      "symmetry_integral",
      [](const SieveTable& f, std::int64_t N, std::int64_t h, const std::string& mode) {
        return number(symmetry_integral(f, N, h, parse_mode(mode)).value);
      },
      py::arg("f"), py::arg("N"), py::arg("h"), py::arg("mode") = "exact");

  m.def(
      "correlation",
      [](const SieveTable& f, std::int64_t N, std::int64_t a, const std::string& mode) {
        return number(correlation_direct(f, N, a, parse_mode(mode)));
      },
      py::arg("f"), py::arg("N"), py::arg("a"), py::arg("mode") = "exact");
  m.def("correlation_main_term",
        [](const GFunction& g, std::int64_t N, std::int64_t a) {
          return fraction(correlation_main_term(g, N, a));
        },
        py::arg("g"), py::arg("N"), py::arg("a"));
  m.def("remainder",
        [](const GFunction& g, const SieveTable& f, std::int64_t N, std::int64_t a) {
          return fraction(remainder_exact(g, f, N, a));
        },
        py::arg("g"), py::arg("f"), py::arg("N"), py::arg("a"));

  m.def(
      "check_lemma1",
      [](const SieveTable& f, std::int64_t N, std::int64_t h, const std::string& mode,
         std::size_t workers) { return report_dict(check_lemma1(f, N, h, parse_mode(mode), workers)); },
      py::arg("f"), py::arg("N"), py::arg("h"), py::arg("mode") = "exact", py::arg("workers") = 1);
  m.def(
      "check_lemma2",
      [](const SieveTable& f, std::int64_t N, std::int64_t h, const std::string& mode,
         std::size_t workers) { return report_dict(check_lemma2(f, N, h, parse_mode(mode), workers)); },
      py::arg("f"), py::arg("N"), py::arg("h"), py::arg("mode") = "exact", py::arg("workers") = 1);
  m.def(
      "check_theorem_I_rep",
      [](const SieveTable& f, std::int64_t N, std::int64_t h, const std::string& mode,
         std::size_t workers) {
        return report_dict(check_theorem_I_rep(f, N, h, parse_mode(mode), workers));
      },
      py::arg("f"), py::arg("N"), py::arg("h"), py::arg("mode") = "exact", py::arg("workers") = 1);

  m.def(
      "run_grid",
      [](const std::vector<std::int64_t>& n_list, double theta, double lambda_,
         const std::string& preset, std::optional<std::uint64_t> seed, const std::string& mode,
         std::size_t workers) {
        ExperimentConfig cfg;
        cfg.theta = theta;
        cfg.lambda = lambda_;
        cfg.preset = parse_preset(preset);
        cfg.seed = seed;
        cfg.n_list = n_list;
        cfg.mode = parse_mode(mode);
        cfg.workers = workers;
        py::list out;
        for (const auto& r : run_grid(cfg)) out.append(record_dict(r));
        return out;
      },
      py::arg("n_list"), py::arg("theta") = 0.5, py::arg("lambda_") = 0.6,
      py::arg("preset") = "ones", py::arg("seed") = py::none(), py::arg("mode") = "exact",
      py::arg("workers") = 1);

  m.attr("LEMMA1_RATIO_CAP") = kLemma1RatioCap;
  m.attr("LEMMA2_RATIO_CAP") = kLemma2RatioCap;
  m.attr("THEOREM_RATIO_CAP") = kTheoremRatioCap;
}
