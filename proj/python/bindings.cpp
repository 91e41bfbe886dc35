// Python bindings. Exact rationals cross the boundary as "p/q" strings so
// nothing is ever rounded.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <utility>

#include "specbundle/cylinder.hpp"
#include "specbundle/duality.hpp"
#include "specbundle/ellis.hpp"
#include "specbundle/io.hpp"
#include "specbundle/koopman.hpp"
#include "specbundle/spectrum.hpp"
#include "specbundle/system.hpp"

namespace py = pybind11;
using namespace specbundle;

namespace {

using StrPair = std::pair<std::string, std::string>;

QFunction function_from_strings(const std::vector<StrPair>& values) {
  QFunction f;
  f.reserve(values.size());
  for (const auto& [re, im] : values)
    f.emplace_back(rat_from_string(re), rat_from_string(im));
  return f;
}

std::vector<StrPair> function_to_strings(const QFunction& f) {
  std::vector<StrPair> out;
  out.reserve(f.size());
  for (const auto& v : f)
    out.emplace_back(rat_to_string(v.re), rat_to_string(v.im));
  return out;
}

RationalMeasure measure_from_strings(const std::vector<std::string>& weights) {
  std::vector<Rat> w;
  w.reserve(weights.size());
  for (const auto& text : weights) w.push_back(rat_from_string(text));
  return RationalMeasure(std::move(w));
}

std::vector<std::string> measure_to_strings(const RationalMeasure& mu) {
  std::vector<std::string> out;
  out.reserve(mu.weights.size());
  for (const auto& w : mu.weights) out.push_back(rat_to_string(w));
  return out;
}

GroupRotationBundle rotation_from_pairs(
    const std::vector<std::pair<long, long>>& fibers) {
  GroupRotationBundle g;
  for (const auto& [order, step] : fibers) g.fibers.push_back({order, step});
  g.validate();
  return g;
}

std::vector<std::pair<long, long>> rotation_to_pairs(
    const GroupRotationBundle& g) {
  std::vector<std::pair<long, long>> out;
  for (const auto& f : g.fibers) out.emplace_back(f.order, f.step);
  return out;
}

}  // namespace

PYBIND11_MODULE(_specbundle, m) {
  m.doc() =
      "Exact structure theory of finite dynamical systems with discrete "
      "spectrum: Ellis semigroups, spectrum bundles, finite Pontryagin "
      "duality, and a floating-point cylinder harness.";

  py::register_exception<InvalidInput>(m, "InvalidInputError",
                                       PyExc_ValueError);
  py::register_exception<ParseError>(m, "DocumentParseError", PyExc_ValueError);
  py::register_exception<DiscreteSpectrumRequired>(
      m, "DiscreteSpectrumRequiredError", PyExc_ValueError);

  py::class_<FinSystem>(m, "FinSystem")
      .def(py::init<int, std::vector<int>>(), py::arg("n_states"),
           py::arg("transition"))
      .def(py::init([](const std::vector<int>& transition) {
             const int n = static_cast<int>(transition.size());
             return FinSystem(n, transition);
           }),
           py::arg("transition"))
      .def_readonly("n_states", &FinSystem::n_states)
      .def_readonly("transition", &FinSystem::transition)
      .def("__eq__", [](const FinSystem& a, const FinSystem& b) { return a == b; })
      .def("__repr__", [](const FinSystem& s) {
        std::string out = "FinSystem([";
        for (std::size_t i = 0; i < s.transition.size(); ++i)
          out += (i ? ", " : "") + std::to_string(s.transition[i]);
        return out + "])";
      });

  py::class_<FinBundle>(m, "FinBundle")
      .def(py::init<FinSystem, int, std::vector<int>>(), py::arg("system"),
           py::arg("n_base"), py::arg("proj"))
      .def_readonly("system", &FinBundle::system)
      .def_readonly("n_base", &FinBundle::n_base)
      .def_readonly("proj", &FinBundle::proj)
      .def("__eq__", [](const FinBundle& a, const FinBundle& b) { return a == b; });

  py::class_<IsoWitness>(m, "IsoWitness")
      .def_readonly("state_bijection", &IsoWitness::state_bijection)
      .def_readonly("base_bijection", &IsoWitness::base_bijection);

  py::class_<EllisSemigroup>(m, "EllisSemigroup")
      .def_readonly("elements", &EllisSemigroup::elements)
      .def_readonly("is_group", &EllisSemigroup::is_group)
      .def("order", &EllisSemigroup::order)
      .def("contains", &EllisSemigroup::contains);

  // Core structure.
  m.def("has_discrete_spectrum", &has_discrete_spectrum);
  m.def("is_minimal", &is_minimal);
  m.def("maximal_trivial_factor", &maximal_trivial_factor);
  m.def("canonical_section",
        [](const FinBundle& b) { return canonical_section(b).choice; });
  m.def("factor_from_partition", &factor_from_partition);
  m.def("fibers_minimal_check", &fibers_minimal_check);
  m.def("cycle_lcm", &cycle_lcm);
  m.def("ellis_semigroup", &ellis_semigroup);
  m.def("compose", &compose);

  // Koopman operator, exactly.
  m.def("koopman_apply", [](const FinSystem& s, const std::vector<StrPair>& f) {
    return function_to_strings(koopman_apply(s, function_from_strings(f)));
  });
  m.def("cesaro_mean",
        [](const FinSystem& s, const std::vector<StrPair>& f, long n) {
          return function_to_strings(cesaro_mean(s, function_from_strings(f), n));
        });
  m.def("mean_ergodic_projection",
        [](const FinSystem& s, const std::vector<StrPair>& f) {
          return function_to_strings(
              mean_ergodic_projection(s, function_from_strings(f)));
        });
  m.def("kronecker_dimension", &kronecker_dimension);

  // Spectrum bundles and the isomorphism decision.
  m.def("spectrum_bundle", [](const FinSystem& s) {
    std::vector<long> orders;
    for (const auto& fiber : spectrum_bundle(s).fibers)
      orders.push_back(fiber.order);
    return orders;
  });
  m.def("measured_spectrum_bundle",
        [](const FinSystem& s, const std::vector<std::string>& mu) {
          std::vector<std::pair<long, std::string>> out;
          for (const auto& fiber :
               measured_spectrum_bundle(s, measure_from_strings(mu)).fibers)
            out.emplace_back(fiber.spectrum.order, rat_to_string(fiber.weight));
          return out;
        });
  m.def("iso_systems", &iso_systems);
  m.def("iso_brute_force", &iso_brute_force, py::arg("s1"), py::arg("s2"),
        py::arg("max_states") = 8);
  m.def("markov_iso",
        [](const FinSystem& s1, const std::vector<std::string>& mu1,
           const FinSystem& s2, const std::vector<std::string>& mu2) {
          return markov_iso(s1, measure_from_strings(mu1), s2,
                            measure_from_strings(mu2));
        });
  m.def("verify_witness", &verify_witness);
  m.def("canonical_form", [](const FinSystem& s) {
    const auto result = canonical_form(s);
    return py::make_tuple(rotation_to_pairs(result.bundle), result.witness);
  });
  m.def("realize", [](const std::vector<long>& orders) {
    PointSpectrumBundle sigma;
    for (long order : orders) sigma.fibers.push_back(CyclicSpectrum(order));
    return rotation_to_pairs(realize(sigma).bundle);
  });
  m.def("rotation_bundle_as_system",
        [](const std::vector<std::pair<long, long>>& fibers) {
          return rotation_bundle_as_system(rotation_from_pairs(fibers));
        });

  // Finite Pontryagin duality. A dual bundle is [(order, iota "p/q")].
  m.def("dual_rotation_bundle",
        [](const std::vector<std::pair<long, long>>& fibers) {
          std::vector<std::pair<long, std::string>> out;
          for (const auto& f :
               dual_rotation_bundle(rotation_from_pairs(fibers)).fibers)
            out.emplace_back(f.group_order,
                             rat_to_string(make_rat(f.iota_value.num,
                                                    f.iota_value.den)));
          return out;
        });
  m.def("bidual_check", [](const std::vector<std::pair<long, long>>& fibers) {
    return bidual_check(rotation_from_pairs(fibers));
  });
  m.def("dual_of_trivial_product_check", &dual_of_trivial_product_check);

  // Measures.
  m.def("invariant_measure_basis", [](const FinBundle& b) {
    std::vector<std::vector<std::string>> out;
    for (const auto& mu : invariant_measure_basis(b))
      out.push_back(measure_to_strings(mu));
    return out;
  });
  m.def("disintegrate",
        [](const FinBundle& b, const std::vector<std::string>& mu) {
          return measure_to_strings(disintegrate(b, measure_from_strings(mu)));
        });

  // Documents (the CLI file formats).
  m.def("serialize_system", [](const FinSystem& s) { return serialize(s); });
  m.def("parse_system", [](const std::string& text) {
    const auto doc = parse_document(text);
    const auto* s = std::get_if<FinSystem>(&doc.payload);
    if (!s) throw InvalidInput("document is not a system");
    return *s;
  });

  // Cylinder harness (floating point).
  m.def("cesaro_cylinder",
        [](const std::string& alpha, const std::string& f, double theta,
           double t, long n) {
          return cylinder::cesaro_cylinder(cylinder::AlphaSpec::parse(alpha),
                                           cylinder::ObservableSpec::parse(f),
                                           theta, t, n);
        });
  m.def("mean_ergodicity_scan",
        [](const std::string& alpha, const std::string& f, int grid, long n,
           double tol) {
          const auto report = cylinder::mean_ergodicity_scan(
              cylinder::AlphaSpec::parse(alpha),
              cylinder::ObservableSpec::parse(f), grid, n, tol);
          py::list rows;
          for (const auto& row : report.rows) {
            py::dict d;
            d["t"] = row.t;
            d["ue_evidence"] = row.verdict.ue_evidence;
            d["gap"] = row.verdict.gap;
            rows.append(d);
          }
          py::dict out;
          out["rows"] = rows;
          out["n"] = report.n;
          out["mean_ergodic_evidence"] = report.mean_ergodic_evidence;
          out["max_gap"] = report.max_gap;
          return out;
        });
}
