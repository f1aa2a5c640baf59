#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "proxygrade/axiom_checker.hpp"
#include "proxygrade/cli.hpp"
#include "proxygrade/cli_io.hpp"
#include "proxygrade/errors.hpp"
#include "proxygrade/order_stats.hpp"
#include "proxygrade/phantom_proxy.hpp"
#include "proxygrade/ranking.hpp"

namespace py = pybind11;
using namespace proxygrade;

namespace {

py::object fraction(const Rational& r) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(r.numerator(), r.denominator());
}

py::object maybe_fraction(const std::optional<Rational>& r) {
  return r ? fraction(*r) : py::none();
}

Rational from_py(const py::handle& h) {
  return parse_rational(py::str(h).cast<std::string>());
}

SelectorFn selector_named(const std::string& name) {
  if (name == "lower_median") return SelectorFn::lower_median();
  if (name == "upper_median") return SelectorFn::upper_median();
  if (name == "min") return SelectorFn::min();
  if (name == "max") return SelectorFn::max();
  throw Error(ErrorCode::InvalidArgument, "unknown selector '" + name + "'");
}

Subject subject_of(const std::string& aggregator, const std::optional<std::string>& mechanism,
                   const ElectionShape& shape) {
  if (mechanism) return Subject::of(parse_mechanism(*mechanism, shape).mechanism);
  if (aggregator == "mean") return mean_aggregator();
  if (aggregator == "trimmed_mean") return trimmed_mean_aggregator();
  if (aggregator == "majority_grade")
    return Subject::of(majority_grade_mechanism(shape.voters.size(), shape.candidates.size()),
                       "majority_grade");
  throw Error(ErrorCode::InvalidArgument, "unknown aggregator '" + aggregator + "'");
}

}  // namespace

PYBIND11_MODULE(_proxygrade, m) {
  m.doc() = "Exact grading, ranking and axiom checking with phantom proxies";

  static py::exception<Error> exc(m, "ProxygradeError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(exc, (std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  py::class_<Profile>(m, "Election")
      .def_property_readonly("voters", [](const Profile& p) { return p.shape().voters; })
      .def_property_readonly("candidates", [](const Profile& p) { return p.shape().candidates; })
      .def_property_readonly("labels", [](const Profile& p) { return p.scale().labels(); })
      .def("render", &render_election)
      .def("__eq__", [](const Profile& a, const Profile& b) { return a == b; });

  m.def("parse_election", [](const std::string& text) { return parse_election(text); });

  m.def(
      "grade",
      [](const Profile& election, const std::string& mechanism) {
        auto spec = parse_mechanism(mechanism, election.shape());
        auto result = grade(spec.mechanism, election);
        py::dict out;
        for (CandidateIndex c = 0; c < election.candidate_count(); ++c)
          out[py::str(election.shape().candidates[c])] =
              maybe_fraction(result.candidates[c].grade);
        return out;
      },
      py::arg("election"), py::arg("mechanism") = "{}");

  m.def(
      "rank",
      [](const Profile& election, const std::string& mechanism, bool reinforce_absentees) {
        auto spec = parse_mechanism(mechanism, election.shape());
        auto outcome =
            rank(spec.mechanism, election, reinforce_absentees || spec.reinforce_absentees);
        std::vector<std::vector<std::string>> tiers;
        for (const auto& tier : outcome.tiers) {
          auto& names = tiers.emplace_back();
          for (auto c : tier) names.push_back(election.shape().candidates[c]);
        }
        return tiers;
      },
      py::arg("election"), py::arg("mechanism") = "{}", py::arg("reinforce_absentees") = false);

  m.def(
      "select",
      [](const std::string& selector, const std::vector<py::object>& values) {
        std::vector<Rational> rs;
        for (const auto& v : values) rs.push_back(from_py(v));
        return fraction(select(selector_named(selector), RationalMultiset(std::move(rs))));
      },
      py::arg("selector"), py::arg("values"));

  m.def(
      "check",
      [](const std::string& axiom, const std::string& space,
         const std::string& aggregator, const std::optional<std::string>& mechanism) {
        auto s = parse_space(space);
        auto verdict = check_axiom(axiom, subject_of(aggregator, mechanism, *s.shape()), s);
        py::dict out;
        out["axiom"] = verdict.axiom;
        out["holds"] = verdict.holds;
        out["detail"] = verdict.detail;
        out["evaluations"] = verdict.evaluations;
        out["instances"] = verdict.instances;
        return out;
      },
      py::arg("axiom"), py::arg("space"), py::arg("aggregator") = "majority_grade",
      py::arg("mechanism") = py::none());

  m.def("axiom_names", &axiom_names);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"proxygrade"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
