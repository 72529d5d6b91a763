#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "ermm/cli.hpp"
#include "ermm/combinatorics.hpp"
#include "ermm/diagrams.hpp"
#include "ermm/errors.hpp"
#include "ermm/graphsim.hpp"
#include "ermm/oracle.hpp"

namespace py = pybind11;
using namespace ermm;
using namespace ermm::combinatorics;
using namespace ermm::graphsim;

namespace {

// Exact values cross the boundary as fractions.Fraction; no doubles.
py::object to_fraction(const Rational& r) {
  static py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(py::int_(py::str(r.get_num().get_str())), py::int_(py::str(r.get_den().get_str())));
}

py::int_ to_int(const BigInt& z) { return py::int_(py::str(z.get_str())); }

// Accepts int, Fraction or a string such as "1/3".
Rational to_rational(const py::handle& h) { return parse_rational(py::str(h).cast<std::string>()); }

Regime make_regime(const std::string& name, const py::object& p, const py::object& c) {
  if (name == "full") return Regime::full(to_rational(p));
  if (name == "dilute") return Regime::dilute();
  if (name == "sparse") return Regime::sparse(to_rational(c));
  if (name == "very-sparse") return Regime::very_sparse();
  throw UsageError("unknown regime: " + name);
}

}  // namespace

PYBIND11_MODULE(_ermm, m) {
  m.doc() = "Exact and Monte Carlo walk statistics of Erdos-Renyi graphs";

  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);
  py::register_exception<NotProvidedError>(m, "NotProvidedError", PyExc_RuntimeError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_AssertionError);

  m.def(
      "h_seq",
      [](unsigned q, unsigned kmax) {
        py::list out;
        for (const auto& v : h_seq(q, kmax)) out.append(to_fraction(v));
        return out;
      },
      py::arg("q"), py::arg("kmax"));
  m.def(
      "d_seq",
      [](unsigned q, unsigned kmax) {
        py::list out;
        for (const auto& v : d_seq(q, kmax)) out.append(to_int(v));
        return out;
      },
      py::arg("q"), py::arg("kmax"));
  m.def("catalan", [](unsigned k) { return to_int(catalan(k)); }, py::arg("k"));

  m.def(
      "limit_cumulant",
      [](const std::string& model, unsigned q, unsigned k, const std::string& regime, py::object p, py::object c) {
        const auto v = limit_cumulant(parse_model(model), q, k, make_regime(regime, p, c));
        py::dict out;
        out["value"] = v.value.to_string(v.variable.empty() ? "c" : v.variable);
        out["variable"] = v.variable;
        out["source"] = v.source;
        if (v.variable.empty()) out["exact"] = to_fraction(v.value.evaluate(Rational(0)));
        return out;
      },
      py::arg("model"), py::arg("q"), py::arg("k"), py::arg("regime"), py::arg("p") = py::none(),
      py::arg("c") = py::none());

  m.def(
      "cumulant_via_diagrams",
      [](const std::string& model, unsigned q, unsigned k, const py::object& n, const py::object& p) {
        return to_fraction(diagrams::cumulant_via_diagrams(parse_model(model), q, k,
                                                           BigInt(py::str(n).cast<std::string>()), to_rational(p)));
      },
      py::arg("model"), py::arg("q"), py::arg("k"), py::arg("n"), py::arg("p"));
  m.def(
      "diagram_counts",
      [](const std::string& model, unsigned q, unsigned k, const std::string& filter) {
        diagrams::EnumerationOptions options;
        options.filter = diagrams::parse_filter(filter);
        const auto r = diagrams::enumerate(parse_model(model), q, k, options);
        return py::make_tuple(r.oriented_count, r.unoriented_count);
      },
      py::arg("model"), py::arg("q"), py::arg("k"), py::arg("filter") = "all");

  m.def(
      "exact_cumulant",
      [](const std::string& model, unsigned q, unsigned k, unsigned n, const py::object& p, unsigned threads) {
        return to_fraction(oracle::exact_cumulant(parse_model(model), q, k, n, to_rational(p), threads));
      },
      py::arg("model"), py::arg("q"), py::arg("k"), py::arg("n"), py::arg("p"), py::arg("threads") = 1);
  m.def(
      "quartic_identity",
      [](unsigned n, const py::object& x, const py::object& s) {
        const auto r = oracle::check_quartic_identity(n, oracle::ExactWeights(to_rational(x), to_rational(s)));
        return py::make_tuple(to_fraction(r.lhs), to_fraction(r.rhs));
      },
      py::arg("n"), py::arg("x"), py::arg("s"));

  m.def(
      "walk_stat",
      [](std::uint32_t n, std::vector<std::pair<std::uint32_t, std::uint32_t>> edges, unsigned q,
         const std::string& model) {
        return to_int(walk_stats(AdjacencyMatrix::from_edges(n, std::move(edges)), q, parse_model(model)));
      },
      py::arg("n"), py::arg("edges"), py::arg("q"), py::arg("model"));
  m.def(
      "sample_edges",
      [](std::uint32_t n, double p, std::uint64_t seed, std::uint64_t index) {
        return sample_er(n, p, seed, index).edges();
      },
      py::arg("n"), py::arg("p"), py::arg("seed"), py::arg("index") = 0);
  m.def(
      "simulate",
      [](const std::string& model, unsigned q, std::uint32_t n, double p, std::uint64_t samples, std::uint64_t seed,
         unsigned kmax, unsigned threads) {
        std::optional<SampleStats> result;
        {
          py::gil_scoped_release release;
          result.emplace(simulate(parse_model(model), q, n, p, samples, seed, kmax, threads));
        }
        const SampleStats& stats = *result;
        py::list values, cumulants;
        for (const auto& v : stats.values()) values.append(to_int(v));
        for (const auto& e : estimate_cumulants(stats, kmax))
          cumulants.append(py::make_tuple(e.k, e.estimate, e.standard_error));
        py::dict out;
        out["values"] = values;
        out["cumulants"] = cumulants;
        return out;
      },
      py::arg("model"), py::arg("q"), py::arg("n"), py::arg("p"), py::arg("samples"), py::arg("seed"),
      py::arg("kmax") = 2, py::arg("threads") = 1);

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        std::vector<const char*> argv{"ermm"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
