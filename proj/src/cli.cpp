#include "ermm/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "ermm/combinatorics.hpp"
#include "ermm/diagrams.hpp"
#include "ermm/errors.hpp"
#include "ermm/graphsim.hpp"
#include "ermm/oracle.hpp"
#include "ermm/series.hpp"

namespace ermm::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string pass_text(const std::optional<bool>& p) {
  if (!p) return "";
  return *p ? "pass" : "fail";
}

}  // namespace

const std::set<std::string>& tag_registry() {
  static const std::set<std::string> tags = {
      "h-sequence",
      "tree-diagram-count",
      "psi-series",
      "rooted-color-trees",
      "unrooted-color-trees",
      "catalan",
      "walk-census",
      "limit-cumulant",
      "identity:h-fixed-point",
      "identity:psi-lagrange",
      "identity:psi-closed-form",
      "identity:d-closed-form",
      "identity:d-from-h",
      "identity:convolution",
      "identity:color-tree-closed-form",
      "identity:walk-census",
      "identity:free-partition",
      "identity:quartic-partition",
      "identity:moment-routes",
      "identity:laplacian-means",
      "identity:diagram-count",
      "identity:oriented-count",
      "identity:diagram-oracle",
      "normalized-cumulant",
      "clt:skewness",
      "clt:excess-kurtosis",
      "clt:ks-distance",
      "clt:standardized-cumulant",
      "free-energy",
      "free-energy:exp-correction",
      "free-energy:slope",
  };
  return tags;
}

void Report::add(ReportRow row) {
  if (!tag_registry().count(row.tag)) throw InvariantError("unregistered report tag '" + row.tag + "'");
  rows_.push_back(std::move(row));
}

const ReportRow* Report::first_failure() const {
  for (const auto& r : rows_)
    if (r.pass && !*r.pass) return &r;
  return nullptr;
}

std::string to_csv(const Report& report) {
  std::ostringstream os;
  os << "# command: " << report.command() << "\n";
  for (const auto& [k, v] : report.metadata()) os << "# " << k << ": " << v << "\n";
  os << "quantity,paper_ref,value,target,stderr,pass\n";
  for (const auto& r : report.rows())
    os << csv_field(r.quantity) << ',' << csv_field(r.tag) << ',' << csv_field(r.value) << ',' << csv_field(r.target)
       << ',' << csv_field(r.stderr_) << ',' << pass_text(r.pass) << "\n";
  return os.str();
}

std::string to_json(const Report& report) {
  nlohmann::ordered_json j;
  j["command"] = report.command();
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.metadata()) meta[k] = v;
  j["metadata"] = meta;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : report.rows()) {
    nlohmann::ordered_json row;
    row["quantity"] = r.quantity;
    row["paper_ref"] = r.tag;
    row["value"] = r.value;
    row["target"] = r.target;
    row["stderr"] = r.stderr_;
    row["pass"] = r.pass ? nlohmann::ordered_json(*r.pass) : nlohmann::ordered_json(nullptr);
    j["rows"].push_back(row);
  }
  return j.dump(2) + "\n";
}

namespace {

struct RunConfig {
  std::string model = "Y";
  unsigned q = 2;
  unsigned kmax = 4;
  std::string regime = "full";
  std::string p = "0.3";
  std::string c;
  double exponent = std::nan("");
  double scale = 1.0;
  std::string n = "1000";
  std::uint64_t samples = 2000;
  std::uint64_t seed = 7;
  unsigned order = 12;
  unsigned fe_order = 4;
  std::string format = "csv";
  std::string output;
  std::string plot;
  unsigned threads = 1;
  std::string suite = "all";
  std::string seq = "d";
  bool clt = false;
  std::string t = "0,0.1,0.2,0.3,0.4,0.5";
  std::string filter = "all";
  unsigned max_slots = 12;
  double tolerance = std::nan("");
  std::string dump_samples;
};

unsigned default_threads() {
  if (const char* env = std::getenv("ERMM_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw UsageError("ERMM_THREADS must be a positive integer");
  }
  return 1;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<std::uint32_t> parse_n_list(const std::string& text) {
  std::vector<std::uint32_t> out;
  for (const auto& item : split(text, ',')) {
    const Rational v = parse_rational(item);
    if (!is_integer(v) || v < 2 || v > 4000000000.0) throw UsageError("invalid n '" + item + "'");
    out.push_back(static_cast<std::uint32_t>(v.get_num().get_ui()));
  }
  if (out.empty()) throw UsageError("--n needs at least one value");
  return out;
}

Rational require_rational(const std::string& text, const std::string& name) {
  if (text.empty()) throw UsageError("--" + name + " is required for this regime");
  return parse_rational(text);
}

Regime regime_for_tables(const RunConfig& cfg) {
  const auto r = graphsim::parse_schedule_regime(cfg.regime);
  switch (r) {
    case graphsim::ScheduleRegime::kFull:
      return Regime::full(require_rational(cfg.p, "p"));
    case graphsim::ScheduleRegime::kDilute:
      return Regime::dilute();
    case graphsim::ScheduleRegime::kSparse:
      return Regime::sparse(require_rational(cfg.c, "c"));
    case graphsim::ScheduleRegime::kVerySparse:
      return Regime::very_sparse();
  }
  throw InvariantError("unreachable regime");
}

std::string limit_variable_text(const combinatorics::LimitValue& lv) {
  return lv.variable.empty() ? lv.value.to_string("c") : lv.value.to_string(lv.variable);
}

struct PlotData {
  std::string header;
  std::vector<std::string> lines;
};

// ---- tables ----

Report cmd_tables(const RunConfig& cfg, PlotData& plot) {
  Report rep("tables");
  rep.meta("seq", cfg.seq);
  rep.meta("kmax", std::to_string(cfg.kmax));
  const unsigned K = cfg.kmax;
  auto exact_row = [&](const std::string& quantity, const std::string& tag, const std::string& value, double x,
                       double y) {
    rep.add({quantity, tag, value, "", "", std::nullopt});
    plot.lines.push_back(fmt(x) + " " + fmt(y));
  };
  plot.header = "# index value";
  if (cfg.seq == "h") {
    rep.meta("q", std::to_string(cfg.q));
    const auto h = combinatorics::h_seq(cfg.q, K);
    for (unsigned k = 0; k <= K; ++k) exact_row("h_" + std::to_string(k), "h-sequence", to_string(h[k]), k, h[k].get_d());
  } else if (cfg.seq == "d") {
    rep.meta("q", std::to_string(cfg.q));
    const auto d = combinatorics::d_seq(cfg.q, K);
    for (unsigned k = 1; k <= K; ++k)
      exact_row("d_" + std::to_string(k), "tree-diagram-count", to_string(d[k - 1]), k, d[k - 1].get_d());
  } else if (cfg.seq == "psi") {
    rep.meta("q", std::to_string(cfg.q));
    if (cfg.q < 2) throw UsageError("psi needs q >= 2");
    const auto psi = series::pow(series::solve_h_series(cfg.q, K), cfg.q - 1).shifted();
    for (unsigned k = 1; k <= K; ++k)
      exact_row("psi_" + std::to_string(k), "psi-series", to_string(psi[k]), k, psi[k].get_d());
  } else if (cfg.seq == "rooted" || cfg.seq == "unrooted") {
    const auto t = combinatorics::rooted_tree_counts(K);
    if (cfg.seq == "rooted") {
      for (unsigned m = 0; m <= K; ++m)
        exact_row("T^_" + std::to_string(m), "rooted-color-trees", to_string(t.rooted[m]), m, t.rooted[m].get_d());
    } else {
      for (unsigned k = 1; k <= K; ++k)
        exact_row("T_" + std::to_string(k), "unrooted-color-trees", to_string(t.unrooted[k - 1]), k,
                  t.unrooted[k - 1].get_d());
    }
  } else if (cfg.seq == "catalan") {
    for (unsigned m = 0; m <= K; ++m) {
      const BigInt cm = combinatorics::catalan(m);
      exact_row("C_" + std::to_string(m), "catalan", to_string(cm), m, cm.get_d());
    }
  } else if (cfg.seq == "walk") {
    const auto census = combinatorics::walk_census_recurrence(K);
    plot.header = "# q r value_at_c=1";
    for (unsigned q = 1; q <= K; ++q)
      for (unsigned r = 0; r <= q; ++r) {
        const auto& poly = census.table[q][r];
        rep.add({"F_" + std::to_string(q) + "(" + std::to_string(r) + ")", "walk-census", poly.to_string("c"), "", "",
                 std::nullopt});
        plot.lines.push_back(std::to_string(q) + " " + std::to_string(r) + " " + fmt(poly.evaluate(1.0)));
      }
  } else if (cfg.seq == "limit") {
    const ModelKind model = parse_model(cfg.model);
    const Regime regime = regime_for_tables(cfg);
    rep.meta("model", cfg.model);
    rep.meta("q", std::to_string(cfg.q));
    rep.meta("regime", regime.name());
    for (unsigned k = 1; k <= K; ++k) {
      const auto lv = combinatorics::limit_cumulant(model, cfg.q, k, regime);
      rep.add({"F_" + std::to_string(k), "limit-cumulant", limit_variable_text(lv), "", "", std::nullopt});
      rep.meta("source_k" + std::to_string(k), lv.source);
      if (lv.variable.empty()) plot.lines.push_back(std::to_string(k) + " " + fmt(lv.value.evaluate(0.0)));
    }
  } else {
    throw UsageError("unknown sequence '" + cfg.seq + "'");
  }
  return rep;
}

// ---- verify ----

void check_row(Report& rep, const std::string& quantity, const std::string& tag, const std::string& value,
               const std::string& target, bool ok) {
  rep.add({quantity, tag, value, target, "", ok});
}

void verify_series(Report& rep, unsigned order) {
  for (unsigned q : {2u, 3u, 4u}) {
    const auto h = combinatorics::h_seq(q, order);
    std::function<series::RationalSeries(const series::RationalSeries&)> map = [q](const series::RationalSeries& H) {
      return series::exp((series::pow(H, q - 1) * Rational(q)).shifted());
    };
    const auto fixed = series::solve_fixed_point(map, order).solution;
    bool ok = true;
    for (unsigned k = 0; k <= order; ++k) ok = ok && fixed[k] == h[k];
    check_row(rep, "H fixed point q=" + std::to_string(q), "identity:h-fixed-point", ok ? "equal" : "differ", "equal",
              ok);
    {
      const long a = static_cast<long>(q * (q - 1));
      const auto inv = series::solve_lagrange(series::exp(series::RationalSeries::monomial(order, Rational(a), 1)));
      check_row(rep, "psi = z H^(q-1) q=" + std::to_string(q), "identity:psi-lagrange", "", "",
                inv == series::pow(fixed, q - 1).shifted());
      bool closed = true;
      for (unsigned k = 1; k <= order; ++k) {
        const Rational expect = Rational(ipow(BigInt(a), k - 1)) *
                                (k == 1 ? Rational(1) : Rational(ipow(BigInt(k), k - 2))) /
                                Rational(factorial(k - 1));
        closed = closed && inv[k] == expect;
      }
      check_row(rep, "psi closed form q=" + std::to_string(q), "identity:psi-closed-form", "", "", closed);
    }
    check_row(rep, "convolution q=" + std::to_string(q), "identity:convolution", "", "",
              combinatorics::convolution_identity_check(q, std::min(order, 10u)));
  }
  const auto d = combinatorics::d_seq(2, order);
  const auto h2 = combinatorics::h_seq(2, order);
  bool closed = true, from_h = true;
  for (unsigned k = 1; k <= order; ++k) {
    const BigInt expect = ipow(BigInt(2), k) * (k == 1 ? BigInt(1) : ipow(BigInt(k + 1), k - 2));
    closed = closed && (k == 1 ? d[0] == 1 : d[k - 1] == expect);
    from_h = from_h && Rational(d[k - 1]) == Rational(factorial(k)) / Rational(k + 1) * h2[k];
  }
  check_row(rep, "d^(2)_k = 2^k (k+1)^(k-2)", "identity:d-closed-form", "", "", closed);
  check_row(rep, "d^(2)_k = k!/(k+1) h_k", "identity:d-from-h", "", "", from_h);
  bool trees = true;
  try {
    const auto t = combinatorics::rooted_tree_counts(order);
    for (unsigned k = 1; k <= order; ++k) trees = trees && t.unrooted[k - 1] == d[k - 1];
  } catch (const InvariantError&) {
    trees = false;
  }
  check_row(rep, "color trees closed form and T_k = d_k", "identity:color-tree-closed-form", "", "", trees);
  bool walks = true;
  const auto census = combinatorics::walk_census_recurrence(std::min(order, 8u));
  for (unsigned q = 1; q <= std::min(order, 8u); ++q) {
    const auto brute = diagrams::brute_force_walk_census(q);
    for (unsigned r = 0; r <= q; ++r) walks = walks && brute.weighted[r] == census.table[q][r];
  }
  check_row(rep, "walk census recurrence vs enumeration", "identity:walk-census", "", "", walks);
}

void verify_oracle(Report& rep, unsigned n) {
  if (n > 6) throw ResourceError("oracle verification is limited to n <= 6");
  for (unsigned m = 1; m <= n; ++m)
    for (const Rational& x : {Rational(1), make_rational(1, 2), make_rational(1, 3)}) {
      const auto c = oracle::check_free_partition(m, x);
      check_row(rep, c.name + " x=" + to_string(x), "identity:free-partition", to_string(c.lhs), to_string(c.rhs),
                c.holds());
    }
  for (unsigned m = 3; m <= std::min(n, 5u); ++m)
    for (const auto& w : {oracle::ExactWeights(make_rational(1, 2), 2),
                          oracle::ExactWeights(make_rational(1, 3), make_rational(1, 2))}) {
      const auto c = oracle::check_quartic_identity(m, w);
      check_row(rep, c.name + " x=" + to_string(w.x) + " s=" + to_string(w.s), "identity:quartic-partition",
                to_string(c.lhs), to_string(c.rhs), c.holds());
    }
  const Rational p = make_rational(1, 3);
  for (auto model : {ModelKind::kX, ModelKind::kY})
    for (unsigned q = 1; q <= 3; ++q) {
      const unsigned mmax = std::max(1u, 8 / slots_per_element(model, q));
      const bool ok = oracle::exact_moments_enumeration(model, q, mmax, n, p) ==
                      oracle::exact_moments_tuples(model, q, mmax, n, p);
      check_row(rep, std::string("moment routes ") + model_letter(model) + " q=" + std::to_string(q),
                "identity:moment-routes", "", "", ok);
    }
  const auto means = oracle::laplacian_means(n, p);
  const Rational e2 = Rational(n * (n - 1)) * p;
  check_row(rep, "E Tr Delta", "identity:laplacian-means", to_string(means.tr_delta), to_string(e2),
            means.tr_delta == e2);
  const Rational y2 = oracle::exact_moments(ModelKind::kY, 2, 1, n, p)[0] + e2;
  check_row(rep, "E Tr Delta^2", "identity:laplacian-means", to_string(means.tr_delta2), to_string(y2),
            means.tr_delta2 == y2);
}

void verify_diagrams(Report& rep, unsigned q, unsigned kmax, unsigned max_slots) {
  const auto d = combinatorics::d_seq(q, kmax);
  for (unsigned k = 1; k <= kmax; ++k) {
    diagrams::EnumerationOptions opts;
    opts.filter = diagrams::Filter::kTreeArcs;
    opts.max_slots = max_slots;
    const auto res = diagrams::enumerate(ModelKind::kY, q, k, opts);
    check_row(rep, "tree diagrams k=" + std::to_string(k), "identity:diagram-count", std::to_string(res.unoriented_count),
              to_string(d[k - 1]), BigInt(std::to_string(res.unoriented_count)) == d[k - 1]);
    const BigInt oriented = d[k - 1] * ipow(BigInt(2), k - 1);
    check_row(rep, "oriented tree diagrams k=" + std::to_string(k), "identity:oriented-count",
              std::to_string(res.oriented_count), to_string(oriented),
              BigInt(std::to_string(res.oriented_count)) == oriented);
  }
  const Rational p = make_rational(1, 3);
  for (unsigned n : {4u, 5u})
    for (unsigned k : {1u, 2u}) {
      const Rational a = diagrams::cumulant_via_diagrams(ModelKind::kY, q, k, BigInt(n), p, max_slots);
      const Rational b = oracle::exact_cumulant(ModelKind::kY, q, k, n, p);
      check_row(rep, "Cum_" + std::to_string(k) + " n=" + std::to_string(n) + " p=1/3", "identity:diagram-oracle",
                to_string(a), to_string(b), a == b);
    }
}

Report cmd_verify(const RunConfig& cfg) {
  Report rep("verify");
  rep.meta("suite", cfg.suite);
  const bool all = cfg.suite == "all";
  if (!all && cfg.suite != "series" && cfg.suite != "oracle" && cfg.suite != "diagrams")
    throw UsageError("unknown suite '" + cfg.suite + "'");
  if (all || cfg.suite == "series") {
    rep.meta("order", std::to_string(cfg.order));
    verify_series(rep, cfg.order);
  }
  if (all || cfg.suite == "oracle") {
    const unsigned n = all ? 5 : static_cast<unsigned>(parse_n_list(cfg.n).front());
    rep.meta("oracle_n", std::to_string(n));
    verify_oracle(rep, n);
  }
  if (all || cfg.suite == "diagrams") {
    const unsigned kmax = all ? 3 : cfg.kmax;
    rep.meta("diagram_q", std::to_string(cfg.q));
    rep.meta("diagram_kmax", std::to_string(kmax));
    verify_diagrams(rep, cfg.q, kmax, cfg.max_slots);
  }
  return rep;
}

// ---- simulate ----

graphsim::RegimeSchedule make_schedule(const RunConfig& cfg) {
  const auto ns = parse_n_list(cfg.n);
  switch (graphsim::parse_schedule_regime(cfg.regime)) {
    case graphsim::ScheduleRegime::kFull:
      return graphsim::RegimeSchedule::full(require_rational(cfg.p, "p"), ns);
    case graphsim::ScheduleRegime::kDilute:
      if (!cfg.c.empty()) return graphsim::RegimeSchedule::dilute_fixed_c(parse_rational(cfg.c), ns);
      return graphsim::RegimeSchedule::dilute(ns, std::isnan(cfg.exponent) ? 0.5 : cfg.exponent);
    case graphsim::ScheduleRegime::kSparse:
      return graphsim::RegimeSchedule::sparse(require_rational(cfg.c, "c"), ns);
    case graphsim::ScheduleRegime::kVerySparse:
      return graphsim::RegimeSchedule::very_sparse(ns, cfg.scale, std::isnan(cfg.exponent) ? -0.25 : cfg.exponent);
  }
  throw InvariantError("unreachable regime");
}

std::string point_label(const graphsim::SchedulePoint& pt) {
  return "n=" + std::to_string(pt.n) + ";c=" + fmt(pt.c());
}

Report cmd_simulate(const RunConfig& cfg, PlotData& plot) {
  const ModelKind model = parse_model(cfg.model);
  const auto schedule = make_schedule(cfg);
  if (cfg.kmax < 1 || cfg.kmax > 6) throw UsageError("--k must be in 1..6");
  if (cfg.samples < cfg.kmax + 1) throw UsageError("--samples must be at least k + 1");
  Report rep(cfg.clt ? "simulate --clt" : "simulate");
  rep.meta("model", cfg.model);
  rep.meta("q", std::to_string(cfg.q));
  rep.meta("regime", graphsim::schedule_regime_name(schedule.regime));
  rep.meta("samples", std::to_string(cfg.samples));
  rep.meta("seed", std::to_string(cfg.seed));
  rep.meta("rng", "philox4x32-10");
  if (cfg.clt) {
    if (cfg.samples < 500) throw UsageError("--clt needs --samples >= 500");
    const bool gaussian = graphsim::gaussian_expected(model, cfg.q, schedule.regime);
    rep.meta("gaussian_expected", gaussian ? "true" : "false");
    plot.header = "# n skewness skewness_se excess_kurtosis excess_kurtosis_se ks_distance ks_critical";
    const auto reports = graphsim::clt_test(model, cfg.q, schedule, cfg.samples, cfg.seed, cfg.threads);
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      const std::string at = point_label(schedule.points[i]);
      auto verdict = [&](bool ok) { return gaussian ? std::optional<bool>(ok) : std::nullopt; };
      rep.add({"skewness[" + at + "]", "clt:skewness", fmt(r.skewness), "0", fmt(r.skewness_se), verdict(r.skewness_ok)});
      rep.add({"excess_kurtosis[" + at + "]", "clt:excess-kurtosis", fmt(r.excess_kurtosis), "0",
               fmt(r.excess_kurtosis_se), verdict(r.kurtosis_ok)});
      rep.add({"ks_distance[" + at + "]", "clt:ks-distance", fmt(r.ks_distance), fmt(r.ks_critical), "",
               verdict(r.ks_ok)});
      if (!gaussian)
        for (std::size_t j = 0; j < r.standardized_cumulants.size(); ++j)
          rep.add({"k" + std::to_string(j + 3) + "/k2^" + fmt((j + 3) / 2.0) + "[" + at + "]",
                   "clt:standardized-cumulant", fmt(r.standardized_cumulants[j]), "", "", std::nullopt});
      plot.lines.push_back(std::to_string(r.n) + " " + fmt(r.skewness) + " " + fmt(r.skewness_se) + " " +
                           fmt(r.excess_kurtosis) + " " + fmt(r.excess_kurtosis_se) + " " + fmt(r.ks_distance) + " " +
                           fmt(r.ks_critical));
    }
    return rep;
  }
  rep.meta("normalization", graphsim::normalization_label(model, cfg.q, schedule.regime));
  rep.meta("estimator", "k-statistics for k<=4; plug-in central-moment cumulants for k=5,6 (biased)");
  rep.meta("stderr", "batch means over 20 contiguous batches");
  if (!std::isnan(cfg.tolerance)) rep.meta("relative_tolerance", fmt(cfg.tolerance));
  if (!cfg.dump_samples.empty()) {
    std::ofstream dump(cfg.dump_samples);
    if (!dump) throw UsageError("cannot write " + cfg.dump_samples);
    for (const auto& pt : schedule.points) {
      const auto stats = graphsim::simulate(model, cfg.q, pt.n, pt.p.get_d(), cfg.samples, cfg.seed, 1, cfg.threads);
      for (const auto& v : stats.values()) dump << v.get_str() << "\n";
    }
  }
  plot.header = "# n c k estimate stderr target";
  const auto rows = graphsim::normalized_cumulant_run(model, cfg.q, cfg.kmax, schedule, cfg.samples, cfg.seed, cfg.threads);
  std::set<unsigned> sourced;
  for (const auto& r : rows) {
    std::optional<bool> pass;
    if (r.target && !std::isnan(cfg.tolerance)) pass = std::abs(r.estimate - *r.target) <= cfg.tolerance * std::abs(*r.target);
    rep.add({"cum_" + std::to_string(r.k) + "[n=" + std::to_string(r.n) + ";c=" + fmt(r.c) + "]", "normalized-cumulant",
             fmt(r.estimate), r.target ? fmt(*r.target) : "", fmt(r.standard_error), pass});
    if (r.target && sourced.insert(r.k).second) rep.meta("target_source_k" + std::to_string(r.k), r.target_source);
    plot.lines.push_back(std::to_string(r.n) + " " + fmt(r.c) + " " + std::to_string(r.k) + " " + fmt(r.estimate) +
                         " " + fmt(r.standard_error) + " " + (r.target ? fmt(*r.target) : "nan"));
  }
  return rep;
}

// ---- free energy ----

Report cmd_free_energy(const RunConfig& cfg, PlotData& plot) {
  const Regime regime = regime_for_tables(cfg);
  Report rep("free-energy");
  rep.meta("regime", regime.name());
  rep.meta("q", std::to_string(cfg.q));
  rep.meta("order", std::to_string(cfg.fe_order));
  plot.header = "# t value";
  for (const auto& item : split(cfg.t, ',')) {
    const Rational t = parse_rational(item);
    const auto fe = combinatorics::free_energy_truncation(regime, cfg.q, t, cfg.fe_order);
    rep.add({"f[t=" + item + "]", "free-energy", fmt(fe.value), "", "", std::nullopt});
    if (regime.is_sparse())
      rep.add({"exp_correction[t=" + item + "]", "free-energy:exp-correction", fmt(fe.value - fe.cumulant_part.get_d()),
               "", "", std::nullopt});
    plot.lines.push_back(fmt(t.get_d()) + " " + fmt(fe.value));
  }
  // d/dt at 0: F_1 plus, when sparse, the slope 1/c^{q-1} of the exponential term.
  const auto f1 = combinatorics::limit_cumulant(ModelKind::kY, cfg.q, 1, regime);
  Rational slope = f1.variable.empty() ? f1.value.evaluate(Rational(0)) : f1.value.evaluate(Rational(1) / regime.c());
  if (regime.is_sparse()) slope += Rational(1) / rpow(regime.c(), cfg.q - 1);
  std::string target;
  std::optional<bool> pass;
  if (regime.is_sparse() && cfg.q == 2) {
    const Rational expect = 1 + 2 / regime.c();
    target = to_string(expect);
    pass = slope == expect;
  }
  rep.add({"slope_at_t=0", "free-energy:slope", to_string(slope), target, "", pass});
  return rep;
}

// ---- dumps ----

int cmd_diagrams_dump(const RunConfig& cfg, std::ostream& out) {
  diagrams::EnumerationOptions opts;
  opts.filter = diagrams::parse_filter(cfg.filter);
  opts.max_slots = cfg.max_slots;
  opts.threads = cfg.threads;
  const auto res = diagrams::enumerate(parse_model(cfg.model), cfg.q, cfg.kmax, opts);
  out << "# model q k signature m nu arcs is_tree cycle_count\n";
  out << "# oriented_count: " << res.oriented_count << "\n";
  out << "# unoriented_count: " << res.unoriented_count << "\n";
  for (const auto& d : res.diagrams) out << d.dump_line() << "\n";
  return 0;
}

int cmd_oracle_dump(const RunConfig& cfg, std::ostream& out) {
  const auto n = parse_n_list(cfg.n).front();
  if (n > 5) throw ResourceError("oracle-dump is limited to n <= 5");
  out << "# q: " << cfg.q << "\n";
  out << "mask,edges,tr_delta,tr_delta2,x,y\n";
  oracle::for_each_graph(n, cfg.q, [&](const oracle::GraphRecord& r) {
    out << r.mask << ',' << r.edges << ',' << r.tr_delta << ',' << r.tr_delta2 << ',' << r.x << ',' << r.y << "\n";
  });
  return 0;
}

// ---- argument handling ----

// Turns a JSON config object into "--key value" tokens. Flags given on the
// command line come later and win.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("invalid JSON in " + path + ": " + e.what());
  }
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  std::vector<std::string> tokens;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = "--" + it.key();
    const auto& v = it.value();
    if (v.is_boolean()) {
      if (v.get<bool>()) tokens.push_back(key);
    } else if (v.is_array()) {
      std::string joined;
      for (const auto& e : v) joined += (joined.empty() ? "" : ",") + (e.is_string() ? e.get<std::string>() : e.dump());
      tokens.push_back(key);
      tokens.push_back(joined);
    } else {
      tokens.push_back(key);
      tokens.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    }
  }
  return tokens;
}

void add_common(CLI::App* app, RunConfig& cfg) {
  app->add_option("--config", "JSON config file; command-line flags take precedence");
  app->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--output,-o", cfg.output, "write the report here instead of stdout");
  app->add_option("--plot", cfg.plot, "write gnuplot-compatible data to this file");
  app->add_option("--threads", cfg.threads, "worker threads (default: ERMM_THREADS or 1)")->check(CLI::PositiveNumber);
}

void add_model(CLI::App* app, RunConfig& cfg) {
  app->add_option("--model", cfg.model, "X (closed walks) or Y (all walks)");
  app->add_option("--q", cfg.q, "walk length")->check(CLI::PositiveNumber);
}

void add_regime(CLI::App* app, RunConfig& cfg) {
  app->add_option("--regime", cfg.regime, "full, dilute, sparse or verysparse");
  app->add_option("--p", cfg.p, "edge probability (full regime)");
  app->add_option("--c", cfg.c, "mean degree (sparse regime; fixed c for dilute)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Exact and Monte Carlo tools for walk statistics of Erdos-Renyi graphs", "ermm"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto* tables = app.add_subcommand("tables", "exact combinatorial tables");
  add_common(tables, cfg);
  add_model(tables, cfg);
  add_regime(tables, cfg);
  tables->add_option("--seq", cfg.seq, "h, d, psi, rooted, unrooted, catalan, walk or limit");
  tables->add_option("--kmax", cfg.kmax, "largest index")->check(CLI::NonNegativeNumber);

  auto* verify = app.add_subcommand("verify", "cross-module identity suites");
  add_common(verify, cfg);
  verify->add_option("--suite", cfg.suite, "series, oracle, diagrams or all");
  verify->add_option("--order", cfg.order, "series truncation order")->check(CLI::Range(1u, 24u));
  verify->add_option("--n", cfg.n, "graph size for the oracle suite");
  verify->add_option("--q", cfg.q, "walk length for the diagram suite")->check(CLI::PositiveNumber);
  verify->add_option("--kmax", cfg.kmax, "largest k for the diagram suite")->check(CLI::PositiveNumber);
  verify->add_option("--max-slots", cfg.max_slots, "diagram enumeration guard");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo cumulants and CLT diagnostics");
  add_common(simulate, cfg);
  add_model(simulate, cfg);
  add_regime(simulate, cfg);
  simulate->add_option("--k,--kmax", cfg.kmax, "largest cumulant order (1..6)");
  simulate->add_option("--n", cfg.n, "comma-separated graph sizes; 1e5 style accepted");
  simulate->add_option("--exponent", cfg.exponent, "c_n = scale * n^exponent (dilute, verysparse)");
  simulate->add_option("--scale", cfg.scale, "prefactor of c_n (verysparse)");
  simulate->add_option("--samples,-M", cfg.samples, "samples per point")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", cfg.seed, "master seed");
  simulate->add_flag("--clt", cfg.clt, "report skewness, kurtosis and KS distance instead");
  simulate->add_option("--tolerance", cfg.tolerance, "relative tolerance for pass/fail against targets");
  simulate->add_option("--dump-samples", cfg.dump_samples, "write raw sample values, one per line");

  auto* free_energy = app.add_subcommand("free-energy", "truncated free energy of the Y model");
  add_common(free_energy, cfg);
  add_regime(free_energy, cfg);
  free_energy->add_option("--q", cfg.q, "walk length")->check(CLI::PositiveNumber);
  free_energy->add_option("--t", cfg.t, "comma-separated exact t values");
  free_energy->add_option("--order,--K", cfg.fe_order, "truncation order K");

  auto* ddump = app.add_subcommand("diagrams-dump", "list diagrams one per line");
  add_common(ddump, cfg);
  add_model(ddump, cfg);
  ddump->add_option("--k", cfg.kmax, "number of elements")->check(CLI::PositiveNumber);
  ddump->add_option("--filter", cfg.filter, "all, connected or tree");
  ddump->add_option("--max-slots", cfg.max_slots, "enumeration guard");

  auto* odump = app.add_subcommand("oracle-dump", "per-graph statistics for small n");
  add_common(odump, cfg);
  odump->add_option("--n", cfg.n, "graph size (<= 5)");
  odump->add_option("--q", cfg.q, "walk length for x and y")->check(CLI::PositiveNumber);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    cfg.threads = default_threads();
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string path;
      if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
      else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
      if (path.empty()) continue;
      const auto tokens = config_tokens(path);
      // Insert right after the subcommand name so later flags override.
      std::size_t at = 0;
      while (at < args.size() && args[at].rfind("-", 0) == 0) ++at;
      args.insert(args.begin() + static_cast<long>(std::min(at + 1, args.size())), tokens.begin(), tokens.end());
      break;
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    app.exit(e, out, err);
    return static_cast<int>(ExitCode::kUsage);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kUsage);
  }

  try {
    std::ostringstream body;
    PlotData plot;
    std::optional<Report> report;
    int code = 0;
    if (tables->parsed()) {
      report = cmd_tables(cfg, plot);
    } else if (verify->parsed()) {
      report = cmd_verify(cfg);
    } else if (simulate->parsed()) {
      report = cmd_simulate(cfg, plot);
    } else if (free_energy->parsed()) {
      report = cmd_free_energy(cfg, plot);
    } else if (ddump->parsed()) {
      code = cmd_diagrams_dump(cfg, body);
    } else {
      code = cmd_oracle_dump(cfg, body);
    }
    if (report) {
      report->meta("version", kVersion);
      body << (cfg.format == "json" ? to_json(*report) : to_csv(*report));
      if (const ReportRow* bad = report->first_failure()) {
        err << "failed: " << bad->quantity << " (" << bad->tag << ")\n";
        code = static_cast<int>(ExitCode::kVerificationFailure);
      }
    }
    if (!cfg.plot.empty()) {
      std::ofstream pf(cfg.plot);
      if (!pf) throw UsageError("cannot write " + cfg.plot);
      pf << plot.header << "\n";
      for (const auto& line : plot.lines) pf << line << "\n";
    }
    if (cfg.output.empty()) {
      out << body.str();
    } else {
      std::ofstream of(cfg.output);
      if (!of) throw UsageError("cannot write " + cfg.output);
      of << body.str();
    }
    return code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kUsage);
  } catch (const NotProvidedError& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kUsage);
  } catch (const ResourceError& e) {
    err << "refused: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kResource);
  } catch (const std::exception& e) {
    err << "failed: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kVerificationFailure);
  }
}

}  // namespace ermm::cli
