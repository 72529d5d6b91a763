#include "ermm/graphsim.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "ermm/combinatorics.hpp"
#include "ermm/errors.hpp"
#include "ermm/philox.hpp"

namespace ermm::graphsim {

AdjacencyMatrix AdjacencyMatrix::from_edges(std::uint32_t n,
                                            std::vector<std::pair<std::uint32_t, std::uint32_t>> edges,
                                            Backend backend) {
  AdjacencyMatrix a;
  a.n_ = n;
  a.backend_ = backend;
  for (auto& [i, j] : edges) {
    if (i == j) throw UsageError("adjacency matrix must have a zero diagonal");
    if (i >= n || j >= n) throw UsageError("edge endpoint out of range");
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) throw UsageError("duplicate edge");
  a.edges_ = std::move(edges);
  a.build();
  return a;
}

AdjacencyMatrix AdjacencyMatrix::complete(std::uint32_t n) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return from_edges(n, std::move(edges), Backend::kDense);
}

void AdjacencyMatrix::build() {
  offsets_.assign(n_ + 2, 0);
  for (const auto& [i, j] : edges_) {
    ++offsets_[i + 1];
    ++offsets_[j + 1];
  }
  for (std::uint32_t v = 0; v < n_; ++v) offsets_[v + 1] += offsets_[v];
  neighbours_.assign(2 * edges_.size(), 0);
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.begin() + n_);
  // edges_ is sorted, so each row receives its neighbours in increasing
  // order except for the lower ones, which also arrive sorted by i.
  for (const auto& [i, j] : edges_) neighbours_[fill[j]++] = i;
  for (const auto& [i, j] : edges_) neighbours_[fill[i]++] = j;
  bits_.clear();
  words_ = 0;
  if (backend_ == Backend::kDense) {
    words_ = (n_ + 63) / 64;
    bits_.assign(static_cast<std::size_t>(n_) * words_, 0);
    for (const auto& [i, j] : edges_) {
      bits_[static_cast<std::size_t>(i) * words_ + j / 64] |= std::uint64_t{1} << (j % 64);
      bits_[static_cast<std::size_t>(j) * words_ + i / 64] |= std::uint64_t{1} << (i % 64);
    }
  }
}

bool AdjacencyMatrix::has_edge(std::uint32_t i, std::uint32_t j) const {
  if (i >= n_ || j >= n_ || i == j) return false;
  if (backend_ == Backend::kDense) return bits_[static_cast<std::size_t>(i) * words_ + j / 64] >> (j % 64) & 1u;
  return std::binary_search(neighbours_begin(i), neighbours_end(i), j);
}

std::uint64_t AdjacencyMatrix::common_neighbours(std::uint32_t i, std::uint32_t j) const {
  if (backend_ == Backend::kDense) {
    std::uint64_t count = 0;
    const std::uint64_t* a = bits_.data() + static_cast<std::size_t>(i) * words_;
    const std::uint64_t* b = bits_.data() + static_cast<std::size_t>(j) * words_;
    for (std::uint32_t w = 0; w < words_; ++w) count += static_cast<std::uint64_t>(std::popcount(a[w] & b[w]));
    return count;
  }
  std::uint64_t count = 0;
  const std::uint32_t *a = neighbours_begin(i), *ae = neighbours_end(i);
  const std::uint32_t *b = neighbours_begin(j), *be = neighbours_end(j);
  while (a != ae && b != be) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++count;
      ++a;
      ++b;
    }
  }
  return count;
}

AdjacencyMatrix AdjacencyMatrix::permuted(const std::vector<std::uint32_t>& permutation) const {
  if (permutation.size() != n_) throw UsageError("permutation has the wrong length");
  std::vector<bool> seen(n_, false);
  for (auto v : permutation) {
    if (v >= n_ || seen[v]) throw UsageError("permutation is not a bijection");
    seen[v] = true;
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(edges_.size());
  for (const auto& [i, j] : edges_) edges.emplace_back(permutation[i], permutation[j]);
  return from_edges(n_, std::move(edges), backend_);
}

AdjacencyMatrix AdjacencyMatrix::with_backend(Backend backend) const {
  AdjacencyMatrix a = *this;
  a.backend_ = backend;
  a.build();
  return a;
}

std::optional<Backend> parse_backend(const std::string& text) {
  if (text == "dense") return Backend::kDense;
  if (text == "sparse") return Backend::kSparse;
  if (text == "auto") return std::nullopt;
  throw UsageError("unknown backend '" + text + "'");
}

void for_each_sampled_edge(std::uint32_t n, double p, std::uint64_t seed, std::uint64_t sample_index,
                           const std::function<void(std::uint32_t, std::uint32_t)>& visit) {
  if (!(p >= 0.0 && p <= 1.0)) throw UsageError("p must lie in [0,1]");
  if (n < 2 || p == 0.0) return;
  if (p == 1.0) {
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j) visit(i, j);
    return;
  }
  PhiloxStream rng(seed, sample_index);
  const std::uint64_t total = std::uint64_t{n} * (n - 1) / 2;
  const double log_q = std::log1p(-p);
  std::uint64_t pos = 0, row_start = 0, row_len = n - 1;
  std::uint32_t i = 0;
  while (true) {
    const double skip = std::floor(std::log(rng.uniform()) / log_q);
    if (skip >= static_cast<double>(total - pos)) return;
    pos += static_cast<std::uint64_t>(skip);
    while (pos >= row_start + row_len) {
      row_start += row_len;
      ++i;
      row_len = n - 1 - i;
    }
    visit(i, static_cast<std::uint32_t>(i + 1 + (pos - row_start)));
    if (++pos >= total) return;
  }
}

AdjacencyMatrix sample_er(std::uint32_t n, double p, std::uint64_t seed, std::uint64_t sample_index) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for_each_sampled_edge(n, p, seed, sample_index, [&](std::uint32_t i, std::uint32_t j) { edges.emplace_back(i, j); });
  return AdjacencyMatrix::from_edges(n, std::move(edges), p > kDenseThreshold ? Backend::kDense : Backend::kSparse);
}

namespace {

bool add_to(std::uint64_t& a, std::uint64_t b) { return !__builtin_add_overflow(a, b, &a); }
bool add_to(BigInt& a, const BigInt& b) {
  a += b;
  return true;
}
bool mul(std::uint64_t a, std::uint64_t b, std::uint64_t& out) { return !__builtin_mul_overflow(a, b, &out); }
bool mul(const BigInt& a, const BigInt& b, BigInt& out) {
  out = a * b;
  return true;
}
BigInt to_big(std::uint64_t v) {
  BigInt z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return z;
}
BigInt to_big(const BigInt& v) { return v; }

// w <- A w
template <typename T>
bool propagate(const AdjacencyMatrix& a, const std::vector<T>& w, std::vector<T>& out) {
  for (std::uint32_t i = 0; i < a.n(); ++i) {
    T acc(0);
    for (auto it = a.neighbours_begin(i); it != a.neighbours_end(i); ++it)
      if (!add_to(acc, w[*it])) return false;
    out[i] = acc;
  }
  return true;
}

// u^T A^{q mod 2} u where u = A^{floor(q/2)} applied to `start`.
template <typename T>
bool quadratic_form(const AdjacencyMatrix& a, unsigned q, std::vector<T> w, T& result) {
  std::vector<T> next(a.n(), T(0));
  for (unsigned t = 0; t < q / 2; ++t) {
    if (!propagate(a, w, next)) return false;
    std::swap(w, next);
  }
  T total(0), term(0);
  if (q % 2 == 0) {
    for (std::uint32_t i = 0; i < a.n(); ++i)
      if (!mul(w[i], w[i], term) || !add_to(total, term)) return false;
  } else {
    for (const auto& [i, j] : a.edges())
      if (!mul(w[i], w[j], term) || !add_to(total, term) || !add_to(total, term)) return false;
  }
  result = total;
  return true;
}

template <typename T>
bool y_value(const AdjacencyMatrix& a, unsigned q, BigInt& out) {
  T result(0);
  if (!quadratic_form(a, q, std::vector<T>(a.n(), T(1)), result)) return false;
  out = to_big(result);
  return true;
}

template <typename T>
bool x_value_by_source(const AdjacencyMatrix& a, unsigned q, BigInt& out) {
  BigInt total = 0;
  std::vector<T> start(a.n(), T(0));
  for (std::uint32_t s = 0; s < a.n(); ++s) {
    start[s] = T(1);
    T value(0);
    if (!quadratic_form(a, q, start, value)) return false;
    start[s] = T(0);
    total += to_big(value);
  }
  out = total;
  return true;
}

}  // namespace

BigInt walk_stats(const AdjacencyMatrix& a, unsigned q, ModelKind model) {
  if (q < 1) throw UsageError("q must be at least 1");
  const BigInt two_e = to_big(2 * a.edge_count());
  BigInt out;
  if (model == ModelKind::kY) {
    if (q == 1) return two_e;
    if (!y_value<std::uint64_t>(a, q, out)) y_value<BigInt>(a, q, out);
    return out;
  }
  if (q == 1) return 0;
  if (q == 2) return two_e;
  if (q == 3) {
    std::uint64_t sum = 0;
    for (const auto& [i, j] : a.edges()) sum += a.common_neighbours(i, j);
    return to_big(sum) * 2;
  }
  if (!x_value_by_source<std::uint64_t>(a, q, out)) x_value_by_source<BigInt>(a, q, out);
  return out;
}

LaplacianStats laplacian_stats(const AdjacencyMatrix& a) {
  const BigInt two_e = to_big(2 * a.edge_count());
  std::uint64_t squares = 0;
  for (std::uint32_t v = 0; v < a.n(); ++v) squares += std::uint64_t{a.degree(v)} * a.degree(v);
  return {two_e, to_big(squares) + two_e};
}

bool permutation_invariance_check(const AdjacencyMatrix& a, const std::vector<std::uint32_t>& permutation) {
  const AdjacencyMatrix b = a.permuted(permutation);
  if (a.edge_count() != b.edge_count()) return false;
  for (unsigned q = 1; q <= 3; ++q)
    for (auto model : {ModelKind::kX, ModelKind::kY})
      if (walk_stats(a, q, model) != walk_stats(b, q, model)) return false;
  const auto la = laplacian_stats(a), lb = laplacian_stats(b);
  return la.trace == lb.trace && la.trace_square == lb.trace_square;
}

std::vector<double> spectral_moments(const AdjacencyMatrix& a, double c, unsigned qmax) {
  if (!(c > 0)) throw UsageError("c must be positive");
  std::vector<double> out;
  for (unsigned q = 1; q <= qmax; ++q) {
    const double x = walk_stats(a, q, ModelKind::kX).get_d();
    out.push_back(a.n() == 0 ? 0.0 : x / (a.n() * std::pow(c, q / 2.0)));
  }
  return out;
}

BigInt sample_statistic(ModelKind model, unsigned q, std::uint32_t n, double p, std::uint64_t seed,
                        std::uint64_t sample_index) {
  if (q < 1) throw UsageError("q must be at least 1");
  if (model == ModelKind::kX && q == 1) return 0;
  if (q <= 2) {
    std::vector<std::uint32_t> deg(n, 0);
    std::uint64_t edges = 0;
    for_each_sampled_edge(n, p, seed, sample_index, [&](std::uint32_t i, std::uint32_t j) {
      ++deg[i];
      ++deg[j];
      ++edges;
    });
    if (q == 1 || model == ModelKind::kX) return to_big(2 * edges);
    std::uint64_t squares = 0;
    for (auto d : deg) squares += std::uint64_t{d} * d;
    return to_big(squares);
  }
  AdjacencyMatrix a = sample_er(n, p, seed, sample_index);
  // Bitset rows pay off for triangle counting whenever they fit.
  if (model == ModelKind::kX && q == 3 && a.backend() == Backend::kSparse && n <= 8192)
    a = a.with_backend(Backend::kDense);
  return walk_stats(a, q, model);
}

SampleStats::SampleStats(std::vector<BigInt> values, unsigned kmax, unsigned batches)
    : values_(std::move(values)), kmax_(kmax) {
  if (values_.empty()) throw UsageError("at least one sample is required");
  const std::size_t m = values_.size();
  std::size_t b = std::max<std::size_t>(1, std::min<std::size_t>(batches, m / (kmax + 1)));
  for (std::size_t i = 0; i <= b; ++i) batch_bounds_.push_back(i * m / b);
  sums_.assign(kmax + 1, 0);
  batch_sums_.assign(b, std::vector<BigInt>(kmax + 1, 0));
  for (std::size_t batch = 0; batch < b; ++batch) {
    for (std::size_t s = batch_bounds_[batch]; s < batch_bounds_[batch + 1]; ++s) {
      BigInt power = 1;
      for (unsigned r = 0; r <= kmax; ++r) {
        batch_sums_[batch][r] += power;
        power *= values_[s];
      }
    }
    for (unsigned r = 0; r <= kmax; ++r) sums_[r] += batch_sums_[batch][r];
  }
}

SampleStats simulate(ModelKind model, unsigned q, std::uint32_t n, double p, std::uint64_t M, std::uint64_t seed,
                     unsigned kmax, unsigned threads) {
  if (M == 0) throw UsageError("M must be positive");
  std::vector<BigInt> values(M);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t s = next++; s < M; s = next++) values[s] = sample_statistic(model, q, n, p, seed, s);
  };
  threads = std::max(1u, threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return SampleStats(std::move(values), kmax);
}

Rational cumulant_estimate(const std::vector<BigInt>& power_sums, std::size_t count, unsigned k) {
  if (k < 1 || k > 6) throw UsageError("cumulant order must be 1..6");
  if (power_sums.size() <= k) throw UsageError("power sums do not reach order k");
  if (count < std::min(k, 4u) || count == 0) throw UsageError("too few samples for a cumulant of this order");
  const Rational n(static_cast<long>(count));
  auto S = [&](unsigned r) { return Rational(power_sums[r]); };
  switch (k) {
    case 1:
      return S(1) / n;
    case 2:
      return (n * S(2) - S(1) * S(1)) / (n * (n - 1));
    case 3:
      return (n * n * S(3) - 3 * n * S(2) * S(1) + 2 * S(1) * S(1) * S(1)) / (n * (n - 1) * (n - 2));
    case 4: {
      const Rational s1 = S(1), s2 = S(2), s3 = S(3), s4 = S(4);
      const Rational num = -6 * s1 * s1 * s1 * s1 + 12 * n * s1 * s1 * s2 - 3 * n * (n - 1) * s2 * s2 -
                           4 * n * (n + 1) * s1 * s3 + n * n * (n + 1) * s4;
      return num / (n * (n - 1) * (n - 2) * (n - 3));
    }
    default:
      break;
  }
  // Plug-in: central moments of the empirical distribution.
  const Rational mean = S(1) / n;
  auto central = [&](unsigned r) {
    Rational acc = 0;
    Rational neg_mean_power = 1;  // (-mean)^{r-j}, built from j = r downwards
    for (unsigned j = r + 1; j-- > 0;) {
      acc += Rational(binomial(r, j)) * S(j) / n * neg_mean_power;
      neg_mean_power *= -mean;
    }
    return acc;
  };
  const Rational m2 = central(2), m3 = central(3), m4 = central(4), m5 = central(5);
  if (k == 5) return m5 - 10 * m3 * m2;
  const Rational m6 = central(6);
  return m6 - 15 * m4 * m2 - 10 * m3 * m3 + 30 * m2 * m2 * m2;
}

namespace {

// Standard error of the mean of batch-level values.
double batch_standard_error(const std::vector<double>& values) {
  const std::size_t b = values.size();
  if (b < 2) return std::numeric_limits<double>::quiet_NaN();
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(b);
  double ss = 0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(b - 1) / static_cast<double>(b));
}

}  // namespace

std::vector<CumulantEstimate> estimate_cumulants(const SampleStats& stats, unsigned kmax) {
  if (kmax > stats.kmax()) throw UsageError("sample power sums do not reach the requested order");
  if (stats.count() < kmax + 1) throw UsageError("M must be at least kmax + 1");
  std::vector<CumulantEstimate> out;
  for (unsigned k = 1; k <= kmax; ++k) {
    const Rational exact = cumulant_estimate(stats.power_sums(), stats.count(), k);
    std::vector<double> batch;
    for (unsigned b = 0; b < stats.batch_count(); ++b)
      if (stats.batch_size(b) >= k + 1)
        batch.push_back(cumulant_estimate(stats.batch_power_sums(b), stats.batch_size(b), k).get_d());
    out.push_back({k, exact, exact.get_d(), batch_standard_error(batch), k <= 4});
  }
  return out;
}

double ks_distance_normal(std::vector<double> sample, bool studentize) {
  const std::size_t m = sample.size();
  if (m == 0) throw UsageError("empty sample");
  if (studentize) {
    const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / static_cast<double>(m);
    double ss = 0;
    for (double v : sample) ss += (v - mean) * (v - mean);
    const double sd = m > 1 ? std::sqrt(ss / static_cast<double>(m - 1)) : 0.0;
    if (!(sd > 0)) return 1.0;
    for (double& v : sample) v = (v - mean) / sd;
  }
  std::sort(sample.begin(), sample.end());
  double d = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double f = 0.5 * std::erfc(-sample[i] / std::sqrt(2.0));
    d = std::max({d, static_cast<double>(i + 1) / static_cast<double>(m) - f, f - static_cast<double>(i) / static_cast<double>(m)});
  }
  return d;
}

double ks_critical_1pct(std::size_t m) { return 1.628 / std::sqrt(static_cast<double>(m)); }

std::vector<double> gaussian_samples(std::size_t m, std::uint64_t seed) {
  PhiloxStream rng(seed, 0);
  std::vector<double> out(m);
  for (auto& v : out) v = rng.normal();
  return out;
}

std::string schedule_regime_name(ScheduleRegime r) {
  switch (r) {
    case ScheduleRegime::kFull:
      return "full";
    case ScheduleRegime::kDilute:
      return "dilute";
    case ScheduleRegime::kSparse:
      return "sparse";
    case ScheduleRegime::kVerySparse:
      return "verysparse";
  }
  return "";
}

ScheduleRegime parse_schedule_regime(const std::string& text) {
  if (text == "full" || text == "1") return ScheduleRegime::kFull;
  if (text == "dilute" || text == "2") return ScheduleRegime::kDilute;
  if (text == "sparse" || text == "3") return ScheduleRegime::kSparse;
  if (text == "verysparse" || text == "very-sparse" || text == "4") return ScheduleRegime::kVerySparse;
  throw UsageError("unknown regime '" + text + "'");
}

namespace {

// c rounded to six decimals, as an exact rational.
Rational rounded(double c) { return make_rational(static_cast<long>(std::llround(c * 1e6)), 1000000); }

}  // namespace

RegimeSchedule RegimeSchedule::full(const Rational& p, const std::vector<std::uint32_t>& ns) {
  RegimeSchedule s{ScheduleRegime::kFull, {}};
  for (auto n : ns) s.points.push_back({n, p});
  s.validate();
  return s;
}

RegimeSchedule RegimeSchedule::dilute(const std::vector<std::uint32_t>& ns, double exponent) {
  RegimeSchedule s{ScheduleRegime::kDilute, {}};
  for (auto n : ns) s.points.push_back({n, rounded(std::pow(static_cast<double>(n), exponent)) / Rational(n)});
  s.validate();
  return s;
}

RegimeSchedule RegimeSchedule::dilute_fixed_c(const Rational& c, const std::vector<std::uint32_t>& ns) {
  RegimeSchedule s{ScheduleRegime::kDilute, {}};
  for (auto n : ns) s.points.push_back({n, c / Rational(n)});
  s.validate();
  return s;
}

RegimeSchedule RegimeSchedule::sparse(const Rational& c, const std::vector<std::uint32_t>& ns) {
  RegimeSchedule s{ScheduleRegime::kSparse, {}};
  for (auto n : ns) s.points.push_back({n, c / Rational(n)});
  s.validate();
  return s;
}

RegimeSchedule RegimeSchedule::very_sparse(const std::vector<std::uint32_t>& ns, double scale, double exponent) {
  RegimeSchedule s{ScheduleRegime::kVerySparse, {}};
  for (auto n : ns) {
    const double c = scale * std::pow(static_cast<double>(n), exponent);
    const Rational cr = make_rational(static_cast<long>(std::llround(c * 1e12)), 1000000000000L);
    s.points.push_back({n, cr / Rational(n)});
  }
  s.validate();
  return s;
}

void RegimeSchedule::validate() const {
  if (points.empty()) throw UsageError("schedule has no points");
  for (const auto& pt : points) {
    if (pt.n < 2) throw UsageError("schedule needs n >= 2");
    if (pt.p <= 0 || pt.p >= 1) throw UsageError("schedule edge probability must lie in (0,1)");
  }
}

Regime limit_regime(ScheduleRegime regime, const SchedulePoint& point) {
  switch (regime) {
    case ScheduleRegime::kFull:
      return Regime::full(point.p);
    case ScheduleRegime::kDilute:
      return Regime::dilute();
    case ScheduleRegime::kSparse:
      return Regime::sparse(point.p * Rational(point.n));
    case ScheduleRegime::kVerySparse:
      return Regime::very_sparse();
  }
  throw InvariantError("unreachable regime");
}

double normalization(ModelKind model, unsigned q, unsigned k, ScheduleRegime regime, const SchedulePoint& point) {
  const double n = point.n, p = point.p.get_d(), c = p * n;
  const double kk = k;
  if (model == ModelKind::kY) {
    if (regime == ScheduleRegime::kVerySparse) return 1.0 / (c * n);
    return std::pow(c, -kk * (q - 1.0)) / (p * n * n);
  }
  if (regime == ScheduleRegime::kFull) return std::pow(std::pow(p, q - 1.0) * std::pow(n, q - 2.0), -kk) / (p * n * n);
  if (q % 2 == 0) {
    if (regime == ScheduleRegime::kVerySparse) return 1.0 / (c * n);
    return std::pow(c, -kk * (q / 2 - 1.0)) / (c * n);
  }
  if (regime == ScheduleRegime::kDilute) return std::pow(c, -static_cast<double>(q));
  return 1.0;
}

std::string normalization_label(ModelKind model, unsigned q, ScheduleRegime regime) {
  if (model == ModelKind::kY) {
    if (regime == ScheduleRegime::kVerySparse) return "Cum_k(Y)/(cn)";
    return "Cum_k(Y/(np)^(q-1))/(p n^2)";
  }
  if (regime == ScheduleRegime::kFull) return "Cum_k(X/(p^(q-1) n^(q-2)))/(p n^2)";
  if (q % 2 == 0) {
    if (regime == ScheduleRegime::kVerySparse) return "Cum_k(X)/(cn)";
    return "Cum_k(X/c^(q/2-1))/(cn)";
  }
  if (regime == ScheduleRegime::kDilute) return "Cum_k(X)/c^q";
  return "Cum_k(X)";
}

namespace {

std::optional<double> target_value(ModelKind model, unsigned q, unsigned k, ScheduleRegime regime,
                                   const SchedulePoint& point, std::string& source) {
  try {
    const auto lv = combinatorics::limit_cumulant(model, q, k, limit_regime(regime, point));
    source = lv.source;
    const Rational c = point.p * Rational(point.n);
    if (lv.variable.empty()) return lv.value.evaluate(Rational(0)).get_d();
    if (lv.variable == "1/c") return lv.value.evaluate(Rational(1) / c).get_d();
    return lv.value.evaluate(c).get_d();
  } catch (const NotProvidedError& e) {
    source = "none";
  } catch (const ResourceError& e) {
    source = "none";
  }
  return std::nullopt;
}

}  // namespace

std::vector<ConvergenceRow> normalized_cumulant_run(ModelKind model, unsigned q, unsigned kmax,
                                                    const RegimeSchedule& schedule, std::uint64_t M,
                                                    std::uint64_t seed, unsigned threads) {
  schedule.validate();
  std::vector<ConvergenceRow> rows;
  for (std::size_t i = 0; i < schedule.points.size(); ++i) {
    const auto& pt = schedule.points[i];
    const SampleStats stats = simulate(model, q, pt.n, pt.p.get_d(), M, seed + i, kmax, threads);
    for (const auto& est : estimate_cumulants(stats, kmax)) {
      const double scale = normalization(model, q, est.k, schedule.regime, pt);
      ConvergenceRow row{pt.n, pt.p, pt.c(), est.k, est.estimate * scale, est.standard_error * scale, std::nullopt, ""};
      row.target = target_value(model, q, est.k, schedule.regime, pt, row.target_source);
      rows.push_back(row);
    }
  }
  return rows;
}

bool gaussian_expected(ModelKind model, unsigned q, ScheduleRegime regime) {
  if (regime == ScheduleRegime::kVerySparse) return false;
  if (regime == ScheduleRegime::kSparse && model == ModelKind::kX && q % 2 == 1) return false;
  return true;
}

CltReport clt_from_stats(const SampleStats& stats, bool gaussian) {
  if (stats.kmax() < 4) throw UsageError("CLT statistics need power sums through order 4");
  const std::size_t m = stats.count();
  CltReport r{};
  auto shape = [](const std::vector<BigInt>& sums, std::size_t count, std::pair<double, double>& out) {
    const Rational k2 = cumulant_estimate(sums, count, 2);
    if (k2 <= 0) return false;
    const double v = k2.get_d();
    out.first = cumulant_estimate(sums, count, 3).get_d() / std::pow(v, 1.5);
    out.second = cumulant_estimate(sums, count, 4).get_d() / (v * v);
    return true;
  };
  std::pair<double, double> full{};
  const bool ok = shape(stats.power_sums(), m, full);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.skewness = ok ? full.first : nan;
  r.excess_kurtosis = ok ? full.second : nan;
  std::vector<double> skews, kurts;
  for (unsigned b = 0; b < stats.batch_count(); ++b) {
    std::pair<double, double> bs{};
    if (stats.batch_size(b) >= 5 && shape(stats.batch_power_sums(b), stats.batch_size(b), bs)) {
      skews.push_back(bs.first);
      kurts.push_back(bs.second);
    }
  }
  r.skewness_se = batch_standard_error(skews);
  r.excess_kurtosis_se = batch_standard_error(kurts);
  std::vector<double> xs;
  xs.reserve(m);
  for (const auto& v : stats.values()) xs.push_back(v.get_d());
  r.ks_distance = ks_distance_normal(xs, true);
  r.ks_critical = ks_critical_1pct(m);
  r.gaussian_expected = gaussian;
  r.skewness_ok = ok && std::abs(r.skewness) <= 5 * r.skewness_se;
  r.kurtosis_ok = ok && std::abs(r.excess_kurtosis) <= 5 * r.excess_kurtosis_se;
  r.ks_ok = r.ks_distance <= r.ks_critical;
  if (ok) {
    const double v = cumulant_estimate(stats.power_sums(), m, 2).get_d();
    for (unsigned j = 3; j <= std::min(stats.kmax(), 6u); ++j)
      r.standardized_cumulants.push_back(cumulant_estimate(stats.power_sums(), m, j).get_d() / std::pow(v, j / 2.0));
  }
  return r;
}

std::vector<CltReport> clt_test(ModelKind model, unsigned q, const RegimeSchedule& schedule, std::uint64_t M,
                                std::uint64_t seed, unsigned threads) {
  if (M < 500) throw UsageError("CLT test needs M >= 500");
  schedule.validate();
  std::vector<CltReport> out;
  for (std::size_t i = 0; i < schedule.points.size(); ++i) {
    const auto& pt = schedule.points[i];
    const SampleStats stats = simulate(model, q, pt.n, pt.p.get_d(), M, seed + i, 6, threads);
    CltReport r = clt_from_stats(stats, gaussian_expected(model, q, schedule.regime));
    r.n = pt.n;
    r.p = pt.p;
    out.push_back(r);
  }
  return out;
}

}  // namespace ermm::graphsim
