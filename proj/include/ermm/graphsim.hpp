#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ermm/model.hpp"
#include "ermm/rational.hpp"

namespace ermm::graphsim {

enum class Backend { kDense, kSparse };

// Simple undirected graph on vertices 0..n-1. Always carries a CSR
// neighbour list; the dense backend adds bitset rows for O(n/64)
// adjacency tests and row intersections.
class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;
  // Edges (i, j) with i != j in any order; duplicates are rejected.
  static AdjacencyMatrix from_edges(std::uint32_t n, std::vector<std::pair<std::uint32_t, std::uint32_t>> edges,
                                    Backend backend = Backend::kSparse);
  static AdjacencyMatrix complete(std::uint32_t n);

  std::uint32_t n() const { return n_; }
  Backend backend() const { return backend_; }
  std::uint64_t edge_count() const { return edges_.size(); }
  // Sorted pairs with first < second.
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges() const { return edges_; }
  std::uint32_t degree(std::uint32_t v) const { return offsets_[v + 1] - offsets_[v]; }
  // Sorted neighbours of v.
  const std::uint32_t* neighbours_begin(std::uint32_t v) const { return neighbours_.data() + offsets_[v]; }
  const std::uint32_t* neighbours_end(std::uint32_t v) const { return neighbours_.data() + offsets_[v + 1]; }
  bool has_edge(std::uint32_t i, std::uint32_t j) const;
  // Number of common neighbours of i and j.
  std::uint64_t common_neighbours(std::uint32_t i, std::uint32_t j) const;

  AdjacencyMatrix permuted(const std::vector<std::uint32_t>& permutation) const;
  AdjacencyMatrix with_backend(Backend backend) const;

 private:
  void build();

  std::uint32_t n_ = 0;
  Backend backend_ = Backend::kSparse;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> neighbours_;
  std::vector<std::uint64_t> bits_;  // dense backend: n rows of words_ words
  std::uint32_t words_ = 0;
};

// Density above which sampling picks the dense backend.
constexpr double kDenseThreshold = 0.05;

// Visits the edges of one G(n, p) sample in lexicographic order (i < j)
// by geometric skipping over the upper triangle; p = 0 and p = 1 are exact.
void for_each_sampled_edge(std::uint32_t n, double p, std::uint64_t seed, std::uint64_t sample_index,
                           const std::function<void(std::uint32_t, std::uint32_t)>& visit);

AdjacencyMatrix sample_er(std::uint32_t n, double p, std::uint64_t seed, std::uint64_t sample_index = 0);
std::optional<Backend> parse_backend(const std::string& text);

// X = Tr A^q or Y = 1^T A^q 1, exact.
BigInt walk_stats(const AdjacencyMatrix& a, unsigned q, ModelKind model);

struct LaplacianStats {
  BigInt trace;         // Tr Delta = 2|E|
  BigInt trace_square;  // Tr Delta^2 = sum deg^2 + 2|E|
};
LaplacianStats laplacian_stats(const AdjacencyMatrix& a);

// True iff X, Y (q = 1..3), |E|, Tr Delta and Tr Delta^2 are unchanged
// under relabelling by `permutation`.
bool permutation_invariance_check(const AdjacencyMatrix& a, const std::vector<std::uint32_t>& permutation);

// M_q = X(A, q) / (n c^{q/2}) for q = 1..qmax.
std::vector<double> spectral_moments(const AdjacencyMatrix& a, double c, unsigned qmax);

// Statistic of one sample; small-q cases avoid building the matrix.
BigInt sample_statistic(ModelKind model, unsigned q, std::uint32_t n, double p, std::uint64_t seed,
                        std::uint64_t sample_index);

// Exact per-sample values and power sums, with B contiguous batches.
class SampleStats {
 public:
  SampleStats(std::vector<BigInt> values, unsigned kmax, unsigned batches = 20);

  std::size_t count() const { return values_.size(); }
  unsigned kmax() const { return kmax_; }
  unsigned batch_count() const { return static_cast<unsigned>(batch_bounds_.size()) - 1; }
  const std::vector<BigInt>& values() const { return values_; }
  // S_r = sum v^r for r = 0..kmax.
  const std::vector<BigInt>& power_sums() const { return sums_; }
  const std::vector<BigInt>& batch_power_sums(unsigned b) const { return batch_sums_[b]; }
  std::size_t batch_size(unsigned b) const { return batch_bounds_[b + 1] - batch_bounds_[b]; }

  friend bool operator==(const SampleStats& a, const SampleStats& b) {
    return a.values_ == b.values_ && a.kmax_ == b.kmax_ && a.sums_ == b.sums_;
  }

 private:
  std::vector<BigInt> values_;
  unsigned kmax_;
  std::vector<BigInt> sums_;
  std::vector<std::size_t> batch_bounds_;
  std::vector<std::vector<BigInt>> batch_sums_;
};

// Draws M samples of the statistic; sample s uses Philox stream s of
// `seed`, so the result does not depend on `threads`.
SampleStats simulate(ModelKind model, unsigned q, std::uint32_t n, double p, std::uint64_t M, std::uint64_t seed,
                     unsigned kmax, unsigned threads = 1);

// Exact cumulant estimate from power sums of `count` samples: k-statistics
// for k <= 4, plug-in central-moment cumulants for k = 5, 6.
Rational cumulant_estimate(const std::vector<BigInt>& power_sums, std::size_t count, unsigned k);

struct CumulantEstimate {
  unsigned k;
  Rational exact;          // the estimator evaluated exactly
  double estimate;         // = exact as a double
  double standard_error;   // batch means; NaN when fewer than two batches
  bool unbiased;           // k-statistic (k <= 4)
};
std::vector<CumulantEstimate> estimate_cumulants(const SampleStats& stats, unsigned kmax);

// Kolmogorov-Smirnov distance between the studentized sample and N(0, 1).
double ks_distance_normal(std::vector<double> sample, bool studentize = true);
// 1% critical value of the one-sample KS statistic.
double ks_critical_1pct(std::size_t m);
std::vector<double> gaussian_samples(std::size_t m, std::uint64_t seed);

enum class ScheduleRegime { kFull, kDilute, kSparse, kVerySparse };
std::string schedule_regime_name(ScheduleRegime r);
ScheduleRegime parse_schedule_regime(const std::string& text);

struct SchedulePoint {
  std::uint32_t n;
  Rational p;
  double c() const { return p.get_d() * n; }
};

struct RegimeSchedule {
  ScheduleRegime regime;
  std::vector<SchedulePoint> points;

  static RegimeSchedule full(const Rational& p, const std::vector<std::uint32_t>& ns);
  // c_n = n^{exponent}; the default exponent is 1/2.
  static RegimeSchedule dilute(const std::vector<std::uint32_t>& ns, double exponent = 0.5);
  static RegimeSchedule dilute_fixed_c(const Rational& c, const std::vector<std::uint32_t>& ns);
  static RegimeSchedule sparse(const Rational& c, const std::vector<std::uint32_t>& ns);
  // c_n = scale * n^{exponent}; the default is n^{-1/4}.
  static RegimeSchedule very_sparse(const std::vector<std::uint32_t>& ns, double scale = 1.0, double exponent = -0.25);
  void validate() const;
};

// The regime value used to look up the limit table at one schedule point.
Regime limit_regime(ScheduleRegime regime, const SchedulePoint& point);

// Normalizing factor applied to Cum_k(V): the returned value multiplies the
// raw cumulant. Y: (np)^{-k(q-1)} / (p n^2) except very sparse, 1/(cn).
// X: factors depend on the parity of q and on the regime.
double normalization(ModelKind model, unsigned q, unsigned k, ScheduleRegime regime, const SchedulePoint& point);
std::string normalization_label(ModelKind model, unsigned q, ScheduleRegime regime);

struct ConvergenceRow {
  std::uint32_t n;
  Rational p;
  double c;
  unsigned k;
  double estimate;
  double standard_error;
  std::optional<double> target;
  std::string target_source;
};

std::vector<ConvergenceRow> normalized_cumulant_run(ModelKind model, unsigned q, unsigned kmax,
                                                    const RegimeSchedule& schedule, std::uint64_t M,
                                                    std::uint64_t seed, unsigned threads = 1);

struct CltReport {
  std::uint32_t n;
  Rational p;
  double skewness, skewness_se;
  double excess_kurtosis, excess_kurtosis_se;
  double ks_distance, ks_critical;
  bool gaussian_expected;
  bool skewness_ok, kurtosis_ok, ks_ok;
  std::vector<double> standardized_cumulants;  // k_j / k_2^{j/2}, j = 3..kmax
};

// Standardized shape statistics; within 5 standard errors of 0 counts as
// consistent with the Gaussian limit.
CltReport clt_from_stats(const SampleStats& stats, bool gaussian_expected);
std::vector<CltReport> clt_test(ModelKind model, unsigned q, const RegimeSchedule& schedule, std::uint64_t M,
                                std::uint64_t seed, unsigned threads = 1);
bool gaussian_expected(ModelKind model, unsigned q, ScheduleRegime regime);

}  // namespace ermm::graphsim
