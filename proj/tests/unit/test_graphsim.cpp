#include <doctest.h>

#include <cmath>
#include <numeric>

#include "ermm/errors.hpp"
#include "ermm/graphsim.hpp"
#include "ermm/philox.hpp"

using namespace ermm;
using namespace ermm::graphsim;

namespace {

std::vector<BigInt> power_sums_of(const std::vector<long>& xs, unsigned kmax) {
  std::vector<BigInt> sums(kmax + 1, 0);
  for (long x : xs) {
    BigInt power = 1;
    for (unsigned r = 0; r <= kmax; ++r) {
      sums[r] += power;
      power *= x;
    }
  }
  return sums;
}

AdjacencyMatrix triangle(Backend b) { return AdjacencyMatrix::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}, b); }

}  // namespace

TEST_CASE("philox known-answer vectors") {
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
  PhiloxStream a(7, 3), b(7, 3), c(7, 4);
  CHECK(a.next_u64() == b.next_u64());
  CHECK(a.next_u64() != c.next_u64());
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK((u > 0 && u < 1));
  }
}

TEST_CASE("walk statistics on small graphs") {
  for (auto backend : {Backend::kDense, Backend::kSparse}) {
    const auto k3 = triangle(backend);
    CHECK(walk_stats(k3, 3, ModelKind::kX) == 6);
    CHECK(walk_stats(k3, 2, ModelKind::kY) == 12);
    CHECK(walk_stats(k3, 2, ModelKind::kX) == 6);
    CHECK(walk_stats(k3, 1, ModelKind::kX) == 0);
    CHECK(walk_stats(k3, 4, ModelKind::kX) == 18);
    CHECK(walk_stats(k3, 3, ModelKind::kY) == 24);
    const auto lap = laplacian_stats(k3);
    CHECK(lap.trace == 6);
    CHECK(lap.trace_square == 18);
    const auto edge = AdjacencyMatrix::from_edges(2, {{1, 0}}, backend);
    CHECK(laplacian_stats(edge).trace == 2);
    CHECK(laplacian_stats(edge).trace_square == 4);
    CHECK(k3.common_neighbours(0, 1) == 1);
    CHECK(k3.has_edge(2, 0));
    CHECK_FALSE(k3.has_edge(1, 1));
  }
  CHECK_THROWS_AS(AdjacencyMatrix::from_edges(3, {{1, 1}}), UsageError);
  CHECK_THROWS_AS(AdjacencyMatrix::from_edges(3, {{0, 1}, {1, 0}}), UsageError);
}

TEST_CASE("walk statistics agree across backends and with identities") {
  for (std::uint64_t s = 0; s < 6; ++s) {
    const auto a = sample_er(40, 0.2, 11, s);
    const auto b = a.with_backend(a.backend() == Backend::kDense ? Backend::kSparse : Backend::kDense);
    for (unsigned q = 1; q <= 6; ++q)
      for (auto m : {ModelKind::kX, ModelKind::kY}) CHECK(walk_stats(a, q, m) == walk_stats(b, q, m));
    const auto lap = laplacian_stats(a);
    CHECK(walk_stats(a, 2, ModelKind::kX) == BigInt(2 * a.edge_count()));
    CHECK(lap.trace_square == walk_stats(a, 2, ModelKind::kY) + walk_stats(a, 2, ModelKind::kX));
    std::vector<std::uint32_t> perm(40);
    std::iota(perm.begin(), perm.end(), 0u);
    std::reverse(perm.begin(), perm.end());
    std::swap(perm[3], perm[17]);
    CHECK(permutation_invariance_check(a, perm));
  }
}

TEST_CASE("uint64 overflow falls back to big integers") {
  const auto k = AdjacencyMatrix::complete(60);
  // 1^T A^q 1 = n (n-1)^q for the complete graph.
  const unsigned q = 12;
  CHECK(walk_stats(k, q, ModelKind::kY) == BigInt(60) * BigInt(59) * ipow(BigInt(59), q - 1));
  // Tr A^q = (n-1)^q + (n-1)(-1)^q.
  CHECK(walk_stats(k, q, ModelKind::kX) == ipow(BigInt(59), q) + 59);
}

TEST_CASE("sampler edge cases and fast paths") {
  std::size_t count = 0;
  for_each_sampled_edge(10, 1.0, 1, 0, [&](std::uint32_t i, std::uint32_t j) {
    CHECK(i < j);
    ++count;
  });
  CHECK(count == 45);
  count = 0;
  for_each_sampled_edge(10, 0.0, 1, 0, [&](std::uint32_t, std::uint32_t) { ++count; });
  CHECK(count == 0);
  CHECK_THROWS_AS(for_each_sampled_edge(10, 1.5, 1, 0, [](std::uint32_t, std::uint32_t) {}), UsageError);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto a = sample_er(30, 0.3, 5, s);
    CHECK(sample_statistic(ModelKind::kY, 2, 30, 0.3, 5, s) == walk_stats(a, 2, ModelKind::kY));
    CHECK(sample_statistic(ModelKind::kX, 2, 30, 0.3, 5, s) == walk_stats(a, 2, ModelKind::kX));
    CHECK(sample_statistic(ModelKind::kX, 3, 30, 0.3, 5, s) == walk_stats(a, 3, ModelKind::kX));
    CHECK(sample_statistic(ModelKind::kY, 1, 30, 0.3, 5, s) == BigInt(2 * a.edge_count()));
  }
}

TEST_CASE("edge frequency matches p") {
  std::uint64_t edges = 0;
  const std::uint32_t n = 200;
  const int samples = 50;
  for (int s = 0; s < samples; ++s) edges += sample_er(n, 0.01, 3, s).edge_count();
  const double pairs = samples * n * (n - 1) / 2.0;
  const double phat = edges / pairs;
  CHECK(std::abs(phat - 0.01) < 4 * std::sqrt(0.01 * 0.99 / pairs));
}

TEST_CASE("k-statistics") {
  CHECK(cumulant_estimate(power_sums_of({0, 2}, 2), 2, 1) == 1);
  CHECK(cumulant_estimate(power_sums_of({0, 2}, 2), 2, 2) == 2);
  CHECK(cumulant_estimate(power_sums_of({1, 2, 3}, 3), 3, 3) == 0);
  for (unsigned k = 2; k <= 6; ++k) CHECK(cumulant_estimate(power_sums_of({7, 7, 7, 7, 7, 7, 7}, 6), 7, k) == 0);
  // Frozen from scipy.stats.kstat and scipy.stats.moment.
  const auto sums = power_sums_of({3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5}, 6);
  CHECK(cumulant_estimate(sums, 11, 1) == 4);
  CHECK(cumulant_estimate(sums, 11, 2) == make_rational(28, 5));
  CHECK(cumulant_estimate(sums, 11, 3) == make_rational(44, 5));
  CHECK(cumulant_estimate(sums, 11, 4) == make_rational(102, 5));
  CHECK(cumulant_estimate(sums, 11, 5).get_d() == doctest::Approx(-93.22314049586777).epsilon(1e-12));
  CHECK(cumulant_estimate(sums, 11, 6).get_d() == doctest::Approx(-625.3824192336588).epsilon(1e-12));
  CHECK_THROWS_AS(cumulant_estimate(power_sums_of({1, 2, 3}, 4), 3, 4), UsageError);
}

TEST_CASE("simulation is deterministic across thread counts") {
  const auto a = simulate(ModelKind::kX, 3, 50, 0.1, 200, 7, 4, 1);
  const auto b = simulate(ModelKind::kX, 3, 50, 0.1, 200, 7, 4, 3);
  CHECK(a == b);
  CHECK(a.batch_count() == 20);
  const auto c = simulate(ModelKind::kX, 3, 50, 0.1, 200, 8, 4, 1);
  CHECK_FALSE(a == c);
}

TEST_CASE("monte carlo mean matches the exact value") {
  // E[Y_2] on G(3, 1/2) is 9/2.
  const auto stats = simulate(ModelKind::kY, 2, 3, 0.5, 20000, 7, 2);
  const auto est = estimate_cumulants(stats, 2);
  CHECK(std::abs(est[0].estimate - 4.5) < 4 * est[0].standard_error);
  CHECK(est[0].unbiased);
}

TEST_CASE("KS distance is calibrated on Gaussian samples") {
  int rejections = 0;
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto xs = gaussian_samples(1000, 100 + s);
    if (ks_distance_normal(xs, false) > ks_critical_1pct(1000)) ++rejections;
  }
  CHECK(rejections <= 3);
  std::vector<double> skewed;
  for (int i = 1; i <= 1000; ++i) skewed.push_back(std::exp(i / 200.0));
  CHECK(ks_distance_normal(skewed) > ks_critical_1pct(1000));
}

TEST_CASE("schedules and normalizations") {
  const auto d = RegimeSchedule::dilute({100, 400});
  CHECK(d.points[0].c() == doctest::Approx(10));
  CHECK(d.points[1].c() == doctest::Approx(20));
  const auto vs = RegimeSchedule::very_sparse({10000}, 0.01, -0.5);
  CHECK(vs.points[0].c() == doctest::Approx(1e-4));
  CHECK_THROWS_AS(RegimeSchedule::sparse(Rational(5), {3}), UsageError);
  const SchedulePoint pt{100, make_rational(1, 10)};
  CHECK(normalization(ModelKind::kY, 2, 1, ScheduleRegime::kFull, pt) == doctest::Approx(1.0 / (10 * 1000)));
  CHECK(normalization(ModelKind::kX, 4, 2, ScheduleRegime::kDilute, pt) == doctest::Approx(1.0 / (100 * 1000)));
  CHECK(normalization(ModelKind::kX, 3, 2, ScheduleRegime::kDilute, pt) == doctest::Approx(1e-3));
  CHECK(normalization(ModelKind::kX, 3, 2, ScheduleRegime::kSparse, pt) == 1);
  CHECK(gaussian_expected(ModelKind::kY, 2, ScheduleRegime::kSparse));
  CHECK_FALSE(gaussian_expected(ModelKind::kX, 3, ScheduleRegime::kSparse));
  CHECK_FALSE(gaussian_expected(ModelKind::kY, 2, ScheduleRegime::kVerySparse));
}

TEST_CASE("normalized run attaches limit targets") {
  const auto rows =
      normalized_cumulant_run(ModelKind::kY, 2, 2, RegimeSchedule::sparse(Rational(3), {60}), 400, 7);
  REQUIRE(rows.size() == 2);
  REQUIRE(rows[0].target);
  CHECK(*rows[0].target == doctest::Approx(4.0 / 3));
  CHECK(rows[0].target_source == "sparse:tree-census");
  CHECK(std::abs(rows[0].estimate - 4.0 / 3) < 0.2);
}
