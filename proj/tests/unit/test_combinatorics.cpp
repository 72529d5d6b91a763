#include <doctest.h>

#include "ermm/combinatorics.hpp"
#include "ermm/diagrams.hpp"
#include "ermm/errors.hpp"

using namespace ermm;
using namespace ermm::combinatorics;

namespace {

std::vector<BigInt> ints(std::vector<long> v) { return {v.begin(), v.end()}; }

Polynomial poly(std::vector<long> coeffs) {
  std::vector<Rational> c(coeffs.begin(), coeffs.end());
  return Polynomial(c);
}

Rational constant_of(const LimitValue& v) {
  REQUIRE(v.variable.empty());
  REQUIRE(v.value.degree() <= 0);
  return v.value.coefficient(0);
}

}  // namespace

TEST_CASE("h sequence") {
  const auto h2 = h_seq(2, 3);
  CHECK(h2 == std::vector<Rational>{1, 2, 6, Rational(64, 3)});
  CHECK(h_seq(3, 1)[1] == 3);
  CHECK(h_seq(3, 2)[2] == Rational(45, 2));
  for (unsigned q = 1; q <= 5; ++q) CHECK(h_seq(q, 0)[0] == 1);
  const auto h1 = h_seq(1, 5);
  for (unsigned k = 0; k <= 5; ++k) CHECK(h1[k] == Rational(1) / Rational(factorial(k)));
}

TEST_CASE("d sequence") {
  CHECK(d_seq(2, 4) == ints({1, 4, 32, 400}));
  CHECK(d_seq(3, 2)[1] == 9);
  // frozen from an independent rational evaluation of the h recurrence
  CHECK(d_seq(3, 6) == ints({1, 9, 189, 6561, 323433, 20820969}));
  CHECK(d_seq(4, 5) == ints({1, 16, 640, 43264, 4194304}));
  CHECK(d_seq(1, 6) == ints({1, 1, 1, 1, 1, 1}));
  for (unsigned q = 1; q <= 4; ++q) CHECK(d_seq_from_h(q, 12) == d_seq_direct(q, 12));
  for (unsigned q = 2; q <= 5; ++q) CHECK(d_seq(q, 1)[0] == 1);
  const auto d2 = d_seq(2, 12);
  for (unsigned k = 2; k <= 12; ++k) CHECK(d2[k - 1] == ipow(BigInt(2), k) * ipow(BigInt(k + 1), k - 2));
}

TEST_CASE("convolution identity") {
  CHECK(convolution_identity_check(2, 10));
  for (unsigned q : {2u, 3u, 4u}) CHECK(convolution_identity_check(q, 10));
  CHECK(convolution_identity_check(3, 1));
  CHECK(convolution_identity_check(2, 0));
}

TEST_CASE("rooted tree counts") {
  const auto t = rooted_tree_counts(12);
  CHECK(t.rooted[1] == 2);
  CHECK(t.rooted[2] == 12);
  CHECK(t.scaled[2] == 6);
  CHECK(t.unrooted[1] == 4);
  const auto d2 = d_seq(2, 12);
  for (unsigned k = 1; k <= 12; ++k) CHECK(t.unrooted[k - 1] == d2[k - 1]);
}

TEST_CASE("catalan") {
  CHECK(catalan(0) == 1);
  CHECK(catalan(2) == 2);
  CHECK(catalan(3) == 5);
  CHECK(catalan(10) == 16796);
}

TEST_CASE("w chain as printed") {
  const auto w = w_seq(3, series::WHatVariant::kPrefactor);
  CHECK(w[0] == Polynomial(1));
  const auto chain = sparse_limit_from_w_chain(2, series::WHatVariant::kPrefactor);
  // 1/c instead of 1 + 1/c: the chain drops the root weight.
  CHECK(chain[0] == poly({0, 1}));
  CHECK(chain[0] != diagrams::sparse_tree_table(ModelKind::kY, 2, 1).limit[0]);
}

TEST_CASE("walk census recurrence") {
  const auto rec = walk_census_recurrence(8);
  CHECK(rec.table[2][2] == Polynomial(1));
  CHECK(rec.totals[2] == poly({1, 1}));
  CHECK(rec.table[3][2].is_zero());
  CHECK(rec.totals[3] == poly({1, 2, 1}));
  CHECK(rec.totals[6] == poly({1, 10, 18, 13, 5, 1}));
  for (unsigned q = 1; q <= 8; ++q) {
    const auto brute = diagrams::brute_force_walk_census(q);
    for (unsigned r = 1; r <= q; ++r) CHECK(rec.table[q][r] == brute.weighted[r]);
    CHECK(rec.totals[q] == brute.total());
  }
  const auto printed = walk_census_recurrence(4, WalkRecurrence::kAsPrinted);
  CHECK(printed.table[2][2] == Polynomial(1));
  CHECK(printed.totals[2] == poly({1, 1}));
  CHECK(printed.table[3][2] == poly({0, 1}));
  CHECK(printed.totals[3] != rec.totals[3]);
}

TEST_CASE("limit cumulants") {
  CHECK(constant_of(limit_cumulant(ModelKind::kY, 2, 2, Regime::dilute())) == 8);
  CHECK(constant_of(limit_cumulant(ModelKind::kX, 5, 1, Regime::dilute())) == 1);
  CHECK(constant_of(limit_cumulant(ModelKind::kX, 5, 2, Regime::dilute())) == 160);
  CHECK(constant_of(limit_cumulant(ModelKind::kX, 3, 2, Regime::dilute())) == 6);
  for (unsigned q = 1; q <= 5; ++q) {
    const Rational p(2, 7);
    CHECK(constant_of(limit_cumulant(ModelKind::kY, q, 2, Regime::full(p))) == Rational(2 * q * q) * (1 - p));
    CHECK(constant_of(limit_cumulant(ModelKind::kY, q, 1, Regime::dilute())) == 1);
  }
  for (unsigned k = 1; k <= 5; ++k) {
    CHECK(constant_of(limit_cumulant(ModelKind::kX, 2, k, Regime::dilute())) == ipow(BigInt(2), k - 1));
    CHECK(constant_of(limit_cumulant(ModelKind::kY, 3, k, Regime::very_sparse())) == ipow(BigInt(2), k - 1));
    CHECK(constant_of(limit_cumulant(ModelKind::kX, 4, k, Regime::very_sparse())) == ipow(BigInt(2), k - 1));
  }
  // X^(4): Catalan(2)^k 2^{k-1} d^(2)_k
  CHECK(constant_of(limit_cumulant(ModelKind::kX, 4, 2, Regime::dilute())) == 4 * 2 * 4);
  // Even X closed form equals the maximal-edge tree census.
  for (auto [q, kmax] : {std::pair{4u, 3u}, std::pair{6u, 2u}}) {
    const auto table = diagrams::sparse_tree_table(ModelKind::kX, q, kmax);
    for (unsigned k = 1; k <= kmax; ++k) {
      const unsigned lmax = (q / 2 - 1) * k + 1;
      CHECK(Rational(table.counts[k - 1].at(lmax)) == constant_of(limit_cumulant(ModelKind::kX, q, k, Regime::dilute())));
    }
  }

  // Full limit k = 3 from the tree-diagram sum agrees with the exact sum's leading order.
  const Rational p(1, 3);
  const auto full3 = limit_cumulant(ModelKind::kY, 2, 3, Regime::full(p));
  CHECK(full3.source == "full:tree-diagram-sum");
  CHECK(constant_of(full3) == diagrams::limit_cumulant_full(ModelKind::kY, 2, 3).evaluate(p));

  const auto sparse = limit_cumulant(ModelKind::kY, 2, 1, Regime::sparse(Rational(3)));
  CHECK(sparse.variable == "1/c");
  CHECK(sparse.value == poly({1, 1}));
  const auto odd = limit_cumulant(ModelKind::kX, 3, 1, Regime::sparse(Rational(3)));
  CHECK(odd.variable == "c");
  CHECK(odd.value == Polynomial::monomial(1, 3));
  CHECK_THROWS_AS(limit_cumulant(ModelKind::kX, 3, 2, Regime::sparse(Rational(2))), NotProvidedError);
  CHECK_THROWS_AS(limit_cumulant(ModelKind::kX, 3, 2, Regime::very_sparse()), NotProvidedError);
  CHECK_THROWS_AS(limit_cumulant(ModelKind::kX, 2, 2, Regime::full(p)), NotProvidedError);
}

TEST_CASE("free energy truncation") {
  CHECK(free_energy_truncation(Regime::dilute(), 2, Rational(0), 3).value == 0);
  CHECK(free_energy_truncation(Regime::sparse(Rational(5)), 2, Rational(0), 2).value == 0);
  const Rational t(1, 10);
  CHECK(free_energy_truncation(Regime::dilute(), 2, t, 2).cumulant_part == t + 4 * t * t);
  const Rational c(7);
  const auto fe = free_energy_truncation(Regime::sparse(c), 2, t, 1);
  CHECK(fe.cumulant_part == t * (1 + 1 / c));
  CHECK(fe.value == doctest::Approx(Rational(t * (1 + 2 / c)).get_d()).epsilon(1e-3));
  try {
    free_energy_truncation(Regime::sparse(c), 2, t, 5);
    FAIL("expected an error");
  } catch (const NotProvidedError& e) {
    CHECK(std::string(e.what()).find("F_5") != std::string::npos);
  }
}
