#include <doctest.h>

#include "ermm/diagrams.hpp"
#include "ermm/errors.hpp"
#include "ermm/oracle.hpp"

using namespace ermm;
using namespace ermm::oracle;

TEST_CASE("graph enumeration") {
  std::size_t count = 0;
  std::uint32_t last = 0;
  for_each_graph(4, 2, [&](const GraphRecord& r) {
    if (count > 0) CHECK(r.mask == last + 1);
    last = r.mask;
    ++count;
    CHECK(r.x == 2 * r.edges);
    CHECK(r.tr_delta2 == r.y + r.x);
  });
  CHECK(count == 64);
  // Mask 0b111 on n = 3 is K_3.
  for_each_graph(3, 3, [&](const GraphRecord& r) {
    if (r.mask == 7) {
      CHECK(r.x == 6);
      CHECK(r.y == 24);
      CHECK(r.tr_delta == 6);
      CHECK(r.tr_delta2 == 18);
    }
  });
  CHECK_THROWS_AS(for_each_graph(8, 2, [](const GraphRecord&) {}), ResourceError);
}

TEST_CASE("free partition function") {
  CHECK(partition_function(4, ExactWeights(1), Potential::kNone) == 64);
  CHECK(partition_function(3, ExactWeights(make_rational(1, 2)), Potential::kNone) == make_rational(27, 8));
  for (unsigned n = 1; n <= 6; ++n)
    for (const Rational& x : {Rational(1), make_rational(1, 2), make_rational(1, 3)})
      CHECK(check_free_partition(n, x).holds());
  CHECK_THROWS_AS(ExactWeights(0), UsageError);
}

TEST_CASE("quartic partition identity") {
  for (unsigned n = 3; n <= 5; ++n) {
    CHECK(check_quartic_identity(n, ExactWeights(make_rational(1, 2), 2)).holds());
    CHECK(check_quartic_identity(n, ExactWeights(make_rational(1, 3), make_rational(1, 2))).holds());
  }
}

TEST_CASE("threaded enumeration matches serial") {
  const ExactWeights w(make_rational(1, 3), make_rational(3, 2));
  CHECK(partition_function(5, w, Potential::kTrDeltaSquared, 1) == partition_function(5, w, Potential::kTrDeltaSquared, 3));
  CHECK(exact_moments_enumeration(ModelKind::kX, 3, 3, 5, make_rational(1, 4), 1) ==
        exact_moments_enumeration(ModelKind::kX, 3, 3, 5, make_rational(1, 4), 4));
}

TEST_CASE("exact moments by two routes") {
  CHECK(exact_moments(ModelKind::kY, 2, 1, 3, make_rational(1, 2))[0] == make_rational(9, 2));
  CHECK(exact_moments(ModelKind::kX, 2, 1, 4, make_rational(1, 3))[0] == 4);
  CHECK(exact_moments_tuples(ModelKind::kX, 2, 1, 4, make_rational(1, 3))[0] == 4);
  for (unsigned n = 2; n <= 6; ++n) {
    const Rational p = make_rational(2, 7);
    CHECK(exact_moments(ModelKind::kY, 1, 1, n, p)[0] == Rational(n * (n - 1)) * p);
    for (unsigned q = 1; q <= 4; ++q)
      for (auto m : {ModelKind::kX, ModelKind::kY}) {
        const unsigned mmax = std::max(1u, 8 / slots_per_element(m, q));
        CHECK(exact_moments_enumeration(m, q, mmax, n, p) == exact_moments_tuples(m, q, mmax, n, p));
      }
  }
  CHECK(exact_moments_enumeration(ModelKind::kX, 2, 6, 4, make_rational(1, 3)) ==
        exact_moments_tuples(ModelKind::kX, 2, 6, 4, make_rational(1, 3)));
  // n beyond enumeration goes through index tuples only.
  const Rational p = make_rational(1, 10);
  CHECK(exact_moments(ModelKind::kX, 2, 2, 20, p)[0] == Rational(380) * p);
  CHECK_THROWS_AS(exact_moments(ModelKind::kY, 3, 4, 20, p), ResourceError);
}

TEST_CASE("moments to cumulants") {
  const Rational mu = 3, var = 5;
  const auto c = moments_to_cumulants({mu, mu * mu + var});
  CHECK(c[0] == mu);
  CHECK(c[1] == var);
  const auto point = moments_to_cumulants({2, 4, 8, 16, 32});
  CHECK(point == std::vector<Rational>{2, 0, 0, 0, 0});
  const Rational p = make_rational(1, 3);
  const auto bern = moments_to_cumulants(std::vector<Rational>(4, p));
  CHECK(bern[1] == p * (1 - p));
  CHECK(bern[2] == p * (1 - p) * (1 - 2 * p));
  std::vector<Rational> ms;
  for (unsigned k = 1; k <= 8; ++k) ms.push_back(make_rational(k * k + 1, k + 2));
  CHECK(moments_to_cumulants(ms) == moments_to_cumulants_recursive(ms));
  CHECK_THROWS_AS(moments_to_cumulants(std::vector<Rational>(9, 1)), UsageError);
}

TEST_CASE("exact cumulants") {
  CHECK(exact_cumulant(ModelKind::kY, 2, 1, 3, make_rational(1, 2)) == make_rational(9, 2));
  for (auto m : {ModelKind::kX, ModelKind::kY}) CHECK(exact_cumulant(m, 2, 1, 4, 0) == 0);
  for (unsigned n = 2; n <= 6; ++n) {
    const Rational p = make_rational(1, 5);
    CHECK(exact_cumulant(ModelKind::kX, 2, 2, n, p) == 4 * Rational(binomial(n, 2)) * p * (1 - p));
  }
  // Independent exhaustive oracle values (p = 1/3).
  const Rational third = make_rational(1, 3);
  CHECK(exact_cumulant(ModelKind::kY, 2, 1, 4, third) == make_rational(20, 3));
  CHECK(exact_cumulant(ModelKind::kY, 2, 2, 4, third) == make_rational(848, 27));
  CHECK(exact_cumulant(ModelKind::kY, 2, 3, 4, third) == make_rational(55136, 243));
  CHECK(exact_cumulant(ModelKind::kY, 2, 2, 5, third) == make_rational(2320, 27));
  CHECK(exact_cumulant(ModelKind::kX, 3, 2, 4, third) == make_rational(512, 81));
  CHECK(exact_cumulant(ModelKind::kX, 3, 2, 5, third) == make_rational(1520, 81));
}

TEST_CASE("oracle and diagram sum agree") {
  const Rational third = make_rational(1, 3);
  for (unsigned n : {4u, 5u})
    for (unsigned k : {1u, 2u})
      CHECK(exact_cumulant(ModelKind::kY, 2, k, n, third) ==
            diagrams::cumulant_via_diagrams(ModelKind::kY, 2, k, BigInt(n), third));
  CHECK(exact_cumulant(ModelKind::kX, 3, 2, 6, make_rational(2, 5)) ==
        diagrams::cumulant_via_diagrams(ModelKind::kX, 3, 2, BigInt(6), make_rational(2, 5)));
}

TEST_CASE("laplacian means") {
  for (unsigned n = 2; n <= 6; ++n) {
    const Rational p = make_rational(3, 7);
    const auto means = laplacian_means(n, p);
    CHECK(means.tr_delta == Rational(n * (n - 1)) * p);
    CHECK(means.tr_delta2 == exact_moments(ModelKind::kY, 2, 1, n, p)[0] + Rational(n * (n - 1)) * p);
  }
}
