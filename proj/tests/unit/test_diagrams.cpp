#include <doctest.h>

#include <vector>

#include "ermm/combinatorics.hpp"
#include "ermm/diagrams.hpp"
#include "ermm/errors.hpp"

using namespace ermm;
using namespace ermm::diagrams;

namespace {

Diagram from(ModelKind m, unsigned q, unsigned k, std::vector<long> alpha) {
  return Diagram::from_index_vector(m, q, k, alpha);
}

EnumerationOptions with(Filter f) {
  EnumerationOptions o;
  o.filter = f;
  return o;
}

Polynomial p_poly(std::vector<long> coeffs) {
  std::vector<Rational> c(coeffs.begin(), coeffs.end());
  return Polynomial(c);
}

}  // namespace

TEST_CASE("index vectors canonicalize to coincidence signatures") {
  const auto back = from(ModelKind::kY, 2, 1, {1, 2, 1});
  CHECK(back.color_group_count() == 1);
  CHECK(back.color_groups()[0].edge_slots.size() == 2);
  CHECK(back.vertex_class_count() == 2);
  CHECK(back.arc_count() == 1);

  const auto path = from(ModelKind::kY, 2, 1, {1, 2, 3});
  CHECK(path.color_group_count() == 2);
  CHECK(path.vertex_class_count() == 3);
  CHECK(path.arc_count() == 0);

  CHECK(path == from(ModelKind::kY, 2, 1, {5, 7, 9}));
  CHECK_THROWS_AS(from(ModelKind::kY, 2, 1, {1, 2}), UsageError);

  const auto triangle = from(ModelKind::kX, 3, 1, {4, 8, 6});
  CHECK(triangle.color_group_count() == 3);
  CHECK(triangle.cycle_count() == 1);
  CHECK(!triangle.is_tree());
}

TEST_CASE("enumeration counts") {
  const auto all = enumerate(ModelKind::kY, 2, 1, with(Filter::kAll));
  CHECK(all.oriented_count == 2);
  CHECK(all.unoriented_count == 2);

  const auto t2 = enumerate(ModelKind::kY, 2, 2, with(Filter::kTreeArcs));
  CHECK(t2.unoriented_count == 4);
  CHECK(t2.oriented_count == 8);
  const auto t3 = enumerate(ModelKind::kY, 2, 3, with(Filter::kTreeArcs));
  CHECK(t3.unoriented_count == 32);
  CHECK(t3.oriented_count == 128);

  // Cross-check against the tree-count sequences (frozen from an
  // independent brute-force enumeration of coincidence patterns).
  CHECK(enumerate(ModelKind::kY, 3, 2, with(Filter::kTreeArcs)).unoriented_count == 9);
  CHECK(enumerate(ModelKind::kX, 3, 2, with(Filter::kTreeArcs)).unoriented_count == 9);
  CHECK(enumerate(ModelKind::kX, 4, 2, with(Filter::kTreeArcs)).unoriented_count == 16);

  for (unsigned q : {2u, 3u}) {
    const auto d = combinatorics::d_seq(q, 4);
    for (unsigned k = 1; k <= 4; ++k) {
      EnumerationOptions o = with(Filter::kTreeArcs);
      o.max_slots = 16;
      const auto res = enumerate(ModelKind::kY, q, k, o);
      CHECK(res.unoriented_count == d[k - 1]);
      CHECK(BigInt(static_cast<unsigned long>(res.oriented_count)) == d[k - 1] * ipow(BigInt(2), k - 1));
    }
  }

  CHECK_THROWS_AS(enumerate(ModelKind::kY, 3, 4, with(Filter::kAll)), ResourceError);
}

TEST_CASE("enumeration is sorted, duplicate free and thread independent") {
  EnumerationOptions o = with(Filter::kConnected);
  const auto one = enumerate(ModelKind::kY, 2, 3, o);
  o.threads = 3;
  const auto three = enumerate(ModelKind::kY, 2, 3, o);
  REQUIRE(one.diagrams.size() == three.diagrams.size());
  for (std::size_t i = 0; i < one.diagrams.size(); ++i) CHECK(one.diagrams[i] == three.diagrams[i]);
  for (std::size_t i = 1; i < one.diagrams.size(); ++i) CHECK(one.diagrams[i - 1].labels() < one.diagrams[i].labels());
}

TEST_CASE("tree diagrams of the path model") {
  for (unsigned q : {2u, 3u}) {
    for (unsigned k = 1; k <= 3; ++k) {
      for_each_diagram(ModelKind::kY, q, k, with(Filter::kTreeArcs), [&](const Diagram& d) {
        CHECK(d.is_tree());
        CHECK(d.color_group_count() == (q - 1) * k + 1);
        CHECK(d.vertex_class_count() == (q - 1) * k + 2);
        // grey edges: simple color groups
        const unsigned grey = d.color_group_count() - d.arc_color_count();
        CHECK(grey == (q - 1) * k - d.arc_color_count() + 1);
        // every vertex merger is forced by the edge coincidences
        CHECK(d.forced_labels() == d.labels());
      });
    }
  }
}

TEST_CASE("chi") {
  const auto glued = from(ModelKind::kY, 2, 2, {1, 2, 3, 2, 1, 4});
  CHECK(chi({0, 0}, glued) == 0);
  CHECK(chi({0, 1}, glued) == 1);
  const auto apart = from(ModelKind::kY, 2, 2, {1, 2, 3, 4, 5, 6});
  CHECK(chi({0, 1}, apart) == 0);
}

TEST_CASE("weights") {
  const auto single = from(ModelKind::kY, 2, 1, {1, 2, 3});
  CHECK(weight(single) == Polynomial::monomial(1, 2));
  const auto glued = from(ModelKind::kY, 2, 2, {1, 2, 3, 2, 1, 4});
  CHECK(glued.color_group_count() == 3);
  CHECK(weight(glued) == p_poly({0, 0, 0, 1, -1}));

  // W vanishes on every disconnected diagram.
  for (unsigned k = 1; k <= 3; ++k) {
    for_each_diagram(ModelKind::kY, 2, k, with(Filter::kAll), [&](const Diagram& d) {
      if (!d.is_connected()) CHECK(weight(d).is_zero());
    });
  }
}

TEST_CASE("class counts") {
  CHECK(exact_class_count(3, BigInt(5)) == 60);
  CHECK(exact_class_count(2, BigInt(2)) == 2);
  CHECK(exact_class_count(4, BigInt(3)) == 0);
}

TEST_CASE("exact cumulants from diagrams") {
  CHECK(cumulant_via_diagrams(ModelKind::kY, 2, 1, BigInt(3), Rational(1, 2)) == Rational(9, 2));
  CHECK(cumulant_via_diagrams(ModelKind::kX, 2, 1, BigInt(7)) == p_poly({0, 42}));
  for (unsigned k = 1; k <= 3; ++k) CHECK(cumulant_via_diagrams(ModelKind::kY, 2, k, BigInt(6), Rational(0)) == 0);

  // Frozen from exhaustive enumeration of all graphs on n vertices.
  const Rational p(1, 3);
  CHECK(cumulant_via_diagrams(ModelKind::kY, 2, 1, BigInt(4), p) == Rational(20, 3));
  CHECK(cumulant_via_diagrams(ModelKind::kY, 2, 2, BigInt(4), p) == Rational(848, 27));
  CHECK(cumulant_via_diagrams(ModelKind::kY, 2, 3, BigInt(4), p) == Rational(55136, 243));
  CHECK(cumulant_via_diagrams(ModelKind::kY, 2, 1, BigInt(5), p) == Rational(40, 3));
  CHECK(cumulant_via_diagrams(ModelKind::kY, 2, 2, BigInt(5), p) == Rational(2320, 27));
  CHECK(cumulant_via_diagrams(ModelKind::kX, 3, 2, BigInt(4), p) == Rational(512, 81));
  CHECK(cumulant_via_diagrams(ModelKind::kX, 3, 2, BigInt(5), p) == Rational(1520, 81));
  CHECK(cumulant_via_diagrams(ModelKind::kY, 3, 2, BigInt(4), p) == Rational(40912, 243));
}

TEST_CASE("full-regime limits") {
  CHECK(limit_cumulant_full(ModelKind::kY, 2, 1) == Polynomial(1));
  CHECK(limit_cumulant_full(ModelKind::kY, 2, 2) == p_poly({8, -8}));
  CHECK(limit_cumulant_full(ModelKind::kY, 3, 2) == p_poly({18, -18}));
  CHECK(limit_cumulant_full(ModelKind::kX, 3, 2) == p_poly({18, -18}));
  CHECK_THROWS_AS(limit_cumulant_full(ModelKind::kX, 2, 2), NotProvidedError);
}

TEST_CASE("sparse tree table") {
  const auto t = sparse_tree_table(ModelKind::kY, 2, 3);
  CHECK(t.counts[0] == std::map<unsigned, BigInt>{{1, 1}, {2, 1}});
  CHECK(t.counts[1] == std::map<unsigned, BigInt>{{1, 2}, {2, 10}, {3, 8}});
  CHECK(t.counts[2] == std::map<unsigned, BigInt>{{1, 4}, {2, 76}, {3, 200}, {4, 128}});
  CHECK(t.limit[0] == p_poly({1, 1}));
  const auto d = combinatorics::d_seq(2, 3);
  for (unsigned k = 1; k <= 3; ++k) CHECK(t.limit[k - 1].evaluate(Rational(0)) == Rational(d[k - 1] * ipow(BigInt(2), k - 1)));

  const auto odd = sparse_tree_table(ModelKind::kX, 3, 1);
  CHECK(odd.counts[0].empty());
}

TEST_CASE("one-cycle census") {
  const auto census = cycle_census(3, 2);
  CHECK(census.counts[0] == std::map<unsigned, BigInt>{{3, 1}});
  CHECK(census.dilute_value(2) == 6);
  const auto five = cycle_census(5, 2);
  CHECK(five.dilute_value(1) == 1);
  // Besides the 10 gluings of two 5-cycles, two closed walks around a
  // triangle with distinct backtracking pendants also span 5 edges.
  CHECK(five.dilute_value(2) == 160);
  CHECK(five.counts[0].at(5) == 1);
  CHECK(five.counts[0].at(4) == 5);
  CHECK_THROWS_AS(cycle_census(4, 1), UsageError);
}

TEST_CASE("walks") {
  const std::vector<long> idx{7, 3, 7, 9};
  const auto w = walk_encode(idx);
  CHECK(w.letters == std::vector<std::uint8_t>{0, 1, 0, 2});
  CHECK(w.root_steps() == 3);
  CHECK(w.edge_count() == 2);
  CHECK(w.is_tree());

  const auto two = brute_force_walk_census(2);
  CHECK(two.counts[2] == 1);
  CHECK(two.counts[1] == 1);
  const auto three = brute_force_walk_census(3);
  CHECK(three.counts[2] == 0);
  for (unsigned l = 1; l <= 3; ++l)
    for (unsigned s = 1; 2 * s <= 2 * l + 1; ++s) CHECK(brute_force_walk_census(2 * l + 1).counts[2 * s] == 0);
}

TEST_CASE("walks of one element biject with diagrams of one path") {
  for (unsigned q = 1; q <= 6; ++q) {
    Polynomial from_walks = brute_force_walk_census(q).total();
    EnumerationOptions o;
    o.max_cycle_rank = 0;
    o.max_slots = 16;
    Polynomial from_diagrams;
    for_each_diagram(ModelKind::kY, q, 1, o, [&](const Diagram& d) {
      from_diagrams += Polynomial::monomial(1, d.color_group_count() - 1);
    });
    CHECK(from_walks == from_diagrams);
  }
}

TEST_CASE("dump lines round trip") {
  for_each_diagram(ModelKind::kX, 3, 2, with(Filter::kConnected), [&](const Diagram& d) {
    CHECK(parse_dump_line(d.dump_line()) == d);
  });
  CHECK(from(ModelKind::kY, 2, 1, {1, 2, 1}).dump_line() == "Y 2 1 0.1.0 1 2 1 1 0");
  CHECK_THROWS_AS(parse_dump_line("Y 2 1 0.1.0 2 2 1 1 0"), UsageError);
}
