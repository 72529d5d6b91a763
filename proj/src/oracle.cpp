#include "ermm/oracle.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <thread>
#include <utility>

#include "ermm/errors.hpp"
#include "ermm/set_partitions.hpp"

namespace ermm::oracle {

namespace {

unsigned pair_count(unsigned n) { return n * (n - 1) / 2; }

void check_enumerable(unsigned n) {
  if (n > kMaxEnumerationN)
    throw ResourceError("exhaustive enumeration is limited to n <= " + std::to_string(kMaxEnumerationN));
}

using Matrix = std::array<std::array<std::uint64_t, kMaxEnumerationN>, kMaxEnumerationN>;

void visit_range(unsigned n, unsigned q, std::uint32_t lo, std::uint32_t hi,
                 const std::function<void(const GraphRecord&)>& visit) {
  std::vector<std::pair<unsigned, unsigned>> pairs;
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  for (std::uint32_t mask = lo; mask < hi; ++mask) {
    std::array<std::uint32_t, kMaxEnumerationN> rows{};
    for (unsigned b = 0; b < pairs.size(); ++b)
      if (mask >> b & 1u) {
        rows[pairs[b].first] |= 1u << pairs[b].second;
        rows[pairs[b].second] |= 1u << pairs[b].first;
      }
    GraphRecord rec{mask, static_cast<unsigned>(__builtin_popcount(mask)), 0, 0, 0, 0};
    rec.tr_delta = 2 * rec.edges;
    for (unsigned v = 0; v < n; ++v) {
      const std::uint64_t d = static_cast<std::uint64_t>(__builtin_popcount(rows[v]));
      rec.tr_delta2 += d * d + d;
    }
    // M = A^{floor(q/2)} starting from the identity.
    Matrix m{};
    for (unsigned i = 0; i < n; ++i) m[i][i] = 1;
    auto times_a = [&](const Matrix& src) {
      Matrix out{};
      for (unsigned i = 0; i < n; ++i)
        for (unsigned l = 0; l < n; ++l)
          if (rows[i] >> l & 1u)
            for (unsigned j = 0; j < n; ++j) out[i][j] += src[l][j];
      return out;
    };
    for (unsigned t = 0; t < q / 2; ++t) m = times_a(m);
    const Matrix right = q % 2 ? times_a(m) : m;  // A^{ceil(q/2)}
    for (unsigned i = 0; i < n; ++i)
      for (unsigned j = 0; j < n; ++j) rec.x += m[i][j] * right[j][i];
    // 1^T A^q 1 = sum_j (1^T A^{floor}) _j (A^{ceil} 1)_j.
    for (unsigned j = 0; j < n; ++j) {
      std::uint64_t col = 0, row = 0;
      for (unsigned i = 0; i < n; ++i) {
        col += m[i][j];
        row += right[j][i];
      }
      rec.y += col * row;
    }
    visit(rec);
  }
}

// Histogram of (|E|, key(record)) over all graphs, built in parallel.
std::map<std::pair<unsigned, std::uint64_t>, std::uint64_t> histogram(
    unsigned n, unsigned q, const std::function<std::uint64_t(const GraphRecord&)>& key, unsigned threads) {
  check_enumerable(n);
  const std::uint32_t total = std::uint32_t{1} << pair_count(n);
  threads = std::max(1u, std::min<unsigned>(threads, total));
  std::vector<std::map<std::pair<unsigned, std::uint64_t>, std::uint64_t>> parts(threads);
  auto work = [&](unsigned t) {
    const std::uint32_t lo = static_cast<std::uint32_t>(std::uint64_t{total} * t / threads);
    const std::uint32_t hi = static_cast<std::uint32_t>(std::uint64_t{total} * (t + 1) / threads);
    visit_range(n, q, lo, hi, [&](const GraphRecord& r) { ++parts[t][{r.edges, key(r)}]; });
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (unsigned t = 1; t < threads; ++t)
    for (const auto& [k, v] : parts[t]) parts[0][k] += v;
  return parts[0];
}

BigInt to_big(std::uint64_t v) {
  BigInt z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return z;
}

// p^e (1-p)^{N-e} for e = 0..N.
std::vector<Rational> edge_weights(unsigned n, const Rational& p) {
  const unsigned N = pair_count(n);
  std::vector<Rational> out(N + 1);
  for (unsigned e = 0; e <= N; ++e) out[e] = rpow(p, e) * rpow(Rational(1) - p, N - e);
  return out;
}

void check_probability(const Rational& p) {
  if (p < 0 || p > 1) throw UsageError("p must lie in [0,1]");
}

Rational power_of(const Rational& base, std::uint64_t exponent) {
  if (base == 0) return exponent == 0 ? Rational(1) : Rational(0);
  return rpow(base, static_cast<unsigned long>(exponent));
}

}  // namespace

void for_each_graph(unsigned n, unsigned q, const std::function<void(const GraphRecord&)>& visit) {
  check_enumerable(n);
  visit_range(n, q, 0, std::uint32_t{1} << pair_count(n), visit);
}

ExactWeights::ExactWeights(Rational x_, Rational s_) : x(std::move(x_)), s(std::move(s_)) {
  if (x <= 0 || s <= 0) throw UsageError("weights x and s must be positive");
}

Rational partition_function(unsigned n, const ExactWeights& w, Potential potential, unsigned threads) {
  const bool quartic = potential == Potential::kTrDeltaSquared;
  const auto h = histogram(n, 0, [&](const GraphRecord& r) { return quartic ? r.tr_delta2 : 0; }, threads);
  Rational z = 0;
  for (const auto& [key, count] : h) {
    Rational term = Rational(to_big(count)) * rpow(w.x, key.first);
    if (quartic) term *= power_of(w.s, key.second);
    z += term;
  }
  return z;
}

IdentityCheck check_free_partition(unsigned n, const Rational& x) {
  return {"free partition function n=" + std::to_string(n), partition_function(n, ExactWeights(x), Potential::kNone),
          rpow(1 + x, pair_count(n))};
}

IdentityCheck check_quartic_identity(unsigned n, const ExactWeights& w) {
  const unsigned N = pair_count(n);
  const Rational lhs = partition_function(n, w, Potential::kTrDeltaSquared) / rpow(1 + w.x, N);
  const Rational xs2 = w.x * w.s * w.s;
  const Rational p_prime = xs2 / (1 + xs2);
  const auto weights = edge_weights(n, p_prime);
  Rational expectation = 0;
  for (const auto& [key, count] : histogram(n, 2, [](const GraphRecord& r) { return r.y; }, 1))
    expectation += Rational(to_big(count)) * weights[key.first] * power_of(w.s, key.second);
  const Rational rhs = rpow((1 + xs2) / (1 + w.x), N) * expectation;
  return {"quartic partition function n=" + std::to_string(n), lhs, rhs};
}

std::vector<Rational> exact_moments_enumeration(ModelKind model, unsigned q, unsigned mmax, unsigned n,
                                                const Rational& p, unsigned threads) {
  if (q < 1) throw UsageError("q must be at least 1");
  check_probability(p);
  const bool is_x = model == ModelKind::kX;
  const auto h = histogram(n, q, [&](const GraphRecord& r) { return is_x ? r.x : r.y; }, threads);
  const auto weights = edge_weights(n, p);
  std::vector<Rational> out(mmax, 0);
  for (const auto& [key, count] : h) {
    const Rational w = Rational(to_big(count)) * weights[key.first];
    const BigInt v = to_big(key.second);
    BigInt power = 1;
    for (unsigned m = 0; m < mmax; ++m) {
      power *= v;
      out[m] += w * Rational(power);
    }
  }
  return out;
}

std::vector<Rational> exact_moments_tuples(ModelKind model, unsigned q, unsigned mmax, unsigned n, const Rational& p) {
  if (q < 1) throw UsageError("q must be at least 1");
  check_probability(p);
  const unsigned r = slots_per_element(model, q);
  if (r * mmax > kMaxTupleSlots || n > kMaxTupleN)
    throw ResourceError("index-tuple route needs slots*m <= " + std::to_string(kMaxTupleSlots) + " and n <= " +
                        std::to_string(kMaxTupleN));
  std::vector<Rational> out;
  for (unsigned m = 1; m <= mmax; ++m) {
    std::vector<std::pair<unsigned, unsigned>> slot_edges;
    for (unsigned e = 0; e < m; ++e)
      for (unsigned j = 0; j < q; ++j)
        slot_edges.emplace_back(e * r + j, model == ModelKind::kY ? e * r + j + 1 : e * r + (j + 1) % q);
    // (nu, distinct edges) -> number of equality patterns
    std::map<std::pair<unsigned, unsigned>, std::uint64_t> patterns;
    std::vector<std::pair<unsigned, unsigned>> edges;
    for_each_set_partition(r * m, [&](const std::vector<unsigned>& block, unsigned blocks) {
      edges.clear();
      for (const auto& [a, b] : slot_edges) {
        const unsigned u = block[a], v = block[b];
        if (u == v) return;
        edges.emplace_back(std::min(u, v), std::max(u, v));
      }
      std::sort(edges.begin(), edges.end());
      const auto distinct = static_cast<unsigned>(std::unique(edges.begin(), edges.end()) - edges.begin());
      ++patterns[{blocks, distinct}];
    });
    Rational moment = 0;
    for (const auto& [key, count] : patterns)
      moment += Rational(to_big(count) * falling_factorial(BigInt(n), key.first)) * rpow(p, key.second);
    out.push_back(moment);
  }
  return out;
}

std::vector<Rational> exact_moments(ModelKind model, unsigned q, unsigned mmax, unsigned n, const Rational& p,
                                    unsigned threads) {
  const bool enumerable = n <= kMaxEnumerationN;
  const bool tuples = slots_per_element(model, q) * mmax <= kMaxTupleSlots && n <= kMaxTupleN;
  if (!enumerable && !tuples) throw ResourceError("no exact route covers these parameters");
  if (enumerable && tuples) {
    auto a = exact_moments_enumeration(model, q, mmax, n, p, threads);
    if (a != exact_moments_tuples(model, q, mmax, n, p))
      throw InvariantError(std::string("exact moment routes disagree for ") + model_letter(model) + " q=" + std::to_string(q));
    return a;
  }
  return enumerable ? exact_moments_enumeration(model, q, mmax, n, p, threads) : exact_moments_tuples(model, q, mmax, n, p);
}

std::vector<Rational> moments_to_cumulants(const std::vector<Rational>& moments) {
  if (moments.size() > 8) throw UsageError("moment-to-cumulant conversion is limited to k <= 8");
  std::vector<Rational> out;
  for (unsigned k = 1; k <= moments.size(); ++k) {
    Rational total = 0;
    std::vector<unsigned> sizes;
    for_each_set_partition(k, [&](const std::vector<unsigned>& block, unsigned blocks) {
      sizes.assign(blocks, 0);
      for (unsigned b : block) ++sizes[b];
      Rational term = Rational(factorial(blocks - 1));
      if (blocks % 2 == 0) term = -term;
      for (unsigned s : sizes) term *= moments[s - 1];
      total += term;
    });
    out.push_back(total);
  }
  return out;
}

std::vector<Rational> moments_to_cumulants_recursive(const std::vector<Rational>& moments) {
  std::vector<Rational> kappa;
  for (unsigned k = 1; k <= moments.size(); ++k) {
    Rational value = moments[k - 1];
    for (unsigned j = 1; j < k; ++j) value -= Rational(binomial(k - 1, j - 1)) * kappa[j - 1] * moments[k - j - 1];
    kappa.push_back(value);
  }
  return kappa;
}

Rational exact_cumulant(ModelKind model, unsigned q, unsigned k, unsigned n, const Rational& p, unsigned threads) {
  if (k < 1) throw UsageError("k must be at least 1");
  return moments_to_cumulants(exact_moments(model, q, k, n, p, threads)).back();
}

LaplacianMeans laplacian_means(unsigned n, const Rational& p) {
  check_probability(p);
  const auto weights = edge_weights(n, p);
  LaplacianMeans out{0, 0};
  for (const auto& [key, count] : histogram(n, 0, [](const GraphRecord& r) { return r.tr_delta2; }, 1)) {
    const Rational w = Rational(to_big(count)) * weights[key.first];
    out.tr_delta += w * (2 * key.first);
    out.tr_delta2 += w * Rational(to_big(key.second));
  }
  return out;
}

}  // namespace ermm::oracle
