#include "ermm/combinatorics.hpp"

#include <cmath>
#include <functional>

#include "ermm/diagrams.hpp"
#include "ermm/errors.hpp"

namespace ermm::combinatorics {

namespace {

// Coefficients 0..order of the product of two truncated sequences.
template <typename T>
std::vector<T> truncated_product(const std::vector<T>& a, const std::vector<T>& b, std::size_t order) {
  std::vector<T> out(order + 1, T(0));
  for (std::size_t i = 0; i < a.size() && i <= order; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size() && i + j <= order; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

template <typename T>
std::vector<T> truncated_power(const std::vector<T>& a, unsigned m, std::size_t order) {
  std::vector<T> out(order + 1, T(0));
  out[0] = 1;
  for (unsigned i = 0; i < m; ++i) out = truncated_product(out, a, order);
  return out;
}

BigInt to_integer(const Rational& r, const char* what) {
  if (!is_integer(r)) throw InvariantError(std::string(what) + " is not an integer: " + to_string(r));
  return r.get_num();
}

}  // namespace

std::vector<Rational> h_seq(unsigned q, unsigned kmax) {
  if (q < 1) throw UsageError("q must be at least 1");
  std::vector<Rational> h(kmax + 1, Rational(0));
  h[0] = 1;
  for (unsigned k = 1; k <= kmax; ++k) {
    const std::vector<Rational> known(h.begin(), h.begin() + k);
    const Rational conv = truncated_power(known, q, k - 1)[k - 1];
    h[k] = make_rational(static_cast<long>((q - 1) * k + 1), static_cast<long>(k)) * conv;
  }
  return h;
}

std::vector<BigInt> d_seq_from_h(unsigned q, unsigned kmax) {
  const auto h = h_seq(q, kmax);
  std::vector<BigInt> d;
  for (unsigned k = 1; k <= kmax; ++k) {
    const Rational v = Rational(factorial(k)) * h[k] / Rational((q - 1) * k + 1);
    d.push_back(to_integer(v, "d_k from h_k"));
  }
  return d;
}

std::vector<BigInt> d_seq_direct(unsigned q, unsigned kmax) {
  if (q < 1) throw UsageError("q must be at least 1");
  if (kmax > 22) throw ResourceError("direct composition recurrence limited to k <= 22");
  std::vector<BigInt> d(kmax + 1, 0);
  if (kmax >= 1) d[1] = 1;
  for (unsigned k = 2; k <= kmax; ++k) {
    BigInt total = 0;
    const BigInt kf = factorial(k - 1);
    for (unsigned l = 1; l <= std::min(q, k - 1); ++l) {
      BigInt inner = 0;
      // compositions j_1 + ... + j_l = k - 1 with j_i >= 1
      std::vector<unsigned> parts;
      std::function<void(unsigned, unsigned)> rec = [&](unsigned remaining, unsigned slots) {
        if (slots == 0) {
          if (remaining != 0) return;
          BigInt prod = 1, denom = 1;
          for (unsigned j : parts) {
            denom *= factorial(j);
            prod *= BigInt((q - 1) * j + 1) * d[j];
          }
          inner += kf / denom * prod;
          return;
        }
        for (unsigned j = 1; j + (slots - 1) <= remaining; ++j) {
          parts.push_back(j);
          rec(remaining - j, slots - 1);
          parts.pop_back();
        }
      };
      rec(k - 1, l);
      total += binomial(q, l) * inner;
    }
    d[k] = total;
  }
  return std::vector<BigInt>(d.begin() + 1, d.end());
}

std::vector<BigInt> d_seq(unsigned q, unsigned kmax) {
  auto via_h = d_seq_from_h(q, kmax);
  if (kmax <= 22) {
    const auto direct = d_seq_direct(q, kmax);
    if (direct != via_h) throw InvariantError("d_k routes disagree for q=" + std::to_string(q));
  }
  return via_h;
}

bool convolution_identity_check(unsigned q, unsigned kmax) {
  if (q < 2) throw UsageError("convolution identity needs q >= 2");
  const auto h = h_seq(q, kmax);
  const auto conv = truncated_power(h, q - 1, kmax);
  for (unsigned k = 0; k <= kmax; ++k) {
    const Rational rhs = Rational(ipow(BigInt(q), k) * ipow(BigInt(q - 1), k)) *
                         (k == 0 ? Rational(1) : Rational(ipow(BigInt(k + 1), k - 1))) / Rational(factorial(k));
    if (conv[k] != rhs) return false;
  }
  return true;
}

RootedTreeCounts rooted_tree_counts(unsigned kmax) {
  RootedTreeCounts out;
  // Exponential generating coefficients T^_l / l!.
  std::vector<Rational> egf{Rational(1)};
  out.rooted.push_back(1);
  for (unsigned m = 1; m <= kmax; ++m) {
    BigInt total = 0;
    for (unsigned r = 1; r <= m; ++r) {
      const Rational inner = truncated_power(egf, r, m - r)[m - r] * Rational(factorial(m - r));
      total += ipow(BigInt(2), r) * binomial(m, r) * to_integer(inner, "rooted tree sum");
    }
    out.rooted.push_back(total);
    egf.push_back(Rational(total) / Rational(factorial(m)));
  }
  out.scaled.push_back(Rational(1));
  for (unsigned m = 1; m <= kmax; ++m) {
    Rational sum = 0;
    for (unsigned j = 0; j < m; ++j) sum += out.scaled[j] * out.scaled[m - 1 - j];
    out.scaled.push_back(make_rational(m + 1, m) * sum);
  }
  for (unsigned k = 1; k <= kmax; ++k) {
    BigInt total = 0;
    for (unsigned m1 = 0; m1 <= k - 1; ++m1)
      total += binomial(k - 1, m1) * out.rooted[m1] * out.rooted[k - 1 - m1];
    out.unrooted.push_back(total);
  }
  for (unsigned m = 0; m <= kmax; ++m) {
    const BigInt closed = m == 0 ? BigInt(1) : ipow(BigInt(2), m) * ipow(BigInt(m + 1), m - 1);
    if (out.rooted[m] != closed || out.scaled[m] != Rational(closed) / Rational(factorial(m)))
      throw InvariantError("rooted tree count mismatch at m=" + std::to_string(m));
  }
  for (unsigned k = 1; k <= kmax; ++k) {
    const Rational closed = Rational(ipow(BigInt(2), k)) * (k == 1 ? make_rational(1, 2) : Rational(ipow(BigInt(k + 1), k - 2)));
    if (Rational(out.unrooted[k - 1]) != closed) throw InvariantError("tree count mismatch at k=" + std::to_string(k));
  }
  return out;
}

BigInt catalan(unsigned m) { return binomial(2 * m, m) / BigInt(m + 1); }

std::vector<Polynomial> w_seq(unsigned kmax, series::WHatVariant variant) {
  if (kmax == 0) return {};
  const auto w_hat = series::solve_w_hat(kmax - 1, variant);
  std::vector<Polynomial> w;
  for (unsigned k = 1; k <= kmax; ++k) {
    Polynomial total;
    for (unsigned s = 1; s <= k; ++s) {
      Polynomial inner;
      for (unsigned j = 0; j <= k - s; ++j) inner += w_hat[j] * w_hat[k - s - j];
      total += inner / Rational(factorial(s - 1));
    }
    w.push_back(total);
  }
  return w;
}

std::vector<Polynomial> sparse_limit_from_w_chain(unsigned kmax, series::WHatVariant variant) {
  const auto w = w_seq(kmax, variant);
  std::vector<Polynomial> out;
  for (unsigned k = 1; k <= kmax; ++k) {
    const Polynomial& wk = w[k - 1];
    if (wk.degree() > static_cast<int>(k))
      throw SolverError("w_" + std::to_string(k) + " has degree " + std::to_string(wk.degree()) + " in c");
    std::vector<Rational> coeffs(k + 1, Rational(0));
    for (int i = 0; i <= wk.degree(); ++i) coeffs[k - static_cast<unsigned>(i)] = wk.coefficient(i);
    const Rational scale = Rational(ipow(BigInt(2), k - 1) * factorial(k - 1));
    out.push_back(Polynomial(std::move(coeffs)) * scale);
  }
  return out;
}

namespace {

BigInt binom_or_zero(long n, long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  return binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(k));
}

// Interleavings of an excursion through nu (s steps leaving nu, not
// towards rho) with v crossings of the root edge.
BigInt interleave_nu(unsigned v, unsigned s) {
  const long a = (v + 1) / 2, half = (s + 1) / 2;
  if (s % 2 == 0) return binom_or_zero(half + a - 1, a - 1);
  if (v % 2 == 0) return 0;
  return binom_or_zero(half - 1 + a - 1, a - 1);
}

// Interleavings of t root steps away from nu with v crossings.
BigInt interleave_rho(unsigned v, unsigned t) {
  const long a = (v + 1) / 2, b = (t + 1) / 2;
  if (t == 0) return 1;
  if (v % 2 == 1) {
    if (t % 2 == 1 || a == 1) return 0;
    return binom_or_zero(a - 2 + b, b);
  }
  if (t % 2 == 1) return binom_or_zero(a - 1 + b - 1, b - 1);
  return binom_or_zero(a - 1 + b, b);
}

Polynomial divide_by_variable(const Polynomial& p) {
  if (p.coefficient(0) != 0)
    throw InvariantError("walk weight has a constant term");
  if (p.is_zero()) return p;
  std::vector<Rational> c(p.coefficients().begin() + 1, p.coefficients().end());
  return Polynomial(std::move(c));
}

WalkCensusTable parity_aware(unsigned qmax) {
  const Polynomial c = Polynomial::variable();
  // g[q][r]: walks weighted by c per edge, including the root edge.
  std::vector<std::vector<Polynomial>> g(qmax + 1);
  for (unsigned q = 0; q <= qmax; ++q) {
    g[q].assign(q + 1, Polynomial());
    if (q == 0) {
      g[0][0] = 1;
      continue;
    }
    for (unsigned r = 1; r <= q; ++r) {
      Polynomial total;
      for (unsigned v = 1; v <= r; ++v) {
        const BigInt right = interleave_rho(v, r - v);
        if (right == 0) continue;
        for (unsigned u = 0; u + v <= q; ++u) {
          if (r - v > u) continue;
          const Polynomial& tail = g[u][r - v];
          if (tail.is_zero()) continue;
          for (unsigned s = 0; s + u + v <= q; ++s) {
            const unsigned left_len = q - u - v;
            if (s > left_len) continue;
            const Polynomial& head = g[left_len][s];
            if (head.is_zero()) continue;
            const BigInt left = interleave_nu(v, s);
            if (left == 0) continue;
            total += head * tail * Rational(left * right);
          }
        }
      }
      g[q][r] = total * c;
    }
  }
  WalkCensusTable out;
  out.table.resize(qmax + 1);
  for (unsigned q = 0; q <= qmax; ++q) {
    out.table[q].assign(q + 1, Polynomial());
    if (q == 0) {
      out.table[0][0] = 1;
      continue;
    }
    for (unsigned r = 1; r <= q; ++r) out.table[q][r] = divide_by_variable(g[q][r]);
  }
  return out;
}

WalkCensusTable as_printed(unsigned qmax) {
  const Polynomial c = Polynomial::variable();
  WalkCensusTable out;
  out.table.resize(qmax + 1);
  out.totals.resize(qmax + 1);
  auto value = [&](unsigned q, unsigned r) -> Polynomial {
    if (r > q) return Polynomial();
    return out.table[q][r];
  };
  for (unsigned q = 0; q <= qmax; ++q) {
    out.table[q].assign(q + 1, Polynomial());
    if (q == 0) {
      out.table[0][0] = 1;
      out.totals[0] = 1;
      continue;
    }
    if (q == 1) {
      out.table[1][1] = 1;
      out.totals[1] = 1;
      continue;
    }
    out.table[q][1] = c * out.totals[q - 1];
    for (unsigned r = 2; r <= q; ++r) {
      if (q == 2 && r == 2) {
        out.table[2][2] = 1;
        continue;
      }
      Polynomial total;
      for (unsigned v = 2; v <= r; ++v)
        for (unsigned u = 0; u + v <= q; ++u)
          for (unsigned s = 0; s + u + v <= q; ++s) {
            const BigInt coeff = binom_or_zero((v - 1) / 2 + s / 2, (v - 1) / 2) *
                                 binom_or_zero(static_cast<long>(r / 2) - 1, static_cast<long>(v / 2) - 1);
            if (coeff == 0) continue;
            total += value(q - u - v, s) * value(u, r - v) * Rational(coeff);
          }
      out.table[q][r] = total * c;
    }
    Polynomial f = c * out.totals[q - 1];
    for (unsigned r = 2; r <= q; ++r) f += out.table[q][r];
    out.totals[q] = f;
  }
  return out;
}

}  // namespace

WalkCensusTable walk_census_recurrence(unsigned qmax, WalkRecurrence variant) {
  if (variant == WalkRecurrence::kAsPrinted) return as_printed(qmax);
  WalkCensusTable out = parity_aware(qmax);
  const Polynomial c = Polynomial::variable();
  out.totals.assign(qmax + 1, Polynomial());
  out.totals[0] = 1;
  if (qmax >= 1) out.totals[1] = 1;
  for (unsigned q = 2; q <= qmax; ++q) {
    if (out.table[q][1] != c * out.totals[q - 1])
      throw InvariantError("single root-step walks disagree with c F_{q-1} at q=" + std::to_string(q));
    Polynomial f = c * out.totals[q - 1];
    for (unsigned r = 2; r <= q; ++r) f += out.table[q][r];
    out.totals[q] = f;
  }
  return out;
}

namespace {

Polynomial constant(const BigInt& v) { return Polynomial(Rational(v)); }

LimitValue full_limit(ModelKind model, unsigned q, unsigned k, const Rational& p) {
  if (model == ModelKind::kX && q <= 2)
    throw NotProvidedError("full-regime limit not defined for X with q <= 2 (no tree-like diagrams)");
  if (k == 1) return {Polynomial(1), "", "full:single-diagram"};
  if (k == 2) return {Polynomial(Rational(2 * q * q) * (1 - p)), "", "full:closed-form"};
  const Polynomial poly = diagrams::limit_cumulant_full(model, q, k);
  return {Polynomial(poly.evaluate(p)), "", "full:tree-diagram-sum"};
}

LimitValue dilute_limit(ModelKind model, unsigned q, unsigned k) {
  const BigInt orient = ipow(BigInt(2), k - 1);
  if (model == ModelKind::kY) return {constant(orient * d_seq(q, k).back()), "", "dilute:tree-count"};
  if (q == 3) return {constant(ipow(BigInt(2 * q), k - 1)), "", "dilute:odd-cycle-gluing"};
  // For q >= 5 a closed walk can also wrap a shorter odd cycle plus
  // backtracking edges, so the maximal one-cycle graphs are counted directly.
  if (q % 2 == 1) return {constant(diagrams::cycle_census(q, k, 16).dilute_value(k)), "", "dilute:one-cycle-census"};
  const unsigned half = q / 2;
  return {constant(ipow(catalan(half), k) * orient * d_seq(half, k).back()), "", "dilute:catalan-tree-count"};
}

LimitValue sparse_limit(ModelKind model, unsigned q, unsigned k) {
  if (model == ModelKind::kX && q % 2 == 1) {
    if (k >= 2) throw NotProvidedError("sparse limit of odd X not provided for k >= 2");
    const auto census = diagrams::cycle_census(q, 1);
    std::vector<Rational> coeffs;
    for (const auto& [l, n] : census.counts[0]) {
      if (coeffs.size() <= l) coeffs.resize(l + 1, Rational(0));
      coeffs[l] = Rational(n);
    }
    return {Polynomial(std::move(coeffs)), "c", "sparse:one-cycle-census"};
  }
  const auto table = diagrams::sparse_tree_table(model, q, k);
  return {table.limit.back(), "1/c", "sparse:tree-census"};
}

}  // namespace

LimitValue limit_cumulant(ModelKind model, unsigned q, unsigned k, const Regime& regime) {
  if (q < 1 || k < 1) throw UsageError("q and k must be positive");
  if (model == ModelKind::kX && q == 1) throw NotProvidedError("X with q = 1 is identically zero");
  if (regime.is_full()) return full_limit(model, q, k, regime.p());
  if (regime.is_dilute()) return dilute_limit(model, q, k);
  if (regime.is_sparse()) return sparse_limit(model, q, k);
  if (model == ModelKind::kX && q % 2 == 1) throw NotProvidedError("very sparse limit of odd X is only O(c^3)");
  return {constant(ipow(BigInt(2), k - 1)), "", "very-sparse:single-edge"};
}

FreeEnergyValue free_energy_truncation(const Regime& regime, unsigned q, const Rational& t, unsigned K) {
  FreeEnergyValue out;
  out.cumulant_part = 0;
  Rational tk = 1;
  for (unsigned k = 1; k <= K; ++k) {
    tk *= t;
    LimitValue lv;
    try {
      lv = limit_cumulant(ModelKind::kY, q, k, regime);
    } catch (const std::exception& e) {
      throw NotProvidedError("free energy needs F_" + std::to_string(k) + ", which is unavailable: " + e.what());
    }
    Rational fk;
    if (lv.variable.empty()) {
      fk = lv.value.evaluate(Rational(0));
    } else {
      fk = lv.value.evaluate(Rational(1) / regime.c());
    }
    out.cumulant_part += tk * fk / Rational(factorial(k));
  }
  out.value = out.cumulant_part.get_d();
  if (regime.is_sparse()) {
    const double c = regime.c().get_d();
    out.value += 0.5 * std::expm1(2.0 * t.get_d() / std::pow(c, static_cast<double>(q) - 1.0));
  }
  return out;
}

}  // namespace ermm::combinatorics
