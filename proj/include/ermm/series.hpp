#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ermm/errors.hpp"
#include "ermm/polynomial.hpp"
#include "ermm/rational.hpp"

namespace ermm::series {

// Formal power series truncated at z^K. Coefficient type is Rational or
// Polynomial (coefficients depending on a parameter). Arithmetic never looks
// past index K.
template <typename Coeff>
class TruncatedSeries {
 public:
  explicit TruncatedSeries(std::size_t order) : coeffs_(order + 1, Coeff(0)) {}
  TruncatedSeries(std::size_t order, std::vector<Coeff> leading) : TruncatedSeries(order) {
    if (leading.size() > coeffs_.size()) throw UsageError("more coefficients than the truncation order allows");
    for (std::size_t i = 0; i < leading.size(); ++i) coeffs_[i] = std::move(leading[i]);
  }

  static TruncatedSeries constant(std::size_t order, const Coeff& value) {
    TruncatedSeries s(order);
    s.coeffs_[0] = value;
    return s;
  }
  // c * z^power (dropped if power > order).
  static TruncatedSeries monomial(std::size_t order, const Coeff& c, std::size_t power) {
    TruncatedSeries s(order);
    if (power <= order) s.coeffs_[power] = c;
    return s;
  }

  std::size_t order() const { return coeffs_.size() - 1; }
  const Coeff& operator[](std::size_t i) const { return coeffs_.at(i); }
  Coeff& operator[](std::size_t i) { return coeffs_.at(i); }
  const std::vector<Coeff>& coefficients() const { return coeffs_; }

  TruncatedSeries& operator+=(const TruncatedSeries& rhs) {
    require_same_order(rhs);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
    return *this;
  }
  TruncatedSeries& operator-=(const TruncatedSeries& rhs) {
    require_same_order(rhs);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
    return *this;
  }
  TruncatedSeries& operator*=(const Rational& s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(TruncatedSeries a, const Rational& s) { return a *= s; }
  friend TruncatedSeries operator*(const Rational& s, TruncatedSeries a) { return a *= s; }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.require_same_order(b);
    const std::size_t K = a.order();
    TruncatedSeries out(K);
    for (std::size_t i = 0; i <= K; ++i) {
      if (is_zero(a.coeffs_[i])) continue;
      for (std::size_t j = 0; i + j <= K; ++j) out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return out;
  }
  TruncatedSeries& operator*=(const TruncatedSeries& rhs) { return *this = *this * rhs; }

  // Multiplies every coefficient by a coefficient-typed scalar (e.g. the
  // parameter polynomial c).
  TruncatedSeries scaled(const Coeff& s) const {
    TruncatedSeries out = *this;
    for (auto& c : out.coeffs_) c = c * s;
    return out;
  }

  // z * this, dropping the coefficient pushed past the order.
  TruncatedSeries shifted() const {
    TruncatedSeries out(order());
    for (std::size_t i = 0; i + 1 < coeffs_.size(); ++i) out.coeffs_[i + 1] = coeffs_[i];
    return out;
  }

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const TruncatedSeries& a, const TruncatedSeries& b) { return !(a == b); }

 private:
  static bool is_zero(const Rational& r) { return r == 0; }
  static bool is_zero(const Polynomial& p) { return p.is_zero(); }

  void require_same_order(const TruncatedSeries& rhs) const {
    if (rhs.coeffs_.size() != coeffs_.size()) {
      throw UsageError("series truncation orders differ: " + std::to_string(order()) + " vs " +
                       std::to_string(rhs.order()));
    }
  }

  std::vector<Coeff> coeffs_;
};

using RationalSeries = TruncatedSeries<Rational>;
using ParamSeries = TruncatedSeries<Polynomial>;

template <typename Coeff>
TruncatedSeries<Coeff> pow(const TruncatedSeries<Coeff>& a, unsigned m) {
  auto result = TruncatedSeries<Coeff>::constant(a.order(), Coeff(1));
  auto base = a;
  while (m > 0) {
    if (m & 1U) result *= base;
    m >>= 1U;
    if (m > 0) base *= base;
  }
  return result;
}

// exp(a) for a with zero constant term, using k e_k = sum_j j a_j e_{k-j}.
template <typename Coeff>
TruncatedSeries<Coeff> exp(const TruncatedSeries<Coeff>& a) {
  if (a[0] != Coeff(0)) {
    throw UsageError("series exp requires a zero constant term (the result would not be rational)");
  }
  const std::size_t K = a.order();
  TruncatedSeries<Coeff> e(K);
  e[0] = Coeff(1);
  for (std::size_t k = 1; k <= K; ++k) {
    Coeff acc(0);
    for (std::size_t j = 1; j <= k; ++j) acc += a[j] * e[k - j] * Rational(static_cast<long>(j));
    e[k] = acc / Rational(static_cast<long>(k));
  }
  return e;
}

template <typename Coeff>
struct FixedPointResult {
  TruncatedSeries<Coeff> solution;
  std::size_t iterations = 0;
};

// Solves S = F(S) mod z^{K+1} by iteration from the constant series 1.
// F must fix at least one more coefficient per application; the solver
// stops on exact stabilization and fails after K+1 applications otherwise.
template <typename Coeff>
FixedPointResult<Coeff> solve_fixed_point(
    const std::function<TruncatedSeries<Coeff>(const TruncatedSeries<Coeff>&)>& map, std::size_t order) {
  auto current = TruncatedSeries<Coeff>::constant(order, Coeff(1));
  for (std::size_t iter = 1; iter <= order + 1; ++iter) {
    auto next = map(current);
    if (next.order() != order) throw UsageError("fixed-point map changed the truncation order");
    if (next == current) return {std::move(current), iter};
    current = std::move(next);
  }
  throw SolverError("fixed-point iteration did not stabilize within " + std::to_string(order + 1) +
                    " applications; the map does not raise the valuation");
}

// psi = z * phi(psi) via psi_k = (1/k) [w^{k-1}] phi(w)^k.
RationalSeries solve_lagrange(const RationalSeries& phi);

// Exponential generating function of rooted sparse color trees, solved in
// one of the two printed forms:
//   kSubtractOne:  W = 1 - c e^{2z} + c exp(2z [e^{2z} W - 1])
//   kPrefactor:    W - 1 = c e^{2z} [exp(2z e^{2z} W) - 1]
// The forms are not algebraically equivalent; both are kept so the gap can
// be measured against the brute-force tree census.
enum class WHatVariant { kSubtractOne, kPrefactor };

ParamSeries solve_w_hat(std::size_t order, WHatVariant variant, std::size_t degree_bound);
inline ParamSeries solve_w_hat(std::size_t order, WHatVariant variant) {
  return solve_w_hat(order, variant, order + 2);
}
RationalSeries solve_w_hat(const Rational& c, std::size_t order, WHatVariant variant);

// H_q = exp(q z H_q^{q-1}).
RationalSeries solve_h_series(unsigned q, std::size_t order);

// Evaluates every coefficient polynomial at x.
RationalSeries evaluate(const ParamSeries& s, const Rational& x);

std::string to_string(const RationalSeries& s);

}  // namespace ermm::series
