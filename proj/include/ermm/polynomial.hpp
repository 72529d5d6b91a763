#pragma once

#include <string>
#include <vector>

#include "ermm/rational.hpp"

namespace ermm {

// Univariate polynomial with exact rational coefficients. Used for series
// coefficients that depend on a parameter (the mean degree c, its inverse,
// or the edge probability p). Trailing zeros are always trimmed, so the
// zero polynomial has no stored coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(const Rational& constant);  // NOLINT(google-explicit-constructor)
  Polynomial(long constant) : Polynomial(Rational(constant)) {}  // NOLINT
  explicit Polynomial(std::vector<Rational> coefficients);

  static Polynomial monomial(const Rational& coefficient, std::size_t degree);
  static Polynomial variable() { return monomial(1, 1); }

  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  Rational coefficient(std::size_t power) const;
  const std::vector<Rational>& coefficients() const { return coeffs_; }

  Rational evaluate(const Rational& x) const;
  double evaluate(double x) const;

  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(const Polynomial& rhs);
  Polynomial& operator*=(const Rational& scalar);
  Polynomial& operator/=(const Rational& scalar);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
  friend Polynomial operator/(Polynomial a, const Rational& s) { return a /= s; }
  Polynomial operator-() const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  // Human-readable form in the given variable, highest power first,
  // e.g. "2*c^2 + 1/3*c - 1".
  std::string to_string(const std::string& var = "c") const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

}  // namespace ermm
