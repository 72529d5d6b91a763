#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace ermm {

using BigInt = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

BigInt factorial(unsigned long n);
BigInt binomial(unsigned long n, unsigned long k);
// n (n-1) ... (n-k+1); zero when k > n.
BigInt falling_factorial(const BigInt& n, unsigned long k);
BigInt ipow(const BigInt& base, unsigned long exp);
Rational rpow(const Rational& base, unsigned long exp);

// "num/den", or just "num" for integers.
std::string to_string(const Rational& r);
std::string to_string(const BigInt& z);

// Parses "a", "a/b", or a finite decimal such as "0.3" or "1e-2" exactly.
Rational parse_rational(const std::string& text);

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

}  // namespace ermm
