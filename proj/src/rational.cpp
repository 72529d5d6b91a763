#include "ermm/rational.hpp"

#include <cctype>

#include "ermm/errors.hpp"

namespace ermm {

BigInt factorial(unsigned long n) {
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

BigInt binomial(unsigned long n, unsigned long k) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

BigInt falling_factorial(const BigInt& n, unsigned long k) {
  BigInt out = 1;
  for (unsigned long i = 0; i < k; ++i) {
    BigInt factor = n - i;
    if (factor <= 0) return 0;
    out *= factor;
  }
  return out;
}

BigInt ipow(const BigInt& base, unsigned long exp) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

Rational rpow(const Rational& base, unsigned long exp) {
  return make_rational(ipow(base.get_num(), exp), ipow(base.get_den(), exp));
}

std::string to_string(const BigInt& z) { return z.get_str(); }

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw UsageError("empty number");
  if (auto slash = text.find('/'); slash != std::string::npos) {
    BigInt num, den;
    if (num.set_str(text.substr(0, slash), 10) != 0 ||
        den.set_str(text.substr(slash + 1), 10) != 0 || den == 0) {
      throw UsageError("malformed fraction: " + text);
    }
    return make_rational(num, den);
  }
  // Decimal with optional exponent, parsed digit by digit so "0.3" is 3/10.
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') negative = text[pos++] == '-';
  BigInt mantissa = 0;
  long scale = 0;
  bool seen_digit = false, seen_point = false;
  for (; pos < text.size(); ++pos) {
    char ch = text[pos];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      mantissa = mantissa * 10 + (ch - '0');
      if (seen_point) --scale;
      seen_digit = true;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw UsageError("malformed number: " + text);
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') throw UsageError("malformed number: " + text);
    try {
      std::size_t used = 0;
      long e = std::stol(text.substr(pos + 1), &used);
      if (pos + 1 + used != text.size()) throw UsageError("malformed number: " + text);
      scale += e;
    } catch (const std::logic_error&) {
      throw UsageError("malformed number: " + text);
    }
  }
  Rational out = mantissa;
  if (scale > 0) out *= ipow(10, static_cast<unsigned long>(scale));
  if (scale < 0) out /= ipow(10, static_cast<unsigned long>(-scale));
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

}  // namespace ermm
