#include "ermm/series.hpp"

namespace ermm::series {

RationalSeries solve_lagrange(const RationalSeries& phi) {
  if (phi[0] != 1) throw UsageError("Lagrange inversion needs phi(0) = 1");
  const std::size_t K = phi.order();
  RationalSeries psi(K);
  auto power = RationalSeries::constant(K, Rational(1));
  for (std::size_t k = 1; k <= K; ++k) {
    power *= phi;
    psi[k] = power[k - 1] / Rational(static_cast<long>(k));
  }
  return psi;
}

RationalSeries solve_h_series(unsigned q, std::size_t order) {
  if (q < 1) throw UsageError("q must be at least 1");
  std::function<RationalSeries(const RationalSeries&)> map = [q](const RationalSeries& h) {
    return exp(pow(h, q - 1).shifted() * Rational(q));
  };
  return solve_fixed_point(map, order).solution;
}

namespace {

void check_degree(const ParamSeries& s, std::size_t bound) {
  for (std::size_t i = 0; i <= s.order(); ++i) {
    if (s[i].degree() > static_cast<int>(bound)) {
      throw SolverError("coefficient " + std::to_string(i) + " has parameter degree " +
                        std::to_string(s[i].degree()) + " above the bound " + std::to_string(bound));
    }
  }
}

}  // namespace

ParamSeries solve_w_hat(std::size_t order, WHatVariant variant, std::size_t degree_bound) {
  const Polynomial c = Polynomial::variable();
  const auto two_z = ParamSeries::monomial(order, Polynomial(2), 1);
  const auto e2z = exp(two_z);
  const auto one = ParamSeries::constant(order, Polynomial(1));

  std::function<ParamSeries(const ParamSeries&)> map;
  if (variant == WHatVariant::kPrefactor) {
    map = [=](const ParamSeries& w) {
      auto inner = exp((e2z * w).shifted() * Rational(2));
      auto out = one + (e2z * (inner - one)).scaled(c);
      check_degree(out, degree_bound);
      return out;
    };
  } else {
    map = [=](const ParamSeries& w) {
      auto inner = exp((e2z * w - one).shifted() * Rational(2));
      auto out = one - e2z.scaled(c) + inner.scaled(c);
      check_degree(out, degree_bound);
      return out;
    };
  }
  return solve_fixed_point(map, order).solution;
}

RationalSeries evaluate(const ParamSeries& s, const Rational& x) {
  RationalSeries out(s.order());
  for (std::size_t i = 0; i <= s.order(); ++i) out[i] = s[i].evaluate(x);
  return out;
}

RationalSeries solve_w_hat(const Rational& c, std::size_t order, WHatVariant variant) {
  return evaluate(solve_w_hat(order, variant), c);
}

std::string to_string(const RationalSeries& s) {
  std::string out = "[";
  for (std::size_t i = 0; i <= s.order(); ++i) {
    if (i) out += ", ";
    out += ermm::to_string(s[i]);
  }
  return out + "]";
}

}  // namespace ermm::series
