#include "ermm/model.hpp"

#include "ermm/errors.hpp"

namespace ermm {

ModelKind parse_model(const std::string& text) {
  if (text == "X" || text == "x") return ModelKind::kX;
  if (text == "Y" || text == "y") return ModelKind::kY;
  throw UsageError("model must be X or Y, got '" + text + "'");
}

Regime Regime::full(const Rational& p) {
  if (p <= 0 || p >= 1) throw UsageError("full regime needs 0 < p < 1, got " + to_string(p));
  return Regime(FullRegime{p});
}

Regime Regime::sparse(const Rational& c) {
  if (c <= 0) throw UsageError("sparse regime needs c > 0, got " + to_string(c));
  return Regime(SparseRegime{c});
}

int Regime::index() const { return static_cast<int>(v_.index()) + 1; }

std::string Regime::name() const {
  switch (v_.index()) {
    case 0: return "full";
    case 1: return "dilute";
    case 2: return "sparse";
    default: return "verysparse";
  }
}

}  // namespace ermm
