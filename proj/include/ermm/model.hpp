#pragma once

#include <string>
#include <variant>

#include "ermm/rational.hpp"

namespace ermm {

// X counts closed q-step walks (trace of A^q); Y counts all q-step walks
// (sum of the entries of A^q).
enum class ModelKind { kX, kY };

inline char model_letter(ModelKind m) { return m == ModelKind::kX ? 'X' : 'Y'; }
ModelKind parse_model(const std::string& text);

// Index slots per element: a closed walk of q steps needs q vertex slots,
// an open one q + 1.
inline unsigned slots_per_element(ModelKind m, unsigned q) { return m == ModelKind::kX ? q : q + 1; }

// Asymptotic edge-probability regimes.
struct FullRegime {
  Rational p;  // constant edge probability, 0 < p < 1
};
struct DiluteRegime {};  // p = c_n / n with 1 << c_n << n
struct SparseRegime {
  Rational c;  // p = c / n, c > 0 fixed
};
struct VerySparseRegime {};  // p = c_n / n with c_n -> 0

class Regime {
 public:
  static Regime full(const Rational& p);
  static Regime dilute() { return Regime(DiluteRegime{}); }
  static Regime sparse(const Rational& c);
  static Regime very_sparse() { return Regime(VerySparseRegime{}); }

  bool is_full() const { return std::holds_alternative<FullRegime>(v_); }
  bool is_dilute() const { return std::holds_alternative<DiluteRegime>(v_); }
  bool is_sparse() const { return std::holds_alternative<SparseRegime>(v_); }
  bool is_very_sparse() const { return std::holds_alternative<VerySparseRegime>(v_); }

  const Rational& p() const { return std::get<FullRegime>(v_).p; }
  const Rational& c() const { return std::get<SparseRegime>(v_).c; }

  // 1 = full, 2 = dilute, 3 = sparse; very sparse reports 4.
  int index() const;
  std::string name() const;

 private:
  template <typename T>
  explicit Regime(T v) : v_(std::move(v)) {}
  std::variant<FullRegime, DiluteRegime, SparseRegime, VerySparseRegime> v_;
};

}  // namespace ermm
