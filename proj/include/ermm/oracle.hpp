#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ermm/model.hpp"
#include "ermm/rational.hpp"

namespace ermm::oracle {

// Exhaustive enumeration covers 2^{n(n-1)/2} graphs.
constexpr unsigned kMaxEnumerationN = 7;
// Index-tuple route: slots per element times moment order.
constexpr unsigned kMaxTupleSlots = 12;
constexpr unsigned kMaxTupleN = 30;

// Bit b of a mask is the b-th pair of the upper triangle in row-major
// order: (0,1), (0,2), ..., (0,n-1), (1,2), ...
struct GraphRecord {
  std::uint32_t mask;
  unsigned edges;
  std::uint64_t tr_delta;
  std::uint64_t tr_delta2;
  std::uint64_t x;  // Tr A^q
  std::uint64_t y;  // 1^T A^q 1
};

// Visits all graphs on n labelled vertices in increasing mask order.
void for_each_graph(unsigned n, unsigned q, const std::function<void(const GraphRecord&)>& visit);

struct ExactWeights {
  Rational x;  // e^{-2 beta}
  Rational s;  // e^{g}
  ExactWeights(Rational x_, Rational s_ = 1);
};

enum class Potential { kNone, kTrDeltaSquared };

// sum over graphs of x^{|E|} (times s^{Tr Delta^2} for the quartic potential).
Rational partition_function(unsigned n, const ExactWeights& w, Potential potential, unsigned threads = 1);

struct IdentityCheck {
  std::string name;
  Rational lhs;
  Rational rhs;
  bool holds() const { return lhs == rhs; }
};

// Graph sum against (1 + x)^{n(n-1)/2}.
IdentityCheck check_free_partition(unsigned n, const Rational& x);
// Normalized quartic partition function against
// ((1 + x s^2)/(1 + x))^{n(n-1)/2} E'[s^Y] with edge probability
// p' = x s^2 / (1 + x s^2); E' is taken over the law of Y under p'.
IdentityCheck check_quartic_identity(unsigned n, const ExactWeights& w);

// E[V^m] for m = 1..mmax by weighting every graph with p^{|E|}(1-p)^{N-|E|}.
std::vector<Rational> exact_moments_enumeration(ModelKind model, unsigned q, unsigned mmax, unsigned n,
                                                const Rational& p, unsigned threads = 1);
// E[V^m] by summing over equality patterns of the m index tuples; each
// pattern with nu distinct indices occurs n(n-1)...(n-nu+1) times.
std::vector<Rational> exact_moments_tuples(ModelKind model, unsigned q, unsigned mmax, unsigned n, const Rational& p);
// Runs every applicable route and throws InvariantError on disagreement.
std::vector<Rational> exact_moments(ModelKind model, unsigned q, unsigned mmax, unsigned n, const Rational& p,
                                    unsigned threads = 1);

// Set-partition formula; k <= 8.
std::vector<Rational> moments_to_cumulants(const std::vector<Rational>& moments);
// kappa_k = m_k - sum_{j<k} C(k-1, j-1) kappa_j m_{k-j}.
std::vector<Rational> moments_to_cumulants_recursive(const std::vector<Rational>& moments);

Rational exact_cumulant(ModelKind model, unsigned q, unsigned k, unsigned n, const Rational& p, unsigned threads = 1);

struct LaplacianMeans {
  Rational tr_delta;
  Rational tr_delta2;
};
LaplacianMeans laplacian_means(unsigned n, const Rational& p);

}  // namespace ermm::oracle
