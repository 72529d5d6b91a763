#pragma once

#include <string>
#include <vector>

#include "ermm/model.hpp"
#include "ermm/polynomial.hpp"
#include "ermm/rational.hpp"
#include "ermm/series.hpp"

namespace ermm::combinatorics {

// h_0..h_kmax from h_k = ((q-1)k+1)/k * [z^{k-1}] H^q, h_0 = 1.
// q = 1 is accepted and gives h_k = 1/k!.
std::vector<Rational> h_seq(unsigned q, unsigned kmax);

// d_1..d_kmax (result[k-1] = d_k): number of tree diagrams of k path
// elements of q edges. Computed from h_seq and from the direct
// composition recurrence; the two must agree and be integral.
std::vector<BigInt> d_seq(unsigned q, unsigned kmax);
std::vector<BigInt> d_seq_from_h(unsigned q, unsigned kmax);
std::vector<BigInt> d_seq_direct(unsigned q, unsigned kmax);

// (q-1)-fold self-convolution of h_seq(q) against
// q^k (q-1)^k (k+1)^{k-1} / k! for k = 0..kmax.
bool convolution_identity_check(unsigned q, unsigned kmax);

struct RootedTreeCounts {
  std::vector<BigInt> rooted;    // T^_0..T^_kmax via the root-decomposition recurrence
  std::vector<Rational> scaled;  // t_0..t_kmax via t_m = (m+1)/m sum t_j t_{m-1-j}
  std::vector<BigInt> unrooted;  // T_1..T_kmax (index k-1), from two rooted halves
};
// Asserts agreement with T^_m = 2^m (m+1)^{m-1} and T_k = 2^k (k+1)^{k-2}.
RootedTreeCounts rooted_tree_counts(unsigned kmax);

BigInt catalan(unsigned m);

// w_1..w_kmax (index k-1) as polynomials in c, built literally from the
// coefficients of W^ by w_k = sum_s 1/(s-1)! sum_j w^_j w^_{k-s-j}.
std::vector<Polynomial> w_seq(unsigned kmax, series::WHatVariant variant);
// 2^{k-1} (k-1)! w_k / c^k as a polynomial in u = 1/c (index k-1). Throws
// SolverError when w_k has degree above k in c.
std::vector<Polynomial> sparse_limit_from_w_chain(unsigned kmax, series::WHatVariant variant);

// Weighted census of tree walks by root-step count. kParityAware carries
// the orientation bookkeeping of first-passage excursions exactly and
// matches exhaustive enumeration; kAsPrinted reproduces the compact
// recurrence with floor binomials and the base values F_1(1) = 1,
// F_2(2) = 1, which overcounts odd lengths (e.g. F_3(2) = c).
enum class WalkRecurrence { kParityAware, kAsPrinted };

struct WalkCensusTable {
  std::vector<std::vector<Polynomial>> table;  // table[q][r], 0 <= r <= q
  std::vector<Polynomial> totals;              // F_q, with F_0 = F_1 = 1
};
WalkCensusTable walk_census_recurrence(unsigned qmax, WalkRecurrence variant = WalkRecurrence::kParityAware);

// Limit of the normalized k-th cumulant. `variable` names the free
// variable of `value`: "" for an exact number, "1/c" or "c" for sparse
// values. `source` names the construction that produced it.
struct LimitValue {
  Polynomial value;
  std::string variable;
  std::string source;
};
LimitValue limit_cumulant(ModelKind model, unsigned q, unsigned k, const Regime& regime);

struct FreeEnergyValue {
  Rational cumulant_part;  // sum_{k<=K} t^k F_k / k!
  double value = 0;        // including the exponential correction when sparse
};
// Truncated free energy of the Y model; the sparse regime needs c and adds
// (exp(2t / c^{q-1}) - 1) / 2.
FreeEnergyValue free_energy_truncation(const Regime& regime, unsigned q, const Rational& t, unsigned K);

}  // namespace ermm::combinatorics
