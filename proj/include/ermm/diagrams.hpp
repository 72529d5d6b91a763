#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ermm/model.hpp"
#include "ermm/polynomial.hpp"
#include "ermm/rational.hpp"

namespace ermm::diagrams {

// One underlying edge variable a_{ij}: the element edges that carry it.
struct ColorGroup {
  unsigned low = 0, high = 0;        // vertex classes of the endpoints, low < high
  std::vector<unsigned> edge_slots;  // element l, edge j -> l * q + j
  std::uint32_t element_mask = 0;    // elements touching this group
};

// Graph obtained by gluing the elements along their color groups.
struct DiagramGraph {
  unsigned vertex_count = 0;
  std::vector<std::pair<unsigned, unsigned>> edges;  // one per color group
  bool is_tree = false;
  int cycle_count = 0;  // cyclomatic number m - nu + components
};

// k labeled path (Y) or cycle (X) elements of q edges whose vertex slots
// carry a canonical restricted-growth labeling: two slots share a label iff
// the corresponding indices coincide. This full coincidence signature is
// the diagram's identity, so the number of index vectors mapping to it is
// exactly the falling factorial n (n-1) ... (n - nu + 1).
class Diagram {
 public:
  static Diagram from_index_vector(ModelKind model, unsigned q, unsigned k, std::span<const long> alpha);
  // `labels` must already be a restricted-growth string of length r * k.
  static Diagram from_labels(ModelKind model, unsigned q, unsigned k, std::vector<std::uint8_t> labels);

  ModelKind model() const { return model_; }
  unsigned q() const { return q_; }
  unsigned k() const { return k_; }
  const std::vector<std::uint8_t>& labels() const { return labels_; }

  // m: number of distinct edge variables.
  unsigned color_group_count() const { return static_cast<unsigned>(groups_.size()); }
  // nu: number of vertex classes.
  unsigned vertex_class_count() const { return vertex_classes_; }
  // Arcs of the reduced diagram: sum over color groups of (size - 1).
  unsigned arc_count() const { return q_ * k_ - color_group_count(); }
  // Number of color groups with more than one edge.
  unsigned arc_color_count() const;
  // Some element edge joins a vertex class to itself; such products vanish.
  bool has_loop() const { return has_loop_; }
  // No split of the elements into two sets without a shared edge variable.
  bool is_connected() const { return connected_; }

  const std::vector<ColorGroup>& color_groups() const { return groups_; }
  std::pair<unsigned, unsigned> edge_endpoints(unsigned edge_slot) const;
  DiagramGraph graph() const;
  bool is_tree() const { return graph().is_tree; }
  int cycle_count() const { return graph().cycle_count; }

  // Vertex partition generated only by edge coincidences (direct or inverse
  // gluing) plus the closing identification of X elements. Equal to the
  // labeling exactly when no vertex merger is gratuitous.
  std::vector<std::uint8_t> forced_labels() const;

  // Dotted labeling, e.g. "0.1.2.1".
  std::string signature() const;
  // model q k labeling m nu arcs isTree cycleCount
  std::string dump_line() const;

  friend bool operator==(const Diagram& a, const Diagram& b) {
    return a.model_ == b.model_ && a.q_ == b.q_ && a.k_ == b.k_ && a.labels_ == b.labels_;
  }

 private:
  Diagram(ModelKind model, unsigned q, unsigned k, std::vector<std::uint8_t> labels);

  ModelKind model_;
  unsigned q_, k_;
  std::vector<std::uint8_t> labels_;
  std::vector<ColorGroup> groups_;
  unsigned vertex_classes_ = 0;
  bool has_loop_ = false;
  bool connected_ = false;
};

Diagram parse_dump_line(const std::string& line);

enum class Filter { kAll, kConnected, kTreeArcs };
Filter parse_filter(const std::string& text);

struct EnumerationOptions {
  Filter filter = Filter::kAll;
  unsigned max_slots = 12;  // resource guard on r * k
  unsigned threads = 1;
  // Extra pruning bounds; both quantities only grow as slots are assigned.
  std::optional<unsigned> max_arcs;
  std::optional<unsigned> max_cycle_rank;
};

// Streams every loop-free canonical diagram passing the filter, in
// lexicographic order of the labeling.
void for_each_diagram(ModelKind model, unsigned q, unsigned k, const EnumerationOptions& options,
                      const std::function<void(const Diagram&)>& visit);

struct EnumerationResult {
  std::vector<Diagram> diagrams;       // sorted by labeling
  std::uint64_t oriented_count = 0;    // = diagrams.size(); each arc orientation counted
  std::uint64_t unoriented_count = 0;  // distinct arc structures (edge color partitions)
};

EnumerationResult enumerate(ModelKind model, unsigned q, unsigned k, const EnumerationOptions& options);

// Sum over color groups of (number of partition blocks the group touches - 1).
// `block[l]` is the block of element l.
unsigned chi(const std::vector<unsigned>& block, const Diagram& d);

// sum over partitions pi_s of the elements of (-1)^{s-1} (s-1)! p^{m + chi},
// as a polynomial in p. Zero for loop-carrying or disconnected diagrams.
Polynomial weight(const Diagram& d);

// Number of index vectors with values in 1..n realizing this signature.
BigInt exact_class_count(const Diagram& d, const BigInt& n);
BigInt exact_class_count(unsigned vertex_classes, const BigInt& n);

// Exact k-th cumulant of the walk statistic at size n, as a polynomial in p.
Polynomial cumulant_via_diagrams(ModelKind model, unsigned q, unsigned k, const BigInt& n,
                                 unsigned max_slots = 12);
Rational cumulant_via_diagrams(ModelKind model, unsigned q, unsigned k, const BigInt& n, const Rational& p,
                               unsigned max_slots = 12);

// Orientation-weighted sum over tree-like diagrams (k - 1 arcs, maximal
// vertex count) of sum_pi (-1)^{s-1} (s-1)! p^chi: the full-regime limit.
Polynomial limit_cumulant_full(ModelKind model, unsigned q, unsigned k, unsigned max_slots = 16);

// Counts of connected diagrams whose graph is a tree with l edges, and the
// sparse-regime limit sum_l N_{k,l} c^{l - lmax} as a polynomial in 1/c.
struct SparseTreeTable {
  ModelKind model;
  unsigned q;
  std::vector<std::map<unsigned, BigInt>> counts;  // counts[k-1][l]
  std::vector<Polynomial> limit;                   // limit[k-1], variable u = 1/c
};
SparseTreeTable sparse_tree_table(ModelKind model, unsigned q, unsigned kmax, unsigned max_slots = 12);

// Counts of connected X diagrams whose graph has exactly one cycle, per
// edge count l, for odd q.
struct CycleCensus {
  unsigned q;
  std::vector<std::map<unsigned, BigInt>> counts;  // counts[k-1][l]
  BigInt dilute_value(unsigned k) const;           // count at l = q
};
CycleCensus cycle_census(unsigned q, unsigned kmax, unsigned max_slots = 12);

// Walk of q steps written in restricted-growth letters: 0 = rho, 1 = nu, ...
struct Walk {
  std::vector<std::uint8_t> letters;
  unsigned steps() const { return static_cast<unsigned>(letters.size()) - 1; }
  // Steps that start or end at the root.
  unsigned root_steps() const;
  unsigned edge_count() const;
  bool is_tree() const;
};
Walk walk_encode(std::span<const long> indices);

// Exhaustive census of tree walks of q steps by root-step count r:
// weighted[r] = sum c^{l-1} (l = edges of the walk graph), counts[r] = f_q(r).
struct WalkCensus {
  unsigned q;
  std::vector<Polynomial> weighted;
  std::vector<BigInt> counts;
  Polynomial total() const;
};
WalkCensus brute_force_walk_census(unsigned q);

}  // namespace ermm::diagrams
