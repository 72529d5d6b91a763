#include "ermm/diagrams.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "ermm/errors.hpp"
#include "ermm/set_partitions.hpp"

namespace ermm::diagrams {

namespace {

constexpr unsigned kHardSlotLimit = 32;

class UnionFind {
 public:
  explicit UnionFind(unsigned n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }
  unsigned find(unsigned x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(unsigned a, unsigned b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<unsigned> parent_;
};

// Vertex-slot endpoints of element edge e.
std::pair<unsigned, unsigned> slot_endpoints(ModelKind model, unsigned q, unsigned e) {
  const unsigned r = slots_per_element(model, q);
  const unsigned l = e / q, j = e % q;
  if (model == ModelKind::kY) return {l * r + j, l * r + j + 1};
  return {l * r + j, l * r + (j + 1) % q};
}

void check_shape(ModelKind model, unsigned q, unsigned k, unsigned max_slots) {
  if (q == 0 || k == 0) throw UsageError("q and k must be positive");
  const unsigned slots = slots_per_element(model, q) * k;
  if (slots > std::min(max_slots, kHardSlotLimit) || k > 32)
    throw ResourceError("diagram enumeration needs " + std::to_string(slots) + " index slots, above the guard of " +
                        std::to_string(std::min(max_slots, kHardSlotLimit)));
}

std::vector<std::uint8_t> canonicalize(std::span<const long> values) {
  std::vector<std::uint8_t> out;
  std::vector<long> seen;
  out.reserve(values.size());
  for (long v : values) {
    auto it = std::find(seen.begin(), seen.end(), v);
    if (it == seen.end()) {
      out.push_back(static_cast<std::uint8_t>(seen.size()));
      seen.push_back(v);
    } else {
      out.push_back(static_cast<std::uint8_t>(it - seen.begin()));
    }
  }
  return out;
}

}  // namespace

Diagram::Diagram(ModelKind model, unsigned q, unsigned k, std::vector<std::uint8_t> labels)
    : model_(model), q_(q), k_(k), labels_(std::move(labels)) {
  unsigned max_label = 0;
  for (auto x : labels_) max_label = std::max<unsigned>(max_label, x);
  vertex_classes_ = labels_.empty() ? 0 : max_label + 1;
  for (unsigned e = 0; e < q_ * k_; ++e) {
    auto [a, b] = edge_endpoints(e);
    if (a == b) has_loop_ = true;
    const unsigned lo = std::min(a, b), hi = std::max(a, b);
    auto it = std::find_if(groups_.begin(), groups_.end(),
                           [&](const ColorGroup& g) { return g.low == lo && g.high == hi; });
    if (it == groups_.end()) {
      groups_.push_back({lo, hi, {}, 0});
      it = groups_.end() - 1;
    }
    it->edge_slots.push_back(e);
    it->element_mask |= std::uint32_t{1} << (e / q_);
  }
  const std::uint32_t all = k_ == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << k_) - 1;
  std::uint32_t reached = 1;
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& g : groups_) {
      if ((g.element_mask & reached) && (g.element_mask & ~reached)) {
        reached |= g.element_mask;
        grew = true;
      }
    }
  }
  connected_ = reached == all;
}

Diagram Diagram::from_labels(ModelKind model, unsigned q, unsigned k, std::vector<std::uint8_t> labels) {
  if (labels.size() != static_cast<std::size_t>(slots_per_element(model, q)) * k)
    throw UsageError("labeling has the wrong length");
  unsigned next = 0;
  for (auto x : labels) {
    if (x > next) throw UsageError("labeling is not in restricted-growth form");
    if (x == next) ++next;
  }
  return Diagram(model, q, k, std::move(labels));
}

Diagram Diagram::from_index_vector(ModelKind model, unsigned q, unsigned k, std::span<const long> alpha) {
  if (q == 0 || k == 0) throw UsageError("q and k must be positive");
  if (alpha.size() != static_cast<std::size_t>(slots_per_element(model, q)) * k)
    throw UsageError("index vector must have r*k entries");
  if (alpha.size() > 255) throw ResourceError("index vector too long");
  return Diagram(model, q, k, canonicalize(alpha));
}

std::pair<unsigned, unsigned> Diagram::edge_endpoints(unsigned edge_slot) const {
  auto [a, b] = slot_endpoints(model_, q_, edge_slot);
  return {labels_[a], labels_[b]};
}

unsigned Diagram::arc_color_count() const {
  return static_cast<unsigned>(
      std::count_if(groups_.begin(), groups_.end(), [](const ColorGroup& g) { return g.edge_slots.size() > 1; }));
}

DiagramGraph Diagram::graph() const {
  DiagramGraph g;
  g.vertex_count = vertex_classes_;
  UnionFind uf(vertex_classes_);
  unsigned components = vertex_classes_;
  for (const auto& grp : groups_) {
    g.edges.emplace_back(grp.low, grp.high);
    if (uf.unite(grp.low, grp.high)) --components;
  }
  const int m = static_cast<int>(g.edges.size());
  g.cycle_count = m - static_cast<int>(vertex_classes_) + static_cast<int>(components);
  g.is_tree = components == 1 && m + 1 == static_cast<int>(vertex_classes_);
  return g;
}

std::vector<std::uint8_t> Diagram::forced_labels() const {
  UnionFind uf(static_cast<unsigned>(labels_.size()));
  for (const auto& grp : groups_) {
    const unsigned e0 = grp.edge_slots.front();
    auto [a0, b0] = slot_endpoints(model_, q_, e0);
    for (std::size_t t = 1; t < grp.edge_slots.size(); ++t) {
      auto [a, b] = slot_endpoints(model_, q_, grp.edge_slots[t]);
      if (labels_[a] == labels_[a0]) {
        uf.unite(a, a0);
        uf.unite(b, b0);
      } else {
        uf.unite(a, b0);
        uf.unite(b, a0);
      }
    }
  }
  std::vector<long> roots(labels_.size());
  for (unsigned i = 0; i < labels_.size(); ++i) roots[i] = uf.find(i);
  return canonicalize(roots);
}

std::string Diagram::signature() const {
  std::string s;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(labels_[i]);
  }
  return s;
}

std::string Diagram::dump_line() const {
  const DiagramGraph g = graph();
  std::ostringstream out;
  out << model_letter(model_) << ' ' << q_ << ' ' << k_ << ' ' << signature() << ' ' << color_group_count() << ' '
      << vertex_class_count() << ' ' << arc_count() << ' ' << (g.is_tree ? 1 : 0) << ' ' << g.cycle_count;
  return out.str();
}

Diagram parse_dump_line(const std::string& line) {
  std::istringstream in(line);
  std::string model, labeling;
  unsigned q = 0, k = 0, m = 0, nu = 0, arcs = 0, tree = 0;
  int cycles = 0;
  if (!(in >> model >> q >> k >> labeling >> m >> nu >> arcs >> tree >> cycles))
    throw UsageError("malformed diagram line: " + line);
  std::vector<std::uint8_t> labels;
  std::istringstream parts(labeling);
  for (std::string tok; std::getline(parts, tok, '.');) labels.push_back(static_cast<std::uint8_t>(std::stoul(tok)));
  Diagram d = Diagram::from_labels(parse_model(model), q, k, std::move(labels));
  if (d.dump_line() != line) throw UsageError("diagram line has inconsistent derived fields: " + line);
  return d;
}

Filter parse_filter(const std::string& text) {
  if (text == "all") return Filter::kAll;
  if (text == "connected") return Filter::kConnected;
  if (text == "treeArcs" || text == "tree-arcs" || text == "tree") return Filter::kTreeArcs;
  throw UsageError("unknown diagram filter '" + text + "'");
}

namespace {

// Depth-first generator of loop-free restricted-growth labelings. Edges are
// checked as soon as both endpoint slots carry labels.
class Enumerator {
 public:
  Enumerator(ModelKind model, unsigned q, unsigned k, const EnumerationOptions& options)
      : model_(model), q_(q), k_(k), r_(slots_per_element(model, q)), slots_(r_ * k), options_(options) {
    if (options_.filter == Filter::kTreeArcs) {
      const unsigned tree_rank = model == ModelKind::kX ? k : 0;
      options_.max_arcs = std::min(options_.max_arcs.value_or(k - 1), k - 1);
      options_.max_cycle_rank = std::min(options_.max_cycle_rank.value_or(tree_rank), tree_rank);
    }
    closing_.resize(slots_);
    for (unsigned e = 0; e < q_ * k_; ++e) {
      auto [a, b] = slot_endpoints(model_, q_, e);
      closing_[std::max(a, b)].push_back(std::min(a, b));
    }
  }

  struct State {
    std::array<std::uint8_t, kHardSlotLimit> labels{};
    std::array<std::uint32_t, kHardSlotLimit> adj{};
    std::array<std::uint8_t, kHardSlotLimit> parent{};
    unsigned used = 0;
    unsigned arcs = 0;
    unsigned rank = 0;
  };

  State root() const {
    State s;
    for (unsigned i = 0; i < kHardSlotLimit; ++i) s.parent[i] = static_cast<std::uint8_t>(i);
    return s;
  }

  // Assigns label x to slot `slot`; false if a bound is violated.
  bool assign(State& s, unsigned slot, unsigned x) const {
    s.labels[slot] = static_cast<std::uint8_t>(x);
    if (x == s.used) ++s.used;
    for (unsigned other : closing_[slot]) {
      const unsigned a = s.labels[other];
      if (a == x) return false;
      const std::uint32_t bit = std::uint32_t{1} << x;
      if (s.adj[a] & bit) {
        ++s.arcs;
        if (options_.max_arcs && s.arcs > *options_.max_arcs) return false;
        continue;
      }
      s.adj[a] |= bit;
      s.adj[x] |= std::uint32_t{1} << a;
      const unsigned ra = find(s, a), rx = find(s, x);
      if (ra == rx) {
        ++s.rank;
        if (options_.max_cycle_rank && s.rank > *options_.max_cycle_rank) return false;
      } else {
        s.parent[std::max(ra, rx)] = static_cast<std::uint8_t>(std::min(ra, rx));
      }
    }
    return true;
  }

  void run(const State& s, unsigned slot, const std::function<void(const Diagram&)>& visit) const {
    if (slot == slots_) {
      emit(s, visit);
      return;
    }
    for (unsigned x = 0; x <= s.used && x < kHardSlotLimit; ++x) {
      State next = s;
      if (assign(next, slot, x)) run(next, slot + 1, visit);
    }
  }

  // Prefix states at `depth` in lexicographic order.
  void prefixes(const State& s, unsigned slot, unsigned depth, std::vector<State>& out) const {
    if (slot == depth) {
      out.push_back(s);
      return;
    }
    for (unsigned x = 0; x <= s.used; ++x) {
      State next = s;
      if (assign(next, slot, x)) prefixes(next, slot + 1, depth, out);
    }
  }

  unsigned slots() const { return slots_; }

 private:
  static unsigned find(const State& s, unsigned x) {
    while (s.parent[x] != x) x = s.parent[x];
    return x;
  }

  void emit(const State& s, const std::function<void(const Diagram&)>& visit) const {
    Diagram d = Diagram::from_labels(model_, q_, k_, std::vector<std::uint8_t>(s.labels.begin(), s.labels.begin() + slots_));
    switch (options_.filter) {
      case Filter::kAll:
        break;
      case Filter::kConnected:
        if (!d.is_connected()) return;
        break;
      case Filter::kTreeArcs: {
        const unsigned tree_rank = model_ == ModelKind::kX ? k_ : 0;
        if (!d.is_connected() || s.arcs != k_ - 1 || s.rank != tree_rank) return;
        break;
      }
    }
    visit(d);
  }

  ModelKind model_;
  unsigned q_, k_, r_, slots_;
  EnumerationOptions options_;
  std::vector<std::vector<unsigned>> closing_;
};

std::string arc_structure_key(const Diagram& d) {
  std::string key(d.q() * d.k(), '\0');
  for (unsigned g = 0; g < d.color_groups().size(); ++g)
    for (unsigned e : d.color_groups()[g].edge_slots) key[e] = static_cast<char>(g);
  return key;
}

std::uint64_t count_unoriented(const std::vector<Diagram>& diagrams) {
  if (diagrams.empty()) return 0;
  const unsigned edges = diagrams.front().q() * diagrams.front().k();
  if (edges <= 16) {
    std::unordered_set<std::uint64_t> keys;
    for (const auto& d : diagrams) {
      std::uint64_t packed = 0;
      for (unsigned g = 0; g < d.color_groups().size(); ++g)
        for (unsigned e : d.color_groups()[g].edge_slots) packed |= std::uint64_t{g} << (4 * e);
      keys.insert(packed);
    }
    return keys.size();
  }
  std::unordered_set<std::string> keys;
  for (const auto& d : diagrams) keys.insert(arc_structure_key(d));
  return keys.size();
}

}  // namespace

void for_each_diagram(ModelKind model, unsigned q, unsigned k, const EnumerationOptions& options,
                      const std::function<void(const Diagram&)>& visit) {
  check_shape(model, q, k, options.max_slots);
  Enumerator en(model, q, k, options);
  en.run(en.root(), 0, visit);
}

EnumerationResult enumerate(ModelKind model, unsigned q, unsigned k, const EnumerationOptions& options) {
  check_shape(model, q, k, options.max_slots);
  Enumerator en(model, q, k, options);
  EnumerationResult result;
  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1 || en.slots() < 6) {
    en.run(en.root(), 0, [&](const Diagram& d) { result.diagrams.push_back(d); });
  } else {
    std::vector<Enumerator::State> prefixes;
    en.prefixes(en.root(), 0, std::min(en.slots(), 5u), prefixes);
    std::vector<std::vector<Diagram>> parts(prefixes.size());
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < prefixes.size(); i += threads)
          en.run(prefixes[i], std::min(en.slots(), 5u), [&](const Diagram& d) { parts[i].push_back(d); });
      });
    }
    for (auto& th : pool) th.join();
    for (auto& part : parts) std::move(part.begin(), part.end(), std::back_inserter(result.diagrams));
  }
  result.oriented_count = result.diagrams.size();
  result.unoriented_count = count_unoriented(result.diagrams);
  return result;
}

unsigned chi(const std::vector<unsigned>& block, const Diagram& d) {
  if (block.size() != d.k()) throw UsageError("partition size differs from the number of elements");
  unsigned total = 0;
  for (const auto& g : d.color_groups()) {
    std::uint64_t seen = 0;
    for (unsigned l = 0; l < d.k(); ++l)
      if (g.element_mask >> l & 1u) seen |= std::uint64_t{1} << block[l];
    total += static_cast<unsigned>(std::popcount(seen)) - 1;
  }
  return total;
}

namespace {

constexpr unsigned kMaxPartitionElements = 8;

// sum_pi (-1)^{s-1} (s-1)! u^{chi}
Polynomial moebius_sum(const Diagram& d) {
  if (d.k() > kMaxPartitionElements) throw ResourceError("set-partition sum capped at k <= 8");
  std::vector<long> coeff;
  for_each_set_partition(d.k(), [&](const std::vector<unsigned>& block, unsigned s) {
    const unsigned x = chi(block, d);
    if (coeff.size() <= x) coeff.resize(x + 1, 0);
    long term = 1;
    for (unsigned i = 2; i < s; ++i) term *= static_cast<long>(i);
    coeff[x] += (s % 2 == 1) ? term : -term;
  });
  std::vector<Rational> c(coeff.begin(), coeff.end());
  return Polynomial(std::move(c));
}

}  // namespace

Polynomial weight(const Diagram& d) {
  if (d.has_loop() || !d.is_connected()) return Polynomial();
  std::vector<Rational> shifted(d.color_group_count(), Rational(0));
  const Polynomial base = moebius_sum(d);
  for (const auto& c : base.coefficients()) shifted.push_back(c);
  return Polynomial(std::move(shifted));
}

BigInt exact_class_count(unsigned vertex_classes, const BigInt& n) {
  if (n < 0) throw UsageError("n must be non-negative");
  return falling_factorial(n, vertex_classes);
}

BigInt exact_class_count(const Diagram& d, const BigInt& n) { return exact_class_count(d.vertex_class_count(), n); }

Polynomial cumulant_via_diagrams(ModelKind model, unsigned q, unsigned k, const BigInt& n, unsigned max_slots) {
  EnumerationOptions options;
  options.filter = Filter::kConnected;
  options.max_slots = max_slots;
  Polynomial total;
  for_each_diagram(model, q, k, options, [&](const Diagram& d) {
    const BigInt count = exact_class_count(d, n);
    if (count != 0) total += weight(d) * Rational(count);
  });
  return total;
}

Rational cumulant_via_diagrams(ModelKind model, unsigned q, unsigned k, const BigInt& n, const Rational& p,
                               unsigned max_slots) {
  if (p < 0 || p > 1) throw UsageError("p must lie in [0,1]");
  return cumulant_via_diagrams(model, q, k, n, max_slots).evaluate(p);
}

Polynomial limit_cumulant_full(ModelKind model, unsigned q, unsigned k, unsigned max_slots) {
  if (model == ModelKind::kX && q <= 2)
    throw NotProvidedError("full-regime limit undefined for X with q <= 2: no diagram has k-1 arcs");
  EnumerationOptions options;
  options.filter = Filter::kTreeArcs;
  options.max_slots = max_slots;
  Polynomial total;
  for_each_diagram(model, q, k, options, [&](const Diagram& d) { total += moebius_sum(d); });
  return total;
}

SparseTreeTable sparse_tree_table(ModelKind model, unsigned q, unsigned kmax, unsigned max_slots) {
  SparseTreeTable table{model, q, {}, {}};
  const bool odd_cycle = model == ModelKind::kX && q % 2 == 1;
  for (unsigned k = 1; k <= kmax; ++k) {
    std::map<unsigned, BigInt> counts;
    if (!odd_cycle) {
      EnumerationOptions options;
      options.filter = Filter::kConnected;
      options.max_slots = max_slots;
      options.max_cycle_rank = 0;
      for_each_diagram(model, q, k, options, [&](const Diagram& d) { counts[d.color_group_count()] += 1; });
    } else {
      check_shape(model, q, k, max_slots);
    }
    Polynomial limit;
    if (!odd_cycle) {
      const unsigned lmax = model == ModelKind::kY ? (q - 1) * k + 1 : (q / 2 - 1) * k + 1;
      for (const auto& [l, n] : counts) {
        if (l > lmax) throw InvariantError("tree diagram with more edges than the maximum");
        limit += Polynomial::monomial(Rational(n), lmax - l);
      }
    }
    table.counts.push_back(std::move(counts));
    table.limit.push_back(std::move(limit));
  }
  return table;
}

BigInt CycleCensus::dilute_value(unsigned k) const {
  if (k == 0 || k > counts.size()) throw UsageError("k outside the census");
  auto it = counts[k - 1].find(q);
  return it == counts[k - 1].end() ? BigInt(0) : it->second;
}

CycleCensus cycle_census(unsigned q, unsigned kmax, unsigned max_slots) {
  if (q % 2 == 0) throw UsageError("cycle census is defined for odd q");
  CycleCensus census{q, {}};
  for (unsigned k = 1; k <= kmax; ++k) {
    EnumerationOptions options;
    options.filter = Filter::kConnected;
    options.max_slots = max_slots;
    options.max_cycle_rank = 1;
    std::map<unsigned, BigInt> counts;
    for_each_diagram(ModelKind::kX, q, k, options, [&](const Diagram& d) {
      if (d.cycle_count() == 1) counts[d.color_group_count()] += 1;
    });
    census.counts.push_back(std::move(counts));
  }
  return census;
}

unsigned Walk::root_steps() const {
  unsigned r = 0;
  for (std::size_t i = 0; i + 1 < letters.size(); ++i)
    if (letters[i] == 0 || letters[i + 1] == 0) ++r;
  return r;
}

unsigned Walk::edge_count() const {
  std::set<std::pair<unsigned, unsigned>> edges;
  for (std::size_t i = 0; i + 1 < letters.size(); ++i)
    edges.emplace(std::min(letters[i], letters[i + 1]), std::max(letters[i], letters[i + 1]));
  return static_cast<unsigned>(edges.size());
}

bool Walk::is_tree() const {
  for (std::size_t i = 0; i + 1 < letters.size(); ++i)
    if (letters[i] == letters[i + 1]) return false;
  const unsigned vertices = *std::max_element(letters.begin(), letters.end()) + 1u;
  return edge_count() + 1 == vertices;
}

Walk walk_encode(std::span<const long> indices) {
  if (indices.empty()) throw UsageError("a walk needs at least one vertex");
  if (indices.size() > 255) throw ResourceError("walk too long");
  return Walk{canonicalize(indices)};
}

Polynomial WalkCensus::total() const {
  Polynomial t;
  for (const auto& w : weighted) t += w;
  return t;
}

WalkCensus brute_force_walk_census(unsigned q) {
  if (q > 16) throw ResourceError("brute-force walk census limited to q <= 16");
  WalkCensus census{q, std::vector<Polynomial>(q + 1), std::vector<BigInt>(q + 1, 0)};
  std::vector<std::uint8_t> letters(q + 1, 0);
  std::vector<std::uint32_t> adj(q + 2, 0);
  // Tree walks only: a step to an existing vertex must reuse an existing edge.
  std::function<void(unsigned, unsigned, unsigned, unsigned)> rec = [&](unsigned pos, unsigned used, unsigned edges,
                                                                        unsigned root) {
    if (pos == q + 1) {
      census.weighted[root] += Polynomial::monomial(1, edges == 0 ? 0 : edges - 1);
      census.counts[root] += 1;
      return;
    }
    const unsigned prev = letters[pos - 1];
    for (unsigned x = 0; x <= used; ++x) {
      if (x == prev) continue;
      const bool fresh = x == used;
      const bool existing = !fresh && (adj[prev] >> x & 1u);
      if (!fresh && !existing) continue;
      letters[pos] = static_cast<std::uint8_t>(x);
      const unsigned r = root + ((prev == 0 || x == 0) ? 1 : 0);
      if (fresh) {
        adj[prev] |= 1u << x;
        adj[x] |= 1u << prev;
        rec(pos + 1, used + 1, edges + 1, r);
        adj[prev] &= ~(1u << x);
        adj[x] = 0;
      } else {
        rec(pos + 1, used, edges, r);
      }
    }
  };
  rec(1, 1, 0, 0);
  return census;
}

}  // namespace ermm::diagrams
