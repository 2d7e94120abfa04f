#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "snprlab/error.hpp"

namespace snprlab {

using VertexId = std::uint32_t;
using EdgeIndex = std::uint32_t;
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();
inline constexpr EdgeIndex kNoEdge = std::numeric_limits<EdgeIndex>::max();

// `slot` tells parallel copies of the same (from, to) pair apart.
struct Edge {
  VertexId from = kNoVertex;
  VertexId to = kNoVertex;
  std::uint8_t slot = 0;

  auto operator<=>(const Edge&) const = default;
};

// Unvalidated description of a directed multigraph. Duplicate entries in
// `edges` are parallel edges; slots are assigned in order of appearance.
struct RawGraph {
  std::vector<VertexId> vertices;
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::map<VertexId, std::string> labels;
  std::optional<VertexId> root;
};

struct Violation {
  enum class Kind {
    kCycle,
    kDegree,
    kDisconnected,
    kLabel,
    kMultipleSources,
    kMissingRoot,
    kUndeclaredVertex,
    kStructure,
  };
  Kind kind;
  std::string message;
  std::vector<VertexId> vertices;
};

std::string_view to_string(Violation::Kind kind);

// Either a value or the full list of reasons it could not be built.
template <class T>
struct Checked {
  std::optional<T> value;
  std::vector<Violation> violations;

  bool ok() const { return value.has_value(); }
  explicit operator bool() const { return ok(); }
  const T& operator*() const { return *value; }
  const T* operator->() const { return &*value; }
};

std::string describe(const std::vector<Violation>& violations);

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations, const std::string& what = "invalid network")
      : Error(what + ": " + describe(violations)), violations_(std::move(violations)) {}
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// Immutable directed multigraph with sparse vertex ids. Edges are sorted by
// (from, to, slot), so the out-edges of a vertex form a contiguous range.
class Multigraph {
 public:
  Multigraph() = default;

  // Throws PreconditionError on duplicate vertex ids, edges with undeclared
  // endpoints, labels on undeclared vertices, or more than 256 parallel copies.
  static Multigraph build(std::vector<VertexId> vertices,
                          const std::vector<std::pair<VertexId, VertexId>>& edges,
                          const std::map<VertexId, std::string>& labels);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  // Every vertex id is strictly below this bound.
  std::size_t id_bound() const { return present_.size(); }
  bool has_vertex(VertexId v) const { return v < present_.size() && present_[v]; }

  const std::vector<VertexId>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeIndex e) const { return edges_[e]; }

  std::span<const EdgeIndex> out_edges(VertexId v) const {
    return {out_list_.data() + out_off_[v], out_off_[v + 1] - out_off_[v]};
  }
  std::span<const EdgeIndex> in_edges(VertexId v) const {
    return {in_list_.data() + in_off_[v], in_off_[v + 1] - in_off_[v]};
  }
  std::size_t out_degree(VertexId v) const { return out_off_[v + 1] - out_off_[v]; }
  std::size_t in_degree(VertexId v) const { return in_off_[v + 1] - in_off_[v]; }

  std::vector<VertexId> children(VertexId v) const;
  std::vector<VertexId> parents(VertexId v) const;

  const std::string& label(VertexId v) const { return labels_[v]; }
  bool is_labelled(VertexId v) const { return !labels_[v].empty(); }

  std::optional<EdgeIndex> find_edge(VertexId from, VertexId to, std::uint8_t slot = 0) const;
  // Number of parallel copies of (from, to).
  std::size_t multiplicity(VertexId from, VertexId to) const;

  RawGraph to_raw() const;

 private:
  std::vector<VertexId> vertices_;
  std::vector<char> present_;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> out_off_, in_off_;
  std::vector<EdgeIndex> out_list_, in_list_;
  std::vector<std::string> labels_;
};

enum class VertexKind { kRoot, kLeaf, kTree, kReticulation };

// Rooted binary phylogenetic network: root of degrees (0,1), labelled leaves
// of degrees (1,0), every other vertex (1,2) or (2,1); acyclic and connected.
class Network : public Multigraph {
 public:
  Network() = default;

  // Throws ValidationError listing every violation.
  static Network from_raw(const RawGraph& raw);

  VertexId root() const { return root_; }
  VertexKind kind(VertexId v) const;
  bool is_leaf(VertexId v) const { return out_degree(v) == 0; }
  bool is_tree_vertex(VertexId v) const { return in_degree(v) == 1 && out_degree(v) == 2; }
  bool is_reticulation(VertexId v) const { return in_degree(v) == 2; }
  bool is_reticulation_edge(EdgeIndex e) const { return is_reticulation(edge(e).to); }

  std::size_t leaf_count() const;
  std::size_t reticulation_count() const;
  std::size_t tree_vertex_count() const;

  // Sorted taxon names.
  std::vector<std::string> taxa() const;
  std::optional<VertexId> leaf(std::string_view label) const;

  RawGraph to_raw() const;

 private:
  friend Checked<Network> validate(const RawGraph& raw);
  VertexId root_ = kNoVertex;
};

Checked<Network> validate(const RawGraph& raw);

// reach[w] != 0 iff w is v or a descendant of v. Indexed by vertex id.
std::vector<char> descendants(const Multigraph& g, VertexId v);
// Vertices in an order where every edge points forward.
std::vector<VertexId> topological_order(const Multigraph& g);

struct TreeChildReport {
  bool is_tree_child = true;
  // Edges whose two endpoints are both reticulations.
  std::vector<Edge> stacks;
  std::vector<std::pair<VertexId, VertexId>> sibling_reticulations;
  std::vector<std::pair<Edge, Edge>> parallel_pairs;
};

// Direct definition: every non-leaf vertex has a child that is a tree vertex
// or a leaf.
bool is_tree_child(const Network& n);

// Computes both the definition and the stack / sibling / parallel
// characterization; throws std::logic_error if they disagree.
TreeChildReport tree_child_report(const Network& n);

// Deletes reticulation edge `e` and suppresses both endpoints. Requires a
// tree-child network.
Network delete_reticulation_edge(const Network& n, EdgeIndex e);

// Portable uniform integer in [0, bound); the standard distributions are not
// reproducible across library implementations.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound);

// Random tree on `n_leaves` leaves (taxa t1..tn) by random leaf attachment,
// followed by random reticulation insertions. With `tree_child_only` every
// insertion must keep the network tree-child. Throws Error if the requested
// reticulation count is not reached within the retry budget.
Network random_network(std::size_t n_leaves, std::size_t n_reticulations, std::uint64_t seed,
                       bool tree_child_only = false);
Network random_tree_child(std::size_t n_leaves, std::size_t n_reticulations, std::uint64_t seed);

// Taxon name used by the generators for leaf `i` (0-based): "t1", "t2", ...
std::string generated_taxon(std::size_t i);

inline constexpr std::size_t kDefaultEnumerationLimit = 5;

// One representative per isomorphism class of tree-child networks on taxa
// t1..tn with at most `max_reticulations` reticulations, ordered by
// reticulation count then canonical signature.
std::vector<Network> enumerate_tree_child(std::size_t n_leaves, std::size_t max_reticulations,
                                          std::size_t leaf_limit = kDefaultEnumerationLimit);

}  // namespace snprlab
