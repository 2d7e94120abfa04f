#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "snprlab/digraph.hpp"
#include "snprlab/moves.hpp"
#include "snprlab/network.hpp"

namespace snprlab {

inline constexpr std::uint32_t kNoComponent = std::numeric_limits<std::uint32_t>::max();

// Vertex-disjoint image of a phylogenetic digraph in a host network.
struct Embedding {
  // vertex_map[c][x]: host image of vertex x of component c (kNoVertex for
  // ids the component does not use).
  std::vector<std::vector<VertexId>> vertex_map;
  // edge_map[c][i]: host edges behind edge i of component c, top to bottom.
  std::vector<std::vector<std::vector<EdgeIndex>>> edge_map;
  std::vector<char> edges;           // by host edge index
  std::vector<std::uint32_t> owner;  // by host vertex id; kNoComponent if unused

  bool contains_edge(EdgeIndex e) const { return edges[e] != 0; }
  bool contains_vertex(VertexId v) const { return owner[v] != kNoComponent; }
  std::size_t edge_count() const;
  std::vector<EdgeIndex> edge_list() const;
};

// Closure of an embedding under (E1) and, unless it is a root extension, (E2).
struct Extension {
  Embedding base;
  std::vector<char> edges;           // by host edge index, includes the base
  std::vector<EdgeIndex> added;      // in the order they were added
  std::vector<std::uint32_t> owner;  // by host vertex id; kNoComponent if unreached

  bool contains_edge(EdgeIndex e) const { return edges[e] != 0; }
  bool contains_vertex(VertexId v) const { return owner[v] != kNoComponent; }
  std::size_t edge_count() const;
};

struct ExtensionPolicy {
  enum class Mode { kDeterministic, kSeeded };
  Mode mode = Mode::kDeterministic;
  std::uint64_t seed = 0;
  bool allow_e2 = true;

  static ExtensionPolicy deterministic() { return {}; }
  static ExtensionPolicy seeded(std::uint64_t seed, bool allow_e2 = true) {
    return {Mode::kSeeded, seed, allow_e2};
  }
};

// Backtracking search anchored at the labelled leaves and ρ. Throws
// PreconditionError if the leaf sets differ.
std::optional<Embedding> find_embedding(const PhyloDigraph& d, const Network& n);
// Every embedding once, ordered by edge set. `limit` caps the result size.
std::vector<Embedding> enumerate_embeddings(const PhyloDigraph& d, const Network& n,
                                            std::size_t limit = std::numeric_limits<std::size_t>::max());
// Rebuilds an embedding from vertex images and an edge mask, tracing each
// digraph edge through (1,1) vertices. Absent if the mask does not fit.
std::optional<Embedding> embedding_from_edges(const PhyloDigraph& d, const Network& n,
                                              std::vector<std::vector<VertexId>> vertex_map,
                                              std::vector<char> edges);
// Empty iff `m` satisfies the embedding invariants.
std::vector<std::string> embedding_problems(const PhyloDigraph& d, const Network& n, const Embedding& m);

Extension extend(const Embedding& m, const Network& n, const ExtensionPolicy& policy = {});
Extension root_extend(const Embedding& m, const Network& n, const ExtensionPolicy& policy = {});
// Empty iff `r` is closed and could have been produced by the rules
// (E1 only when `root_only`).
std::vector<std::string> extension_problems(const Network& n, const Extension& r, bool root_only);

std::size_t cut_size(const Network& n, const Extension& r);
// Cut size via the first embedding and the deterministic policy. Throws
// PreconditionError if `n` does not display `d`.
std::size_t digraph_cut_size(const Network& n, const PhyloDigraph& d);
// (|E_N| - |V_N|) - (|E_D| - |V_D|): every extension contains every host
// vertex and each added edge brings exactly one new vertex.
std::ptrdiff_t closed_form_cut_size(const Network& n, const PhyloDigraph& d);

// Host reticulation edges in r outside its embedding.
std::vector<EdgeIndex> outside_reticulation_edges(const Network& n, const Extension& r);

// Reroutes reticulation edges outside the embedding through their sibling
// edge until none remain. Requires a tree-child host.
Extension to_root_extension(const Network& n, const Extension& r);

struct RootPath {
  std::vector<VertexId> vertices;  // top to bottom, ends at the given vertex
  std::vector<EdgeIndex> edges;
};
// Maximal path in r ending at the image `v` of a digraph vertex of in-degree
// 0 and out-degree 0 or 2. Throws PreconditionError if v is not such an image
// or if the walk upwards meets a vertex with two parents in r.
RootPath root_path(const Network& n, const PhyloDigraph& d, const Extension& r, VertexId v);

// Edges of `p` plus every edge of r - m on a path ending at a host
// reticulation on p. `p` must be a directed path of the embedding.
std::vector<EdgeIndex> path_extension(const Network& n, const Extension& r, const std::vector<EdgeIndex>& p);

struct Transfer {
  Network network;
  Extension extension;
};
// Carries an extension across one move: MINUS on a reticulation edge outside
// r, PLUS on two distinct tree edges, or PM whose pruned edge is a tree edge
// outside r. Throws PreconditionError otherwise.
Transfer transfer_extension(const Network& n, const PhyloDigraph& d, const Extension& r, const Move& move);

// Host PND document annotating each edge with in:embedding, in:extension
// or cut.
std::string write_extension(const Network& n, const Extension& r);

}  // namespace snprlab
