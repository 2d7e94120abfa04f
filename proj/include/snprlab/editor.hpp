#pragma once

#include <cstdint>
#include <vector>

#include "snprlab/network.hpp"

namespace snprlab {

// Where an edge of an edited network came from.
struct EdgeOrigin {
  enum class Role : std::uint8_t {
    kKept,       // an original edge, or several merged by suppression
    kLowerHalf,  // the lower half of a subdivided edge
    kAdded,      // created by the edit
  };
  Role role = Role::kKept;
  std::vector<EdgeIndex> sources;  // original edge indices
};

struct EditResult {
  Network network;
  // Indexed by editor handle (original ids first, then added vertices);
  // kNoVertex for deleted vertices.
  std::vector<VertexId> vertex_map;
  // Indexed by edge index of `network`.
  std::vector<EdgeOrigin> origins;
};

// Scratch copy of a network supporting the handful of local edits the
// rearrangement operations need. `finish` compacts ids and validates.
class GraphEditor {
 public:
  using EdgeHandle = std::size_t;

  explicit GraphEditor(const Network& n);

  VertexId add_vertex();
  EdgeHandle add_edge(VertexId from, VertexId to, EdgeOrigin origin);
  void remove_edge(EdgeHandle h);
  // Splits `h` into (from, w) and (w, to); returns w. The upper half keeps
  // the origin, the lower half becomes kLowerHalf (unless already kAdded).
  VertexId subdivide(EdgeHandle h);
  // Handle of the edge with the given original index.
  EdgeHandle original(EdgeIndex e) const { return e; }
  EdgeHandle last_added() const { return edges_.size() - 1; }

  // Suppresses (1,1) vertices and deletes non-root (0,1) or isolated
  // unlabelled vertices, starting from `seeds` and repeating to fixpoint.
  void suppress(std::vector<VertexId> seeds);

  std::size_t in_degree(VertexId v) const;
  std::size_t out_degree(VertexId v) const;
  VertexId from(EdgeHandle h) const { return edges_[h].from; }
  VertexId to(EdgeHandle h) const { return edges_[h].to; }
  bool alive(EdgeHandle h) const { return edges_[h].alive; }
  std::vector<EdgeHandle> out_edges(VertexId v) const;
  std::vector<EdgeHandle> in_edges(VertexId v) const;

  // Throws Error if the edited graph is not a valid network.
  EditResult finish() const;

 private:
  struct Rec {
    VertexId from, to;
    bool alive;
    EdgeOrigin origin;
  };
  const Network* base_;
  std::vector<char> vertex_alive_;
  std::vector<Rec> edges_;
};

// The three rearrangement edits. Each throws PreconditionError when the
// move is not legal in `n`.
//
// Deletes reticulation edge e = (u, v) and suppresses u and v.
EditResult edit_minus(const Network& n, EdgeIndex e);
// Subdivides e1 with v' and e2 with u' and adds (u', v'). e2 == e1 selects
// the upper half (e1.from, v'). Legal iff e2.from is not e1.to or below it.
EditResult edit_plus(const Network& n, EdgeIndex e1, EdgeIndex e2);
// Prunes e = (u, v) at tree vertex u, suppresses u, subdivides f with u' and
// adds (u', v). f = (p_u, u) names the merged edge (p_u, c_u); f = e and
// f = (u, c_u) are rejected. Legal iff f.from is not v or below it.
EditResult edit_prune_regraft(const Network& n, EdgeIndex e, EdgeIndex f);

}  // namespace snprlab
