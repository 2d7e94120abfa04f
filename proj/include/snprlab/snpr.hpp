#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "snprlab/moves.hpp"
#include "snprlab/network.hpp"

namespace snprlab {

struct NeighborhoodOptions {
  // Keep only tree-child successors. Turning this off also admits states
  // with parallel edges; nothing downstream makes claims about them.
  bool tree_child_only = true;
  std::size_t max_reticulations = std::numeric_limits<std::size_t>::max();
  // Restrict to some kinds; all three by default.
  bool minus = true, plus = true, prune_regraft = true;
};

struct Successor {
  Move move;
  Network network;
};

// Calls `visit` once per legal move of `n` whose result passes the filters,
// in a fixed order: MINUS by edge, then PLUS by (e1, e2), then PM by (e, f).
// Returning false from `visit` stops the enumeration.
void for_each_move(const Network& n, const NeighborhoodOptions& opts,
                   const std::function<bool(const Move&, Network&&)>& visit);
std::vector<Successor> enumerate_moves(const Network& n, const NeighborhoodOptions& opts = {});

struct MoveSequence {
  Network start;
  std::vector<Move> moves;
  std::vector<Network> intermediates;  // intermediates[i] = result of moves[i]

  const Network& end() const { return intermediates.empty() ? start : intermediates.back(); }
  std::size_t size() const { return moves.size(); }
};

// Applies the moves in order; throws PreconditionError on an illegal move.
MoveSequence make_sequence(Network start, std::vector<Move> moves);
// Every intermediate (and the start) is tree-child.
bool is_tree_child_sequence(const MoveSequence& s);
std::size_t sequence_weight(const MoveSequence& s);
std::size_t sequence_weight(const std::vector<Move>& moves);

// Move carried through a vertex bijection (indexed by the old ids).
Move remap_move(const Move& m, const std::vector<VertexId>& phi);

// A PM that prunes a reticulation edge.
bool violates_global_assumption(const Network& n, const Move& m);
// Replaces every such PM by a MINUS and a PLUS reaching an isomorphic network.
MoveSequence enforce_global_assumption(const MoveSequence& s);
// Adjacent (PLUS or PM, MINUS) pairs are rewritten by dropping both, merging
// them into one PM or one MINUS, or swapping them, until every MINUS precedes
// every PLUS and PM. Requires a tree-child sequence without global assumption
// violations (PreconditionError); throws std::logic_error if no rewrite
// applies.
MoveSequence normalize_sequence(const MoveSequence& s);
// Number of (PLUS or PM, later MINUS) pairs.
std::size_t inversion_count(const std::vector<Move>& moves);

// One JSON object per line: {"kind":"pm","e":[u,v,slot],"f":[x,y,slot]}.
std::string write_moves(const std::vector<Move>& moves);
// Throws ParseError with a 1-based line number.
std::vector<Move> read_moves(const std::string& text);

struct DistanceOptions {
  // Maximum reticulations of any intermediate; default max(r(n), r(m)) + 1.
  std::optional<std::size_t> cap;
  // Maximum number of expanded states before BudgetExceeded; 0 = no limit.
  std::size_t budget = 0;
  // Meet-in-the-middle search. Same weight and witness as the default.
  bool bidirectional = false;
  // Worker threads for expanding states; never changes the result.
  std::size_t jobs = 1;
};

struct DistanceResult {
  std::size_t weight = 0;
  MoveSequence witness;
  std::size_t cap = 0;
  std::size_t expanded = 0;
};

// Isomorphism classes of tree-child networks on one taxon set below a
// reticulation cap, with neighbourhoods memoized across queries.
class TreeChildSpace {
 public:
  explicit TreeChildSpace(std::size_t cap);
  ~TreeChildSpace();
  TreeChildSpace(const TreeChildSpace&) = delete;
  TreeChildSpace& operator=(const TreeChildSpace&) = delete;

  std::size_t cap() const;
  std::size_t state_count() const;
  std::size_t expanded_count() const;

  // Exact tree-child distance within the cap. Throws PreconditionError if an
  // endpoint is not tree-child, exceeds the cap, or the taxa differ.
  DistanceResult distance(const Network& n, const Network& m, const DistanceOptions& opts = {});

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

DistanceResult dtc(const Network& n, const Network& m, const DistanceOptions& opts = {});

}  // namespace snprlab
