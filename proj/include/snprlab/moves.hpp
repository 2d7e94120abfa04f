#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "snprlab/editor.hpp"
#include "snprlab/network.hpp"

namespace snprlab {

// One SNPR operation, with edges named by endpoints in the network it is
// applied to.
struct Move {
  enum class Kind : std::uint8_t {
    kPruneRegraft,  // SNPR±: prune e = (u, v) at tree vertex u, regraft onto f
    kMinus,         // SNPR⁻: delete reticulation edge e
    kPlus,          // SNPR⁺: head v' on e, tail u' on f; f == e means the upper half
  };
  Kind kind = Kind::kMinus;
  Edge e;
  Edge f;

  auto operator<=>(const Move&) const = default;
};

std::string_view to_string(Move::Kind kind);
std::string to_string(const Move& m);

// 2 for a prune-and-regraft, 1 otherwise.
std::size_t move_weight(Move::Kind kind);

// Throws PreconditionError when the move is not legal in `n`.
EditResult apply_move_traced(const Network& n, const Move& m);
Network apply_move(const Network& n, const Move& m);

}  // namespace snprlab
