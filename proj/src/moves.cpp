#include "snprlab/moves.hpp"

namespace snprlab {

namespace {

EdgeIndex resolve(const Network& n, const Edge& e) {
  auto idx = n.find_edge(e.from, e.to, e.slot);
  if (!idx)
    throw PreconditionError("no edge " + std::to_string(e.from) + "->" + std::to_string(e.to) +
                            (e.slot ? "#" + std::to_string(e.slot) : ""));
  return *idx;
}

std::string edge_text(const Edge& e) {
  std::string s = std::to_string(e.from) + "->" + std::to_string(e.to);
  if (e.slot) s += "#" + std::to_string(e.slot);
  return s;
}

}  // namespace

std::string_view to_string(Move::Kind kind) {
  switch (kind) {
    case Move::Kind::kPruneRegraft: return "pm";
    case Move::Kind::kMinus: return "minus";
    case Move::Kind::kPlus: return "plus";
  }
  return "?";
}

std::string to_string(const Move& m) {
  std::string s(to_string(m.kind));
  s += " " + edge_text(m.e);
  if (m.kind != Move::Kind::kMinus) s += " " + edge_text(m.f);
  return s;
}

std::size_t move_weight(Move::Kind kind) { return kind == Move::Kind::kPruneRegraft ? 2 : 1; }

EditResult apply_move_traced(const Network& n, const Move& m) {
  switch (m.kind) {
    case Move::Kind::kMinus: return edit_minus(n, resolve(n, m.e));
    case Move::Kind::kPlus: return edit_plus(n, resolve(n, m.e), resolve(n, m.f));
    case Move::Kind::kPruneRegraft: return edit_prune_regraft(n, resolve(n, m.e), resolve(n, m.f));
  }
  throw PreconditionError("unknown move kind");
}

Network apply_move(const Network& n, const Move& m) { return apply_move_traced(n, m).network; }

}  // namespace snprlab
