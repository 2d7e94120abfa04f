#include "snprlab/snpr.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "snprlab/canonical.hpp"

namespace snprlab {

namespace {

bool tree_like(const Network& n, VertexId v) { return n.is_leaf(v) || n.is_tree_vertex(v); }

bool keep(const Network& r, const NeighborhoodOptions& opts) {
  if (r.reticulation_count() > opts.max_reticulations) return false;
  return !opts.tree_child_only || is_tree_child(r);
}

// Necessary conditions for a tree-child result of PLUS (e1 gets v', e2 gets
// u'), checked before building anything.
bool plus_may_stay_tree_child(const Network& n, const Edge& e1, const Edge& e2) {
  if (e1 == e2) return false;  // parallel edges
  if (!n.is_tree_vertex(e1.from) || n.is_reticulation(e1.to)) return false;
  for (EdgeIndex s : n.out_edges(e1.from))
    if (n.edge(s) != e1 && n.is_reticulation(n.edge(s).to)) return false;
  return tree_like(n, e2.to);
}

}  // namespace

void for_each_move(const Network& n, const NeighborhoodOptions& opts,
                   const std::function<bool(const Move&, Network&&)>& visit) {
  const auto& edges = n.edges();
  auto offer = [&](const Move& m, EditResult&& r) {
    if (!keep(r.network, opts)) return true;
    return visit(m, std::move(r.network));
  };
  if (opts.minus) {
    for (EdgeIndex e = 0; e < edges.size(); ++e) {
      if (!n.is_reticulation(edges[e].to) || !n.is_tree_vertex(edges[e].from)) continue;
      if (!offer(Move{Move::Kind::kMinus, edges[e], {}}, edit_minus(n, e))) return;
    }
  }
  if (opts.plus && n.reticulation_count() < opts.max_reticulations) {
    for (EdgeIndex e1 = 0; e1 < edges.size(); ++e1) {
      const auto below = descendants(n, edges[e1].to);
      for (EdgeIndex e2 = 0; e2 < edges.size(); ++e2) {
        if (below[edges[e2].from]) continue;
        if (opts.tree_child_only && !plus_may_stay_tree_child(n, edges[e1], edges[e2])) continue;
        EditResult r;
        try {
          r = edit_plus(n, e1, e2);
        } catch (const PreconditionError&) {
          throw;
        } catch (const Error&) {
          continue;  // not a network
        }
        if (!offer(Move{Move::Kind::kPlus, edges[e1], edges[e2]}, std::move(r))) return;
      }
    }
  }
  if (opts.prune_regraft) {
    for (EdgeIndex e = 0; e < edges.size(); ++e) {
      const VertexId u = edges[e].from, v = edges[e].to;
      if (!n.is_tree_vertex(u)) continue;
      const auto below = descendants(n, v);
      for (EdgeIndex f = 0; f < edges.size(); ++f) {
        if (f == e || edges[f].from == u || below[edges[f].from]) continue;
        EditResult r;
        try {
          r = edit_prune_regraft(n, e, f);
        } catch (const PreconditionError&) {
          throw;
        } catch (const Error&) {
          continue;
        }
        if (!offer(Move{Move::Kind::kPruneRegraft, edges[e], edges[f]}, std::move(r))) return;
      }
    }
  }
}

std::vector<Successor> enumerate_moves(const Network& n, const NeighborhoodOptions& opts) {
  std::vector<Successor> out;
  for_each_move(n, opts, [&](const Move& m, Network&& r) {
    out.push_back({m, std::move(r)});
    return true;
  });
  return out;
}

MoveSequence make_sequence(Network start, std::vector<Move> moves) {
  MoveSequence s{std::move(start), std::move(moves), {}};
  for (const Move& m : s.moves) s.intermediates.push_back(apply_move(s.end(), m));
  return s;
}

bool is_tree_child_sequence(const MoveSequence& s) {
  if (!is_tree_child(s.start)) return false;
  return std::all_of(s.intermediates.begin(), s.intermediates.end(),
                     [](const Network& n) { return tree_child_report(n).is_tree_child; });
}

std::size_t sequence_weight(const std::vector<Move>& moves) {
  std::size_t w = 0;
  for (const Move& m : moves) w += move_weight(m.kind);
  return w;
}

std::size_t sequence_weight(const MoveSequence& s) { return sequence_weight(s.moves); }

Move remap_move(const Move& m, const std::vector<VertexId>& phi) {
  auto map_edge = [&](const Edge& e) { return Edge{phi.at(e.from), phi.at(e.to), e.slot}; };
  Move r = m;
  r.e = map_edge(m.e);
  if (m.kind != Move::Kind::kMinus) r.f = map_edge(m.f);
  return r;
}

bool violates_global_assumption(const Network& n, const Move& m) {
  return m.kind == Move::Kind::kPruneRegraft && n.has_vertex(m.e.to) && n.is_reticulation(m.e.to);
}

namespace {

// First move of the given kinds from `n` whose result has signature `target`.
std::optional<Successor> find_move_to(const Network& n, const std::string& target, Move::Kind kind,
                                      bool tree_child_only = true) {
  NeighborhoodOptions opts;
  opts.tree_child_only = tree_child_only;
  opts.minus = kind == Move::Kind::kMinus;
  opts.plus = kind == Move::Kind::kPlus;
  opts.prune_regraft = kind == Move::Kind::kPruneRegraft;
  std::optional<Successor> found;
  for_each_move(n, opts, [&](const Move& m, Network&& r) {
    if (kind == Move::Kind::kPruneRegraft && violates_global_assumption(n, m)) return true;
    if (canonical_signature(r) != target) return true;
    found = Successor{m, std::move(r)};
    return false;
  });
  return found;
}

// Rebuilds a sequence from `start` along a list of states: each listed move
// was made in (an isomorphic copy of) the previous state and is carried over
// to the network actually reached.
struct Replayer {
  Network cur;
  std::vector<Move> moves;
  std::vector<Network> states;

  // m is a move of `ref`, a network isomorphic to cur.
  void push(const Network& ref, const Move& m) {
    auto phi = find_isomorphism(ref, cur);
    if (!phi) throw std::logic_error("replay lost track of the sequence");
    push_own(remap_move(m, *phi));
  }
  void push_own(const Move& m) {
    Network next = apply_move(cur, m);
    moves.push_back(m);
    states.push_back(next);
    cur = std::move(next);
  }
};

}  // namespace

MoveSequence enforce_global_assumption(const MoveSequence& s) {
  Replayer rp{s.start, {}, {}};
  const Network* prev = &s.start;
  for (std::size_t i = 0; i < s.moves.size(); ++i) {
    const Network& next = s.intermediates[i];
    auto phi = find_isomorphism(*prev, rp.cur);
    if (!phi) throw std::logic_error("replay lost track of the sequence");
    Move m = remap_move(s.moves[i], *phi);
    if (violates_global_assumption(rp.cur, m)) {
      Move minus{Move::Kind::kMinus, m.e, {}};
      rp.push_own(minus);
      auto plus = find_move_to(rp.cur, canonical_signature(next), Move::Kind::kPlus, false);
      if (!plus) throw std::logic_error("no SNPR+ completes the rewritten prune-and-regraft");
      rp.push_own(plus->move);
    } else {
      rp.push_own(m);
    }
    prev = &next;
  }
  return MoveSequence{s.start, std::move(rp.moves), std::move(rp.states)};
}

std::size_t inversion_count(const std::vector<Move>& moves) {
  std::size_t seen = 0, inv = 0;
  for (const Move& m : moves) {
    if (m.kind == Move::Kind::kMinus)
      inv += seen;
    else
      ++seen;
  }
  return inv;
}

MoveSequence normalize_sequence(const MoveSequence& s) {
  if (!is_tree_child_sequence(s)) throw PreconditionError("sequence is not tree-child");
  for (std::size_t i = 0; i < s.moves.size(); ++i)
    if (violates_global_assumption(i ? s.intermediates[i - 1] : s.start, s.moves[i]))
      throw PreconditionError("move " + std::to_string(i) + " prunes a reticulation edge");

  // states[0] = start, states[i + 1] = result of moves[i].
  std::vector<Move> moves = s.moves;
  std::vector<Network> states{s.start};
  states.insert(states.end(), s.intermediates.begin(), s.intermediates.end());

  auto check_tree_child = [](const Network& n) {
    if (!is_tree_child(n)) throw std::logic_error("normalization produced a non-tree-child network");
  };
  for (;;) {
    std::size_t i = 0;
    while (i + 1 < moves.size() &&
           !(moves[i].kind != Move::Kind::kMinus && moves[i + 1].kind == Move::Kind::kMinus))
      ++i;
    if (i + 1 >= moves.size()) break;
    const Network& a = states[i];
    const Network& c = states[i + 2];
    const std::string target = canonical_signature(c);
    const Move::Kind first = moves[i].kind;
    std::vector<Move> repl;
    std::vector<Network> repl_states;
    if (canonical_signature(a) == target) {
      // both moves cancel
    } else if (auto m = find_move_to(a, target, Move::Kind::kMinus)) {
      repl = {m->move};
      repl_states = {std::move(m->network)};
    } else if (auto pm = find_move_to(a, target, Move::Kind::kPruneRegraft)) {
      repl = {pm->move};
      repl_states = {std::move(pm->network)};
    } else {
      NeighborhoodOptions minus_only;
      minus_only.plus = minus_only.prune_regraft = false;
      for_each_move(a, minus_only, [&](const Move& m, Network&& mid) {
        auto second = find_move_to(mid, target, first);
        if (!second) return true;
        repl = {m, second->move};
        repl_states = {std::move(mid), std::move(second->network)};
        return false;
      });
      if (repl.empty()) throw std::logic_error("no rewrite applies to an SNPR+/SNPR- pair");
    }
    for (const Network& n : repl_states) check_tree_child(n);
    // Later moves refer to the old state c; carry them over to the new copy.
    Network reached = repl_states.empty() ? a : repl_states.back();
    Replayer rp{reached, {}, {}};
    const Network* prev = &c;
    for (std::size_t j = i + 2; j < moves.size(); ++j) {
      rp.push(*prev, moves[j]);
      prev = &states[j + 1];
    }
    std::vector<Move> nm(moves.begin(), moves.begin() + i);
    std::vector<Network> ns(states.begin(), states.begin() + i + 1);
    nm.insert(nm.end(), repl.begin(), repl.end());
    ns.insert(ns.end(), repl_states.begin(), repl_states.end());
    nm.insert(nm.end(), rp.moves.begin(), rp.moves.end());
    ns.insert(ns.end(), rp.states.begin(), rp.states.end());
    moves = std::move(nm);
    states = std::move(ns);
  }
  states.erase(states.begin());
  return MoveSequence{s.start, std::move(moves), std::move(states)};
}

std::string write_moves(const std::vector<Move>& moves) {
  std::string out;
  auto edge_json = [](const Edge& e) { return nlohmann::json::array({e.from, e.to, e.slot}); };
  for (const Move& m : moves) {
    nlohmann::ordered_json j;
    j["kind"] = std::string(to_string(m.kind));
    j["e"] = edge_json(m.e);
    if (m.kind != Move::Kind::kMinus) j["f"] = edge_json(m.f);
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<Move> read_moves(const std::string& text) {
  std::vector<Move> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0, offset = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t here = offset;
    offset += line.size() + 1;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fail = [&](const std::string& why) -> ParseError {
      return ParseError("line " + std::to_string(lineno) + ": " + why, here, lineno);
    };
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what(), here + e.byte - 1, lineno);
    }
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) throw fail("missing kind");
    Move m;
    const std::string kind = j["kind"];
    if (kind == "pm")
      m.kind = Move::Kind::kPruneRegraft;
    else if (kind == "minus")
      m.kind = Move::Kind::kMinus;
    else if (kind == "plus")
      m.kind = Move::Kind::kPlus;
    else
      throw fail("unknown kind '" + kind + "'");
    auto edge = [&](const char* key) {
      if (!j.contains(key)) throw fail(std::string("missing ") + key);
      const auto& a = j[key];
      if (!a.is_array() || a.size() < 2 || a.size() > 3) throw fail(std::string("bad edge ") + key);
      for (const auto& x : a)
        if (!x.is_number_unsigned()) throw fail(std::string("bad edge ") + key);
      Edge e{a[0].get<VertexId>(), a[1].get<VertexId>(), 0};
      if (a.size() == 3) {
        if (a[2].get<std::uint64_t>() > 255) throw fail("slot out of range");
        e.slot = static_cast<std::uint8_t>(a[2].get<unsigned>());
      }
      return e;
    };
    m.e = edge("e");
    if (m.kind != Move::Kind::kMinus) m.f = edge("f");
    out.push_back(m);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Uniform-cost search over isomorphism classes.

namespace {

using StateId = std::uint32_t;
constexpr std::size_t kUnknown = std::numeric_limits<std::size_t>::max();

struct Neighbor {
  StateId id;
  std::uint8_t weight;
};

}  // namespace

struct TreeChildSpace::Impl {
  std::size_t cap;
  std::vector<std::string> sigs;
  std::unordered_map<std::string, StateId> index;
  std::vector<std::vector<Neighbor>> adj;
  std::vector<char> expanded;

  StateId intern(const std::string& sig) {
    auto [it, fresh] = index.emplace(sig, static_cast<StateId>(sigs.size()));
    if (fresh) {
      sigs.push_back(sig);
      adj.emplace_back();
      expanded.push_back(0);
    }
    return it->second;
  }

  std::vector<std::pair<std::string, std::uint8_t>> successors(StateId s) const {
    Network n = network_from_signature(sigs[s]);
    NeighborhoodOptions opts;
    opts.max_reticulations = cap;
    std::unordered_map<std::string, std::uint8_t> best;
    for_each_move(n, opts, [&](const Move& m, Network&& r) {
      auto w = static_cast<std::uint8_t>(move_weight(m.kind));
      auto [it, fresh] = best.emplace(canonical_signature(r), w);
      if (!fresh) it->second = std::min(it->second, w);
      return true;
    });
    std::vector<std::pair<std::string, std::uint8_t>> out(best.begin(), best.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  void expand(const std::vector<StateId>& batch, std::size_t jobs) {
    std::vector<StateId> todo;
    for (StateId s : batch)
      if (!expanded[s]) todo.push_back(s);
    std::vector<std::vector<std::pair<std::string, std::uint8_t>>> found(todo.size());
    jobs = std::max<std::size_t>(1, std::min(jobs, todo.size()));
    if (jobs == 1) {
      for (std::size_t i = 0; i < todo.size(); ++i) found[i] = successors(todo[i]);
    } else {
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errors(jobs);
      for (std::size_t t = 0; t < jobs; ++t)
        pool.emplace_back([&, t] {
          try {
            for (std::size_t i = t; i < todo.size(); i += jobs) found[i] = successors(todo[i]);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      for (auto& th : pool) th.join();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    }
    for (std::size_t i = 0; i < todo.size(); ++i) {
      std::vector<Neighbor> nb;
      for (const auto& [sig, w] : found[i]) nb.push_back({intern(sig), w});
      adj[todo[i]] = std::move(nb);
      expanded[todo[i]] = 1;
    }
  }

  const std::vector<Neighbor>& neighbors(StateId s, std::size_t jobs) {
    if (!expanded[s]) expand({s}, jobs);
    return adj[s];
  }
};

namespace {

// One direction of the search: exact distances for every state up to
// `settled`, tentative ones beyond.
struct Side {
  std::unordered_map<StateId, std::size_t> dist;
  std::vector<std::vector<StateId>> buckets;
  std::size_t next = 0;       // lowest bucket not yet settled
  long settled = -1;          // every state at distance <= settled is final

  std::size_t get(StateId s) const {
    auto it = dist.find(s);
    return it == dist.end() ? kUnknown : it->second;
  }
  bool exact(StateId s) const {
    auto d = get(s);
    return d != kUnknown && static_cast<long>(d) <= settled;
  }
  void offer(StateId s, std::size_t d) {
    auto [it, fresh] = dist.emplace(s, d);
    if (!fresh) {
      if (it->second <= d) return;
      it->second = d;
    }
    if (buckets.size() <= d) buckets.resize(d + 1);
    buckets[d].push_back(s);
  }
  // States whose distance is exactly `next`; empty vector if none.
  std::vector<StateId> layer() const {
    std::vector<StateId> out;
    if (next >= buckets.size()) return out;
    for (StateId s : buckets[next])
      if (get(s) == next) out.push_back(s);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  bool exhausted() const {
    for (std::size_t d = next; d < buckets.size(); ++d)
      if (!buckets[d].empty()) return false;
    return true;
  }
};

}  // namespace

TreeChildSpace::TreeChildSpace(std::size_t cap) : impl_(std::make_unique<Impl>()) { impl_->cap = cap; }
TreeChildSpace::~TreeChildSpace() = default;
std::size_t TreeChildSpace::cap() const { return impl_->cap; }
std::size_t TreeChildSpace::state_count() const { return impl_->sigs.size(); }
std::size_t TreeChildSpace::expanded_count() const {
  return static_cast<std::size_t>(std::count(impl_->expanded.begin(), impl_->expanded.end(), 1));
}

DistanceResult TreeChildSpace::distance(const Network& n, const Network& m, const DistanceOptions& opts) {
  Impl& sp = *impl_;
  if (!is_tree_child(n) || !is_tree_child(m)) throw PreconditionError("dtc: both networks must be tree-child");
  if (n.taxa() != m.taxa()) throw PreconditionError("dtc: networks are on different taxa");
  if (n.reticulation_count() > sp.cap || m.reticulation_count() > sp.cap)
    throw PreconditionError("dtc: an endpoint exceeds the reticulation cap");
  const std::size_t jobs = std::max<std::size_t>(1, opts.jobs);

  const StateId src = sp.intern(canonical_signature(n));
  const StateId dst = sp.intern(canonical_signature(m));
  Side fw, bw;
  fw.offer(src, 0);
  bw.offer(dst, 0);
  std::size_t best = src == dst ? 0 : kUnknown;
  std::size_t expanded = 0;

  auto settle = [&](Side& side, const Side& other) {
    auto layer = side.layer();
    expanded += layer.size();
    if (opts.budget && expanded > opts.budget)
      throw BudgetExceeded("dtc: expanded more than " + std::to_string(opts.budget) + " states");
    sp.expand(layer, jobs);
    for (StateId s : layer) {
      const std::size_t d = side.next;
      for (const Neighbor& nb : sp.adj[s]) {
        side.offer(nb.id, d + nb.weight);
        const std::size_t o = other.get(nb.id);
        if (o != kUnknown) best = std::min(best, d + nb.weight + o);
      }
      const std::size_t o = other.get(s);
      if (o != kUnknown) best = std::min(best, d + o);
    }
    side.settled = static_cast<long>(side.next);
    ++side.next;
  };

  // With weights 1 and 2, a path of length D must cross from the forward
  // ball to the backward ball once D <= a + b + 1. Without the backward
  // search the target alone counts as settled.
  if (opts.bidirectional) {
    settle(bw, fw);
  } else {
    bw.settled = 0;
    bw.next = 1;
  }
  while (best == kUnknown || static_cast<long>(best) > fw.settled + bw.settled + 1) {
    const bool fw_done = fw.exhausted(), bw_done = !opts.bidirectional || bw.exhausted();
    if (fw_done && bw_done) break;
    const bool pick_bw = opts.bidirectional && !bw_done &&
                         (fw_done || bw.layer().size() < fw.layer().size());
    if (pick_bw)
      settle(bw, fw);
    else
      settle(fw, bw);
  }
  if (best == kUnknown) throw Error("dtc: target unreachable within the reticulation cap");

  // Any state with forward distance > a on an optimal path has backward
  // distance <= b, so exact forward distances of optimal states are known.
  std::unordered_map<StateId, char> on_path;  // memo for backward-only states
  std::function<bool(StateId)> optimal = [&](StateId x) -> bool {
    if (!bw.exact(x)) return false;
    auto it = on_path.find(x);
    if (it != on_path.end()) return it->second;
    const std::size_t g = best - bw.get(x);
    bool ok = false;
    for (const Neighbor& nb : sp.neighbors(x, jobs)) {
      if (nb.weight > g) continue;
      if (fw.exact(nb.id)) {
        ok = fw.get(nb.id) + nb.weight == g;
      } else if (bw.exact(nb.id) && bw.get(nb.id) == bw.get(x) + nb.weight) {
        ok = optimal(nb.id);
      }
      if (ok) break;
    }
    on_path[x] = ok;
    return ok;
  };
  auto forward_dist = [&](StateId x) -> std::size_t {
    if (fw.exact(x)) return fw.get(x);
    if (bw.exact(x) && optimal(x)) return best - bw.get(x);
    return kUnknown;
  };

  // Walk back from the target, always to the optimal predecessor with the
  // smallest signature.
  std::vector<StateId> chain{dst};
  for (std::size_t d = best; d > 0;) {
    const StateId x = chain.back();
    std::optional<StateId> pick;
    std::size_t pick_w = 0;
    for (const Neighbor& nb : sp.neighbors(x, jobs)) {
      if (nb.weight > d || forward_dist(nb.id) != d - nb.weight) continue;
      if (!pick || sp.sigs[nb.id] < sp.sigs[*pick]) {
        pick = nb.id;
        pick_w = nb.weight;
      }
    }
    if (!pick) throw std::logic_error("dtc: lost the optimal path");
    chain.push_back(*pick);
    d -= pick_w;
  }
  std::reverse(chain.begin(), chain.end());

  // Replay on the actual input, taking the first move reaching each state.
  MoveSequence witness{n, {}, {}};
  NeighborhoodOptions nopts;
  nopts.max_reticulations = sp.cap;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    std::optional<Successor> step;
    for_each_move(witness.end(), nopts, [&](const Move& mv, Network&& r) {
      if (canonical_signature(r) != sp.sigs[chain[i]]) return true;
      step = Successor{mv, std::move(r)};
      return false;
    });
    if (!step) throw std::logic_error("dtc: witness step not reproducible");
    witness.moves.push_back(step->move);
    witness.intermediates.push_back(std::move(step->network));
  }
  if (sequence_weight(witness) != best) throw std::logic_error("dtc: witness weight mismatch");
  return DistanceResult{best, std::move(witness), sp.cap, expanded};
}

DistanceResult dtc(const Network& n, const Network& m, const DistanceOptions& opts) {
  const std::size_t cap = opts.cap.value_or(std::max(n.reticulation_count(), m.reticulation_count()) + 1);
  TreeChildSpace space(cap);
  return space.distance(n, m, opts);
}

}  // namespace snprlab
