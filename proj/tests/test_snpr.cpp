#include <catch_amalgamated.hpp>

#include <map>
#include <queue>
#include <set>

#include "snprlab/canonical.hpp"
#include "snprlab/phyloio.hpp"
#include "snprlab/snpr.hpp"

using namespace snprlab;

namespace {

const char* kNet = "((a,(b)#H1),(#H1,c));";

std::set<std::string> signatures(const std::vector<Successor>& s) {
  std::set<std::string> out;
  for (const auto& x : s) out.insert(canonical_signature(x.network));
  return out;
}

NeighborhoodOptions only(Move::Kind k) {
  NeighborhoodOptions o;
  o.minus = k == Move::Kind::kMinus;
  o.plus = k == Move::Kind::kPlus;
  o.prune_regraft = k == Move::Kind::kPruneRegraft;
  return o;
}

// Random tree-child walk that respects the global assumption.
MoveSequence random_walk(const Network& start, std::size_t steps, std::size_t cap, std::mt19937_64& rng) {
  std::vector<Move> moves;
  Network cur = start;
  NeighborhoodOptions o;
  o.max_reticulations = cap;
  for (std::size_t i = 0; i < steps; ++i) {
    auto succ = enumerate_moves(cur, o);
    std::erase_if(succ, [&](const Successor& s) { return violates_global_assumption(cur, s.move); });
    if (succ.empty()) break;
    auto& pick = succ[uniform_index(rng, succ.size())];
    moves.push_back(pick.move);
    cur = pick.network;
  }
  return make_sequence(start, moves);
}

// Plain Dijkstra over signatures, straight from enumerate_moves.
std::size_t reference_distance(const Network& n, const Network& m, std::size_t cap) {
  NeighborhoodOptions o;
  o.max_reticulations = cap;
  const std::string goal = canonical_signature(m);
  std::map<std::string, std::size_t> dist;
  using Item = std::pair<std::size_t, std::string>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  pq.push({0, canonical_signature(n)});
  while (!pq.empty()) {
    auto [d, s] = pq.top();
    pq.pop();
    if (dist.count(s)) continue;
    dist[s] = d;
    if (s == goal) return d;
    for (const auto& x : enumerate_moves(network_from_signature(s), o)) {
      std::string t = canonical_signature(x.network);
      if (!dist.count(t)) pq.push({d + move_weight(x.move.kind), t});
    }
  }
  throw std::runtime_error("unreachable");
}

void check_witness(const DistanceResult& r, const Network& n, const Network& m) {
  auto replay = make_sequence(n, r.witness.moves);
  REQUIRE(replay.intermediates.size() == r.witness.intermediates.size());
  for (std::size_t i = 0; i < replay.intermediates.size(); ++i) {
    CHECK(canonical_signature(replay.intermediates[i]) == canonical_signature(r.witness.intermediates[i]));
    CHECK(replay.intermediates[i].reticulation_count() <= r.cap);
  }
  CHECK(is_tree_child_sequence(r.witness));
  CHECK(sequence_weight(r.witness) == r.weight);
  CHECK(isomorphic(r.witness.end(), m));
}

}  // namespace

TEST_CASE("minus on the two-reticulation-edge example") {
  Network n = parse_enewick(kNet);
  auto s = enumerate_moves(n, only(Move::Kind::kMinus));
  REQUIRE(s.size() == 2);
  CHECK(signatures(s) == std::set<std::string>{canonical_signature(parse_enewick("(a,(b,c));")),
                                               canonical_signature(parse_enewick("((a,b),c);"))});
  for (const auto& x : s) CHECK(x.move.kind == Move::Kind::kMinus);
}

TEST_CASE("trees have no minus moves") {
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    CHECK(enumerate_moves(random_tree_child(5, 0, seed), only(Move::Kind::kMinus)).empty());
}

TEST_CASE("prune and regraft on a triple reaches both other triples") {
  Network n = parse_enewick("((a,b),c);");
  NeighborhoodOptions o = only(Move::Kind::kPruneRegraft);
  o.max_reticulations = 0;
  auto sigs = signatures(enumerate_moves(n, o));
  CHECK(sigs.count(canonical_signature(parse_enewick("((a,c),b);"))));
  CHECK(sigs.count(canonical_signature(parse_enewick("((b,c),a);"))));
  for (const auto& s : enumerate_moves(n, o)) CHECK(s.network.reticulation_count() == 0);
}

TEST_CASE("regrafting below the pruned subtree is rejected") {
  Network n = parse_pnd(
      "pnd 1\nvertex 0\nvertex 1\nvertex 2\nvertex 3\nvertex 4\nvertex 5\nvertex 6\nvertex 7\nroot 0\n"
      "leaf 3 a\nleaf 4 b\nleaf 5 c\nleaf 7 d\n"
      "edge 0 6\nedge 6 1\nedge 6 7\nedge 1 2\nedge 1 5\nedge 2 3\nedge 2 4\n");
  // Prune (6,1) and regraft onto (2,3), which hangs below 1.
  Move m{Move::Kind::kPruneRegraft, {6, 1, 0}, {2, 3, 0}};
  CHECK_THROWS_AS(apply_move(n, m), PreconditionError);
  CHECK_THROWS_AS(apply_move(n, Move{Move::Kind::kPlus, {1, 2, 0}, {2, 3, 0}}), PreconditionError);
  CHECK_THROWS_AS(apply_move(n, Move{Move::Kind::kMinus, {1, 2, 0}, {}}), PreconditionError);
  CHECK_THROWS_AS(apply_move(n, Move{Move::Kind::kMinus, {9, 9, 0}, {}}), PreconditionError);
}

TEST_CASE("move results are valid and keep the taxa and reticulation counts") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Network n = random_tree_child(2 + seed % 4, seed % 3 == 0 ? 0 : std::min<std::size_t>(seed % 3, 1 + seed % 4), seed);
    const std::size_t r = n.reticulation_count();
    for (const auto& s : enumerate_moves(n)) {
      CHECK(validate(s.network.to_raw()).ok());
      CHECK(tree_child_report(s.network).is_tree_child);
      CHECK(s.network.taxa() == n.taxa());
      const std::size_t want = s.move.kind == Move::Kind::kMinus  ? r - 1
                               : s.move.kind == Move::Kind::kPlus ? r + 1
                                                                  : r;
      CHECK(s.network.reticulation_count() == want);
      CHECK(canonical_signature(apply_move(n, s.move)) == canonical_signature(s.network));
    }
  }
}

TEST_CASE("every legal move is enumerated once") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Network n = random_tree_child(4, 1, seed);
    NeighborhoodOptions all;
    all.tree_child_only = false;
    auto s = enumerate_moves(n, all);
    std::set<Move> moves;
    for (const auto& x : s) CHECK(moves.insert(x.move).second);
    // Oracle: try every syntactic move and keep those apply_move accepts.
    std::size_t legal = 0;
    for (const Edge& e : n.edges())
      for (const Edge& f : n.edges())
        for (auto k : {Move::Kind::kPlus, Move::Kind::kPruneRegraft}) {
          try {
            apply_move(n, Move{k, e, f});
            ++legal;
          } catch (const PreconditionError&) {
          } catch (const Error&) {
          }
        }
    for (const Edge& e : n.edges()) {
      try {
        apply_move(n, Move{Move::Kind::kMinus, e, {}});
        ++legal;
      } catch (const PreconditionError&) {
      }
    }
    CHECK(s.size() == legal);
  }
}

TEST_CASE("the tree-child space is connected and matches the class enumeration") {
  // Breadth-first closure from one tree versus the independent enumerator.
  for (auto [leaves, cap] : {std::pair<std::size_t, std::size_t>{3, 2}, {4, 1}}) {
    NeighborhoodOptions o;
    o.max_reticulations = cap;
    std::set<std::string> seen{canonical_signature(random_tree_child(leaves, 0, 1))};
    std::vector<std::string> todo(seen.begin(), seen.end());
    while (!todo.empty()) {
      std::string s = todo.back();
      todo.pop_back();
      for (const auto& x : enumerate_moves(network_from_signature(s), o)) {
        std::string t = canonical_signature(x.network);
        if (seen.insert(t).second) todo.push_back(t);
      }
    }
    std::set<std::string> classes;
    for (const auto& n : enumerate_tree_child(leaves, cap)) classes.insert(canonical_signature(n));
    CHECK(seen == classes);
  }
}

TEST_CASE("plus then minus on the created edge is the identity") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Network n = random_tree_child(4, seed % 3, seed);
    for (const auto& s : enumerate_moves(n, only(Move::Kind::kPlus))) {
      auto traced = apply_move_traced(n, s.move);
      std::optional<EdgeIndex> added;
      for (EdgeIndex e = 0; e < traced.origins.size(); ++e)
        if (traced.origins[e].role == EdgeOrigin::Role::kAdded) added = e;
      REQUIRE(added);
      Move back{Move::Kind::kMinus, traced.network.edge(*added), {}};
      CHECK(isomorphic(apply_move(traced.network, back), n));
    }
  }
}

TEST_CASE("reversibility and minus closure over random samples") {
  std::mt19937_64 rng(42);
  std::size_t samples = 0;
  for (std::uint64_t seed = 0; samples < 1000; ++seed) {
    const std::size_t leaves = 3 + seed % 3;
    Network n = random_tree_child(leaves, uniform_index(rng, std::min<std::size_t>(3, leaves)), seed);
    NeighborhoodOptions o;
    o.max_reticulations = 3;
    auto succ = enumerate_moves(n, o);
    const std::string want = canonical_signature(n);
    for (int k = 0; k < 12 && !succ.empty(); ++k, ++samples) {
      const auto& s = succ[uniform_index(rng, succ.size())];
      bool back = false;
      NeighborhoodOptions rev = only(s.move.kind == Move::Kind::kMinus   ? Move::Kind::kPlus
                                     : s.move.kind == Move::Kind::kPlus ? Move::Kind::kMinus
                                                                        : Move::Kind::kPruneRegraft);
      for_each_move(s.network, rev, [&](const Move&, Network&& r) {
        back = canonical_signature(r) == want;
        return !back;
      });
      CHECK(back);
    }
    // Deleting a reticulation edge keeps a network tree-child.
    NeighborhoodOptions unfiltered = only(Move::Kind::kMinus);
    unfiltered.tree_child_only = false;
    for (const auto& s : enumerate_moves(n, unfiltered)) CHECK(is_tree_child(s.network));
  }
}

TEST_CASE("sequence weight") {
  Network n = parse_enewick(kNet);
  CHECK(sequence_weight(make_sequence(n, {})) == 0);
  Move pm = enumerate_moves(n, only(Move::Kind::kPruneRegraft)).at(0).move;
  Network after = apply_move(n, pm);
  Move minus = enumerate_moves(after, only(Move::Kind::kMinus)).at(0).move;
  CHECK(sequence_weight(make_sequence(n, {pm, minus})) == 3);
  std::vector<Move> plus;
  Network cur = parse_enewick("((((a,b),c),d),e);");
  Network start = cur;
  NeighborhoodOptions o = only(Move::Kind::kPlus);
  o.tree_child_only = false;
  for (int i = 0; i < 4; ++i) {
    auto s = enumerate_moves(cur, o).at(0);
    plus.push_back(s.move);
    cur = s.network;
  }
  CHECK(sequence_weight(make_sequence(start, plus)) == 4);
}

TEST_CASE("global assumption rewrite") {
  std::size_t rewritten = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Network n = random_tree_child(4, 1 + seed % 2, seed);
    for (const auto& s : enumerate_moves(n, only(Move::Kind::kPruneRegraft))) {
      auto seq = make_sequence(n, {s.move});
      auto out = enforce_global_assumption(seq);
      CHECK(sequence_weight(out) == sequence_weight(seq));
      CHECK(isomorphic(out.end(), seq.end()));
      for (std::size_t i = 0; i < out.size(); ++i)
        CHECK_FALSE(violates_global_assumption(i ? out.intermediates[i - 1] : out.start, out.moves[i]));
      if (violates_global_assumption(n, s.move)) {
        ++rewritten;
        REQUIRE(out.size() == 2);
        CHECK(out.moves[0].kind == Move::Kind::kMinus);
        CHECK(out.moves[1].kind == Move::Kind::kPlus);
      } else {
        CHECK(out.moves == seq.moves);
      }
    }
  }
  CHECK(rewritten > 0);

  // Offending move in the middle of a longer sequence.
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Network n = random_tree_child(5, 2, seed);
    auto head = random_walk(n, 2, 3, rng);
    auto pms = enumerate_moves(head.end(), only(Move::Kind::kPruneRegraft));
    std::erase_if(pms, [&](const Successor& s) { return !violates_global_assumption(head.end(), s.move); });
    if (pms.empty()) continue;
    auto tail = random_walk(pms[0].network, 2, 3, rng);
    std::vector<Move> moves = head.moves;
    moves.push_back(pms[0].move);
    moves.insert(moves.end(), tail.moves.begin(), tail.moves.end());
    auto seq = make_sequence(n, moves);
    auto out = enforce_global_assumption(seq);
    CHECK(out.size() == seq.size() + 1);
    CHECK(sequence_weight(out) == sequence_weight(seq));
    CHECK(isomorphic(out.end(), seq.end()));
    auto replay = make_sequence(n, out.moves);
    CHECK(canonical_signature(replay.end()) == canonical_signature(out.end()));
  }
}

TEST_CASE("normalization of a cancelling pair") {
  Network n = parse_enewick("((a,b),(c,d));");
  auto plus = enumerate_moves(n, only(Move::Kind::kPlus)).at(3);
  auto traced = apply_move_traced(n, plus.move);
  EdgeIndex added = 0;
  for (EdgeIndex e = 0; e < traced.origins.size(); ++e)
    if (traced.origins[e].role == EdgeOrigin::Role::kAdded) added = e;
  auto seq = make_sequence(n, {plus.move, Move{Move::Kind::kMinus, traced.network.edge(added), {}}});
  auto out = normalize_sequence(seq);
  CHECK(out.moves.empty());
  CHECK(isomorphic(out.end(), n));
}

TEST_CASE("normalization of random sequences") {
  std::mt19937_64 rng(11);
  std::size_t nontrivial = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Network n = random_tree_child(3 + seed % 3, seed % 3, seed);
    auto seq = random_walk(n, 2 + seed % 4, 3, rng);
    auto out = normalize_sequence(seq);
    if (inversion_count(seq.moves)) ++nontrivial;
    CHECK(sequence_weight(out) <= sequence_weight(seq));
    CHECK(isomorphic(out.end(), seq.end()));
    CHECK(inversion_count(out.moves) == 0);
    CHECK(is_tree_child_sequence(out));
    auto replay = make_sequence(n, out.moves);
    CHECK(canonical_signature(replay.end()) == canonical_signature(out.end()));
  }
  CHECK(nontrivial > 10);
}

TEST_CASE("normalization preconditions") {
  Network n = random_tree_child(4, 1, 5);
  auto pms = enumerate_moves(n, only(Move::Kind::kPruneRegraft));
  std::erase_if(pms, [&](const Successor& s) { return !violates_global_assumption(n, s.move); });
  REQUIRE_FALSE(pms.empty());
  CHECK_THROWS_AS(normalize_sequence(make_sequence(n, {pms[0].move})), PreconditionError);
}

TEST_CASE("move serialization round trip and replay") {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Network n = random_tree_child(4, seed % 3, seed);
    auto seq = random_walk(n, 4, 3, rng);
    auto text = write_moves(seq.moves);
    auto back = read_moves(text);
    CHECK(back == seq.moves);
    auto replay = make_sequence(n, back);
    for (std::size_t i = 0; i < replay.size(); ++i)
      CHECK(canonical_signature(replay.intermediates[i]) == canonical_signature(seq.intermediates[i]));
  }
  CHECK(write_moves({Move{Move::Kind::kPlus, {1, 2, 0}, {3, 4, 1}}}) ==
        "{\"kind\":\"plus\",\"e\":[1,2,0],\"f\":[3,4,1]}\n");
  CHECK(read_moves("{\"kind\":\"minus\",\"e\":[5,6]}\n\n").at(0) == Move{Move::Kind::kMinus, {5, 6, 0}, {}});
  for (const char* bad : {"{\"kind\":\"pm\",\"e\":[1,2]}", "{\"kind\":\"swap\",\"e\":[1,2]}", "[1,2]",
                          "{\"kind\":\"minus\",\"e\":[1,-2]}", "{\"kind\":\"minus\",\"e\":[1,2,300]}",
                          "{\"kind\":\"minus\""}) {
    try {
      read_moves(std::string("{\"kind\":\"minus\",\"e\":[0,1]}\n") + bad + "\n");
      FAIL("accepted " << bad);
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
}

TEST_CASE("signature decoding") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Network n = random_tree_child(2 + seed % 5, seed % 3 == 0 ? 0 : 1, seed);
    Network back = network_from_signature(canonical_signature(n));
    CHECK(isomorphic(back, n));
    CHECK(canonical_signature(back) == canonical_signature(n));
  }
  CHECK_THROWS_AS(network_from_signature(std::string("\x00", 1)), ParseError);
}

TEST_CASE("distance examples") {
  Network a = parse_enewick("((a,b),c);"), b = parse_enewick("((a,c),b);");
  Network r = parse_enewick(kNet), t = parse_enewick("(a,(b,c));");
  CHECK(dtc(a, parse_enewick("(c,(b,a));")).weight == 0);
  CHECK(dtc(a, parse_enewick("(c,(b,a));")).witness.moves.empty());
  auto ab = dtc(a, b);
  CHECK(ab.weight == 2);
  check_witness(ab, a, b);
  auto rt = dtc(r, t);
  CHECK(rt.weight == 1);
  check_witness(rt, r, t);
  CHECK_THROWS_AS(dtc(a, parse_enewick("((a,b),d);")), PreconditionError);
  DistanceOptions low;
  low.cap = 0;
  CHECK_THROWS_AS(dtc(r, t, low), PreconditionError);
}

TEST_CASE("distance agrees with a plain Dijkstra and bidirectional search") {
  std::mt19937_64 rng(9);
  for (std::uint64_t i = 0; i < 25; ++i) {
    const std::size_t leaves = 3 + i % 2;
    Network n = random_tree_child(leaves, uniform_index(rng, 2), rng());
    Network m = random_tree_child(leaves, uniform_index(rng, 2), rng());
    const std::size_t cap = std::max(n.reticulation_count(), m.reticulation_count()) + 1;
    auto uni = dtc(n, m);
    DistanceOptions bo;
    bo.bidirectional = true;
    auto bi = dtc(n, m, bo);
    CHECK(uni.weight == reference_distance(n, m, cap));
    CHECK(bi.weight == uni.weight);
    CHECK(bi.witness.moves == uni.witness.moves);
    DistanceOptions jo;
    jo.jobs = 3;
    CHECK(dtc(n, m, jo).witness.moves == uni.witness.moves);
    check_witness(uni, n, m);
  }
}

TEST_CASE("distance is a metric within a cap") {
  std::mt19937_64 rng(17);
  TreeChildSpace space(2);
  std::vector<Network> nets;
  for (int i = 0; i < 6; ++i) nets.push_back(random_tree_child(4, uniform_index(rng, 2), rng()));
  nets.push_back(nets[0]);
  DistanceOptions bo;
  bo.bidirectional = true;
  std::map<std::pair<int, int>, std::size_t> d;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) d[{i, j}] = space.distance(nets[i], nets[j], bo).weight;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) {
      CHECK(d[{i, j}] == d[{j, i}]);
      CHECK((d[{i, j}] == 0) == isomorphic(nets[i], nets[j]));
      for (int k = 0; k < 7; ++k) CHECK(d[{i, k}] <= d[{i, j}] + d[{j, k}]);
    }
}

TEST_CASE("raising the cap leaves small distances unchanged") {
  std::mt19937_64 rng(23);
  TreeChildSpace base(2), raised(3);
  DistanceOptions bo;
  bo.bidirectional = true;
  for (int i = 0; i < 12; ++i) {
    Network n = random_tree_child(4, uniform_index(rng, 2), rng());
    Network m = random_tree_child(4, uniform_index(rng, 2), rng());
    CHECK(base.distance(n, m, bo).weight == raised.distance(n, m, bo).weight);
  }
}

TEST_CASE("distance budget") {
  DistanceOptions o;
  o.budget = 3;
  CHECK_THROWS_AS(dtc(random_tree_child(5, 1, 1), random_tree_child(5, 1, 2), o), BudgetExceeded);
}
