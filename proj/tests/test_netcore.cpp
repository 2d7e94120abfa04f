#include <catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "snprlab/canonical.hpp"
#include "snprlab/network.hpp"
#include "snprlab/phyloio.hpp"

using namespace snprlab;

namespace {

RawGraph cherry_plus_leaf() {
  // ρ=0 → r=1; r → x=2, c=5; x → a=3, b=4
  RawGraph g;
  g.vertices = {0, 1, 2, 3, 4, 5};
  g.edges = {{0, 1}, {1, 2}, {1, 5}, {2, 3}, {2, 4}};
  g.labels = {{3, "a"}, {4, "b"}, {5, "c"}};
  g.root = 0;
  return g;
}

bool has_kind(const std::vector<Violation>& vs, Violation::Kind k, VertexId v) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& x) {
    return x.kind == k && std::find(x.vertices.begin(), x.vertices.end(), v) != x.vertices.end();
  });
}

// The reticulation edge whose tail has a leaf child labelled `sibling`.
EdgeIndex reticulation_edge_beside(const Network& n, const std::string& sibling) {
  for (EdgeIndex e = 0; e < n.edge_count(); ++e) {
    if (!n.is_reticulation_edge(e)) continue;
    for (VertexId c : n.children(n.edge(e).from))
      if (n.label(c) == sibling) return e;
  }
  FAIL("no such edge");
  return kNoEdge;
}

// Copy of n with vertex ids permuted by a seeded shuffle.
Network renamed(const Network& n, std::uint64_t seed) {
  std::vector<VertexId> perm(n.vertex_count());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<VertexId>(i * 3 + 7);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::map<VertexId, VertexId> m;
  for (std::size_t i = 0; i < n.vertices().size(); ++i) m[n.vertices()[i]] = perm[i];
  RawGraph raw;
  for (VertexId v : n.vertices()) raw.vertices.push_back(m[v]);
  auto edges = n.edges();
  std::shuffle(edges.begin(), edges.end(), rng);
  for (const Edge& e : edges) raw.edges.emplace_back(m[e.from], m[e.to]);
  for (VertexId v : n.vertices())
    if (n.is_labelled(v)) raw.labels[m[v]] = n.label(v);
  raw.root = m[n.root()];
  return Network::from_raw(raw);
}

}  // namespace

TEST_CASE("validate accepts the cherry-plus-leaf tree", "[validate]") {
  auto r = validate(cherry_plus_leaf());
  REQUIRE(r.ok());
  CHECK(r->vertex_count() == 6);
  CHECK(r->edge_count() == 5);
  CHECK(r->root() == 0);
  CHECK(r->leaf_count() == 3);
}

TEST_CASE("validate reports every violation", "[validate]") {
  RawGraph g = cherry_plus_leaf();
  g.edges.erase(std::find(g.edges.begin(), g.edges.end(), std::pair<VertexId, VertexId>(2, 3)));
  auto r = validate(g);
  REQUIRE_FALSE(r.ok());
  CHECK(has_kind(r.violations, Violation::Kind::kDisconnected, 3));
  CHECK(has_kind(r.violations, Violation::Kind::kDegree, 2));
  CHECK(has_kind(r.violations, Violation::Kind::kMultipleSources, 3));
}

TEST_CASE("validate detects cycles, labels and undeclared vertices", "[validate]") {
  SECTION("cycle") {
    RawGraph g;
    g.vertices = {0, 1, 2, 3, 4};
    // 1 and 2 feed each other; degrees alone would be fine
    g.edges = {{0, 1}, {1, 2}, {2, 1}, {1, 3}, {2, 4}};
    g.labels = {{3, "a"}, {4, "b"}};
    auto r = validate(g);
    REQUIRE_FALSE(r.ok());
    CHECK(has_kind(r.violations, Violation::Kind::kCycle, 1));
  }
  SECTION("duplicate label") {
    RawGraph g = cherry_plus_leaf();
    g.labels[5] = "a";
    auto r = validate(g);
    REQUIRE_FALSE(r.ok());
    CHECK(has_kind(r.violations, Violation::Kind::kLabel, 5));
  }
  SECTION("undeclared endpoint") {
    RawGraph g = cherry_plus_leaf();
    g.edges.emplace_back(2, 9);
    auto r = validate(g);
    REQUIRE_FALSE(r.ok());
    CHECK(has_kind(r.violations, Violation::Kind::kUndeclaredVertex, 9));
  }
  SECTION("unlabelled sink") {
    RawGraph g = cherry_plus_leaf();
    g.labels.erase(5);
    auto r = validate(g);
    REQUIRE_FALSE(r.ok());
    CHECK(has_kind(r.violations, Violation::Kind::kLabel, 5));
  }
}

TEST_CASE("one-reticulation network has the expected degree table", "[validate]") {
  Network n = parse_enewick("((a,(b)#H1),(#H1,c));");
  CHECK(n.vertex_count() == 8);
  CHECK(n.edge_count() == 8);
  CHECK(n.reticulation_count() == 1);
  CHECK(n.tree_vertex_count() == 3);
  std::map<std::pair<std::size_t, std::size_t>, int> degrees;
  for (VertexId v : n.vertices()) ++degrees[{n.in_degree(v), n.out_degree(v)}];
  CHECK(degrees[{0, 1}] == 1);
  CHECK(degrees[{1, 2}] == 3);
  CHECK(degrees[{2, 1}] == 1);
  CHECK(degrees[{1, 0}] == 3);
}

TEST_CASE("tree-child report", "[treechild]") {
  SECTION("trees") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      auto rep = tree_child_report(random_tree_child(5, 0, s));
      CHECK(rep.is_tree_child);
      CHECK(rep.stacks.empty());
    }
  }
  SECTION("tree-child network") {
    auto rep = tree_child_report(parse_enewick("((a,(b)#H1),(#H1,c));"));
    CHECK(rep.is_tree_child);
  }
  SECTION("stack") {
    // #H2 sits directly below #H1
    Network n = parse_enewick("((((a)#H2)#H1,(#H1,b)),(#H2,c));");
    auto rep = tree_child_report(n);
    CHECK_FALSE(rep.is_tree_child);
    REQUIRE(rep.stacks.size() == 1);
    CHECK(n.is_reticulation(rep.stacks[0].from));
    CHECK(n.is_reticulation(rep.stacks[0].to));
  }
  SECTION("sibling reticulations") {
    Network n = parse_enewick("(((a)#H1,(b)#H2),((#H1,c),(#H2,d)));");
    auto rep = tree_child_report(n);
    CHECK_FALSE(rep.is_tree_child);
    CHECK(rep.sibling_reticulations.size() == 1);
  }
  SECTION("parallel edges") {
    RawGraph g;
    g.vertices = {0, 1, 2, 3, 4, 5};
    g.edges = {{0, 1}, {1, 2}, {1, 5}, {2, 3}, {2, 3}, {3, 4}};
    g.labels = {{4, "a"}, {5, "b"}};
    g.root = 0;
    Network n = Network::from_raw(g);
    auto rep = tree_child_report(n);
    CHECK_FALSE(rep.is_tree_child);
    REQUIRE(rep.parallel_pairs.size() == 1);
    CHECK(rep.parallel_pairs[0].first.slot == 0);
    CHECK(rep.parallel_pairs[0].second.slot == 1);
  }
  SECTION("definition agrees with characterization on general networks") {
    for (std::uint64_t s = 0; s < 300; ++s) {
      Network n = random_network(4 + s % 3, 1 + s % 3, s);
      auto rep = tree_child_report(n);  // throws on disagreement
      CHECK(rep.is_tree_child == is_tree_child(n));
    }
  }
}

TEST_CASE("isomorphism", "[iso]") {
  Network t1 = parse_enewick("((a,b),c);");
  CHECK(isomorphic(t1, parse_enewick("((b,a),c);")));
  CHECK_FALSE(isomorphic(t1, parse_enewick("((a,c),b);")));
  CHECK_FALSE(isomorphic(t1, parse_enewick("((a,b),d);")));
  for (std::uint64_t s = 0; s < 50; ++s) {
    Network n = random_tree_child(5, s % 3, s);
    Network m = renamed(n, s + 1000);
    REQUIRE(isomorphic(n, m));
    CHECK(canonical_signature(n) == canonical_signature(m));
    auto phi = find_isomorphism(n, m);
    REQUIRE(phi);
    for (const Edge& e : n.edges())
      CHECK(m.multiplicity((*phi)[e.from], (*phi)[e.to]) == n.multiplicity(e.from, e.to));
  }
}

TEST_CASE("canonical signature matches backtracking isomorphism", "[iso]") {
  std::vector<Network> corpus;
  for (std::uint64_t s = 0; s < 1000; ++s) corpus.push_back(random_tree_child(4, s % 3, s));
  std::vector<std::string> sig;
  for (const auto& n : corpus) sig.push_back(canonical_signature(n));
  std::size_t equal_pairs = 0, mismatches = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (std::size_t j = i + 1; j < corpus.size(); ++j) {
      bool iso = isomorphic(corpus[i], corpus[j]);
      equal_pairs += iso;
      mismatches += iso != (sig[i] == sig[j]);
    }
  CHECK(mismatches == 0);
  CHECK(equal_pairs > 0);  // the corpus must actually contain collisions
}

TEST_CASE("signature separates general networks with automorphic parts", "[iso]") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    Network a = random_network(3, 2, s);
    Network b = random_network(3, 2, s + 7919);
    CHECK((canonical_signature(a) == canonical_signature(b)) == isomorphic(a, b));
    CHECK(canonical_signature(a) == canonical_signature(renamed(a, s)));
  }
}

TEST_CASE("reticulation edge deletion", "[minus]") {
  Network n = parse_enewick("((a,(b)#H1),(#H1,c));");
  CHECK(isomorphic(delete_reticulation_edge(n, reticulation_edge_beside(n, "a")),
                   parse_enewick("(a,(b,c));")));
  CHECK(isomorphic(delete_reticulation_edge(n, reticulation_edge_beside(n, "c")),
                   parse_enewick("((a,b),c);")));
  Network t = parse_enewick("((a,b),c);");
  for (EdgeIndex e = 0; e < t.edge_count(); ++e)
    CHECK_THROWS_AS(delete_reticulation_edge(t, e), PreconditionError);

  for (std::uint64_t s = 0; s < 200; ++s) {
    Network m = random_tree_child(5, 1 + s % 3, s);
    for (EdgeIndex e = 0; e < m.edge_count(); ++e) {
      if (!m.is_reticulation_edge(e)) continue;
      Network d = delete_reticulation_edge(m, e);
      CHECK(tree_child_report(d).is_tree_child);
      CHECK(d.reticulation_count() + 1 == m.reticulation_count());
      CHECK(d.taxa() == m.taxa());
    }
  }
}

TEST_CASE("generators", "[gen]") {
  Network t = random_tree_child(3, 0, 42);
  CHECK(t.leaf_count() == 3);
  CHECK(t.reticulation_count() == 0);
  CHECK(canonical_signature(random_tree_child(4, 2, 7)) == canonical_signature(random_tree_child(4, 2, 7)));
  CHECK(write_pnd(random_tree_child(4, 2, 7)) == write_pnd(random_tree_child(4, 2, 7)));
  for (std::uint64_t s = 0; s < 100; ++s) {
    Network n = random_tree_child(5, 2, s);
    CHECK(n.leaf_count() == 5);
    CHECK(n.reticulation_count() == 2);
    CHECK(tree_child_report(n).is_tree_child);
  }
  CHECK_THROWS_AS(random_tree_child(2, 3, 1), Error);
  CHECK_THROWS_AS(random_tree_child(0, 0, 1), PreconditionError);
}

TEST_CASE("degree double counting", "[gen]") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    Network n = random_network(3 + s % 4, s % 4, s);
    const std::size_t L = n.leaf_count(), T = n.tree_vertex_count(), R = n.reticulation_count();
    CHECK(n.edge_count() == L + T + 2 * R);
    CHECK(n.edge_count() == 1 + 2 * T + R);
  }
}

TEST_CASE("uniform_index is reproducible and in range", "[gen]") {
  std::mt19937_64 a(5), b(5);
  for (int i = 0; i < 1000; ++i) {
    std::size_t x = uniform_index(a, 7);
    CHECK(x < 7);
    CHECK(x == uniform_index(b, 7));
  }
}

TEST_CASE("enumeration of tree-child networks", "[enumerate]") {
  CHECK(enumerate_tree_child(2, 0).size() == 1);
  CHECK(enumerate_tree_child(3, 0).size() == 3);
  CHECK(enumerate_tree_child(4, 0).size() == 15);
  CHECK(enumerate_tree_child(5, 0).size() == 105);
  CHECK_THROWS_AS(enumerate_tree_child(6, 0), PreconditionError);

  auto nets = enumerate_tree_child(3, 2);
  std::set<std::string> sigs;
  for (const auto& n : nets) {
    CHECK(tree_child_report(n).is_tree_child);
    CHECK(sigs.insert(canonical_signature(n)).second);
  }
  // Independent check: random tree-child networks on 3 leaves never fall
  // outside the enumerated classes.
  for (std::uint64_t s = 0; s < 300; ++s)
    CHECK(sigs.count(canonical_signature(random_tree_child(3, 1 + s % 2, s))) == 1);
}
