#include <algorithm>
#include <map>

#include "snprlab/canonical.hpp"
#include "snprlab/editor.hpp"
#include "snprlab/network.hpp"

namespace snprlab {

Network delete_reticulation_edge(const Network& n, EdgeIndex e) {
  if (e >= n.edge_count() || !n.is_reticulation_edge(e))
    throw PreconditionError("not a reticulation edge");
  return edit_minus(n, e).network;
}

namespace {

Network random_tree(std::size_t n_leaves, std::mt19937_64& rng) {
  RawGraph raw;
  raw.vertices = {0, 1};
  raw.root = 0;
  raw.labels[1] = generated_taxon(0);
  raw.edges = {{0, 1}};
  VertexId next = 2;
  for (std::size_t i = 1; i < n_leaves; ++i) {
    const std::size_t k = uniform_index(rng, raw.edges.size());
    auto [a, b] = raw.edges[k];
    VertexId w = next++, leaf = next++;
    raw.vertices.insert(raw.vertices.end(), {w, leaf});
    raw.labels[leaf] = generated_taxon(i);
    raw.edges[k] = {a, w};
    raw.edges.insert(raw.edges.end(), {{w, b}, {w, leaf}});
  }
  return Network::from_raw(raw);
}

}  // namespace

Network random_network(std::size_t n_leaves, std::size_t n_reticulations, std::uint64_t seed,
                       bool tree_child_only) {
  if (n_leaves < 1) throw PreconditionError("need at least one leaf");
  std::mt19937_64 rng(seed);
  constexpr int kRestarts = 50, kAttempts = 400;
  for (int restart = 0; restart < kRestarts; ++restart) {
    Network n = random_tree(n_leaves, rng);
    for (int attempt = 0; attempt < kAttempts && n.reticulation_count() < n_reticulations;
         ++attempt) {
      EdgeIndex e1 = static_cast<EdgeIndex>(uniform_index(rng, n.edge_count()));
      EdgeIndex e2 = static_cast<EdgeIndex>(uniform_index(rng, n.edge_count()));
      if (descendants(n, n.edge(e1).to)[n.edge(e2).from]) continue;
      Network next = edit_plus(n, e1, e2).network;
      if (tree_child_only && !is_tree_child(next)) continue;
      n = std::move(next);
    }
    if (n.reticulation_count() == n_reticulations) return n;
  }
  throw Error("could not reach " + std::to_string(n_reticulations) + " reticulations on " +
              std::to_string(n_leaves) + " leaves");
}

Network random_tree_child(std::size_t n_leaves, std::size_t n_reticulations, std::uint64_t seed) {
  return random_network(n_leaves, n_reticulations, seed, true);
}

std::vector<Network> enumerate_tree_child(std::size_t n_leaves, std::size_t max_reticulations,
                                          std::size_t leaf_limit) {
  if (n_leaves < 1) throw PreconditionError("need at least one leaf");
  if (n_leaves > leaf_limit)
    throw PreconditionError("enumeration limited to " + std::to_string(leaf_limit) + " leaves");

  // Trees by leaf insertion: every rooted binary tree arises exactly once.
  std::vector<RawGraph> trees(1);
  trees[0].vertices = {0, 1};
  trees[0].root = 0;
  trees[0].labels[1] = generated_taxon(0);
  trees[0].edges = {{0, 1}};
  for (std::size_t i = 1; i < n_leaves; ++i) {
    std::vector<RawGraph> next;
    for (const RawGraph& t : trees) {
      for (std::size_t k = 0; k < t.edges.size(); ++k) {
        RawGraph g = t;
        VertexId w = static_cast<VertexId>(g.vertices.size());
        VertexId leaf = w + 1;
        g.vertices.insert(g.vertices.end(), {w, leaf});
        g.labels[leaf] = generated_taxon(i);
        auto [a, b] = g.edges[k];
        g.edges[k] = {a, w};
        g.edges.insert(g.edges.end(), {{w, b}, {w, leaf}});
        next.push_back(std::move(g));
      }
    }
    trees = std::move(next);
  }

  // Deleting any reticulation edge of a tree-child network leaves a tree-child
  // network, so each layer is reached by one addition from the previous one.
  std::vector<Network> out;
  std::map<std::string, Network> layer;
  for (const RawGraph& t : trees) {
    Network n = Network::from_raw(t);
    layer.emplace(canonical_signature(n), std::move(n));
  }
  for (std::size_t r = 0;; ++r) {
    for (const auto& [sig, n] : layer) out.push_back(n);
    if (r == max_reticulations) break;
    std::map<std::string, Network> next;
    for (const auto& [sig, n] : layer) {
      for (EdgeIndex e1 = 0; e1 < n.edge_count(); ++e1) {
        std::vector<char> below = descendants(n, n.edge(e1).to);
        for (EdgeIndex e2 = 0; e2 < n.edge_count(); ++e2) {
          if (below[n.edge(e2).from]) continue;
          Network m = edit_plus(n, e1, e2).network;
          if (!is_tree_child(m)) continue;
          std::string s = canonical_signature(m);
          next.try_emplace(std::move(s), std::move(m));
        }
      }
    }
    if (next.empty()) break;
    layer = std::move(next);
  }
  return out;
}

}  // namespace snprlab
