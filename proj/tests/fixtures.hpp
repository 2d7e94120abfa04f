#pragma once

#include <random>
#include <stdexcept>
#include <vector>

#include "snprlab/agreement.hpp"
#include "snprlab/network.hpp"

namespace fixtures {

using namespace snprlab;

// Random edge subset, trimmed until no unlabelled sink and no (0,1) vertex
// other than the root remains. Such a subset always has a valid quotient.
inline std::vector<EdgeIndex> random_trimmed_subset(const Network& n, std::mt19937_64& rng,
                                                    std::size_t keep_per_mille) {
  std::vector<char> mask(n.edge_count(), 0);
  for (EdgeIndex e = 0; e < n.edge_count(); ++e) mask[e] = uniform_index(rng, 1000) < keep_per_mille;
  for (bool changed = true; changed;) {
    changed = false;
    for (VertexId v : n.vertices()) {
      std::size_t in = 0, out = 0;
      for (EdgeIndex e : n.in_edges(v)) in += mask[e];
      for (EdgeIndex e : n.out_edges(v)) out += mask[e];
      if (!n.is_leaf(v) && out == 0 && in > 0) {
        for (EdgeIndex e : n.in_edges(v)) mask[e] = 0;
        changed = true;
      } else if (v != n.root() && in == 0 && out == 1) {
        for (EdgeIndex e : n.out_edges(v)) mask[e] = 0;
        changed = true;
      }
    }
  }
  std::vector<EdgeIndex> out;
  for (EdgeIndex e = 0; e < n.edge_count(); ++e)
    if (mask[e]) out.push_back(e);
  return out;
}

inline Candidate random_candidate(const Network& n, std::mt19937_64& rng) {
  const std::size_t keep = 300 + uniform_index(rng, 700);
  auto c = candidate_from_edges(n, random_trimmed_subset(n, rng, keep));
  if (!c) throw std::logic_error("trimmed subset has an invalid quotient");
  return std::move(*c);
}

// A tree-child network with a random displayed digraph.
struct Fixture {
  Network n;
  Candidate c;
};

inline Fixture random_fixture(std::uint64_t seed, std::size_t max_leaves = 6, std::size_t max_ret = 3,
                              bool tree_child_digraph = false) {
  std::mt19937_64 rng(seed);
  const std::size_t leaves = 2 + uniform_index(rng, max_leaves - 1);
  const std::size_t ret = uniform_index(rng, std::min(max_ret, leaves - 1) + 1);
  Network n = random_tree_child(leaves, ret, seed * 7919 + 1);
  for (;;) {
    Candidate c = random_candidate(n, rng);
    if (!tree_child_digraph || is_tree_child_digraph(c.digraph)) return {std::move(n), std::move(c)};
  }
}

}  // namespace fixtures
