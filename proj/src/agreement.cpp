#include "snprlab/agreement.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>

namespace snprlab {

std::optional<Candidate> candidate_from_edges(const Network& n, std::span<const EdgeIndex> edges) {
  std::vector<VertexId> anchors{n.root()};
  for (VertexId v : n.vertices())
    if (n.is_leaf(v)) anchors.push_back(v);
  auto q = quotient(n, anchors, edges);
  if (!q) return std::nullopt;
  std::vector<LeafDigraph> comps;
  for (auto& c : *q.value) comps.push_back(std::move(c.digraph));
  auto d = validate_digraph(std::move(comps), n.taxa());
  if (!d) return std::nullopt;
  std::vector<std::vector<VertexId>> vmap;
  for (const auto& c : d->components()) {
    std::vector<VertexId> ids(c.id_bound(), kNoVertex);
    for (VertexId x : c.vertices()) ids[x] = x;
    vmap.push_back(std::move(ids));
  }
  std::vector<char> mask(n.edge_count(), 0);
  for (EdgeIndex e : edges) mask[e] = 1;
  auto m = embedding_from_edges(*d, n, std::move(vmap), std::move(mask));
  if (!m) throw std::logic_error("quotient does not trace back to its edges");
  return Candidate{std::move(*d.value), std::move(*m)};
}

}  // namespace snprlab

namespace snprlab {

namespace {

// Distinct digraphs of n from edge subsets, fewest excluded edges first.
void for_each_candidate(const Network& n, const AgreementOptions& opts,
                        const std::function<bool(Candidate&&, const std::string&)>& visit) {
  const std::size_t ne = n.edge_count();
  if (ne >= 63 || (std::uint64_t{1} << ne) > opts.subset_budget)
    throw BudgetExceeded("agreement: " + std::to_string(ne) + " edges exceed the subset budget");
  std::set<std::string> seen;
  std::vector<EdgeIndex> edges;
  for (std::size_t k = 0; k <= ne; ++k) {
    // Gosper's hack over the excluded-edge masks of size k.
    std::uint64_t x = (std::uint64_t{1} << k) - 1;
    const std::uint64_t end = std::uint64_t{1} << ne;
    while (x < end) {
      edges.clear();
      for (EdgeIndex e = 0; e < ne; ++e)
        if (!(x >> e & 1)) edges.push_back(e);
      if (auto c = candidate_from_edges(n, edges)) {
        if (!opts.tree_child_only || is_tree_child_digraph(c->digraph)) {
          std::string sig = digraph_signature(c->digraph);
          if (seen.insert(sig).second && !visit(std::move(*c), sig)) return;
        }
      }
      if (x == 0) break;
      const std::uint64_t lo = x & -x, hi = x + lo;
      x = (((hi ^ x) >> 2) / lo) | hi;
    }
  }
}

AgreementWitness make_witness(const Network& n, const Network& m, Candidate&& c, Embedding&& in_m) {
  AgreementWitness w;
  w.extension_n = extend(c.embedding, n);
  w.extension_m = extend(in_m, m);
  w.cut_n = cut_size(n, w.extension_n);
  w.cut_m = cut_size(m, w.extension_m);
  w.digraph = std::move(c.digraph);
  w.embedding_n = std::move(c.embedding);
  w.embedding_m = std::move(in_m);
  return w;
}

}  // namespace

void for_each_agreement_digraph(const Network& n, const Network& m, const AgreementOptions& opts,
                                const std::function<bool(AgreementWitness&&)>& visit) {
  if (n.taxa() != m.taxa()) throw PreconditionError("agreement: networks are on different taxa");
  for_each_candidate(n, opts, [&](Candidate&& c, const std::string&) {
    auto e = find_embedding(c.digraph, m);
    if (!e) return true;
    return visit(make_witness(n, m, std::move(c), std::move(*e)));
  });
}

std::vector<AgreementWitness> enumerate_agreement_digraphs(const Network& n, const Network& m,
                                                           const AgreementOptions& opts) {
  std::vector<AgreementWitness> out;
  for_each_agreement_digraph(n, m, opts, [&](AgreementWitness&& w) {
    out.push_back(std::move(w));
    return true;
  });
  return out;
}

MtcResult mtc(const Network& n, const Network& m, const AgreementOptions& opts) {
  if (n.taxa() != m.taxa()) throw PreconditionError("mtc: networks are on different taxa");
  // Every extension covers the host, so a digraph's cut sum is known before
  // its display in m is decided; test candidates cheapest first.
  struct Entry {
    std::ptrdiff_t sum;
    std::string sig;
    Candidate c;
  };
  std::vector<Entry> cands;
  for_each_candidate(n, opts, [&](Candidate&& c, const std::string& sig) {
    const std::ptrdiff_t sum = closed_form_cut_size(n, c.digraph) + closed_form_cut_size(m, c.digraph);
    if (sum >= 0) cands.push_back({sum, sig, std::move(c)});
    return true;
  });
  std::sort(cands.begin(), cands.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.sum, a.sig) < std::tie(b.sum, b.sig);
  });
  for (Entry& en : cands) {
    auto e = find_embedding(en.c.digraph, m);
    if (!e) continue;
    MtcResult r;
    r.witness = make_witness(n, m, std::move(en.c), std::move(*e));
    r.value = r.witness.cut_sum();
    if (static_cast<std::ptrdiff_t>(r.value) != en.sum)
      throw std::logic_error("mtc: extension cut sizes disagree with the closed form");
    if (is_tree_child(n) && is_tree_child(m)) {
      const std::size_t rn = cut_size(n, root_extend(r.witness.embedding_n, n));
      const std::size_t rm = cut_size(m, root_extend(r.witness.embedding_m, m));
      if (rn != r.witness.cut_n || rm != r.witness.cut_m)
        throw std::logic_error("mtc: root extensions disagree with extensions");
    }
    return r;
  }
  throw std::logic_error("mtc: no agreement digraph (the all-singleton digraph always agrees)");
}

std::string BoundsReport::half_m_text() const {
  return std::to_string(m / 2) + (m % 2 ? ".5" : "");
}

std::string BoundsReport::tsv() const {
  return half_m_text() + "\t" + std::to_string(d) + "\t" + std::to_string(m) + "\t" +
         (holds ? "true" : "false");
}

BoundsReport make_report(std::size_t m, std::size_t d) { return {m, d, m <= 2 * d && d <= m}; }

BoundsReport check_bounds(const Network& n, const Network& m, TreeChildSpace& space,
                          const DistanceOptions& dopts, const AgreementOptions& aopts) {
  const std::size_t mt = mtc(n, m, aopts).value;
  const std::size_t d = space.distance(n, m, dopts).weight;
  return make_report(mt, d);
}

BoundsReport check_bounds(const Network& n, const Network& m, const DistanceOptions& dopts,
                          const AgreementOptions& aopts) {
  TreeChildSpace space(dopts.cap.value_or(std::max(n.reticulation_count(), m.reticulation_count()) + 1));
  return check_bounds(n, m, space, dopts, aopts);
}

// ---------------------------------------------------------------------------
// Agreement forests of two trees, from first principles.

namespace {

using Mask = std::uint64_t;

// Clusters of a tree over taxa indices 0..L-1 plus ρ = L, with ρ hung as an
// extra child of the root.
struct ClusterTree {
  std::vector<Mask> clusters;  // one per vertex, ρ leaf included
};

ClusterTree cluster_tree(const Network& t, const std::vector<std::string>& taxa) {
  const std::size_t nl = taxa.size();
  std::vector<Mask> c(t.id_bound(), 0);
  std::vector<VertexId> order = topological_order(t);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const VertexId v = *it;
    if (t.out_degree(v) == 0) {
      const auto pos = std::lower_bound(taxa.begin(), taxa.end(), t.label(v)) - taxa.begin();
      c[v] = Mask{1} << pos;
    }
    for (VertexId w : t.children(v)) c[v] |= c[w];
  }
  c[t.root()] |= Mask{1} << nl;
  ClusterTree ct;
  for (VertexId v : t.vertices()) ct.clusters.push_back(c[v]);
  ct.clusters.push_back(Mask{1} << nl);
  return ct;
}

std::vector<Mask> restricted(const ClusterTree& t, Mask block) {
  std::vector<Mask> out;
  for (Mask c : t.clusters)
    if (c & block) out.push_back(c & block);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Vertices of the minimal subtree spanning `block`, as a set of cluster
// positions.
void mark_span(const ClusterTree& t, Mask block, std::vector<int>& hits) {
  std::size_t lca = t.clusters.size();
  for (std::size_t i = 0; i < t.clusters.size(); ++i)
    if ((t.clusters[i] & block) == block &&
        (lca == t.clusters.size() || __builtin_popcountll(t.clusters[i]) < __builtin_popcountll(t.clusters[lca])))
      lca = i;
  for (std::size_t i = 0; i < t.clusters.size(); ++i) {
    const Mask in = t.clusters[i] & block;
    if (in && (in != block || i == lca)) ++hits[i];
  }
}

bool agreement_forest(const ClusterTree& t, const ClusterTree& u, const std::vector<Mask>& blocks) {
  std::vector<int> ht(t.clusters.size(), 0), hu(u.clusters.size(), 0);
  for (Mask b : blocks) {
    if (restricted(t, b) != restricted(u, b)) return false;
    mark_span(t, b, ht);
    mark_span(u, b, hu);
  }
  auto disjoint = [](const std::vector<int>& h) {
    return std::all_of(h.begin(), h.end(), [](int x) { return x <= 1; });
  };
  return disjoint(ht) && disjoint(hu);
}

}  // namespace

std::size_t maf_rspr(const Network& t, const Network& u) {
  if (t.reticulation_count() || u.reticulation_count()) throw PreconditionError("maf_rspr: inputs must be trees");
  const auto taxa = t.taxa();
  if (taxa != u.taxa()) throw PreconditionError("maf_rspr: trees are on different taxa");
  if (taxa.size() + 1 > 20) throw PreconditionError("maf_rspr: too many taxa for brute force");
  const ClusterTree ct = cluster_tree(t, taxa), cu = cluster_tree(u, taxa);
  const std::size_t k = taxa.size() + 1;
  std::size_t best = k;
  // Set partitions as restricted growth strings.
  std::vector<Mask> blocks;
  std::function<void(std::size_t)> place = [&](std::size_t i) {
    if (blocks.size() >= best) return;
    if (i == k) {
      if (agreement_forest(ct, cu, blocks)) best = blocks.size();
      return;
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      blocks[b] |= Mask{1} << i;
      place(i + 1);
      blocks[b] &= ~(Mask{1} << i);
    }
    blocks.push_back(Mask{1} << i);
    place(i + 1);
    blocks.pop_back();
  };
  place(0);
  return best - 1;
}

std::optional<GapWitness> gap_witness_search(std::size_t n_leaves, std::size_t r, std::size_t budget,
                                             std::uint64_t seed, const DistanceOptions& dopts) {
  if (n_leaves < 2) throw PreconditionError("gap search needs at least two leaves");
  r = std::min(r, n_leaves - 1);
  std::mt19937_64 rng(seed);
  std::map<std::size_t, std::unique_ptr<TreeChildSpace>> spaces;
  for (std::size_t trial = 1; trial <= budget; ++trial) {
    const std::size_t r1 = uniform_index(rng, r + 1), r2 = uniform_index(rng, r + 1);
    Network n = random_tree_child(n_leaves, r1, rng());
    Network m = random_tree_child(n_leaves, r2, rng());
    const std::size_t mt = mtc(n, m).value;
    // d >= m / 2 always, so a gap needs m >= 2.
    if (mt < 2) continue;
    const std::size_t cap = dopts.cap.value_or(std::max(r1, r2) + 1);
    auto& space = spaces[cap];
    if (!space) space = std::make_unique<TreeChildSpace>(cap);
    const BoundsReport rep = make_report(mt, space->distance(n, m, dopts).weight);
    if (!rep.holds) throw std::logic_error("bounds violated: " + rep.tsv());
    if (rep.d < rep.m) return GapWitness{std::move(n), std::move(m), rep, trial};
  }
  return std::nullopt;
}

std::string write_bundle(const Network& n, const Network& m, const AgreementWitness& w) {
  return "--- network n\n" + write_extension(n, w.extension_n) + "--- network m\n" +
         write_extension(m, w.extension_m) + "--- digraph\n" + write_digraph(w.digraph);
}

}  // namespace snprlab
