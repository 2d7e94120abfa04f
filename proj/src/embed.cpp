#include "snprlab/embed.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include "snprlab/phyloio.hpp"

namespace snprlab {

namespace {

void require_same_taxa(const PhyloDigraph& d, const Network& n) {
  if (d.taxa() != n.taxa()) throw PreconditionError("digraph and network have different leaf sets");
}

// Backtracking over digraph vertices in reverse topological order. Each
// vertex is placed while routing its first out-edge upwards from the child's
// image; the remaining out-edges are routed up to the fixed image.
class Search {
 public:
  using Sink = std::function<bool(const Embedding&)>;  // false stops the search

  Search(const PhyloDigraph& d, const Network& n, Sink sink) : d_(d), n_(n), sink_(std::move(sink)) {
    require_same_taxa(d, n);
    owner_.assign(n.id_bound(), kNoComponent);
    used_.assign(n.edge_count(), 0);
    reach_.resize(n.id_bound());
    for (VertexId v : n.vertices()) reach_[v] = descendants(n, v);
    image_.resize(d.size());
    paths_.resize(d.size());
    for (std::uint32_t c = 0; c < d.size(); ++c) {
      const LeafDigraph& g = d.component(c);
      image_[c].assign(g.id_bound(), kNoVertex);
      paths_[c].assign(g.edge_count(), {});
      for (VertexId x : g.vertices()) {
        VertexId h = kNoVertex;
        if (g.is_leaf(x)) h = *n.leaf(g.label(x));
        else if (g.rho() == x) h = n.root();
        if (h == kNoVertex) continue;
        image_[c][x] = h;
        owner_[h] = c;
      }
      auto topo = topological_order(g);
      for (auto it = topo.rbegin(); it != topo.rend(); ++it)
        if (g.out_degree(*it) > 0) order_.push_back({c, *it});
    }
  }

  void run() { place(0); }

 private:
  struct Step {
    std::uint32_t comp;
    VertexId x;
  };

  void place(std::size_t i) {
    if (stop_) return;
    if (i == order_.size()) {
      Embedding m{image_, paths_, used_, owner_};
      if (!sink_(m)) stop_ = true;
      return;
    }
    route(i, 0);
  }

  void route(std::size_t i, std::size_t k) {
    if (stop_) return;
    const Step& s = order_[i];
    const LeafDigraph& g = d_.component(s.comp);
    auto outs = g.out_edges(s.x);
    if (k == outs.size()) {
      place(i + 1);
      return;
    }
    std::vector<EdgeIndex> path;
    climb(i, k, image_[s.comp][g.edge(outs[k]).to], path);
  }

  // `path` holds host edges bottom-up from the child's image to `cur`.
  void climb(std::size_t i, std::size_t k, VertexId cur, std::vector<EdgeIndex>& path) {
    const Step& s = order_[i];
    const LeafDigraph& g = d_.component(s.comp);
    const EdgeIndex de = g.out_edges(s.x)[k];
    const VertexId target = image_[s.comp][s.x];
    for (EdgeIndex e : n_.in_edges(cur)) {
      if (stop_) return;
      if (used_[e]) continue;
      const VertexId p = n_.edge(e).from;
      path.push_back(e);
      used_[e] = 1;
      if (target != kNoVertex) {
        if (p == target) {
          finish_edge(i, k, de, path);
        } else if (owner_[p] == kNoComponent && reach_[target][p]) {
          owner_[p] = s.comp;
          climb(i, k, p, path);
          owner_[p] = kNoComponent;
        }
      } else if (owner_[p] == kNoComponent) {
        owner_[p] = s.comp;
        if (fits(s, p)) {
          image_[s.comp][s.x] = p;
          finish_edge(i, k, de, path);
          image_[s.comp][s.x] = kNoVertex;
        }
        climb(i, k, p, path);
        owner_[p] = kNoComponent;
      }
      used_[e] = 0;
      path.pop_back();
    }
  }

  // Degree and reachability pruning for a tentative image.
  bool fits(const Step& s, VertexId p) const {
    const LeafDigraph& g = d_.component(s.comp);
    if (n_.out_degree(p) < g.out_degree(s.x) || n_.in_degree(p) < g.in_degree(s.x)) return false;
    for (EdgeIndex de : g.out_edges(s.x))
      if (!reach_[p][image_[s.comp][g.edge(de).to]]) return false;
    return true;
  }

  void finish_edge(std::size_t i, std::size_t k, EdgeIndex de, const std::vector<EdgeIndex>& path) {
    auto& slot = paths_[order_[i].comp][de];
    slot.assign(path.rbegin(), path.rend());
    route(i, k + 1);
    slot.clear();
  }

  const PhyloDigraph& d_;
  const Network& n_;
  Sink sink_;
  std::vector<Step> order_;
  std::vector<std::vector<VertexId>> image_;
  std::vector<std::vector<std::vector<EdgeIndex>>> paths_;
  std::vector<std::uint32_t> owner_;
  std::vector<char> used_;
  std::vector<std::vector<char>> reach_;
  bool stop_ = false;
};

std::vector<std::size_t> in_counts(const Network& n, const std::vector<char>& edges) {
  std::vector<std::size_t> c(n.id_bound(), 0);
  for (EdgeIndex e = 0; e < n.edge_count(); ++e)
    if (edges[e]) ++c[n.edge(e).to];
  return c;
}

std::vector<std::size_t> out_counts(const Network& n, const std::vector<char>& edges) {
  std::vector<std::size_t> c(n.id_bound(), 0);
  for (EdgeIndex e = 0; e < n.edge_count(); ++e)
    if (edges[e]) ++c[n.edge(e).from];
  return c;
}

// Spreads component ownership from the base along extension edges.
std::vector<std::uint32_t> spread_owner(const Network& n, const std::vector<std::uint32_t>& base,
                                        const std::vector<char>& edges) {
  std::vector<std::uint32_t> owner = base;
  std::deque<VertexId> queue;
  for (VertexId v : n.vertices())
    if (owner[v] != kNoComponent) queue.push_back(v);
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    auto visit = [&](EdgeIndex e, VertexId w) {
      if (edges[e] && owner[w] == kNoComponent) {
        owner[w] = owner[v];
        queue.push_back(w);
      }
    };
    for (EdgeIndex e : n.in_edges(v)) visit(e, n.edge(e).from);
    for (EdgeIndex e : n.out_edges(v)) visit(e, n.edge(e).to);
  }
  return owner;
}

struct Candidate {
  VertexId v;
  VertexId u;
  EdgeIndex e;
  auto operator<=>(const Candidate&) const = default;
};

std::vector<Candidate> applicable(const Network& n, const std::vector<char>& edges,
                                  const std::vector<std::uint32_t>& owner, bool allow_e2) {
  auto in = in_counts(n, edges);
  auto out = out_counts(n, edges);
  std::vector<Candidate> found;
  for (VertexId v : n.vertices()) {
    if (owner[v] == kNoComponent) continue;
    const bool e1 = in[v] == 0;
    const bool e2 = allow_e2 && in[v] == 1 && out[v] == 1 && n.is_reticulation(v);
    if (!e1 && !e2) continue;
    for (EdgeIndex e : n.in_edges(v)) {
      const VertexId u = n.edge(e).from;
      if (!edges[e] && owner[u] == kNoComponent) found.push_back({v, u, e});
    }
  }
  return found;
}

Extension close(const Embedding& m, const Network& n, const ExtensionPolicy& policy) {
  Extension r{m, m.edges, {}, m.owner};
  std::mt19937_64 rng(policy.seed);
  for (;;) {
    auto cands = applicable(n, r.edges, r.owner, policy.allow_e2);
    if (cands.empty()) break;
    Candidate pick;
    if (policy.mode == ExtensionPolicy::Mode::kDeterministic) {
      // The smallest parent id, then the smallest child id.
      pick = *std::min_element(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        return std::tie(a.u, a.v, a.e) < std::tie(b.u, b.v, b.e);
      });
    } else {
      pick = cands[uniform_index(rng, cands.size())];
    }
    r.edges[pick.e] = 1;
    r.owner[pick.u] = r.owner[pick.v];
    r.added.push_back(pick.e);
  }
  return r;
}

}  // namespace

std::size_t Embedding::edge_count() const { return std::count(edges.begin(), edges.end(), 1); }

std::vector<EdgeIndex> Embedding::edge_list() const {
  std::vector<EdgeIndex> out;
  for (EdgeIndex e = 0; e < edges.size(); ++e)
    if (edges[e]) out.push_back(e);
  return out;
}

std::size_t Extension::edge_count() const { return std::count(edges.begin(), edges.end(), 1); }

std::optional<Embedding> find_embedding(const PhyloDigraph& d, const Network& n) {
  std::optional<Embedding> found;
  Search s(d, n, [&](const Embedding& m) {
    found = m;
    return false;
  });
  s.run();
  return found;
}

std::vector<Embedding> enumerate_embeddings(const PhyloDigraph& d, const Network& n, std::size_t limit) {
  std::map<std::vector<char>, Embedding> by_edges;
  if (limit == 0) return {};
  Search s(d, n, [&](const Embedding& m) {
    by_edges.emplace(m.edges, m);
    return by_edges.size() < limit;
  });
  s.run();
  std::vector<Embedding> out;
  for (auto& [k, m] : by_edges) out.push_back(std::move(m));
  return out;
}

std::optional<Embedding> embedding_from_edges(const PhyloDigraph& d, const Network& n,
                                              std::vector<std::vector<VertexId>> vertex_map,
                                              std::vector<char> edges) {
  if (vertex_map.size() != d.size() || edges.size() != n.edge_count()) return std::nullopt;
  Embedding m;
  m.owner.assign(n.id_bound(), kNoComponent);
  std::vector<VertexId> digraph_vertex(n.id_bound(), kNoVertex);
  for (std::uint32_t c = 0; c < d.size(); ++c) {
    const LeafDigraph& g = d.component(c);
    if (vertex_map[c].size() < g.id_bound()) return std::nullopt;
    for (VertexId x : g.vertices()) {
      VertexId h = vertex_map[c][x];
      if (!n.has_vertex(h) || m.owner[h] != kNoComponent) return std::nullopt;
      m.owner[h] = c;
      digraph_vertex[h] = x;
    }
  }
  auto in = in_counts(n, edges);
  auto out = out_counts(n, edges);
  m.edge_map.resize(d.size());
  std::vector<char> seen(n.edge_count(), 0);
  for (std::uint32_t c = 0; c < d.size(); ++c) {
    const LeafDigraph& g = d.component(c);
    m.edge_map[c].assign(g.edge_count(), {});
    std::vector<char> taken(g.edge_count(), 0);
    for (VertexId x : g.vertices()) {
      const VertexId h = vertex_map[c][x];
      if (in[h] != g.in_degree(x) || out[h] != g.out_degree(x)) return std::nullopt;
      for (EdgeIndex e : n.out_edges(h)) {
        if (!edges[e]) continue;
        std::vector<EdgeIndex> path{e};
        seen[e] = 1;
        VertexId cur = n.edge(e).to;
        while (m.owner[cur] == kNoComponent || digraph_vertex[cur] == kNoVertex) {
          if (m.owner[cur] != kNoComponent || in[cur] != 1 || out[cur] != 1) return std::nullopt;
          m.owner[cur] = c;
          EdgeIndex next = kNoEdge;
          for (EdgeIndex f : n.out_edges(cur))
            if (edges[f]) next = f;
          path.push_back(next);
          seen[next] = 1;
          cur = n.edge(next).to;
        }
        if (m.owner[cur] != c) return std::nullopt;
        const VertexId y = digraph_vertex[cur];
        bool placed = false;
        for (EdgeIndex de : g.out_edges(x)) {
          if (!taken[de] && g.edge(de).to == y) {
            taken[de] = 1;
            m.edge_map[c][de] = std::move(path);
            placed = true;
            break;
          }
        }
        if (!placed) return std::nullopt;
      }
    }
  }
  for (EdgeIndex e = 0; e < n.edge_count(); ++e)
    if (edges[e] && !seen[e]) return std::nullopt;
  m.vertex_map = std::move(vertex_map);
  m.edges = std::move(edges);
  return m;
}

std::vector<std::string> embedding_problems(const PhyloDigraph& d, const Network& n, const Embedding& m) {
  std::vector<std::string> problems;
  if (m.vertex_map.size() != d.size() || m.edge_map.size() != d.size()) return {"component count mismatch"};
  for (std::uint32_t c = 0; c < d.size(); ++c) {
    const LeafDigraph& g = d.component(c);
    for (VertexId x : g.vertices()) {
      VertexId h = m.vertex_map[c][x];
      if (g.is_leaf(x) && (!n.has_vertex(h) || n.label(h) != g.label(x)))
        problems.push_back("leaf '" + g.label(x) + "' is not mapped to its host leaf");
      if (g.rho() == x && h != n.root()) problems.push_back("rho is not mapped to the host root");
    }
    for (EdgeIndex de = 0; de < g.edge_count(); ++de) {
      const auto& path = m.edge_map[c][de];
      if (path.empty()) {
        problems.push_back("digraph edge without a host path");
        continue;
      }
      VertexId cur = m.vertex_map[c][g.edge(de).from];
      for (EdgeIndex e : path) {
        if (e >= n.edge_count() || n.edge(e).from != cur || !m.edges[e]) {
          problems.push_back("host path is broken or leaves the embedding");
          break;
        }
        cur = n.edge(e).to;
      }
      if (cur != m.vertex_map[c][g.edge(de).to]) problems.push_back("host path ends at the wrong vertex");
    }
  }
  auto rebuilt = embedding_from_edges(d, n, m.vertex_map, m.edges);
  if (!rebuilt)
    problems.push_back("edge set does not reduce to the digraph");
  else if (rebuilt->owner != m.owner)
    problems.push_back("component ownership disagrees with the edge set");
  return problems;
}

Extension extend(const Embedding& m, const Network& n, const ExtensionPolicy& policy) {
  return close(m, n, policy);
}

Extension root_extend(const Embedding& m, const Network& n, const ExtensionPolicy& policy) {
  ExtensionPolicy p = policy;
  p.allow_e2 = false;
  return close(m, n, p);
}

std::vector<std::string> extension_problems(const Network& n, const Extension& r, bool root_only) {
  std::vector<std::string> problems;
  const Embedding& m = r.base;
  for (EdgeIndex e = 0; e < n.edge_count(); ++e)
    if (m.edges[e] && !r.edges[e]) problems.push_back("embedding edge missing from the extension");
  auto in_m = in_counts(n, m.edges);
  auto out_m = out_counts(n, m.edges);
  auto out_r = out_counts(n, r.edges);
  std::vector<std::size_t> added_in(n.id_bound(), 0);
  for (EdgeIndex e = 0; e < n.edge_count(); ++e) {
    if (!r.edges[e] || m.edges[e]) continue;
    const VertexId u = n.edge(e).from, v = n.edge(e).to;
    ++added_in[v];
    if (m.contains_vertex(u)) problems.push_back("added edge leaves an embedding vertex");
    if (r.owner[u] == kNoComponent || r.owner[u] != r.owner[v])
      problems.push_back("added edge joins different components");
  }
  for (VertexId v : n.vertices()) {
    if (r.owner[v] == kNoComponent) continue;
    if (!m.contains_vertex(v) && out_r[v] != 1) problems.push_back("added vertex without exactly one out-edge");
    std::size_t allowed;
    if (m.contains_vertex(v)) {
      const bool top = in_m[v] == 0;
      const bool e2 = !root_only && in_m[v] == 1 && out_m[v] == 1 && n.is_reticulation(v);
      allowed = (top || e2) ? 1 : 0;
    } else {
      allowed = (!root_only && n.is_reticulation(v)) ? 2 : 1;
    }
    if (added_in[v] > allowed) problems.push_back("vertex " + std::to_string(v) + " has too many added in-edges");
  }
  if (!applicable(n, r.edges, r.owner, !root_only).empty()) problems.push_back("extension is not closed");
  // Ownership must be what the edges imply.
  if (spread_owner(n, m.owner, r.edges) != r.owner) problems.push_back("component ownership is inconsistent");
  return problems;
}

std::size_t cut_size(const Network& n, const Extension& r) { return n.edge_count() - r.edge_count(); }

std::size_t digraph_cut_size(const Network& n, const PhyloDigraph& d) {
  auto m = find_embedding(d, n);
  if (!m) throw PreconditionError("network does not display the digraph");
  return cut_size(n, extend(*m, n));
}

std::ptrdiff_t closed_form_cut_size(const Network& n, const PhyloDigraph& d) {
  std::ptrdiff_t dv = 0;
  for (const auto& c : d.components())
    dv += static_cast<std::ptrdiff_t>(c.edge_count()) - static_cast<std::ptrdiff_t>(c.vertex_count());
  return static_cast<std::ptrdiff_t>(n.edge_count()) - static_cast<std::ptrdiff_t>(n.vertex_count()) - dv;
}

std::vector<EdgeIndex> outside_reticulation_edges(const Network& n, const Extension& r) {
  std::vector<EdgeIndex> out;
  for (EdgeIndex e = 0; e < n.edge_count(); ++e)
    if (r.edges[e] && !r.base.edges[e] && n.is_reticulation_edge(e)) out.push_back(e);
  return out;
}

Extension to_root_extension(const Network& n, const Extension& r) {
  if (!is_tree_child(n)) throw PreconditionError("rerouting requires a tree-child network");
  Extension out = r;
  for (;;) {
    auto bad = outside_reticulation_edges(n, out);
    if (bad.empty()) break;
    const EdgeIndex e = bad.front();
    const VertexId u = n.edge(e).from;
    EdgeIndex sibling = kNoEdge;
    for (EdgeIndex f : n.out_edges(u))
      if (f != e) sibling = f;
    if (sibling == kNoEdge || out.edges[sibling])
      throw std::logic_error("rerouting found no free sibling edge");
    // Everything with a path to u moves into the sibling's component.
    const std::uint32_t target = out.owner[n.edge(sibling).to];
    std::vector<VertexId> stack{u};
    std::vector<char> seen(n.id_bound(), 0);
    seen[u] = 1;
    while (!stack.empty()) {
      VertexId w = stack.back();
      stack.pop_back();
      out.owner[w] = target;
      for (EdgeIndex f : n.in_edges(w)) {
        VertexId p = n.edge(f).from;
        if (out.edges[f] && !seen[p]) {
          seen[p] = 1;
          stack.push_back(p);
        }
      }
    }
    out.edges[e] = 0;
    out.edges[sibling] = 1;
    std::replace(out.added.begin(), out.added.end(), e, sibling);
  }
  return out;
}

RootPath root_path(const Network& n, const PhyloDigraph& d, const Extension& r, VertexId v) {
  if (!n.has_vertex(v) || !r.base.contains_vertex(v)) throw PreconditionError("vertex is not in the embedding");
  const LeafDigraph& g = d.component(r.base.owner[v]);
  const auto& images = r.base.vertex_map[r.base.owner[v]];
  auto x = std::find(images.begin(), images.end(), v);
  if (x == images.end()) throw PreconditionError("vertex is a path interior, not a digraph vertex");
  const VertexId dx = static_cast<VertexId>(x - images.begin());
  if (g.in_degree(dx) != 0 || (g.out_degree(dx) != 0 && g.out_degree(dx) != 2))
    throw PreconditionError("vertex is not the image of a component root");
  RootPath p{{v}, {}};
  VertexId cur = v;
  for (;;) {
    std::vector<EdgeIndex> ins;
    for (EdgeIndex e : n.in_edges(cur))
      if (r.edges[e]) ins.push_back(e);
    if (ins.empty()) break;
    if (ins.size() > 1) throw PreconditionError("root path branches at vertex " + std::to_string(cur));
    cur = n.edge(ins.front()).from;
    p.edges.insert(p.edges.begin(), ins.front());
    p.vertices.insert(p.vertices.begin(), cur);
  }
  return p;
}

std::vector<EdgeIndex> path_extension(const Network& n, const Extension& r, const std::vector<EdgeIndex>& p) {
  std::vector<VertexId> on_path;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] >= n.edge_count() || !r.base.edges[p[i]]) throw PreconditionError("path leaves the embedding");
    if (i > 0 && n.edge(p[i - 1]).to != n.edge(p[i]).from) throw PreconditionError("edges do not form a path");
    if (i == 0) on_path.push_back(n.edge(p[i]).from);
    on_path.push_back(n.edge(p[i]).to);
  }
  std::vector<char> keep(n.edge_count(), 0);
  for (EdgeIndex e : p) keep[e] = 1;
  for (VertexId x : on_path) {
    if (!n.is_reticulation(x)) continue;
    std::vector<VertexId> stack{x};
    while (!stack.empty()) {
      VertexId w = stack.back();
      stack.pop_back();
      for (EdgeIndex f : n.in_edges(w)) {
        if (r.edges[f] && !r.base.edges[f] && !keep[f]) {
          keep[f] = 1;
          stack.push_back(n.edge(f).from);
        }
      }
    }
  }
  std::vector<EdgeIndex> out;
  for (EdgeIndex e = 0; e < n.edge_count(); ++e)
    if (keep[e]) out.push_back(e);
  return out;
}

Transfer transfer_extension(const Network& n, const PhyloDigraph& d, const Extension& r, const Move& move) {
  if (!is_tree_child(n)) throw PreconditionError("transfer requires a tree-child network");
  if (!is_tree_child_digraph(d)) throw PreconditionError("transfer requires a tree-child digraph");
  auto index = [&](const Edge& e) {
    auto i = n.find_edge(e.from, e.to, e.slot);
    if (!i) throw PreconditionError("move names a missing edge");
    return *i;
  };
  const EdgeIndex e = index(move.e);
  switch (move.kind) {
    case Move::Kind::kMinus:
      if (!n.is_reticulation_edge(e)) throw PreconditionError("SNPR⁻ needs a reticulation edge");
      if (r.edges[e]) throw PreconditionError("deleted edge lies in the extension");
      break;
    case Move::Kind::kPlus: {
      const EdgeIndex f = index(move.f);
      if (f == e) throw PreconditionError("SNPR⁺ needs two distinct edges");
      if (n.is_reticulation_edge(e) || n.is_reticulation_edge(f))
        throw PreconditionError("SNPR⁺ needs two tree edges");
      break;
    }
    case Move::Kind::kPruneRegraft:
      if (n.is_reticulation_edge(e)) throw PreconditionError("SNPR± needs a tree edge");
      if (r.edges[e]) throw PreconditionError("pruned edge lies in the extension");
      break;
  }
  EditResult res = apply_move_traced(n, move);
  const Network& n2 = res.network;
  auto all_in = [](const std::vector<EdgeIndex>& src, const std::vector<char>& mask) {
    return !src.empty() && std::all_of(src.begin(), src.end(), [&](EdgeIndex s) { return mask[s] != 0; });
  };
  std::vector<char> r_edges(n2.edge_count(), 0), m_edges(n2.edge_count(), 0);
  for (EdgeIndex i = 0; i < n2.edge_count(); ++i) {
    const EdgeOrigin& o = res.origins[i];
    switch (o.role) {
      case EdgeOrigin::Role::kAdded: break;
      case EdgeOrigin::Role::kLowerHalf:
        r_edges[i] = 1;
        m_edges[i] = all_in(o.sources, r.base.edges);
        break;
      case EdgeOrigin::Role::kKept:
        r_edges[i] = all_in(o.sources, r.edges);
        m_edges[i] = all_in(o.sources, r.base.edges);
        break;
    }
  }
  auto vmap = r.base.vertex_map;
  for (auto& comp : vmap)
    for (VertexId& h : comp) {
      if (h == kNoVertex) continue;
      h = res.vertex_map[h];
      if (h == kNoVertex) throw std::logic_error("transfer deleted an embedded digraph vertex");
    }
  auto base = embedding_from_edges(d, n2, std::move(vmap), std::move(m_edges));
  if (!base) throw std::logic_error("transferred embedding does not reduce to the digraph");
  Extension out;
  out.owner = spread_owner(n2, base->owner, r_edges);
  for (EdgeIndex i = 0; i < n2.edge_count(); ++i)
    if (r_edges[i] && !base->edges[i]) out.added.push_back(i);
  out.base = std::move(*base);
  out.edges = std::move(r_edges);
  return {n2, std::move(out)};
}

std::string write_extension(const Network& n, const Extension& r) {
  std::vector<std::string> notes(n.edge_count());
  for (EdgeIndex e = 0; e < n.edge_count(); ++e)
    notes[e] = r.base.edges[e] ? "in:embedding" : r.edges[e] ? "in:extension" : "cut";
  return "pnd 1\n" + pnd_body(n, n.root(), std::nullopt, notes);
}

}  // namespace snprlab
