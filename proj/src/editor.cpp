#include "snprlab/editor.hpp"

#include <algorithm>
#include <numeric>

namespace snprlab {

namespace {

EdgeOrigin merge(const EdgeOrigin& a, const EdgeOrigin& b) {
  EdgeOrigin m;
  using R = EdgeOrigin::Role;
  if (a.role == R::kAdded || b.role == R::kAdded)
    m.role = R::kAdded;
  else if (a.role == R::kLowerHalf || b.role == R::kLowerHalf)
    m.role = R::kLowerHalf;
  m.sources = a.sources;
  m.sources.insert(m.sources.end(), b.sources.begin(), b.sources.end());
  return m;
}

}  // namespace

GraphEditor::GraphEditor(const Network& n) : base_(&n) {
  vertex_alive_.assign(n.id_bound(), 0);
  for (VertexId v : n.vertices()) vertex_alive_[v] = 1;
  edges_.reserve(n.edge_count() + 4);
  for (EdgeIndex i = 0; i < n.edge_count(); ++i)
    edges_.push_back({n.edge(i).from, n.edge(i).to, true, {EdgeOrigin::Role::kKept, {i}}});
}

VertexId GraphEditor::add_vertex() {
  vertex_alive_.push_back(1);
  return static_cast<VertexId>(vertex_alive_.size() - 1);
}

GraphEditor::EdgeHandle GraphEditor::add_edge(VertexId from, VertexId to, EdgeOrigin origin) {
  edges_.push_back({from, to, true, std::move(origin)});
  return edges_.size() - 1;
}

void GraphEditor::remove_edge(EdgeHandle h) {
  if (!edges_.at(h).alive) throw PreconditionError("edge already removed");
  edges_[h].alive = false;
}

VertexId GraphEditor::subdivide(EdgeHandle h) {
  if (!edges_.at(h).alive) throw PreconditionError("cannot subdivide a removed edge");
  VertexId w = add_vertex();
  Rec& r = edges_[h];
  EdgeOrigin lower = r.origin;
  if (lower.role != EdgeOrigin::Role::kAdded) lower.role = EdgeOrigin::Role::kLowerHalf;
  VertexId to = r.to;
  r.to = w;
  add_edge(w, to, std::move(lower));
  return w;
}

std::size_t GraphEditor::in_degree(VertexId v) const {
  return std::count_if(edges_.begin(), edges_.end(),
                       [&](const Rec& r) { return r.alive && r.to == v; });
}

std::size_t GraphEditor::out_degree(VertexId v) const {
  return std::count_if(edges_.begin(), edges_.end(),
                       [&](const Rec& r) { return r.alive && r.from == v; });
}

std::vector<GraphEditor::EdgeHandle> GraphEditor::out_edges(VertexId v) const {
  std::vector<EdgeHandle> out;
  for (EdgeHandle h = 0; h < edges_.size(); ++h)
    if (edges_[h].alive && edges_[h].from == v) out.push_back(h);
  return out;
}

std::vector<GraphEditor::EdgeHandle> GraphEditor::in_edges(VertexId v) const {
  std::vector<EdgeHandle> out;
  for (EdgeHandle h = 0; h < edges_.size(); ++h)
    if (edges_[h].alive && edges_[h].to == v) out.push_back(h);
  return out;
}

void GraphEditor::suppress(std::vector<VertexId> work) {
  const VertexId root = base_->root();
  while (!work.empty()) {
    VertexId v = work.back();
    work.pop_back();
    if (v == root || !vertex_alive_[v]) continue;
    if (v < base_->id_bound() && base_->is_labelled(v)) continue;
    auto ins = in_edges(v);
    auto outs = out_edges(v);
    if (ins.size() == 1 && outs.size() == 1) {
      Rec& a = edges_[ins[0]];
      Rec& b = edges_[outs[0]];
      EdgeOrigin o = merge(a.origin, b.origin);
      VertexId p = a.from, c = b.to;
      a.alive = b.alive = false;
      vertex_alive_[v] = 0;
      add_edge(p, c, std::move(o));
    } else if (ins.empty() && outs.size() <= 1) {
      vertex_alive_[v] = 0;
      for (EdgeHandle h : outs) {
        edges_[h].alive = false;
        work.push_back(edges_[h].to);
      }
    }
  }
}

EditResult GraphEditor::finish() const {
  EditResult res;
  res.vertex_map.assign(vertex_alive_.size(), kNoVertex);
  VertexId next = 0;
  for (VertexId v = 0; v < vertex_alive_.size(); ++v)
    if (vertex_alive_[v]) res.vertex_map[v] = next++;

  struct Item {
    VertexId a, b;
    const EdgeOrigin* origin;
  };
  std::vector<Item> items;
  for (const Rec& r : edges_) {
    if (!r.alive) continue;
    VertexId a = res.vertex_map[r.from], b = res.vertex_map[r.to];
    if (a == kNoVertex || b == kNoVertex) throw Error("edited edge touches a deleted vertex");
    items.push_back({a, b, &r.origin});
  }
  std::stable_sort(items.begin(), items.end(), [](const Item& x, const Item& y) {
    return std::pair(x.a, x.b) < std::pair(y.a, y.b);
  });

  RawGraph raw;
  raw.vertices.resize(next);
  std::iota(raw.vertices.begin(), raw.vertices.end(), VertexId{0});
  for (const Item& it : items) {
    raw.edges.emplace_back(it.a, it.b);
    res.origins.push_back(*it.origin);
  }
  for (VertexId v : base_->vertices())
    if (base_->is_labelled(v) && res.vertex_map[v] != kNoVertex)
      raw.labels[res.vertex_map[v]] = base_->label(v);
  raw.root = res.vertex_map[base_->root()];
  res.network = Network::from_raw(raw);
  return res;
}

}  // namespace snprlab

namespace snprlab {

EditResult edit_minus(const Network& n, EdgeIndex e) {
  if (e >= n.edge_count()) throw PreconditionError("edge index out of range");
  const Edge& ed = n.edge(e);
  if (!n.is_reticulation(ed.to)) throw PreconditionError("not a reticulation edge");
  if (!n.is_tree_vertex(ed.from)) throw PreconditionError("tail of the deleted edge is not a tree vertex");
  GraphEditor g(n);
  g.remove_edge(g.original(e));
  g.suppress({ed.from, ed.to});
  return g.finish();
}

EditResult edit_plus(const Network& n, EdgeIndex e1, EdgeIndex e2) {
  if (e1 >= n.edge_count() || e2 >= n.edge_count())
    throw PreconditionError("edge index out of range");
  if (descendants(n, n.edge(e1).to)[n.edge(e2).from])
    throw PreconditionError("new reticulation edge would create a cycle");
  GraphEditor g(n);
  VertexId head = g.subdivide(g.original(e1));
  VertexId tail = g.subdivide(g.original(e2));
  g.add_edge(tail, head, {EdgeOrigin::Role::kAdded, {}});
  return g.finish();
}

EditResult edit_prune_regraft(const Network& n, EdgeIndex e, EdgeIndex f) {
  if (e >= n.edge_count() || f >= n.edge_count()) throw PreconditionError("edge index out of range");
  if (e == f) throw PreconditionError("regraft target equals the pruned edge");
  const Edge& pe = n.edge(e);
  const Edge& fe = n.edge(f);
  const VertexId u = pe.from, v = pe.to;
  if (!n.is_tree_vertex(u)) throw PreconditionError("pruned edge does not leave a tree vertex");
  if (fe.from == u) throw PreconditionError("regraft target is the sibling edge of the pruned edge");
  if (descendants(n, v)[fe.from]) throw PreconditionError("regraft target is below the pruned subnetwork");

  GraphEditor g(n);
  g.remove_edge(g.original(e));
  GraphEditor::EdgeHandle target = g.original(f);
  g.suppress({u});
  // The merged edge (p_u, c_u) is the most recently added one.
  if (fe.to == u) target = g.last_added();
  VertexId w = g.subdivide(target);
  g.add_edge(w, v, {EdgeOrigin::Role::kAdded, {}});
  return g.finish();
}

}  // namespace snprlab
