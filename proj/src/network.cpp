#include "snprlab/network.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace snprlab {

std::string_view to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::kCycle: return "cycle";
    case Violation::Kind::kDegree: return "degree";
    case Violation::Kind::kDisconnected: return "disconnected";
    case Violation::Kind::kLabel: return "label";
    case Violation::Kind::kMultipleSources: return "multiple-sources";
    case Violation::Kind::kMissingRoot: return "missing-root";
    case Violation::Kind::kUndeclaredVertex: return "undeclared-vertex";
    case Violation::Kind::kStructure: return "structure";
  }
  return "unknown";
}

std::string describe(const std::vector<Violation>& violations) {
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out << "; ";
    out << to_string(violations[i].kind) << ": " << violations[i].message;
  }
  return out.str();
}

Multigraph Multigraph::build(std::vector<VertexId> vertices,
                             const std::vector<std::pair<VertexId, VertexId>>& edges,
                             const std::map<VertexId, std::string>& labels) {
  Multigraph g;
  std::sort(vertices.begin(), vertices.end());
  if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end())
    throw PreconditionError("duplicate vertex id");
  const std::size_t bound = vertices.empty() ? 0 : std::size_t{vertices.back()} + 1;
  g.present_.assign(bound, 0);
  for (VertexId v : vertices) g.present_[v] = 1;
  g.vertices_ = std::move(vertices);

  auto check = [&](VertexId v) {
    if (!g.has_vertex(v)) throw PreconditionError("undeclared vertex " + std::to_string(v));
  };
  std::vector<std::pair<VertexId, VertexId>> sorted = edges;
  for (auto [a, b] : sorted) {
    check(a);
    check(b);
  }
  std::stable_sort(sorted.begin(), sorted.end());
  g.edges_.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    std::uint32_t slot = 0;
    if (i > 0 && sorted[i] == sorted[i - 1]) slot = g.edges_.back().slot + 1u;
    if (slot > 255) throw PreconditionError("too many parallel edges");
    g.edges_.push_back({sorted[i].first, sorted[i].second, static_cast<std::uint8_t>(slot)});
  }

  g.out_off_.assign(bound + 1, 0);
  g.in_off_.assign(bound + 1, 0);
  for (const Edge& e : g.edges_) {
    ++g.out_off_[e.from + 1];
    ++g.in_off_[e.to + 1];
  }
  for (std::size_t v = 0; v < bound; ++v) {
    g.out_off_[v + 1] += g.out_off_[v];
    g.in_off_[v + 1] += g.in_off_[v];
  }
  g.out_list_.resize(g.edges_.size());
  g.in_list_.resize(g.edges_.size());
  std::vector<std::uint32_t> in_fill(g.in_off_.begin(), g.in_off_.end() - 1);
  for (EdgeIndex i = 0; i < g.edges_.size(); ++i) {
    g.out_list_[i] = i;  // already grouped by `from`
    g.in_list_[in_fill[g.edges_[i].to]++] = i;
  }

  g.labels_.assign(bound, std::string{});
  for (const auto& [v, name] : labels) {
    check(v);
    g.labels_[v] = name;
  }
  return g;
}

std::vector<VertexId> Multigraph::children(VertexId v) const {
  std::vector<VertexId> out;
  for (EdgeIndex e : out_edges(v)) out.push_back(edges_[e].to);
  return out;
}

std::vector<VertexId> Multigraph::parents(VertexId v) const {
  std::vector<VertexId> out;
  for (EdgeIndex e : in_edges(v)) out.push_back(edges_[e].from);
  return out;
}

std::optional<EdgeIndex> Multigraph::find_edge(VertexId from, VertexId to, std::uint8_t slot) const {
  if (!has_vertex(from)) return std::nullopt;
  for (EdgeIndex e : out_edges(from))
    if (edges_[e].to == to && edges_[e].slot == slot) return e;
  return std::nullopt;
}

std::size_t Multigraph::multiplicity(VertexId from, VertexId to) const {
  if (!has_vertex(from)) return 0;
  std::size_t k = 0;
  for (EdgeIndex e : out_edges(from)) k += edges_[e].to == to;
  return k;
}

RawGraph Multigraph::to_raw() const {
  RawGraph raw;
  raw.vertices = vertices_;
  for (const Edge& e : edges_) raw.edges.emplace_back(e.from, e.to);
  for (VertexId v : vertices_)
    if (is_labelled(v)) raw.labels[v] = labels_[v];
  return raw;
}

Network Network::from_raw(const RawGraph& raw) {
  auto checked = validate(raw);
  if (!checked) throw ValidationError(std::move(checked.violations));
  return std::move(*checked.value);
}

VertexKind Network::kind(VertexId v) const {
  if (v == root_) return VertexKind::kRoot;
  if (out_degree(v) == 0) return VertexKind::kLeaf;
  if (in_degree(v) == 2) return VertexKind::kReticulation;
  return VertexKind::kTree;
}

std::size_t Network::leaf_count() const {
  return std::count_if(vertices().begin(), vertices().end(),
                       [&](VertexId v) { return out_degree(v) == 0; });
}

std::size_t Network::reticulation_count() const {
  return std::count_if(vertices().begin(), vertices().end(),
                       [&](VertexId v) { return in_degree(v) == 2; });
}

std::size_t Network::tree_vertex_count() const {
  return std::count_if(vertices().begin(), vertices().end(),
                       [&](VertexId v) { return is_tree_vertex(v); });
}

std::vector<std::string> Network::taxa() const {
  std::vector<std::string> out;
  for (VertexId v : vertices())
    if (is_labelled(v)) out.push_back(label(v));
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<VertexId> Network::leaf(std::string_view name) const {
  for (VertexId v : vertices())
    if (label(v) == name) return v;
  return std::nullopt;
}

RawGraph Network::to_raw() const {
  RawGraph raw = Multigraph::to_raw();
  raw.root = root_;
  return raw;
}

namespace {

std::string vname(VertexId v) { return "vertex " + std::to_string(v); }

}  // namespace

Checked<Network> validate(const RawGraph& raw) {
  using K = Violation::Kind;
  Checked<Network> result;
  auto& out = result.violations;

  // Structural problems prevent building adjacency at all.
  std::set<VertexId> declared;
  for (VertexId v : raw.vertices)
    if (!declared.insert(v).second)
      out.push_back({K::kStructure, "duplicate " + vname(v), {v}});
  for (auto [a, b] : raw.edges)
    for (VertexId v : {a, b})
      if (!declared.count(v))
        out.push_back({K::kUndeclaredVertex, "edge references undeclared " + vname(v), {v}});
  for (const auto& [v, name] : raw.labels)
    if (!declared.count(v))
      out.push_back({K::kUndeclaredVertex, "label on undeclared " + vname(v), {v}});
  if (raw.root && !declared.count(*raw.root))
    out.push_back({K::kUndeclaredVertex, "root is undeclared " + vname(*raw.root), {*raw.root}});
  if (raw.vertices.empty()) out.push_back({K::kMissingRoot, "empty graph", {}});
  if (!out.empty()) return result;

  Multigraph g = Multigraph::build(raw.vertices, raw.edges, raw.labels);

  std::vector<VertexId> sources;
  for (VertexId v : g.vertices())
    if (g.in_degree(v) == 0) sources.push_back(v);
  VertexId root = kNoVertex;
  if (raw.root) {
    root = *raw.root;
  } else {
    root = sources.empty() ? g.vertices().front() : sources.front();
  }
  if (sources.empty()) out.push_back({K::kMissingRoot, "no vertex of in-degree 0", {}});
  if (sources.size() > 1)
    out.push_back({K::kMultipleSources, std::to_string(sources.size()) + " vertices of in-degree 0",
                   sources});

  std::map<std::string, VertexId> seen_labels;
  for (VertexId v : g.vertices()) {
    const std::size_t in = g.in_degree(v), o = g.out_degree(v);
    const std::string deg = " has degrees (" + std::to_string(in) + "," + std::to_string(o) + ")";
    if (v == root) {
      if (in != 0 || o != 1) out.push_back({K::kDegree, "root " + vname(v) + deg, {v}});
      if (g.is_labelled(v)) out.push_back({K::kLabel, "root " + vname(v) + " is labelled", {v}});
      continue;
    }
    if (o == 0) {
      if (in != 1) out.push_back({K::kDegree, "leaf " + vname(v) + deg, {v}});
      if (!g.is_labelled(v)) {
        out.push_back({K::kLabel, "leaf " + vname(v) + " has no label", {v}});
      } else {
        auto [it, fresh] = seen_labels.emplace(g.label(v), v);
        if (!fresh)
          out.push_back({K::kLabel, "label '" + g.label(v) + "' on " + vname(it->second) + " and " +
                                        vname(v),
                         {it->second, v}});
      }
      continue;
    }
    if (!((in == 1 && o == 2) || (in == 2 && o == 1)))
      out.push_back({K::kDegree, vname(v) + deg, {v}});
    if (g.is_labelled(v))
      out.push_back({K::kLabel, "internal " + vname(v) + " is labelled", {v}});
  }

  // Kahn's algorithm; whatever remains lies on or below a cycle.
  std::vector<std::size_t> indeg(g.id_bound(), 0);
  std::deque<VertexId> queue;
  for (VertexId v : g.vertices()) {
    indeg[v] = g.in_degree(v);
    if (indeg[v] == 0) queue.push_back(v);
  }
  std::size_t removed = 0;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    ++removed;
    for (EdgeIndex e : g.out_edges(v))
      if (--indeg[g.edge(e).to] == 0) queue.push_back(g.edge(e).to);
  }
  if (removed != g.vertex_count()) {
    std::vector<VertexId> cyc;
    for (VertexId v : g.vertices())
      if (indeg[v] > 0) cyc.push_back(v);
    out.push_back({K::kCycle, "directed cycle through " + vname(cyc.front()), cyc});
  }

  // Undirected reachability from the root.
  std::vector<char> seen(g.id_bound(), 0);
  std::vector<VertexId> stack{root};
  seen[root] = 1;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    auto visit = [&](VertexId w) {
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    };
    for (EdgeIndex e : g.out_edges(v)) visit(g.edge(e).to);
    for (EdgeIndex e : g.in_edges(v)) visit(g.edge(e).from);
  }
  std::vector<VertexId> unreached;
  for (VertexId v : g.vertices())
    if (!seen[v]) unreached.push_back(v);
  if (!unreached.empty())
    out.push_back({K::kDisconnected, vname(unreached.front()) + " is not connected to the root",
                   unreached});

  if (!out.empty()) return result;
  Network n;
  static_cast<Multigraph&>(n) = std::move(g);
  n.root_ = root;
  result.value = std::move(n);
  return result;
}

bool is_tree_child(const Network& n) {
  for (VertexId v : n.vertices()) {
    if (n.is_leaf(v)) continue;
    bool ok = false;
    for (EdgeIndex e : n.out_edges(v)) {
      VertexId c = n.edge(e).to;
      if (n.is_leaf(c) || n.is_tree_vertex(c)) ok = true;
    }
    if (!ok) return false;
  }
  return true;
}

TreeChildReport tree_child_report(const Network& n) {
  TreeChildReport r;
  for (const Edge& e : n.edges())
    if (n.is_reticulation(e.from) && n.is_reticulation(e.to)) r.stacks.push_back(e);
  for (VertexId v : n.vertices()) {
    auto out = n.out_edges(v);
    if (out.size() != 2) continue;
    const Edge& a = n.edge(out[0]);
    const Edge& b = n.edge(out[1]);
    if (a.to == b.to) {
      r.parallel_pairs.emplace_back(a, b);
    } else if (n.is_reticulation(a.to) && n.is_reticulation(b.to)) {
      r.sibling_reticulations.emplace_back(std::min(a.to, b.to), std::max(a.to, b.to));
    }
  }
  const bool characterized =
      r.stacks.empty() && r.sibling_reticulations.empty() && r.parallel_pairs.empty();
  r.is_tree_child = is_tree_child(n);
  if (r.is_tree_child != characterized)
    throw std::logic_error("tree-child definition and characterization disagree");
  return r;
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound) {
  if (bound == 0) throw PreconditionError("uniform_index: empty range");
  const std::uint64_t b = bound;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % b;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % b);
}

std::string generated_taxon(std::size_t i) { return "t" + std::to_string(i + 1); }

}  // namespace snprlab

namespace snprlab {

std::vector<char> descendants(const Multigraph& g, VertexId v) {
  std::vector<char> reach(g.id_bound(), 0);
  std::vector<VertexId> stack{v};
  reach[v] = 1;
  while (!stack.empty()) {
    VertexId x = stack.back();
    stack.pop_back();
    for (EdgeIndex e : g.out_edges(x)) {
      VertexId y = g.edge(e).to;
      if (!reach[y]) {
        reach[y] = 1;
        stack.push_back(y);
      }
    }
  }
  return reach;
}

std::vector<VertexId> topological_order(const Multigraph& g) {
  std::vector<std::size_t> indeg(g.id_bound(), 0);
  std::vector<VertexId> order;
  for (VertexId v : g.vertices()) {
    indeg[v] = g.in_degree(v);
    if (indeg[v] == 0) order.push_back(v);
  }
  for (std::size_t i = 0; i < order.size(); ++i)
    for (EdgeIndex e : g.out_edges(order[i]))
      if (--indeg[g.edge(e).to] == 0) order.push_back(g.edge(e).to);
  return order;
}

}  // namespace snprlab
