#include "snprlab/digraph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "snprlab/canonical.hpp"
#include "snprlab/phyloio.hpp"

namespace snprlab {

namespace {

using K = Violation::Kind;

std::string vname(VertexId v) { return "vertex " + std::to_string(v); }

std::string degrees(const Multigraph& g, VertexId v) {
  return "(" + std::to_string(g.in_degree(v)) + "," + std::to_string(g.out_degree(v)) + ")";
}

}  // namespace

std::vector<std::string> LeafDigraph::taxa() const {
  std::vector<std::string> out;
  for (VertexId v : vertices())
    if (is_labelled(v)) out.push_back(label(v));
  std::sort(out.begin(), out.end());
  return out;
}

RawComponent LeafDigraph::to_raw() const { return {Multigraph::to_raw(), rho_}; }

Checked<LeafDigraph> validate_component(const RawComponent& c,
                                        const std::vector<std::string>* allowed) {
  Checked<LeafDigraph> result;
  auto& out = result.violations;
  const RawGraph& raw = c.graph;

  std::set<VertexId> declared;
  for (VertexId v : raw.vertices)
    if (!declared.insert(v).second) out.push_back({K::kStructure, "duplicate " + vname(v), {v}});
  for (auto [a, b] : raw.edges)
    for (VertexId v : {a, b})
      if (!declared.count(v))
        out.push_back({K::kUndeclaredVertex, "edge references undeclared " + vname(v), {v}});
  for (const auto& [v, name] : raw.labels)
    if (!declared.count(v))
      out.push_back({K::kUndeclaredVertex, "label on undeclared " + vname(v), {v}});
  if (c.rho && !declared.count(*c.rho))
    out.push_back({K::kUndeclaredVertex, "rho is undeclared " + vname(*c.rho), {*c.rho}});
  if (raw.vertices.empty()) out.push_back({K::kStructure, "empty component", {}});
  if (!out.empty()) return result;

  Multigraph g = Multigraph::build(raw.vertices, raw.edges, raw.labels);
  std::set<std::string> names;
  for (VertexId v : g.vertices()) {
    if (!g.is_labelled(v)) continue;
    const std::string& l = g.label(v);
    if (!names.insert(l).second)
      out.push_back({K::kLabel, "label '" + l + "' used twice", {v}});
    if (allowed && !std::binary_search(allowed->begin(), allowed->end(), l))
      out.push_back({K::kLabel, "label '" + l + "' is not an allowed taxon", {v}});
  }
  if (c.rho && g.is_labelled(*c.rho)) out.push_back({K::kLabel, "rho is labelled", {*c.rho}});

  ComponentCase kind = ComponentCase::kGeneral;
  if (g.vertex_count() == 1 && g.edge_count() == 0) {
    VertexId v = g.vertices().front();
    if (c.rho == v) {
      kind = ComponentCase::kIsolatedRho;
    } else if (g.is_labelled(v)) {
      kind = ComponentCase::kSingleLeaf;
    } else {
      out.push_back({K::kLabel, "isolated unlabelled " + vname(v), {v}});
    }
  } else {
    for (VertexId v : g.vertices()) {
      const std::size_t in = g.in_degree(v), o = g.out_degree(v);
      if (g.is_labelled(v)) {
        if (in != 1 || o != 0)
          out.push_back({K::kDegree, "leaf " + vname(v) + " has degrees " + degrees(g, v), {v}});
      } else if (c.rho == v) {
        if (in != 0 || o != 1)
          out.push_back({K::kDegree, "rho " + vname(v) + " has degrees " + degrees(g, v), {v}});
      } else if (o == 0) {
        out.push_back({K::kLabel, "unlabelled sink " + vname(v), {v}});
      } else if (in == 0 && o == 1) {
        out.push_back({K::kMultipleSources, "non-rho " + vname(v) + " has degrees (0,1)", {v}});
      } else if (!((in == 0 && o == 2) || (in == 1 && o == 2) || (in == 2 && o == 1))) {
        out.push_back({K::kDegree, vname(v) + " has degrees " + degrees(g, v), {v}});
      }
    }
    auto order = topological_order(g);
    if (order.size() != g.vertex_count()) {
      std::vector<char> done(g.id_bound(), 0);
      for (VertexId v : order) done[v] = 1;
      std::vector<VertexId> cyc;
      for (VertexId v : g.vertices())
        if (!done[v]) cyc.push_back(v);
      out.push_back({K::kCycle, "directed cycle through " + vname(cyc.front()), cyc});
    }
    // Weak connectivity.
    std::vector<char> seen(g.id_bound(), 0);
    std::vector<VertexId> stack{g.vertices().front()};
    seen[stack.back()] = 1;
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      for (VertexId w : g.children(v))
        if (!seen[w]) seen[w] = 1, stack.push_back(w);
      for (VertexId w : g.parents(v))
        if (!seen[w]) seen[w] = 1, stack.push_back(w);
    }
    std::vector<VertexId> unreached;
    for (VertexId v : g.vertices())
      if (!seen[v]) unreached.push_back(v);
    if (!unreached.empty())
      out.push_back({K::kDisconnected, "component is not connected", unreached});
  }
  if (!out.empty()) return result;

  LeafDigraph d;
  static_cast<Multigraph&>(d) = std::move(g);
  d.rho_ = c.rho;
  d.case_ = kind;
  result.value = std::move(d);
  return result;
}

std::optional<std::size_t> PhyloDigraph::component_of(std::string_view label) const {
  for (std::size_t i = 0; i < components_.size(); ++i)
    for (VertexId v : components_[i].vertices())
      if (components_[i].label(v) == label) return i;
  return std::nullopt;
}

Checked<PhyloDigraph> validate_digraph(std::vector<LeafDigraph> components,
                                       std::vector<std::string> taxa) {
  Checked<PhyloDigraph> result;
  auto& out = result.violations;
  std::sort(taxa.begin(), taxa.end());
  std::map<std::string, int> count;
  for (const auto& c : components)
    for (const auto& t : c.taxa()) ++count[t];
  for (const auto& t : taxa) {
    if (!count.count(t)) out.push_back({K::kLabel, "taxon '" + t + "' is missing", {}});
    else if (count[t] > 1)
      out.push_back({K::kLabel, "taxon '" + t + "' appears in " + std::to_string(count[t]) + " components", {}});
  }
  for (const auto& [t, k] : count)
    if (!std::binary_search(taxa.begin(), taxa.end(), t))
      out.push_back({K::kLabel, "label '" + t + "' is not a taxon", {}});
  std::vector<std::size_t> with_rho;
  for (std::size_t i = 0; i < components.size(); ++i)
    if (components[i].has_rho()) with_rho.push_back(i);
  if (with_rho.empty()) out.push_back({K::kMissingRoot, "no component contains rho", {}});
  if (with_rho.size() > 1)
    out.push_back({K::kMultipleSources, std::to_string(with_rho.size()) + " components contain rho", {}});
  if (!out.empty()) return result;

  PhyloDigraph d;
  d.components_ = std::move(components);
  d.rho_component_ = with_rho.front();
  d.taxa_ = std::move(taxa);
  result.value = std::move(d);
  return result;
}

bool is_tree_child_component(const LeafDigraph& c) {
  for (VertexId v : c.vertices()) {
    if (c.out_degree(v) == 0) continue;
    bool ok = false;
    for (VertexId w : c.children(v))
      if (c.is_leaf(w) || c.is_tree_vertex(w)) ok = true;
    if (!ok) return false;
  }
  return true;
}

bool is_tree_child_digraph(const PhyloDigraph& d) {
  return std::all_of(d.components().begin(), d.components().end(), is_tree_child_component);
}

std::string component_signature(const LeafDigraph& c) {
  std::vector<char> tags(c.id_bound(), 0);
  if (c.rho()) tags[*c.rho()] = 1;
  return canonical_form(c, tags).signature;
}

std::string digraph_signature(const PhyloDigraph& d) {
  std::vector<std::string> parts;
  for (const auto& c : d.components()) parts.push_back(component_signature(c));
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& p : parts) {
    out += std::to_string(p.size());
    out += ':';
    out += p;
  }
  return out;
}

PhyloDigraph digraph_of(const Network& n) {
  RawComponent rc{n.Multigraph::to_raw(), n.root()};
  auto comp = validate_component(rc);
  if (!comp) throw ValidationError(comp.violations, "invalid component");
  std::vector<LeafDigraph> comps{std::move(*comp.value)};
  auto d = validate_digraph(std::move(comps), n.taxa());
  if (!d) throw ValidationError(d.violations, "invalid digraph");
  return std::move(*d.value);
}

Checked<std::vector<QuotientComponent>> quotient(const Network& host,
                                                 std::span<const VertexId> vertices,
                                                 std::span<const EdgeIndex> edges) {
  Checked<std::vector<QuotientComponent>> result;
  const std::size_t bound = host.id_bound();
  std::vector<char> in_h(bound, 0);
  std::vector<std::vector<EdgeIndex>> out_h(bound), in_edges_h(bound);
  for (VertexId v : vertices) in_h[v] = 1;
  for (EdgeIndex e : edges) {
    const Edge& ed = host.edge(e);
    in_h[ed.from] = in_h[ed.to] = 1;
    out_h[ed.from].push_back(e);
    in_edges_h[ed.to].push_back(e);
  }
  auto suppressed = [&](VertexId v) { return in_edges_h[v].size() == 1 && out_h[v].size() == 1; };

  // Weak components by union-find.
  std::vector<VertexId> parent(bound);
  for (VertexId v = 0; v < bound; ++v) parent[v] = v;
  auto find = [&](VertexId v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (EdgeIndex e : edges) parent[find(host.edge(e).from)] = find(host.edge(e).to);

  std::map<VertexId, std::size_t> slot;  // representative -> component index
  std::vector<QuotientComponent> comps;
  std::vector<RawComponent> raws;
  for (VertexId v : host.vertices()) {
    if (!in_h[v]) continue;
    auto [it, fresh] = slot.emplace(find(v), comps.size());
    if (fresh) {
      comps.emplace_back();
      raws.emplace_back();
    }
    QuotientComponent& qc = comps[it->second];
    RawComponent& rc = raws[it->second];
    qc.host_vertices.push_back(v);
    for (EdgeIndex e : out_h[v]) qc.host_edges.push_back(e);
    if (suppressed(v)) continue;
    rc.graph.vertices.push_back(v);
    if (host.is_labelled(v)) rc.graph.labels[v] = host.label(v);
    if (v == host.root()) rc.rho = v;
  }
  // Chains from every kept vertex.
  for (std::size_t i = 0; i < comps.size(); ++i) {
    std::sort(comps[i].host_edges.begin(), comps[i].host_edges.end());
    std::vector<std::pair<std::pair<VertexId, VertexId>, std::vector<EdgeIndex>>> chains;
    for (VertexId v : raws[i].graph.vertices) {
      for (EdgeIndex e : out_h[v]) {
        std::vector<EdgeIndex> path{e};
        VertexId w = host.edge(e).to;
        while (suppressed(w)) {
          path.push_back(out_h[w].front());
          w = host.edge(path.back()).to;
        }
        chains.push_back({{v, w}, std::move(path)});
      }
    }
    // Match the edge order Multigraph::build produces (stable by endpoints).
    std::stable_sort(chains.begin(), chains.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [ends, path] : chains) {
      raws[i].graph.edges.push_back(ends);
      comps[i].paths.push_back(std::move(path));
    }
    if (raws[i].graph.vertices.empty()) {
      // Only (1,1) vertices: impossible in an acyclic host.
      result.violations.push_back({K::kCycle, "component without endpoints", comps[i].host_vertices});
      continue;
    }
    auto checked = validate_component(raws[i]);
    if (!checked) {
      for (auto& v : checked.violations) result.violations.push_back(std::move(v));
      continue;
    }
    comps[i].digraph = std::move(*checked.value);
  }
  if (result.violations.empty()) result.value = std::move(comps);
  return result;
}

std::string write_digraph(const PhyloDigraph& d) {
  std::string out = "pnd 1\n";
  for (const auto& c : d.components()) out += "component\n" + pnd_body(c, std::nullopt, c.rho());
  return out;
}

PhyloDigraph parse_digraph(std::string_view text, const std::vector<std::string>& taxa) {
  PndOptions opt;
  opt.allow_components = true;
  opt.require_root = false;
  PndDocument doc = parse_pnd_document(text, opt);
  std::vector<std::string> sorted = taxa;
  std::sort(sorted.begin(), sorted.end());
  std::vector<LeafDigraph> comps;
  for (const PndSection& sec : doc.sections) {
    if (sec.graph.root)
      throw ParseError("digraph components use 'rho', not 'root'", 0, sec.first_line);
    auto c = validate_component({sec.graph, sec.rho}, &sorted);
    if (!c) throw ValidationError(c.violations, "invalid component at line " + std::to_string(sec.first_line));
    comps.push_back(std::move(*c.value));
  }
  auto d = validate_digraph(std::move(comps), sorted);
  if (!d) throw ValidationError(d.violations, "invalid digraph");
  return std::move(*d.value);
}

}  // namespace snprlab
