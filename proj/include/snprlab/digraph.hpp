#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snprlab/network.hpp"

namespace snprlab {

enum class ComponentCase {
  kIsolatedRho,  // the bare root marker
  kSingleLeaf,   // one labelled isolated vertex
  kGeneral,      // acyclic, labelled (1,0) sinks, others (0,2)/(1,2)/(2,1), optional (0,1) root
};

struct RawComponent {
  RawGraph graph;  // graph.root is ignored
  std::optional<VertexId> rho;
};

// One component of a phylogenetic digraph. Vertex ids are local to the
// component (quotients reuse host ids).
class LeafDigraph : public Multigraph {
 public:
  LeafDigraph() = default;

  ComponentCase component_case() const { return case_; }
  std::optional<VertexId> rho() const { return rho_; }
  bool has_rho() const { return rho_.has_value(); }
  bool is_leaf(VertexId v) const { return is_labelled(v); }
  bool is_tree_vertex(VertexId v) const { return out_degree(v) == 2; }
  bool is_reticulation(VertexId v) const { return in_degree(v) == 2; }
  std::vector<std::string> taxa() const;

  RawComponent to_raw() const;

 private:
  friend Checked<LeafDigraph> validate_component(const RawComponent&,
                                                 const std::vector<std::string>*);
  std::optional<VertexId> rho_;
  ComponentCase case_ = ComponentCase::kGeneral;
};

// `allowed_taxa` (sorted) may be null to accept any label.
Checked<LeafDigraph> validate_component(const RawComponent& c,
                                        const std::vector<std::string>* allowed_taxa = nullptr);

class PhyloDigraph {
 public:
  PhyloDigraph() = default;

  const std::vector<LeafDigraph>& components() const { return components_; }
  const LeafDigraph& component(std::size_t i) const { return components_[i]; }
  std::size_t size() const { return components_.size(); }
  std::size_t rho_component() const { return rho_component_; }
  const std::vector<std::string>& taxa() const { return taxa_; }
  // Component holding `label`, if any.
  std::optional<std::size_t> component_of(std::string_view label) const;

 private:
  friend Checked<PhyloDigraph> validate_digraph(std::vector<LeafDigraph>,
                                                std::vector<std::string>);
  std::vector<LeafDigraph> components_;
  std::size_t rho_component_ = 0;
  std::vector<std::string> taxa_;  // sorted
};

// Checks that the leaf sets partition `taxa` and that exactly one component
// carries ρ. Displayability is left to the embedding search.
Checked<PhyloDigraph> validate_digraph(std::vector<LeafDigraph> components,
                                       std::vector<std::string> taxa);

// Every non-leaf vertex has a child that is a leaf or a tree vertex (an
// isolated ρ counts as a leaf here).
bool is_tree_child_digraph(const PhyloDigraph& d);
bool is_tree_child_component(const LeafDigraph& c);

// Equal iff the two digraphs have isomorphic components (ρ marked).
std::string component_signature(const LeafDigraph& c);
std::string digraph_signature(const PhyloDigraph& d);

// The network itself as a one-component digraph with ρ.
PhyloDigraph digraph_of(const Network& n);

// A component of a host subgraph after suppressing its (1,1) vertices. The
// digraph keeps host vertex ids; `paths[i]` lists the host edges behind
// digraph edge i, top to bottom.
struct QuotientComponent {
  LeafDigraph digraph;
  std::vector<VertexId> host_vertices;  // sorted, including suppressed ones
  std::vector<EdgeIndex> host_edges;    // sorted
  std::vector<std::vector<EdgeIndex>> paths;
};

// Splits the subgraph (vertices ∪ endpoints of edges) of `host` into weakly
// connected components and suppresses (1,1) vertices in each. The host root,
// if present, becomes the ρ marker of its component.
Checked<std::vector<QuotientComponent>> quotient(const Network& host,
                                                 std::span<const VertexId> vertices,
                                                 std::span<const EdgeIndex> edges);

// PND with one `component` section per component and `rho <id>` markers.
// Vertex ids must be distinct across components for the text to re-parse.
std::string write_digraph(const PhyloDigraph& d);
PhyloDigraph parse_digraph(std::string_view text, const std::vector<std::string>& taxa);

}  // namespace snprlab
