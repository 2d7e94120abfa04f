#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "snprlab/digraph.hpp"
#include "snprlab/embed.hpp"
#include "snprlab/network.hpp"
#include "snprlab/snpr.hpp"

namespace snprlab {

struct Candidate {
  PhyloDigraph digraph;
  Embedding embedding;  // in the network the edges came from
};

// The digraph obtained from the subgraph with the given edges plus every
// leaf and the root, after suppressing (1,1) vertices. Absent if some
// component of the quotient is not a valid leaf-labelled digraph.
std::optional<Candidate> candidate_from_edges(const Network& n, std::span<const EdgeIndex> edges);

struct AgreementWitness {
  PhyloDigraph digraph;
  Embedding embedding_n, embedding_m;
  Extension extension_n, extension_m;
  std::size_t cut_n = 0, cut_m = 0;

  std::size_t cut_sum() const { return cut_n + cut_m; }
};

struct AgreementOptions {
  bool tree_child_only = true;
  // Largest number of edge subsets of the first network to look at.
  std::uint64_t subset_budget = std::uint64_t{1} << 24;
};

// Digraphs of n (one per isomorphism class, from edge subsets with the fewest
// excluded edges first) that m displays. Throws BudgetExceeded when n has
// more than subset_budget subsets. Returning false from `visit` stops.
void for_each_agreement_digraph(const Network& n, const Network& m, const AgreementOptions& opts,
                                const std::function<bool(AgreementWitness&&)>& visit);
std::vector<AgreementWitness> enumerate_agreement_digraphs(const Network& n, const Network& m,
                                                           const AgreementOptions& opts = {});

struct MtcResult {
  std::size_t value = 0;
  AgreementWitness witness;
};

// Minimum cut_n + cut_m over agreement tree-child digraphs. Ties go to the
// smallest digraph signature.
MtcResult mtc(const Network& n, const Network& m, const AgreementOptions& opts = {});

struct BoundsReport {
  std::size_t m = 0;  // m_tc; half_m = m / 2
  std::size_t d = 0;  // d_tc
  bool holds = false;

  double half_m() const { return static_cast<double>(m) / 2.0; }
  // "1", "0.5", ...
  std::string half_m_text() const;
  // half_m, d, m, holds separated by tabs.
  std::string tsv() const;
};

BoundsReport make_report(std::size_t m, std::size_t d);
BoundsReport check_bounds(const Network& n, const Network& m, const DistanceOptions& dopts = {},
                          const AgreementOptions& aopts = {});
// Same, answering the distance from a shared search space.
BoundsReport check_bounds(const Network& n, const Network& m, TreeChildSpace& space,
                          const DistanceOptions& dopts = {}, const AgreementOptions& aopts = {});

// Rooted SPR distance of two trees via a brute-force maximum agreement forest
// over set partitions of X ∪ {ρ}. Shares no code with the embedding search.
// Throws PreconditionError if an input has reticulations or the taxa differ.
std::size_t maf_rspr(const Network& t, const Network& u);

struct GapWitness {
  Network n, m;
  BoundsReport report;
  std::size_t trials = 0;
};

// Seeded sampling of tree-child pairs on `n_leaves` leaves with at most `r`
// reticulations each, stopping at the first pair with d_tc < m_tc (every
// such pair is also checked against the bounds). `budget` counts pairs.
std::optional<GapWitness> gap_witness_search(std::size_t n_leaves, std::size_t r, std::size_t budget,
                                             std::uint64_t seed = 0, const DistanceOptions& dopts = {});

// Host n with its extension, host m with its extension, then the digraph,
// each a PND document after a "--- name" line.
std::string write_bundle(const Network& n, const Network& m, const AgreementWitness& w);

}  // namespace snprlab
