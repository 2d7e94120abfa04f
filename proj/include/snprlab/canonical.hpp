#pragma once

#include <optional>
#include <string>
#include <vector>

#include "snprlab/network.hpp"

namespace snprlab {

struct CanonicalForm {
  // Equal for two networks iff they are isomorphic (leaf labels fixed).
  std::string signature;
  // Vertices of the network in canonical position order.
  std::vector<VertexId> order;
};

CanonicalForm canonical_form(const Network& n);
std::string canonical_signature(const Network& n);
// Inverse of canonical_signature: the network whose vertex ids are the
// canonical positions. Throws ParseError on malformed input.
Network network_from_signature(const std::string& signature);
// Same for an arbitrary labelled multigraph; `tags` (by vertex id) must be
// preserved by isomorphisms, like the vertex kinds of a network.
CanonicalForm canonical_form(const Multigraph& g, const std::vector<char>& tags);

// Label-preserving isomorphism from n to m by leaf-anchored backtracking;
// result is indexed by n's vertex ids. Independent of canonical_form.
std::optional<std::vector<VertexId>> find_isomorphism(const Network& n, const Network& m);
bool isomorphic(const Network& n, const Network& m);

}  // namespace snprlab
