#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snprlab/network.hpp"

namespace snprlab {

// Extended Newick subset:
//   network := node ";"
//   node    := leaf | tag | "(" node "," node ")" tag? | "(" node ")" tag
//   tag     := "#H" digits        leaf := [A-Za-z0-9_]+
// Whitespace between tokens is ignored. A root of out-degree one is added
// above the top-level node. Every error is a ParseError with a byte offset,
// including merged reticulations that break the binary degree rules.
Network parse_enewick(std::string_view text);

// Children in canonical order; reticulations are written as "(child)#Hk" on
// first visit and as "#Hk" afterwards, numbered in visit order.
std::string write_enewick(const Network& n);

// Line-oriented edge list. `pnd 1` first, then in any order:
//   vertex <id> | leaf <id> <label> | root <id> | edge <from> <to> [annotation]
// Digraph documents additionally use `component` separators and `rho <id>`.
// `#` starts a comment.
struct PndSection {
  RawGraph graph;
  std::optional<VertexId> rho;
  std::vector<std::string> edge_annotations;  // parallel to graph.edges; "" if none
  std::vector<std::size_t> edge_lines;        // 1-based source lines
  std::size_t first_line = 0;
};

struct PndDocument {
  std::vector<PndSection> sections;
};

struct PndOptions {
  bool allow_components = false;
  bool allow_annotations = false;
  bool require_root = true;  // per section
};

// Throws ParseError (with line) on unknown directives, malformed records,
// references to undeclared vertices, or a missing root.
PndDocument parse_pnd_document(std::string_view text, const PndOptions& options);

Network parse_pnd(std::string_view text);
std::string write_pnd(const Network& n);

// Record lines (no header) for one graph; a non-empty annotation is appended
// to the corresponding edge line.
std::string pnd_body(const Multigraph& g, std::optional<VertexId> root, std::optional<VertexId> rho,
                     const std::vector<std::string>& edge_annotations = {});

// Reads a whole file; throws Error on I/O failure.
std::string read_file(const std::string& path);

// Picks eNewick or PND by content (PND documents start with "pnd").
Network parse_network(std::string_view text);

}  // namespace snprlab
