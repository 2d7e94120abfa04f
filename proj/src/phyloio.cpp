#include "snprlab/phyloio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "snprlab/canonical.hpp"

namespace snprlab {

namespace {

constexpr std::size_t kMaxDepth = 4096;

class NewickParser {
 public:
  explicit NewickParser(std::string_view text) : s_(text) {}

  Network run() {
    raw_.vertices.push_back(0);
    where_.push_back(0);
    raw_.root = 0;
    skip();
    VertexId top = node(0);
    raw_.edges.emplace_back(0, top);
    skip();
    if (pos_ >= s_.size() || s_[pos_] != ';') fail("expected ';'");
    ++pos_;
    skip();
    if (pos_ != s_.size()) fail("unexpected text after ';'");
    for (const auto& [name, t] : tags_) {
      if (!t.defined) throw ParseError("#H" + name + " is never defined", t.first);
      if (t.refs != 2)
        throw ParseError("#H" + name + " used " + std::to_string(t.refs) +
                             " times as a child (expected 2)",
                         t.first);
    }
    auto checked = validate(raw_);
    if (!checked) {
      const Violation& v = checked.violations.front();
      const std::size_t at = v.vertices.empty() ? 0 : where_[v.vertices.front()];
      throw ParseError(describe(checked.violations) + " (node at position " + std::to_string(at) + ")",
                       at);
    }
    return std::move(*checked.value);
  }

 private:
  struct Tag {
    VertexId v = kNoVertex;
    bool defined = false;
    int refs = 0;
    std::size_t first = 0;
  };

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at position " + std::to_string(pos_), pos_);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  VertexId fresh() {
    VertexId v = static_cast<VertexId>(raw_.vertices.size());
    raw_.vertices.push_back(v);
    where_.push_back(pos_);
    return v;
  }

  // Parses "#H<digits>" at pos_ and returns the tag record.
  Tag& tag() {
    const std::size_t start = pos_;
    // Point at the offending byte, not the start of the tag.
    if (s_.compare(pos_, 2, "#H") != 0) {
      if (pos_ < s_.size() && s_[pos_] == '#') ++pos_;
      fail("expected '#H'");
    }
    pos_ += 2;
    const std::size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == digits) fail("expected digits after '#H'");
    std::string key(s_.substr(digits, pos_ - digits));
    auto [it, fresh_tag] = tags_.try_emplace(key);
    if (fresh_tag) {
      it->second.v = fresh();
      it->second.first = start;
    }
    return it->second;
  }

  VertexId node(std::size_t depth) {
    if (depth > kMaxDepth) fail("nesting too deep");
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '#') {
      Tag& t = tag();
      ++t.refs;
      return t.v;
    }
    if (c == '(') {
      ++pos_;
      std::vector<VertexId> kids{node(depth + 1)};
      skip();
      if (pos_ < s_.size() && s_[pos_] == ',') {
        ++pos_;
        kids.push_back(node(depth + 1));
        skip();
      }
      if (pos_ >= s_.size() || s_[pos_] != ')') fail(kids.size() == 2 ? "expected ')'" : "expected ',' or ')'");
      ++pos_;
      skip();
      VertexId v;
      if (pos_ < s_.size() && s_[pos_] == '#') {
        const std::size_t at = pos_;
        Tag& t = tag();
        if (t.defined) throw ParseError("reticulation tag defined twice at position " + std::to_string(at), at);
        t.defined = true;
        ++t.refs;
        v = t.v;
      } else {
        if (kids.size() != 2) fail("single-child node must carry a reticulation tag");
        v = fresh();
      }
      for (VertexId k : kids) raw_.edges.emplace_back(v, k);
      return v;
    }
    if (name_char(c)) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && name_char(s_[pos_])) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      if (!names_.insert(name).second)
        throw ParseError("duplicate leaf label '" + name + "' at position " + std::to_string(start),
                         start);
      VertexId v = fresh();
      raw_.labels[v] = std::move(name);
      return v;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  RawGraph raw_;
  std::vector<std::size_t> where_;  // source offset per vertex
  std::map<std::string, Tag> tags_;
  std::set<std::string> names_;
};

}  // namespace

Network parse_enewick(std::string_view text) { return NewickParser(text).run(); }

std::string write_enewick(const Network& n) {
  CanonicalForm cf = canonical_form(n);
  std::vector<std::size_t> pos(n.id_bound(), 0);
  for (std::size_t i = 0; i < cf.order.size(); ++i) pos[cf.order[i]] = i;
  std::vector<int> tag(n.id_bound(), 0);
  int next_tag = 0;
  std::string out;
  // Explicit stack keeps deep networks off the call stack.
  struct Frame {
    VertexId v;
    std::size_t child;
  };
  auto sorted_children = [&](VertexId v) {
    std::vector<VertexId> c = n.children(v);
    std::sort(c.begin(), c.end(), [&](VertexId a, VertexId b) { return pos[a] < pos[b]; });
    return c;
  };
  std::vector<Frame> stack;
  std::vector<std::vector<VertexId>> kids(n.id_bound());
  auto enter = [&](VertexId v) {
    if (n.is_leaf(v)) {
      out += n.label(v);
      return;
    }
    if (n.is_reticulation(v) && tag[v]) {
      out += "#H" + std::to_string(tag[v]);
      return;
    }
    if (n.is_reticulation(v)) tag[v] = ++next_tag;
    kids[v] = sorted_children(v);
    out += '(';
    stack.push_back({v, 0});
  };
  enter(n.children(n.root()).front());
  while (!stack.empty()) {
    Frame& f = stack.back();
    const VertexId v = f.v;
    if (f.child < kids[v].size()) {
      if (f.child > 0) out += ',';
      VertexId c = kids[v][f.child++];
      enter(c);
      continue;
    }
    out += ')';
    if (n.is_reticulation(v)) out += "#H" + std::to_string(tag[v]);
    stack.pop_back();
  }
  out += ';';
  return out;
}

namespace {

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

VertexId parse_id(std::string_view tok, std::size_t line) {
  VertexId v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size() || v == kNoVertex)
    throw ParseError("line " + std::to_string(line) + ": bad vertex id '" + std::string(tok) + "'", 0,
                     line);
  return v;
}

}  // namespace

PndDocument parse_pnd_document(std::string_view text, const PndOptions& options) {
  PndDocument doc;
  doc.sections.emplace_back();
  bool header = false;
  std::size_t line_no = 0;
  std::set<VertexId> declared;
  auto err = [&](const std::string& what) -> ParseError {
    return ParseError("line " + std::to_string(line_no) + ": " + what, 0, line_no);
  };
  auto close_section = [&](PndSection& sec) {
    const std::set<VertexId> local(sec.graph.vertices.begin(), sec.graph.vertices.end());
    auto need = [&](VertexId v, std::size_t line) {
      if (!local.count(v))
        throw ParseError("line " + std::to_string(line) + ": undeclared vertex " + std::to_string(v), 0,
                         line);
    };
    for (std::size_t i = 0; i < sec.graph.edges.size(); ++i) {
      need(sec.graph.edges[i].first, sec.edge_lines[i]);
      need(sec.graph.edges[i].second, sec.edge_lines[i]);
    }
    for (const auto& [v, name] : sec.graph.labels) need(v, sec.first_line);
    if (sec.graph.root) need(*sec.graph.root, sec.first_line);
    if (sec.rho) need(*sec.rho, sec.first_line);
    if (options.require_root && !sec.graph.root)
      throw ParseError("missing root declaration", 0, sec.first_line);
  };

  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = tokens(line);
    if (tok.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (!header) {
      if (tok.size() != 2 || tok[0] != "pnd" || tok[1] != "1") throw err("expected header 'pnd 1'");
      header = true;
      doc.sections.back().first_line = line_no;
      continue;
    }
    PndSection& sec = doc.sections.back();
    const std::string_view d = tok[0];
    if (d == "vertex") {
      if (tok.size() != 2) throw err("usage: vertex <id>");
      VertexId v = parse_id(tok[1], line_no);
      if (!declared.insert(v).second) throw err("vertex " + std::to_string(v) + " declared twice");
      sec.graph.vertices.push_back(v);
    } else if (d == "leaf") {
      if (tok.size() != 3) throw err("usage: leaf <id> <label>");
      VertexId v = parse_id(tok[1], line_no);
      if (!sec.graph.labels.emplace(v, std::string(tok[2])).second)
        throw err("vertex " + std::to_string(v) + " labelled twice");
    } else if (d == "root") {
      if (tok.size() != 2) throw err("usage: root <id>");
      if (sec.graph.root) throw err("second root declaration");
      sec.graph.root = parse_id(tok[1], line_no);
    } else if (d == "rho") {
      if (!options.allow_components) throw err("unknown directive 'rho'");
      if (tok.size() != 2) throw err("usage: rho <id>");
      if (sec.rho) throw err("second rho declaration");
      sec.rho = parse_id(tok[1], line_no);
    } else if (d == "edge") {
      if (tok.size() != 3 && !(options.allow_annotations && tok.size() == 4))
        throw err(options.allow_annotations ? "usage: edge <from> <to> [annotation]"
                                            : "usage: edge <from> <to>");
      sec.graph.edges.emplace_back(parse_id(tok[1], line_no), parse_id(tok[2], line_no));
      sec.edge_annotations.emplace_back(tok.size() == 4 ? std::string(tok[3]) : std::string());
      sec.edge_lines.push_back(line_no);
    } else if (d == "component") {
      if (!options.allow_components) throw err("unknown directive 'component'");
      if (tok.size() != 1) throw err("usage: component");
      doc.sections.emplace_back();
      doc.sections.back().first_line = line_no;
    } else {
      throw err("unknown directive '" + std::string(d) + "'");
    }
    if (end == text.size()) break;
  }
  if (!header) throw ParseError("missing header 'pnd 1'", 0, line_no);
  // A document may open directly with a separator.
  if (options.allow_components) {
    PndSection& lead = doc.sections.front();
    if (lead.graph.vertices.empty() && lead.graph.edges.empty() && lead.graph.labels.empty() &&
        !lead.graph.root && !lead.rho)
      doc.sections.erase(doc.sections.begin());
  }
  for (PndSection& sec : doc.sections) close_section(sec);
  return doc;
}

Network parse_pnd(std::string_view text) {
  PndDocument doc = parse_pnd_document(text, {});
  return Network::from_raw(doc.sections.front().graph);
}

std::string pnd_body(const Multigraph& g, std::optional<VertexId> root, std::optional<VertexId> rho,
                     const std::vector<std::string>& edge_annotations) {
  std::ostringstream out;
  for (VertexId v : g.vertices()) out << "vertex " << v << '\n';
  if (root) out << "root " << *root << '\n';
  if (rho) out << "rho " << *rho << '\n';
  for (VertexId v : g.vertices())
    if (g.is_labelled(v)) out << "leaf " << v << ' ' << g.label(v) << '\n';
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    out << "edge " << g.edge(e).from << ' ' << g.edge(e).to;
    if (e < edge_annotations.size() && !edge_annotations[e].empty()) out << ' ' << edge_annotations[e];
    out << '\n';
  }
  return out.str();
}

std::string write_pnd(const Network& n) { return "pnd 1\n" + pnd_body(n, n.root(), std::nullopt); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Network parse_network(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (text.substr(i, 3) == "pnd" || text.substr(i, 1) == "#") return parse_pnd(text);
  return parse_enewick(text);
}

}  // namespace snprlab
