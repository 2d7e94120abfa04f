#include "snprlab/canonical.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

namespace snprlab {

namespace {

// Dense view: vertices renumbered 0..V-1 in id order.
struct Dense {
  std::vector<VertexId> ids;
  std::vector<std::vector<int>> out, in;
  std::vector<int> initial;  // rank of (tag, label)
  std::vector<char> tag;      // by dense index
};

Dense make_dense(const Multigraph& n, const std::vector<char>& tag_by_id) {
  Dense d;
  d.ids = n.vertices();
  std::vector<int> index(n.id_bound(), -1);
  for (std::size_t i = 0; i < d.ids.size(); ++i) index[d.ids[i]] = static_cast<int>(i);
  d.out.resize(d.ids.size());
  d.in.resize(d.ids.size());
  for (const Edge& e : n.edges()) {
    d.out[index[e.from]].push_back(index[e.to]);
    d.in[index[e.to]].push_back(index[e.from]);
  }
  std::vector<std::pair<int, std::string>> keys;
  for (VertexId v : d.ids) {
    d.tag.push_back(tag_by_id[v]);
    keys.emplace_back(tag_by_id[v], n.label(v));
  }
  auto sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (const auto& k : keys)
    d.initial.push_back(
        static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), k) - sorted.begin()));
  return d;
}

int class_count(const std::vector<int>& col) {
  return col.empty() ? 0 : *std::max_element(col.begin(), col.end()) + 1;
}

// Colour refinement to a stable partition. Colours are ranks, so the result
// depends only on the isomorphism type of (graph, input colouring).
std::vector<int> refine(const Dense& d, std::vector<int> col) {
  const std::size_t nv = col.size();
  using Key = std::tuple<int, std::vector<int>, std::vector<int>>;
  std::vector<Key> keys(nv);
  std::vector<int> distinct = col;
  std::sort(distinct.begin(), distinct.end());
  int classes = static_cast<int>(std::unique(distinct.begin(), distinct.end()) - distinct.begin());
  while (true) {
    for (std::size_t v = 0; v < nv; ++v) {
      std::vector<int> c, p;
      for (int w : d.out[v]) c.push_back(col[w]);
      for (int w : d.in[v]) p.push_back(col[w]);
      std::sort(c.begin(), c.end());
      std::sort(p.begin(), p.end());
      keys[v] = Key(col[v], std::move(c), std::move(p));
    }
    std::vector<const Key*> ptrs;
    for (const auto& k : keys) ptrs.push_back(&k);
    std::sort(ptrs.begin(), ptrs.end(), [](const Key* a, const Key* b) { return *a < *b; });
    ptrs.erase(std::unique(ptrs.begin(), ptrs.end(), [](const Key* a, const Key* b) { return *a == *b; }),
               ptrs.end());
    std::vector<int> next(nv);
    for (std::size_t v = 0; v < nv; ++v)
      next[v] = static_cast<int>(
          std::lower_bound(ptrs.begin(), ptrs.end(), &keys[v],
                           [](const Key* a, const Key* b) { return *a < *b; }) -
          ptrs.begin());
    const int nc = static_cast<int>(ptrs.size());
    col = std::move(next);
    if (nc == classes) return col;
    classes = nc;
  }
}

void put16(std::string& s, std::size_t x) {
  s.push_back(static_cast<char>((x >> 8) & 0xff));
  s.push_back(static_cast<char>(x & 0xff));
}

std::string certificate(const Multigraph& n, const Dense& d, const std::vector<int>& col) {
  const std::size_t nv = col.size();
  std::vector<int> at(nv);
  for (std::size_t v = 0; v < nv; ++v) at[col[v]] = static_cast<int>(v);
  std::string s;
  put16(s, nv);
  for (std::size_t p = 0; p < nv; ++p) {
    VertexId v = d.ids[at[p]];
    s.push_back(d.tag[at[p]]);
    const std::string& l = n.label(v);
    put16(s, l.size());
    s += l;
  }
  std::vector<std::pair<int, int>> es;
  for (std::size_t v = 0; v < nv; ++v)
    for (int w : d.out[v]) es.emplace_back(col[v], col[w]);
  std::sort(es.begin(), es.end());
  put16(s, es.size());
  for (auto [a, b] : es) {
    put16(s, a);
    put16(s, b);
  }
  return s;
}

void search(const Multigraph& n, const Dense& d, const std::vector<int>& col, CanonicalForm& best,
            bool& have) {
  const std::size_t nv = col.size();
  if (static_cast<std::size_t>(class_count(col)) == nv) {
    std::string cert = certificate(n, d, col);
    if (!have || cert < best.signature) {
      have = true;
      best.signature = std::move(cert);
      best.order.assign(nv, kNoVertex);
      for (std::size_t v = 0; v < nv; ++v) best.order[col[v]] = d.ids[v];
    }
    return;
  }
  // Individualize each member of the first non-singleton class in turn.
  std::vector<int> size(nv, 0);
  for (int c : col) ++size[c];
  int target = 0;
  while (size[target] < 2) ++target;
  for (std::size_t v = 0; v < nv; ++v) {
    if (col[v] != target) continue;
    std::vector<int> split(nv);
    for (std::size_t u = 0; u < nv; ++u) split[u] = 2 * col[u] + (u == v ? 1 : 0);
    search(n, d, refine(d, std::move(split)), best, have);
  }
}

}  // namespace

CanonicalForm canonical_form(const Multigraph& g, const std::vector<char>& tags) {
  Dense d = make_dense(g, tags);
  CanonicalForm best;
  bool have = false;
  search(g, d, refine(d, d.initial), best, have);
  return best;
}

CanonicalForm canonical_form(const Network& n) {
  std::vector<char> tags(n.id_bound(), 0);
  for (VertexId v : n.vertices()) tags[v] = static_cast<char>(n.kind(v));
  return canonical_form(n, tags);
}

std::string canonical_signature(const Network& n) { return canonical_form(n).signature; }

Network network_from_signature(const std::string& sig) {
  std::size_t pos = 0;
  auto get16 = [&]() -> std::size_t {
    if (pos + 2 > sig.size()) throw ParseError("truncated signature", pos);
    std::size_t x = (static_cast<unsigned char>(sig[pos]) << 8) | static_cast<unsigned char>(sig[pos + 1]);
    pos += 2;
    return x;
  };
  RawGraph raw;
  const std::size_t nv = get16();
  for (VertexId p = 0; p < nv; ++p) {
    if (pos >= sig.size()) throw ParseError("truncated signature", pos);
    const char tag = sig[pos++];
    const std::size_t len = get16();
    if (pos + len > sig.size()) throw ParseError("truncated signature", pos);
    if (len) raw.labels[p] = sig.substr(pos, len);
    pos += len;
    raw.vertices.push_back(p);
    if (tag == static_cast<char>(VertexKind::kRoot)) raw.root = p;
  }
  const std::size_t ne = get16();
  for (std::size_t i = 0; i < ne; ++i) {
    VertexId a = static_cast<VertexId>(get16());
    VertexId b = static_cast<VertexId>(get16());
    raw.edges.emplace_back(a, b);
  }
  if (pos != sig.size()) throw ParseError("trailing bytes in signature", pos);
  return Network::from_raw(raw);
}

namespace {

struct IsoSearch {
  const Network& n;
  const Network& m;
  std::vector<VertexId> order;  // children before parents
  std::vector<VertexId> image;
  std::vector<char> used;

  bool assign(std::size_t i) {
    if (i == order.size()) return true;
    VertexId x = order[i];
    std::vector<VertexId> cands;
    if (n.is_leaf(x)) {
      auto y = m.leaf(n.label(x));
      if (!y) return false;
      cands.push_back(*y);
    } else {
      VertexId first_child = n.edge(n.out_edges(x)[0]).to;
      for (EdgeIndex e : m.in_edges(image[first_child])) {
        VertexId y = m.edge(e).from;
        if (std::find(cands.begin(), cands.end(), y) == cands.end()) cands.push_back(y);
      }
    }
    for (VertexId y : cands) {
      if (used[y] || !compatible(x, y)) continue;
      image[x] = y;
      used[y] = 1;
      if (assign(i + 1)) return true;
      used[y] = 0;
      image[x] = kNoVertex;
    }
    return false;
  }

  bool compatible(VertexId x, VertexId y) const {
    if ((x == n.root()) != (y == m.root())) return false;
    if (n.in_degree(x) != m.in_degree(y) || n.out_degree(x) != m.out_degree(y)) return false;
    for (EdgeIndex e : n.out_edges(x)) {
      VertexId c = n.edge(e).to;
      if (m.multiplicity(y, image[c]) != n.multiplicity(x, c)) return false;
    }
    return true;
  }
};

std::vector<VertexId> reverse_topological(const Network& n) {
  std::vector<std::size_t> outdeg(n.id_bound(), 0);
  std::deque<VertexId> queue;
  for (VertexId v : n.vertices()) {
    outdeg[v] = n.out_degree(v);
    if (outdeg[v] == 0) queue.push_back(v);
  }
  std::vector<VertexId> order;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    order.push_back(v);
    for (EdgeIndex e : n.in_edges(v))
      if (--outdeg[n.edge(e).from] == 0) queue.push_back(n.edge(e).from);
  }
  return order;
}

}  // namespace

std::optional<std::vector<VertexId>> find_isomorphism(const Network& n, const Network& m) {
  if (n.vertex_count() != m.vertex_count() || n.edge_count() != m.edge_count()) return std::nullopt;
  if (n.taxa() != m.taxa()) return std::nullopt;
  IsoSearch s{n, m, reverse_topological(n), std::vector<VertexId>(n.id_bound(), kNoVertex),
              std::vector<char>(m.id_bound(), 0)};
  if (!s.assign(0)) return std::nullopt;
  return s.image;
}

bool isomorphic(const Network& n, const Network& m) { return find_isomorphism(n, m).has_value(); }

}  // namespace snprlab
