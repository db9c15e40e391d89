#include "coxnorm/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace coxnorm {

// ---------------------------------------------------------------------------
// CoxeterDiagram

CoxeterDiagram::CoxeterDiagram(std::vector<std::string> names, std::span<const Bond> bonds)
    : names_(std::move(names)), orders_(names_.size() * names_.size(), 2) {
  std::set<std::string_view> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw DiagramError("empty node name");
    if (!seen.insert(n).second) throw DiagramError("duplicate node '" + n + "'");
  }
  const std::size_t n = names_.size();
  for (std::size_t i = 0; i < n; ++i) orders_[i * n + i] = 1;
  for (const auto& b : bonds) {
    if (b.a >= n || b.b >= n) throw DiagramError("bond refers to a missing node");
    if (b.a == b.b) throw DiagramError("self-edge on '" + names_[b.a] + "'");
    if (b.order != kInfinity && b.order < 3)
      throw DiagramError("bond order must be >= 3 or inf");
    orders_[b.a * n + b.b] = b.order;
    orders_[b.b * n + b.a] = b.order;
  }
}

CoxeterDiagram CoxeterDiagram::anonymous(std::size_t n, std::span<const Bond> bonds) {
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = std::to_string(i);
  return CoxeterDiagram(std::move(names), bonds);
}

std::optional<std::size_t> CoxeterDiagram::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::vector<Bond> CoxeterDiagram::bonds() const {
  std::vector<Bond> out;
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = a + 1; b < size(); ++b)
      if (order(a, b) != 2) out.push_back({a, b, order(a, b)});
  return out;
}

CoxeterDiagram CoxeterDiagram::induced(std::span<const std::size_t> subset) const {
  std::vector<std::string> names;
  names.reserve(subset.size());
  for (auto i : subset) names.push_back(names_[i]);
  std::vector<Bond> bonds;
  for (std::size_t a = 0; a < subset.size(); ++a)
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      int m = order(subset[a], subset[b]);
      if (m != 2) bonds.push_back({a, b, m});
    }
  return CoxeterDiagram(std::move(names), bonds);
}

std::vector<std::vector<std::size_t>> CoxeterDiagram::components() const {
  const std::size_t n = size();
  std::vector<int> comp(n, -1);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<std::size_t> c{s};
    comp[s] = static_cast<int>(out.size());
    for (std::size_t k = 0; k < c.size(); ++k)
      for (std::size_t v = 0; v < n; ++v)
        if (comp[v] < 0 && bonded(c[k], v)) {
          comp[v] = comp[s];
          c.push_back(v);
        }
    std::sort(c.begin(), c.end());
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

CoxeterDiagram parse_diagram(std::string_view text) {
  std::optional<std::vector<std::string>> names;
  struct RawEdge {
    std::string a, b;
    int order;
    int line;
  };
  std::vector<RawEdge> edges;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    auto tok = split_ws(line);
    if (tok.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (tok[0] == "nodes:" || tok[0].starts_with("nodes:")) {
      if (names) throw DiagramError("second 'nodes:' line", line_no);
      std::vector<std::string> ns;
      if (tok[0].size() > 6) ns.emplace_back(tok[0].substr(6));
      for (std::size_t i = 1; i < tok.size(); ++i) ns.emplace_back(tok[i]);
      std::set<std::string> uniq(ns.begin(), ns.end());
      if (uniq.size() != ns.size()) throw DiagramError("duplicate node", line_no);
      names = std::vector<std::string>(uniq.begin(), uniq.end());
    } else if (tok[0] == "edge") {
      if (tok.size() != 4) throw DiagramError("expected 'edge <id> <id> <m>'", line_no);
      int m = 0;
      if (tok[3] == "inf") {
        m = kInfinity;
      } else {
        auto [p, ec] = std::from_chars(tok[3].data(), tok[3].data() + tok[3].size(), m);
        if (ec != std::errc() || p != tok[3].data() + tok[3].size())
          throw DiagramError("bad bond order '" + std::string(tok[3]) + "'", line_no);
        if (m < 3) throw DiagramError("bond order must be >= 3 (order 2 is the absent edge)", line_no);
      }
      if (tok[1] == tok[2]) throw DiagramError("self-edge on '" + std::string(tok[1]) + "'", line_no);
      edges.push_back({std::string(tok[1]), std::string(tok[2]), m, line_no});
    } else {
      throw DiagramError("unrecognized line '" + std::string(tok[0]) + "'", line_no);
    }
    if (end == text.size()) break;
  }
  if (!names) throw DiagramError("missing 'nodes:' line");
  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t i = 0; i < names->size(); ++i) index[(*names)[i]] = i;
  std::vector<Bond> bonds;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : edges) {
    auto ia = index.find(e.a), ib = index.find(e.b);
    if (ia == index.end()) throw DiagramError("unknown node '" + e.a + "'", e.line);
    if (ib == index.end()) throw DiagramError("unknown node '" + e.b + "'", e.line);
    auto key = std::minmax(ia->second, ib->second);
    if (!seen.insert(key).second) throw DiagramError("duplicate edge", e.line);
    bonds.push_back({ia->second, ib->second, e.order});
  }
  return CoxeterDiagram(std::move(*names), bonds);
}

std::string serialize_diagram(const CoxeterDiagram& d) {
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return d.name(a) < d.name(b); });
  std::ostringstream os;
  os << "nodes:";
  for (auto i : order) os << ' ' << d.name(i);
  os << '\n';
  std::vector<std::tuple<std::string, std::string, int>> edges;
  for (const auto& b : d.bonds()) {
    auto x = d.name(b.a), y = d.name(b.b);
    if (y < x) std::swap(x, y);
    edges.emplace_back(x, y, b.order);
  }
  std::sort(edges.begin(), edges.end());
  for (const auto& [x, y, m] : edges) {
    os << "edge " << x << ' ' << y << ' ';
    if (m == kInfinity)
      os << "inf";
    else
      os << m;
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Types

std::string IrreducibleType::to_string() const {
  static const char* letters = "ABDEFHI";
  if (family == Family::I) return "I2(" + std::to_string(param) + ")";
  return std::string(1, letters[static_cast<int>(family)]) + std::to_string(rank);
}

std::vector<IrreducibleType> normalize_irreducible(Family family, int rank, int param) {
  using F = Family;
  auto A = [](int n) { return IrreducibleType{F::A, n, 0}; };
  switch (family) {
    case F::A:
      if (rank >= 1) return {A(rank)};
      break;
    case F::B:
      if (rank == 1) return {A(1)};
      if (rank >= 2) return {{F::B, rank, 0}};
      break;
    case F::D:
      if (rank == 2) return {A(1), A(1)};
      if (rank == 3) return {A(3)};
      if (rank >= 4) return {{F::D, rank, 0}};
      break;
    case F::E:
      if (rank == 3) return {A(2), A(1)};
      if (rank == 4) return {A(4)};
      if (rank == 5) return {{F::D, 5, 0}};
      if (rank >= 6 && rank <= 8) return {{F::E, rank, 0}};
      break;
    case F::F:
      if (rank == 4) return {{F::F, 4, 0}};
      break;
    case F::H:
      if (rank == 3 || rank == 4) return {{F::H, rank, 0}};
      break;
    case F::I:
      if (param == 2) return {A(1), A(1)};
      if (param == 3) return {A(2)};
      if (param == 4) return {{F::B, 2, 0}};
      if (param >= 5) return {{F::I, 2, param}};
      break;
  }
  throw DiagramError("no spherical type " + std::string(1, "ABDEFHI"[static_cast<int>(family)]) +
                     std::to_string(rank));
}

SphericalType::SphericalType(std::vector<IrreducibleType> components) : components_(std::move(components)) {
  std::sort(components_.begin(), components_.end(), [](const auto& x, const auto& y) {
    if (x.rank != y.rank) return x.rank > y.rank;
    if (x.family != y.family) return x.family < y.family;
    return x.param < y.param;
  });
}

int SphericalType::rank() const {
  int r = 0;
  for (const auto& c : components_) r += c.rank;
  return r;
}

std::string SphericalType::to_string() const {
  if (components_.empty()) return "empty";
  std::string out;
  for (std::size_t i = 0; i < components_.size();) {
    std::size_t j = i;
    while (j < components_.size() && components_[j] == components_[i]) ++j;
    out += components_[i].to_string();
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  return out;
}

SphericalType SphericalType::parse(std::string_view text) {
  std::vector<IrreducibleType> comps;
  std::size_t i = 0;
  auto read_int = [&](std::size_t& k) {
    int v = 0;
    std::size_t start = k;
    while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) v = v * 10 + (text[k++] - '0');
    if (k == start) throw DiagramError("bad type name '" + std::string(text) + "'");
    return v;
  };
  while (i < text.size()) {
    char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text[i++])));
    Family f;
    switch (c) {
      case 'A': f = Family::A; break;
      case 'B': case 'C': f = Family::B; break;
      case 'D': f = Family::D; break;
      case 'E': f = Family::E; break;
      case 'F': f = Family::F; break;
      case 'H': f = Family::H; break;
      case 'I': case 'G': f = Family::I; break;
      default: throw DiagramError("bad type name '" + std::string(text) + "'");
    }
    int rank = read_int(i);
    int param = 0;
    if (f == Family::I) {
      if (rank != 2) throw DiagramError("I-type must be I2(m)");
      if (i < text.size() && text[i] == '(') {
        ++i;
        param = read_int(i);
        if (i >= text.size() || text[i] != ')') throw DiagramError("bad type name '" + std::string(text) + "'");
        ++i;
      } else if (c == 'G') {
        param = 6;
      } else {
        throw DiagramError("I2 requires a parameter");
      }
    }
    int mult = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      mult = read_int(i);
    }
    auto norm = normalize_irreducible(f, rank, param);
    for (int k = 0; k < mult; ++k) comps.insert(comps.end(), norm.begin(), norm.end());
  }
  if (comps.empty()) throw DiagramError("empty type name");
  return SphericalType(std::move(comps));
}

// ---------------------------------------------------------------------------
// Classification

namespace {

struct ComponentShape {
  IrreducibleType type;
  // Node ordering that realises the standard numbering of standard_diagram.
  std::vector<std::size_t> standard_order;
};

std::vector<std::size_t> neighbours_in(const CoxeterDiagram& d, std::size_t v, const std::vector<char>& in) {
  std::vector<std::size_t> out;
  for (std::size_t u = 0; u < d.size(); ++u)
    if (in[u] && d.bonded(v, u)) out.push_back(u);
  return out;
}

// Walks from `start` away from `prev` along a path; returns nodes in order (start first).
std::vector<std::size_t> walk_arm(const CoxeterDiagram& d, const std::vector<char>& in, std::size_t prev,
                                  std::size_t start) {
  std::vector<std::size_t> arm{start};
  std::size_t p = prev, c = start;
  while (true) {
    auto nb = neighbours_in(d, c, in);
    std::size_t next = SIZE_MAX;
    for (auto u : nb)
      if (u != p) next = u;
    if (next == SIZE_MAX || nb.size() > 2) break;
    arm.push_back(next);
    p = c;
    c = next;
  }
  return arm;
}

std::optional<ComponentShape> classify_component(const CoxeterDiagram& d, const std::vector<std::size_t>& comp) {
  std::vector<char> in(d.size(), 0);
  for (auto v : comp) in[v] = 1;
  const int n = static_cast<int>(comp.size());
  int edges = 0;
  for (std::size_t a = 0; a < comp.size(); ++a)
    for (std::size_t b = a + 1; b < comp.size(); ++b) {
      int m = d.order(comp[a], comp[b]);
      if (m == kInfinity) return std::nullopt;
      if (m != 2) ++edges;
    }
  if (edges != n - 1) return std::nullopt;  // connected, so a tree iff edges = n-1
  if (n == 1) return ComponentShape{{Family::A, 1, 0}, {comp[0]}};

  std::vector<std::size_t> branch, leaves;
  for (auto v : comp) {
    auto deg = neighbours_in(d, v, in).size();
    if (deg > 3) return std::nullopt;
    if (deg == 3) branch.push_back(v);
    if (deg == 1) leaves.push_back(v);
  }
  if (branch.size() > 1) return std::nullopt;

  if (branch.size() == 1) {
    std::size_t b = branch[0];
    for (auto v : comp)
      for (auto u : comp)
        if (d.bonded(u, v) && d.order(u, v) != 3) return std::nullopt;
    std::vector<std::vector<std::size_t>> arms;
    for (auto u : neighbours_in(d, b, in)) arms.push_back(walk_arm(d, in, b, u));
    std::sort(arms.begin(), arms.end(), [](const auto& x, const auto& y) {
      if (x.size() != y.size()) return x.size() < y.size();
      return x < y;
    });
    const auto p = arms[0].size(), q = arms[1].size(), r = arms[2].size();
    std::vector<std::size_t> order;
    if (p == 1 && q == 1) {
      // D_n: path r..1, b, arm1[0]; extra leaf arm0[0] attached to b.
      for (auto it = arms[2].rbegin(); it != arms[2].rend(); ++it) order.push_back(*it);
      order.push_back(b);
      order.push_back(arms[1][0]);
      order.push_back(arms[0][0]);
      return ComponentShape{{Family::D, n, 0}, order};
    }
    if (p == 1 && q == 2 && r >= 2 && r <= 4) {
      // E_n: path arm1 reversed, b, arm2; arm0 attached to b (node index 2).
      for (auto it = arms[1].rbegin(); it != arms[1].rend(); ++it) order.push_back(*it);
      order.push_back(b);
      for (auto v : arms[2]) order.push_back(v);
      order.push_back(arms[0][0]);
      return ComponentShape{{Family::E, n, 0}, order};
    }
    return std::nullopt;
  }

  // Path. Order nodes from the smaller leaf.
  std::size_t start = std::min(leaves[0], leaves[1]);
  auto path = walk_arm(d, in, SIZE_MAX, start);
  std::vector<int> labels;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) labels.push_back(d.order(path[i], path[i + 1]));
  std::vector<std::size_t> special;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] != 3) special.push_back(i);
  auto reversed = [&] {
    std::reverse(path.begin(), path.end());
    std::reverse(labels.begin(), labels.end());
    for (auto& s : special) s = labels.size() - 1 - s;
  };
  if (n == 2) {
    auto t = normalize_irreducible(Family::I, 2, labels[0]);
    return ComponentShape{t[0], path};
  }
  if (special.empty()) return ComponentShape{{Family::A, n, 0}, path};
  if (special.size() > 1) return std::nullopt;
  const int m = labels[special[0]];
  const std::size_t pos = special[0];
  const std::size_t last = labels.size() - 1;
  if (m == 4) {
    if (pos == 0 || pos == last) {
      if (pos == 0) reversed();
      return ComponentShape{{Family::B, n, 0}, path};
    }
    if (n == 4 && pos == 1) return ComponentShape{{Family::F, 4, 0}, path};
    return std::nullopt;
  }
  if (m == 5 && (n == 3 || n == 4) && (pos == 0 || pos == last)) {
    if (pos == last) reversed();
    return ComponentShape{{Family::H, n, 0}, path};
  }
  return std::nullopt;
}

}  // namespace

std::optional<SphericalType> classify_spherical(const CoxeterDiagram& d) {
  std::vector<IrreducibleType> comps;
  for (const auto& c : d.components()) {
    auto shape = classify_component(d, c);
    if (!shape) return std::nullopt;
    comps.push_back(shape->type);
  }
  return SphericalType(std::move(comps));
}

CoxeterDiagram standard_diagram(const IrreducibleType& t) {
  std::vector<Bond> bonds;
  const std::size_t n = static_cast<std::size_t>(t.rank);
  auto path = [&](std::size_t len) {
    for (std::size_t i = 0; i + 1 < len; ++i) bonds.push_back({i, i + 1, 3});
  };
  switch (t.family) {
    case Family::A: path(n); break;
    case Family::B:
      path(n);
      bonds.back().order = 4;
      break;
    case Family::D:
      path(n - 1);
      bonds.push_back({n - 3, n - 1, 3});
      break;
    case Family::E:
      path(n - 1);
      bonds.push_back({2, n - 1, 3});
      break;
    case Family::F:
      path(4);
      bonds[1].order = 4;
      break;
    case Family::H:
      path(n);
      bonds.front().order = 5;
      break;
    case Family::I: bonds.push_back({0, 1, t.param}); break;
  }
  return CoxeterDiagram::anonymous(n, bonds);
}

CoxeterDiagram disjoint_union(std::span<const CoxeterDiagram> parts) {
  std::vector<std::string> names;
  std::vector<Bond> bonds;
  std::size_t offset = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    for (const auto& nm : parts[k].names())
      names.push_back(parts.size() > 1 ? "c" + std::to_string(k) + "." + nm : nm);
    for (auto b : parts[k].bonds()) bonds.push_back({b.a + offset, b.b + offset, b.order});
    offset += parts[k].size();
  }
  return CoxeterDiagram(std::move(names), bonds);
}

CoxeterDiagram standard_diagram(const SphericalType& t) {
  std::vector<CoxeterDiagram> parts;
  for (const auto& c : t.components()) parts.push_back(standard_diagram(c));
  if (parts.size() == 1) return parts[0];
  // Plain integer names keep induced subdiagrams readable.
  auto u = disjoint_union(parts);
  return CoxeterDiagram::anonymous(u.size(), u.bonds());
}

Permutation opposition_involution(const CoxeterDiagram& s) {
  std::vector<std::uint32_t> img(s.size());
  std::iota(img.begin(), img.end(), 0u);
  for (const auto& c : s.components()) {
    auto shape = classify_component(s, c);
    if (!shape) throw DiagramError("opposition involution requires a spherical diagram");
    const auto& t = shape->type;
    const auto& o = shape->standard_order;
    bool flip = false;
    switch (t.family) {
      case Family::A: flip = t.rank >= 2; break;
      case Family::D: flip = t.rank % 2 == 1; break;
      case Family::E: flip = t.rank == 6; break;
      case Family::I: flip = t.param % 2 == 1; break;
      default: break;
    }
    if (!flip) continue;
    if (t.family == Family::A || t.family == Family::I) {
      for (std::size_t i = 0; i < o.size(); ++i) img[o[i]] = static_cast<std::uint32_t>(o[o.size() - 1 - i]);
    } else if (t.family == Family::D) {
      // The two short arms are the last two entries of the standard order.
      const auto n = o.size();
      img[o[n - 1]] = static_cast<std::uint32_t>(o[n - 2]);
      img[o[n - 2]] = static_cast<std::uint32_t>(o[n - 1]);
    } else {
      // E6: standard path 0-1-2-3-4 with 5 on 2; reverse the path.
      for (std::size_t i = 0; i < 5; ++i) img[o[i]] = static_cast<std::uint32_t>(o[4 - i]);
    }
  }
  return Permutation(std::move(img));
}

// ---------------------------------------------------------------------------
// Isometries and automorphisms

namespace {

// Order source nodes so each node (after the first of its component) is
// bonded to an earlier one; high-degree nodes first.
std::vector<std::size_t> search_order(const CoxeterDiagram& j) {
  std::vector<std::size_t> order;
  std::vector<char> done(j.size(), 0);
  auto degree = [&](std::size_t v) {
    int k = 0;
    for (std::size_t u = 0; u < j.size(); ++u) k += j.bonded(u, v);
    return k;
  };
  while (order.size() < j.size()) {
    std::size_t best = SIZE_MAX;
    int best_score = -1;
    for (std::size_t v = 0; v < j.size(); ++v) {
      if (done[v]) continue;
      int links = 0;
      for (auto u : order) links += j.bonded(u, v);
      int score = links * 100 + degree(v);
      if (score > best_score) {
        best_score = score;
        best = v;
      }
    }
    done[best] = 1;
    order.push_back(best);
  }
  return order;
}

// Enumerates label-preserving injective maps j -> s extending `fixed`
// (entries SIZE_MAX are free). Callback returns false to stop.
void enumerate_maps(const CoxeterDiagram& j, const CoxeterDiagram& s, std::vector<std::size_t> fixed,
                    const std::function<bool(const std::vector<std::size_t>&)>& emit) {
  const std::size_t n = j.size();
  if (n > s.size()) return;
  auto order = search_order(j);
  std::vector<std::size_t> img(n, SIZE_MAX);
  std::vector<char> used(s.size(), 0);
  // Degree profile filter: number of bonds of each order.
  auto profile = [](const CoxeterDiagram& d, std::size_t v) {
    std::map<int, int> p;
    for (std::size_t u = 0; u < d.size(); ++u)
      if (d.bonded(u, v)) ++p[d.order(u, v)];
    return p;
  };
  std::vector<std::map<int, int>> pj(n), ps(s.size());
  for (std::size_t v = 0; v < n; ++v) pj[v] = profile(j, v);
  for (std::size_t v = 0; v < s.size(); ++v) ps[v] = profile(s, v);
  auto dominates = [](const std::map<int, int>& big, const std::map<int, int>& small) {
    for (auto [m, c] : small) {
      auto it = big.find(m);
      if (it == big.end() || it->second < c) return false;
    }
    return true;
  };
  bool stop = false;
  std::function<void(std::size_t)> rec = [&](std::size_t depth) {
    if (stop) return;
    if (depth == n) {
      if (!emit(img)) stop = true;
      return;
    }
    const std::size_t v = order[depth];
    auto try_candidate = [&](std::size_t c) {
      if (used[c] || !dominates(ps[c], pj[v])) return;
      for (std::size_t k = 0; k < depth; ++k) {
        auto u = order[k];
        if (j.order(u, v) != s.order(img[u], c)) return;
      }
      img[v] = c;
      used[c] = 1;
      rec(depth + 1);
      used[c] = 0;
      img[v] = SIZE_MAX;
    };
    if (fixed[v] != SIZE_MAX) {
      try_candidate(fixed[v]);
    } else {
      for (std::size_t c = 0; c < s.size() && !stop; ++c) try_candidate(c);
    }
  };
  rec(0);
}

}  // namespace

std::vector<DiagramIsometry> isometries(const CoxeterDiagram& j, const CoxeterDiagram& s) {
  std::vector<DiagramIsometry> out;
  enumerate_maps(j, s, std::vector<std::size_t>(j.size(), SIZE_MAX), [&](const auto& img) {
    DiagramIsometry k;
    k.image.assign(img.begin(), img.end());
    out.push_back(std::move(k));
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

bool is_automorphism(const CoxeterDiagram& d, const Permutation& p) {
  if (p.size() != d.size()) return false;
  for (std::size_t a = 0; a < d.size(); ++a)
    for (std::size_t b = a + 1; b < d.size(); ++b)
      if (d.order(a, b) != d.order(p(a), p(b))) return false;
  return true;
}

DiagramAutomorphismGroup automorphism_group(const CoxeterDiagram& d) {
  // Orbit-stabilizer along the base 0, 1, ..., n-1.
  DiagramAutomorphismGroup g;
  const std::size_t n = d.size();
  std::vector<std::size_t> fixed(n, SIZE_MAX);
  for (std::size_t k = 0; k < n; ++k) {
    std::uint64_t orbit = 0;
    for (std::size_t v = 0; v < n; ++v) {
      auto trial = fixed;
      trial[k] = v;
      std::optional<Permutation> found;
      enumerate_maps(d, d, trial, [&](const auto& img) {
        found = Permutation(std::vector<std::uint32_t>(img.begin(), img.end()));
        return false;
      });
      if (!found) continue;
      ++orbit;
      if (v != k) g.generators.push_back(*found);
    }
    g.order *= orbit;
    fixed[k] = k;
  }
  return g;
}

PermutationGroup automorphisms(const CoxeterDiagram& d) {
  auto g = automorphism_group(d);
  return PermutationGroup(d.size(), g.generators);
}

// ---------------------------------------------------------------------------
// Subdiagram enumeration

std::vector<std::vector<std::size_t>> spherical_subdiagrams(const CoxeterDiagram& pi,
                                                            std::span<const std::size_t> containing,
                                                            std::size_t max_rank) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> base(containing.begin(), containing.end());
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());
  if (base.size() > max_rank || !is_spherical(pi.induced(base))) return out;
  std::vector<char> in(pi.size(), 0);
  for (auto v : base) in[v] = 1;
  std::function<void(std::vector<std::size_t>&, std::size_t)> rec = [&](std::vector<std::size_t>& cur,
                                                                        std::size_t next) {
    auto sorted = cur;
    std::sort(sorted.begin(), sorted.end());
    out.push_back(sorted);
    if (cur.size() >= max_rank) return;
    for (std::size_t v = next; v < pi.size(); ++v) {
      if (in[v]) continue;
      cur.push_back(v);
      auto s = cur;
      std::sort(s.begin(), s.end());
      if (is_spherical(pi.induced(s))) rec(cur, v + 1);
      cur.pop_back();
    }
  };
  rec(base, 0);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Canonical form

namespace {

std::string matrix_string(const CoxeterDiagram& d, const std::vector<std::size_t>& order) {
  std::string s = std::to_string(order.size()) + ":";
  for (std::size_t a = 0; a < order.size(); ++a)
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      int m = d.order(order[a], order[b]);
      s += m == kInfinity ? "i" : std::to_string(m);
      s += ',';
    }
  return s;
}

// Partition refinement on (cell, multiset of (neighbour cell, label)).
// `cells` is an ordered list of cells; refined in place to an equitable partition.
void refine(const CoxeterDiagram& d, const std::vector<std::size_t>& nodes,
            std::vector<std::vector<std::size_t>>& cells) {
  while (true) {
    std::map<std::size_t, std::size_t> cell_of;
    for (std::size_t c = 0; c < cells.size(); ++c)
      for (auto v : cells[c]) cell_of[v] = c;
    std::vector<std::vector<std::size_t>> next;
    for (const auto& cell : cells) {
      std::vector<std::pair<std::vector<std::pair<std::size_t, int>>, std::size_t>> sig;
      for (auto v : cell) {
        std::vector<std::pair<std::size_t, int>> s;
        for (auto u : nodes)
          if (d.bonded(u, v)) s.emplace_back(cell_of[u], d.order(u, v));
        std::sort(s.begin(), s.end());
        sig.emplace_back(std::move(s), v);
      }
      std::sort(sig.begin(), sig.end());
      std::size_t i = 0;
      while (i < sig.size()) {
        std::size_t k = i;
        std::vector<std::size_t> part;
        while (k < sig.size() && sig[k].first == sig[i].first) part.push_back(sig[k++].second);
        next.push_back(std::move(part));
        i = k;
      }
    }
    if (next.size() == cells.size()) return;
    cells = std::move(next);
  }
}

void canon_search(const CoxeterDiagram& d, const std::vector<std::size_t>& nodes,
                  std::vector<std::vector<std::size_t>> cells, std::string& best,
                  std::vector<std::size_t>& best_order) {
  refine(d, nodes, cells);
  std::size_t target = SIZE_MAX;
  for (std::size_t c = 0; c < cells.size(); ++c)
    if (cells[c].size() > 1) {
      target = c;
      break;
    }
  if (target == SIZE_MAX) {
    std::vector<std::size_t> order;
    for (const auto& c : cells) order.push_back(c[0]);
    auto s = matrix_string(d, order);
    if (best_order.empty() || s < best) {
      best = s;
      best_order = order;
    }
    return;
  }
  for (auto v : cells[target]) {
    auto split = cells;
    std::vector<std::size_t> rest;
    for (auto u : cells[target])
      if (u != v) rest.push_back(u);
    split[target] = {v};
    split.insert(split.begin() + static_cast<std::ptrdiff_t>(target) + 1, rest);
    canon_search(d, nodes, std::move(split), best, best_order);
  }
}

}  // namespace

CanonicalForm canonical_form(const CoxeterDiagram& d) {
  struct Part {
    std::string cert;
    std::vector<std::size_t> order;
  };
  std::vector<Part> parts;
  for (const auto& comp : d.components()) {
    Part p;
    canon_search(d, comp, {comp}, p.cert, p.order);
    parts.push_back(std::move(p));
  }
  std::stable_sort(parts.begin(), parts.end(), [](const Part& a, const Part& b) { return a.cert < b.cert; });
  std::vector<std::uint32_t> relabel(d.size());
  std::string cert;
  std::uint32_t next = 0;
  for (const auto& p : parts) {
    cert += p.cert + "|";
    for (auto v : p.order) relabel[v] = next++;
  }
  return {Permutation(std::move(relabel)), cert};
}

}  // namespace coxnorm
