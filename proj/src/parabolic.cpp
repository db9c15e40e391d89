#include "coxnorm/parabolic.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

namespace coxnorm {

ParabolicConfig ParabolicConfig::make(CoxeterDiagram j, std::vector<Permutation> gamma_j_gens,
                                      std::vector<Permutation> r_gens) {
  if (!is_spherical(j)) throw ConfigError("J must be spherical");
  for (const auto& g : gamma_j_gens)
    if (g.size() != j.size() || !is_automorphism(j, g))
      throw ConfigError("Gamma_J generator " + g.to_string() + " is not an automorphism of J");
  for (const auto& g : r_gens)
    if (g.size() != j.size() || !is_automorphism(j, g))
      throw ConfigError("R generator " + g.to_string() + " is not an automorphism of J");
  ParabolicConfig c{std::move(j), PermutationGroup(0, {}), PermutationGroup(0, {})};
  c.gamma_j = PermutationGroup(c.j.size(), std::move(gamma_j_gens));
  c.r = PermutationGroup(c.j.size(), std::move(r_gens));
  if (!c.r.is_subgroup_of(c.gamma_j)) throw ConfigError("R is not a subgroup of Gamma_J");
  if (!c.r.is_normalized_by(c.gamma_j)) throw ConfigError("R is not normal in Gamma_J");
  return c;
}

ParabolicConfig ParabolicConfig::with_groups(CoxeterDiagram j, bool gamma_full, bool r_full) {
  if (r_full && !gamma_full) throw ConfigError("R = Aut(J) requires Gamma_J = Aut(J)");
  std::vector<Permutation> aut;
  if (gamma_full) aut = automorphism_group(j).generators;
  auto r = r_full ? aut : std::vector<Permutation>{};
  return make(std::move(j), std::move(aut), std::move(r));
}

namespace {

// nu_T for T a subset of s, written as a map on node indices of s.
std::optional<std::vector<std::size_t>> opposition_on(const CoxeterDiagram& s, std::vector<std::size_t> subset) {
  std::sort(subset.begin(), subset.end());
  auto sub = s.induced(subset);
  if (!is_spherical(sub)) return std::nullopt;
  auto nu = opposition_involution(sub);
  std::vector<std::size_t> out(s.size());
  std::iota(out.begin(), out.end(), 0);
  for (std::size_t i = 0; i < subset.size(); ++i) out[subset[i]] = subset[nu(i)];
  return out;
}

}  // namespace

std::optional<DiagramIsometry> adjacent_images(const CoxeterDiagram& s, const DiagramIsometry& k, std::size_t node) {
  if (node >= s.size()) throw std::invalid_argument("node out of range");
  std::vector<std::size_t> image(k.image.begin(), k.image.end());
  if (std::find(image.begin(), image.end(), node) != image.end())
    throw std::invalid_argument("extension node lies in K(J)");
  auto inner = opposition_on(s, image);
  if (!inner) throw std::invalid_argument("K(J) is not spherical");
  image.push_back(node);
  auto outer = opposition_on(s, image);
  if (!outer) return std::nullopt;
  DiagramIsometry out;
  out.image.reserve(k.image.size());
  for (auto v : k.image) out.image.push_back(static_cast<std::uint32_t>((*outer)[(*inner)[v]]));
  return out;
}

bool AssociateClass::contains(const DiagramIsometry& k) const {
  return std::binary_search(members.begin(), members.end(), k);
}

DiagramIsometry compose(const DiagramIsometry& k, const Permutation& rho) {
  DiagramIsometry out;
  out.image.resize(k.image.size());
  for (std::size_t i = 0; i < k.image.size(); ++i) out.image[i] = k.image[rho(i)];
  return out;
}

namespace {

std::vector<std::size_t> outside(const CoxeterDiagram& s, const DiagramIsometry& k) {
  std::vector<char> used(s.size(), 0);
  for (auto v : k.image) used[v] = 1;
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < s.size(); ++v)
    if (!used[v]) out.push_back(v);
  return out;
}

std::vector<DiagramIsometry> neighbours(const CoxeterDiagram& s, const DiagramIsometry& k) {
  std::vector<DiagramIsometry> out;
  for (auto v : outside(s, k))
    if (auto n = adjacent_images(s, k, v)) out.push_back(std::move(*n));
  return out;
}

}  // namespace

AssociateClass associate_class_of(const CoxeterDiagram& s, const DiagramIsometry& k) {
  std::set<DiagramIsometry> seen{k};
  std::deque<DiagramIsometry> queue{k};
  while (!queue.empty()) {
    auto x = std::move(queue.front());
    queue.pop_front();
    for (auto& y : neighbours(s, x))
      if (seen.insert(y).second) queue.push_back(std::move(y));
  }
  return AssociateClass{{seen.begin(), seen.end()}};
}

std::vector<AssociateClass> associate_classes(const CoxeterDiagram& j, const CoxeterDiagram& s) {
  std::vector<AssociateClass> out;
  std::set<DiagramIsometry> assigned;
  for (const auto& k : isometries(j, s)) {
    if (assigned.count(k)) continue;
    auto c = associate_class_of(s, k);
    assigned.insert(c.members.begin(), c.members.end());
    out.push_back(std::move(c));
  }
  return out;
}

bool is_r_reflective(const CoxeterDiagram& s, const DiagramIsometry& k, const PermutationGroup& r) {
  for (auto v : outside(s, k)) {
    auto rho = reflection_action(s, k, v);
    if (rho && r.contains(*rho)) return true;
  }
  return false;
}

bool class_is_r_reflective(const CoxeterDiagram& s, const AssociateClass& c, const PermutationGroup& r) {
  return std::any_of(c.members.begin(), c.members.end(),
                     [&](const DiagramIsometry& k) { return is_r_reflective(s, k, r); });
}

std::optional<Permutation> reflection_action(const CoxeterDiagram& s, const DiagramIsometry& k, std::size_t node) {
  auto kp = adjacent_images(s, k, node);
  if (!kp) return std::nullopt;
  std::unordered_map<std::uint32_t, std::uint32_t> pre;
  for (std::uint32_t i = 0; i < k.image.size(); ++i) pre[k.image[i]] = i;
  std::vector<std::uint32_t> rho(k.image.size());
  for (std::size_t i = 0; i < k.image.size(); ++i) {
    auto it = pre.find(kp->image[i]);
    if (it == pre.end()) return std::nullopt;
    rho[i] = it->second;
  }
  return Permutation(std::move(rho));
}

// ---------------------------------------------------------------------------
// Root system oracle

std::uint64_t weyl_group_order(const SphericalType& t) {
  auto fact = [](int n) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
  };
  std::uint64_t order = 1;
  for (const auto& c : t.components()) {
    const int n = c.rank;
    switch (c.family) {
      case Family::A: order *= fact(n + 1); break;
      case Family::B: order *= (std::uint64_t{1} << n) * fact(n); break;
      case Family::D: order *= (std::uint64_t{1} << (n - 1)) * fact(n); break;
      case Family::E: order *= n == 6 ? 51840ULL : n == 7 ? 2903040ULL : 696729600ULL; break;
      case Family::F: order *= 1152; break;
      case Family::H: order *= n == 3 ? 120 : 14400; break;
      case Family::I: order *= 2 * static_cast<std::uint64_t>(c.param); break;
    }
  }
  return order;
}

RootSystemModel::RootSystemModel(const CoxeterDiagram& s) {
  auto type = classify_spherical(s);
  if (!type) throw ConfigError("root system requires a spherical diagram");
  const std::size_t n = s.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      int m = s.order(a, b);
      if (m != 2 && m != 3 && m != 4 && m != 6) throw ConfigError("non-crystallographic bond order " + std::to_string(m));
    }
  weyl_order_ = weyl_group_order(*type);

  // Squared lengths, relative within each component: a 4-bond doubles, a 6-bond triples.
  std::vector<std::int64_t> len(n, 0);
  for (const auto& comp : s.components()) {
    std::vector<std::pair<std::int64_t, std::int64_t>> ratio(n, {0, 1});  // num/den
    ratio[comp[0]] = {1, 1};
    std::deque<std::size_t> q{comp[0]};
    while (!q.empty()) {
      auto a = q.front();
      q.pop_front();
      for (auto b : comp) {
        if (!s.bonded(a, b) || ratio[b].first != 0) continue;
        int m = s.order(a, b);
        std::int64_t f = m == 4 ? 2 : m == 6 ? 3 : 1;
        // Longer endpoint alternates; pick b longer when a is not already the long end.
        ratio[b] = {ratio[a].first * f, ratio[a].second};
        q.push_back(b);
      }
    }
    std::int64_t lcm = 1;
    for (auto v : comp) lcm = std::lcm(lcm, ratio[v].second);
    for (auto v : comp) len[v] = ratio[v].first * lcm / ratio[v].second;
  }
  // Doubled inner products, then Cartan entries <alpha_a, alpha_b^vee> = ip2 / len_b.
  cartan_.assign(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) {
        cartan_[a][b] = 2;
        continue;
      }
      int m = s.order(a, b);
      if (m == 2) continue;
      std::int64_t dmin = std::min(len[a], len[b]);
      std::int64_t ip2 = m == 3 ? -dmin : m == 4 ? -2 * dmin : -3 * dmin;
      if (ip2 % len[b] != 0) throw ConfigError("inconsistent root lengths");
      cartan_[a][b] = ip2 / len[b];
    }

  std::set<Root> seen;
  std::deque<Root> q;
  for (std::size_t i = 0; i < n; ++i) {
    auto r = simple_root(i);
    if (seen.insert(r).second) q.push_back(r);
  }
  while (!q.empty()) {
    auto v = std::move(q.front());
    q.pop_front();
    for (std::size_t i = 0; i < n; ++i) {
      auto w = reflect(i, v);
      if (seen.insert(w).second) q.push_back(std::move(w));
    }
  }
  roots_.assign(seen.begin(), seen.end());
}

RootSystemModel::Root RootSystemModel::simple_root(std::size_t i) const {
  Root r(rank(), 0);
  r[i] = 1;
  return r;
}

RootSystemModel::Root RootSystemModel::reflect(std::size_t i, const Root& v) const {
  std::int64_t c = 0;
  for (std::size_t k = 0; k < v.size(); ++k) c += v[k] * cartan_[k][i];
  Root w = v;
  w[i] -= c;
  return w;
}

namespace {

using Tuple = std::vector<RootSystemModel::Root>;

Tuple tuple_of(const RootSystemModel& rs, const DiagramIsometry& k) {
  Tuple t;
  for (auto v : k.image) t.push_back(rs.simple_root(v));
  return t;
}

// W-orbit of a tuple of roots; stops early when `stop` returns true.
std::set<Tuple> tuple_orbit(const RootSystemModel& rs, const Tuple& start,
                            const std::function<bool(const Tuple&)>& stop) {
  std::set<Tuple> seen{start};
  std::deque<Tuple> q{start};
  if (stop(start)) return seen;
  while (!q.empty()) {
    auto t = std::move(q.front());
    q.pop_front();
    for (std::size_t i = 0; i < rs.rank(); ++i) {
      Tuple u;
      u.reserve(t.size());
      for (const auto& r : t) u.push_back(rs.reflect(i, r));
      if (seen.insert(u).second) {
        if (stop(u)) return seen;
        q.push_back(std::move(u));
      }
    }
  }
  return seen;
}

void check_limit(const RootSystemModel& rs, std::uint64_t limit) {
  if (rs.weyl_order() > limit)
    throw ConfigError("Weyl group of order " + std::to_string(rs.weyl_order()) + " exceeds oracle limit " +
                      std::to_string(limit));
}

// Isometry whose simple-root tuple is t, if every entry is a simple root.
std::optional<DiagramIsometry> isometry_of(const Tuple& t) {
  DiagramIsometry k;
  for (const auto& r : t) {
    std::size_t idx = SIZE_MAX;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i] == 0) continue;
      if (r[i] != 1 || idx != SIZE_MAX) return std::nullopt;
      idx = i;
    }
    if (idx == SIZE_MAX) return std::nullopt;
    k.image.push_back(static_cast<std::uint32_t>(idx));
  }
  return k;
}

}  // namespace

bool oracle_conjugate(const CoxeterDiagram& s, const DiagramIsometry& k1, const DiagramIsometry& k2,
                      std::uint64_t limit) {
  RootSystemModel rs(s);
  check_limit(rs, limit);
  auto target = tuple_of(rs, k2);
  auto orbit = tuple_orbit(rs, tuple_of(rs, k1), [&](const Tuple& t) { return t == target; });
  return orbit.count(target) > 0;
}

std::vector<std::vector<DiagramIsometry>> oracle_partition(const CoxeterDiagram& j, const CoxeterDiagram& s,
                                                           std::uint64_t limit) {
  RootSystemModel rs(s);
  check_limit(rs, limit);
  std::vector<std::vector<DiagramIsometry>> out;
  std::set<DiagramIsometry> assigned;
  for (const auto& k : isometries(j, s)) {
    if (assigned.count(k)) continue;
    auto orbit = tuple_orbit(rs, tuple_of(rs, k), [](const Tuple&) { return false; });
    std::vector<DiagramIsometry> cls;
    for (const auto& t : orbit)
      if (auto m = isometry_of(t)) cls.push_back(*m);
    std::sort(cls.begin(), cls.end());
    assigned.insert(cls.begin(), cls.end());
    out.push_back(std::move(cls));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Larger-extension scan

namespace {

std::vector<IrreducibleType> irreducibles_of_rank(int n, int max_dihedral) {
  std::vector<IrreducibleType> out;
  out.push_back({Family::A, n, 0});
  if (n >= 2) out.push_back(n == 2 ? IrreducibleType{Family::B, 2, 0} : IrreducibleType{Family::B, n, 0});
  if (n >= 4) out.push_back({Family::D, n, 0});
  if (n >= 6 && n <= 8) out.push_back({Family::E, n, 0});
  if (n == 4) out.push_back({Family::F, 4, 0});
  if (n == 3 || n == 4) out.push_back({Family::H, n, 0});
  if (n == 2)
    for (int m = 5; m <= max_dihedral; ++m) out.push_back({Family::I, 2, m});
  return out;
}

}  // namespace

ExtensionScan all_larger_extensions_reflective(const CoxeterDiagram& j, int max_dihedral) {
  auto jtype = classify_spherical(j);
  if (!jtype) throw ConfigError("J must be spherical");
  const int r = jtype->rank();
  const std::size_t max_parts = jtype->components().size();
  const int min_part = std::accumulate(jtype->components().begin(), jtype->components().end(), r,
                                       [](int m, const IrreducibleType& c) { return std::min(m, c.rank); });
  auto aut = automorphisms(j);

  std::vector<IrreducibleType> pool;
  for (int n = min_part; n <= 2 * r; ++n)
    for (auto t : irreducibles_of_rank(n, max_dihedral)) pool.push_back(t);

  ExtensionScan scan;
  // Multisets of pool entries (non-decreasing index), at most max_parts of them.
  std::vector<std::size_t> pick;
  std::function<bool(std::size_t, int)> rec = [&](std::size_t from, int rank) -> bool {
    if (rank > r) {
      SphericalType t([&] {
        std::vector<IrreducibleType> c;
        for (auto i : pick) c.push_back(pool[i]);
        return c;
      }());
      auto s = standard_diagram(t);
      ++scan.targets_checked;
      for (const auto& k : isometries(j, s)) {
        ++scan.isometries_checked;
        if (!is_r_reflective(s, k, aut)) {
          scan.all_reflective = false;
          scan.witness = ReflectivityWitness{t, k};
          return true;
        }
      }
    }
    if (pick.size() == max_parts) return false;
    for (std::size_t i = from; i < pool.size(); ++i) {
      if (rank + pool[i].rank > 2 * r) continue;
      pick.push_back(i);
      bool done = rec(i, rank + pool[i].rank);
      pick.pop_back();
      if (done) return true;
    }
    return false;
  };
  rec(0, 0);
  return scan;
}

}  // namespace coxnorm
