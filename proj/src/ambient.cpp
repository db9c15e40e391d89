#include <algorithm>
#include <sstream>

#include "coxnorm/category.hpp"

namespace coxnorm {

Symmetry operator*(const Symmetry& a, const Symmetry& b) {
  Symmetry out;
  out.j_part = a.j_part * b.j_part;
  if (const auto* pa = std::get_if<Permutation>(&a.pi_part))
    out.pi_part = *pa * std::get<Permutation>(b.pi_part);
  else
    out.pi_part = std::get<leech::AffineSymmetry>(a.pi_part) * std::get<leech::AffineSymmetry>(b.pi_part);
  return out;
}

CoxeterDiagram Ambient::induced(const std::vector<NodeId>& s) const {
  std::vector<Bond> bonds;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const int m = order(s[i], s[j]);
      if (m == 1) throw std::invalid_argument("repeated node");
      if (m != 2) bonds.push_back({i, j, m});
    }
  std::vector<std::string> names;
  for (auto n : s) names.push_back(label(n));
  return CoxeterDiagram(names, bonds);
}

// ---------------------------------------------------------------------------

FiniteAmbient::FiniteAmbient(CoxeterDiagram pi, PermutationGroup gamma_pi)
    : pi_(std::move(pi)), gamma_(std::move(gamma_pi)), orbit_(pi_.size()) {
  if (gamma_.degree() != pi_.size()) throw ConfigError("Gamma_Pi acts on the wrong number of nodes");
  for (const auto& g : gamma_.generators())
    if (!is_automorphism(pi_, g)) throw ConfigError("Gamma_Pi generator " + g.to_string() + " is not a diagram automorphism");
  for (std::size_t n = 0; n < pi_.size(); ++n) {
    std::uint64_t m = n;
    for (const auto& g : gamma_.elements()) m = std::min<std::uint64_t>(m, g(n));
    orbit_[n] = m;
  }
}

int FiniteAmbient::order(NodeId a, NodeId b) const { return pi_.order(a, b); }

std::vector<NodeId> FiniteAmbient::candidates(const std::vector<NodeId>& s) {
  std::vector<NodeId> out;
  for (NodeId n = 0; n < pi_.size(); ++n) {
    if (std::find(s.begin(), s.end(), n) != s.end()) continue;
    if (std::all_of(s.begin(), s.end(), [&](NodeId x) { return pi_.order(n, x) != kInfinity; })) out.push_back(n);
  }
  return out;
}

Realization FiniteAmbient::realize(const std::vector<NodeId>& from, const std::vector<NodeId>& to, bool collect,
                                   std::uint64_t stop_after) {
  Realization r;
  for (const auto& g : gamma_.elements()) {
    bool ok = true;
    for (std::size_t i = 0; i < from.size() && ok; ++i) ok = g(from[i]) == to[i];
    if (!ok) continue;
    ++r.count;
    if (collect) r.elements.emplace_back(g);
    if (stop_after && r.count >= stop_after) break;
  }
  return r;
}

NodeId FiniteAmbient::apply(const PiElement& g, NodeId n) { return std::get<Permutation>(g)(n); }

PiElement FiniteAmbient::identity() const { return Permutation::identity(pi_.size()); }

std::vector<std::uint64_t> FiniteAmbient::invariants(const std::vector<NodeId>& s) {
  std::vector<std::uint64_t> out;
  for (auto n : s) out.push_back(orbit_[n]);
  return out;
}

std::string FiniteAmbient::label(NodeId n) const { return pi_.name(n); }

// ---------------------------------------------------------------------------

LeechAmbient::LeechAmbient(leech::SearchOptions opts) : opts_(opts) {}

NodeId LeechAmbient::add(const leech::Vec& p) {
  if (!leech::in_leech(p)) throw std::invalid_argument("point is not in the Leech lattice");
  auto [it, fresh] = index_.emplace(p, static_cast<NodeId>(points_.size()));
  if (fresh) points_.push_back(p);
  return it->second;
}

int LeechAmbient::order(NodeId a, NodeId b) const { return leech::edge_order(points_.at(a), points_.at(b)); }

std::vector<NodeId> LeechAmbient::candidates(const std::vector<NodeId>& s) {
  if (auto it = candidate_cache_.find(s); it != candidate_cache_.end()) return it->second;
  leech::PointConfiguration cfg;
  for (auto n : s) cfg.points.push_back(points_.at(n));
  std::vector<NodeId> out;
  for (const auto& e : leech::extension_nodes(cfg)) out.push_back(add(e.point));
  std::sort(out.begin(), out.end());
  candidate_cache_.emplace(s, out);
  return out;
}

Realization LeechAmbient::realize(const std::vector<NodeId>& from, const std::vector<NodeId>& to, bool collect,
                                  std::uint64_t stop_after) {
  std::vector<leech::Vec> a, b;
  for (auto n : from) a.push_back(points_.at(n));
  for (auto n : to) b.push_back(points_.at(n));
  auto opts = opts_;
  opts.collect = collect;
  opts.stop_after = stop_after;
  auto res = leech::extension_count(a, b, opts);
  Realization r;
  r.count = res.count;
  for (auto& e : res.elements) r.elements.emplace_back(std::move(e));
  return r;
}

NodeId LeechAmbient::apply(const PiElement& g, NodeId n) {
  return add(std::get<leech::AffineSymmetry>(g).apply(points_.at(n)));
}

PiElement LeechAmbient::identity() const { return leech::AffineSymmetry::identity(); }

std::vector<std::uint64_t> LeechAmbient::invariants(const std::vector<NodeId>& s) {
  leech::PointConfiguration cfg;
  for (auto n : s) cfg.points.push_back(points_.at(n));
  return leech::point_invariants(cfg);
}

std::string LeechAmbient::label(NodeId n) const {
  std::ostringstream os;
  const auto& p = points_.at(n);
  for (int i = 0; i < leech::kDim; ++i) os << (i ? "," : "") << p[i];
  return os.str();
}

}  // namespace coxnorm
