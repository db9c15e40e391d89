#include "coxnorm/category.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

namespace coxnorm {

std::uint64_t CategoryQ4::total_morphisms() const {
  std::uint64_t t = 0;
  for (const auto& row : mor)
    for (const auto& m : row) t += m.size();
  return t;
}

namespace {

PiElement pi_mul(const PiElement& a, const PiElement& b) {
  if (const auto* pa = std::get_if<Permutation>(&a)) return *pa * std::get<Permutation>(b);
  return std::get<leech::AffineSymmetry>(a) * std::get<leech::AffineSymmetry>(b);
}

bool pi_is_identity(const PiElement& a) {
  if (const auto* pa = std::get_if<Permutation>(&a)) return pa->is_identity();
  return std::get<leech::AffineSymmetry>(a) == leech::AffineSymmetry::identity();
}

std::vector<std::uint32_t> sorted_image(const DiagramIsometry& k) {
  auto v = k.image;
  std::sort(v.begin(), v.end());
  return v;
}

struct ObjectData {
  PosetElement el;
  std::vector<std::uint64_t> inv;
  std::map<std::vector<std::uint32_t>, std::vector<const DiagramIsometry*>> by_image;
  std::vector<PiElement> pointwise;     // sorted
  std::map<Permutation, PiElement> ext;  // extendable automorphisms of the diagram, one realisation each
};

class Builder {
 public:
  Builder(const ParabolicConfig& cfg, Ambient& amb, const CategoryOptions& opts)
      : cfg_(cfg), amb_(amb), opts_(opts), max_rank_(opts.max_rank ? opts.max_rank : 2 * cfg.j.size()) {}

  CategoryQ4 run(const std::vector<NodeId>& j_nodes);

 private:
  PosetElement make_element(std::vector<NodeId> nodes, const DiagramIsometry& k_ambient_order);
  void add_object(PosetElement el);
  void compute_self(ObjectData& x);
  std::vector<Permutation> compatible_rhos(const DiagramIsometry& l, const ObjectData& x) const;
  std::optional<std::size_t> identify(const PosetElement& y);
  std::vector<PosetElement> neighbours(const ObjectData& x);
  std::vector<Symmetry> morphisms(const ObjectData& a, const ObjectData& b);

  const ParabolicConfig& cfg_;
  Ambient& amb_;
  const CategoryOptions& opts_;
  std::size_t max_rank_;
  std::deque<ObjectData> objs_;
  std::map<std::pair<std::vector<NodeId>, DiagramIsometry>, std::size_t> seen_;
  std::size_t examined_ = 0;
};

// `k` maps J's nodes to positions in `nodes` as given; nodes are sorted here and k follows.
PosetElement Builder::make_element(std::vector<NodeId> nodes, const DiagramIsometry& k) {
  std::vector<std::size_t> order(nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return nodes[a] < nodes[b]; });
  std::vector<std::uint32_t> pos(nodes.size());
  std::vector<NodeId> sorted(nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    pos[order[i]] = static_cast<std::uint32_t>(i);
    sorted[i] = nodes[order[i]];
  }
  DiagramIsometry kk;
  for (auto x : k.image) kk.image.push_back(pos[x]);
  PosetElement el;
  el.nodes = std::move(sorted);
  el.diagram = amb_.induced(el.nodes);
  auto t = classify_spherical(el.diagram);
  if (!t) throw std::logic_error("non-spherical poset element");
  el.type = *t;
  el.cls = associate_class_of(el.diagram, kk);
  return el;
}

void Builder::compute_self(ObjectData& x) {
  const auto& s = x.el.nodes;
  x.inv = amb_.invariants(s);
  for (const auto& m : x.el.cls.members) x.by_image[sorted_image(m)].push_back(&m);
  x.pointwise = amb_.realize(s, s, true, 0).elements;
  const std::size_t n = s.size();
  x.ext.emplace(Permutation::identity(n), amb_.identity());
  std::vector<std::pair<Permutation, PiElement>> gens;
  std::set<Permutation> failed;
  const auto autos = automorphisms(x.el.diagram);
  for (const auto& sigma : autos.elements()) {
    if (x.ext.count(sigma) || failed.count(sigma)) continue;
    bool ok = true;
    for (std::size_t k = 0; k < n && ok; ++k) ok = x.inv[k] == x.inv[sigma(k)];
    std::optional<PiElement> r;
    if (ok) {
      std::vector<NodeId> to(n);
      for (std::size_t k = 0; k < n; ++k) to[k] = s[sigma(k)];
      auto res = amb_.realize(s, to, true, 1);
      if (res.count) r = res.elements.front();
    }
    if (!r) {
      for (const auto& [tau, rt] : x.ext) failed.insert(tau * sigma);
      continue;
    }
    gens.emplace_back(sigma, *r);
    std::vector<Permutation> queue;
    for (const auto& [tau, rt] : x.ext) queue.push_back(tau);
    while (!queue.empty()) {
      auto tau = queue.back();
      queue.pop_back();
      const PiElement rt = x.ext.at(tau);
      for (const auto& [g, rg] : gens) {
        auto p = tau * g;
        if (x.ext.count(p)) continue;
        x.ext.emplace(p, pi_mul(rt, rg));
        queue.push_back(p);
      }
    }
  }
}

void Builder::add_object(PosetElement el) {
  if (objs_.size() >= opts_.max_objects)
    throw BuildError("component has more than " + std::to_string(opts_.max_objects) + " objects (" +
                     std::to_string(objs_.size()) + " found so far)");
  objs_.emplace_back();
  objs_.back().el = std::move(el);
  compute_self(objs_.back());
}

// All rho in Gamma_J with l o rho^-1 in the class of x. l maps J into x's positions.
std::vector<Permutation> Builder::compatible_rhos(const DiagramIsometry& l, const ObjectData& x) const {
  std::vector<Permutation> out;
  auto it = x.by_image.find(sorted_image(l));
  if (it == x.by_image.end()) return out;
  std::map<std::uint32_t, std::uint32_t> linv;
  for (std::uint32_t j = 0; j < l.image.size(); ++j) linv[l.image[j]] = j;
  for (const auto* m : it->second) {
    std::vector<std::uint32_t> rinv(l.image.size());
    for (std::size_t j = 0; j < rinv.size(); ++j) rinv[j] = linv.at(m->image[j]);
    auto rho = Permutation(std::move(rinv)).inverse();
    if (cfg_.gamma_j.contains(rho)) out.push_back(std::move(rho));
  }
  std::sort(out.begin(), out.end());
  return out;
}

DiagramIsometry after(const DiagramIsometry& phi, const DiagramIsometry& k) {
  DiagramIsometry out;
  for (auto x : k.image) out.image.push_back(phi.image[x]);
  return out;
}

std::optional<std::size_t> Builder::identify(const PosetElement& y) {
  auto key = std::make_pair(y.nodes, y.cls.representative());
  if (auto it = seen_.find(key); it != seen_.end()) return it->second;
  std::optional<std::vector<std::uint64_t>> inv_y;
  std::optional<std::size_t> found;
  for (std::size_t xi = 0; xi < objs_.size() && !found; ++xi) {
    const auto& x = objs_[xi];
    if (x.el.type != y.type || x.el.nodes.size() != y.nodes.size()) continue;
    if (!inv_y) inv_y = amb_.invariants(y.nodes);
    auto a = *inv_y, b = x.inv;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) continue;
    std::set<DiagramIsometry> failed;
    for (const auto& phi : isometries(y.diagram, x.el.diagram)) {
      if (failed.count(phi)) continue;
      bool ok = true;
      for (std::size_t k = 0; k < phi.image.size() && ok; ++k) ok = (*inv_y)[k] == x.inv[phi.image[k]];
      if (!ok) continue;
      if (compatible_rhos(after(phi, y.cls.representative()), x).empty()) continue;
      std::vector<NodeId> to;
      for (auto p : phi.image) to.push_back(x.el.nodes[p]);
      if (amb_.realize(y.nodes, to, false, 1).count) {
        found = xi;
        break;
      }
      for (const auto& [tau, rt] : x.ext) {
        DiagramIsometry t;
        for (auto p : phi.image) t.image.push_back(tau(p));
        failed.insert(std::move(t));
      }
    }
  }
  if (found) seen_.emplace(std::move(key), *found);
  return found;
}

std::vector<PosetElement> Builder::neighbours(const ObjectData& x) {
  std::vector<PosetElement> out;
  const auto& s = x.el.nodes;
  const auto& krep = x.el.cls.representative();
  // Up: one more node.
  if (s.size() < max_rank_) {
    for (NodeId c : amb_.candidates(s)) {
      if (opts_.reflective_filter &&
          std::all_of(krep.image.begin(), krep.image.end(), [&](std::uint32_t p) { return amb_.order(c, s[p]) == 2; }))
        continue;
      auto nodes = s;
      nodes.push_back(c);
      auto d = amb_.induced(nodes);
      if (!is_spherical(d)) continue;
      auto el = make_element(std::move(nodes), krep);
      if (opts_.reflective_filter && class_is_r_reflective(el.diagram, el.cls, cfg_.r)) continue;
      ++examined_;
      out.push_back(std::move(el));
    }
  }
  // Down: drop one node, splitting the class among the members that avoid it.
  if (s.size() > cfg_.j.size()) {
    for (std::uint32_t v = 0; v < s.size(); ++v) {
      std::vector<NodeId> rest;
      for (std::uint32_t i = 0; i < s.size(); ++i)
        if (i != v) rest.push_back(s[i]);
      std::set<DiagramIsometry> left;
      for (const auto& m : x.el.cls.members) {
        if (std::find(m.image.begin(), m.image.end(), v) != m.image.end()) continue;
        DiagramIsometry r;
        for (auto p : m.image) r.image.push_back(p > v ? p - 1 : p);
        left.insert(std::move(r));
      }
      while (!left.empty()) {
        auto el = make_element(rest, *left.begin());
        for (const auto& m : el.cls.members) left.erase(m);
        ++examined_;
        out.push_back(std::move(el));
      }
    }
  }
  return out;
}

std::vector<Symmetry> Builder::morphisms(const ObjectData& a, const ObjectData& b) {
  std::vector<Symmetry> out;
  const auto isos = isometries(a.el.diagram, b.el.diagram);
  // Realisations of each isometry; nullopt once known to be empty.
  std::map<DiagramIsometry, std::optional<std::vector<PiElement>>> known;
  std::map<std::vector<std::uint32_t>, std::vector<std::uint64_t>> sub_inv;
  auto spread = [&](const DiagramIsometry& phi, const std::optional<std::vector<PiElement>>& g) {
    for (const auto& [sigma, rs] : a.ext) {
      DiagramIsometry ps;
      for (std::size_t k = 0; k < phi.image.size(); ++k) ps.image.push_back(phi.image[sigma(k)]);
      if (known.count(ps)) continue;
      if (!g) {
        known.emplace(std::move(ps), std::nullopt);
        continue;
      }
      std::vector<PiElement> h;
      for (const auto& x : *g) h.push_back(pi_mul(x, rs));
      std::sort(h.begin(), h.end());
      known.emplace(std::move(ps), std::move(h));
    }
  };
  if (&a == &b) spread(DiagramIsometry{[&] {
                         std::vector<std::uint32_t> id(a.el.nodes.size());
                         for (std::uint32_t i = 0; i < id.size(); ++i) id[i] = i;
                         return id;
                       }()},
                       a.pointwise);
  for (const auto& phi : isos) {
    if (!known.count(phi)) {
      auto img = sorted_image(phi);
      auto it = sub_inv.find(img);
      if (it == sub_inv.end()) {
        std::vector<NodeId> t;
        for (auto p : img) t.push_back(b.el.nodes[p]);
        it = sub_inv.emplace(img, amb_.invariants(t)).first;
      }
      bool ok = true;
      for (std::size_t k = 0; k < phi.image.size() && ok; ++k) {
        auto pos = std::lower_bound(img.begin(), img.end(), phi.image[k]) - img.begin();
        ok = a.inv[k] == it->second[pos];
      }
      std::optional<std::vector<PiElement>> g;
      if (ok) {
        std::vector<NodeId> to;
        for (auto p : phi.image) to.push_back(b.el.nodes[p]);
        auto r = amb_.realize(a.el.nodes, to, true, 0);
        if (r.count) g = std::move(r.elements);
      }
      spread(phi, g);
    }
    const auto& g = known.at(phi);
    if (!g) continue;
    for (const auto& rho : compatible_rhos(after(phi, a.el.cls.representative()), b))
      for (const auto& h : *g) out.push_back(Symmetry{rho, h});
  }
  std::sort(out.begin(), out.end());
  return out;
}

CategoryQ4 Builder::run(const std::vector<NodeId>& j_nodes) {
  if (j_nodes.size() != cfg_.j.size()) throw ConfigError("J node list has the wrong length");
  for (std::size_t a = 0; a < j_nodes.size(); ++a)
    for (std::size_t b = 0; b < j_nodes.size(); ++b)
      if (amb_.order(j_nodes[a], j_nodes[b]) != cfg_.j.order(a, b))
        throw ConfigError("J does not match the diagram induced on its nodes");
  DiagramIsometry id;
  for (std::uint32_t i = 0; i < j_nodes.size(); ++i) id.image.push_back(i);
  auto root = make_element(j_nodes, id);
  if (opts_.reflective_filter && class_is_r_reflective(root.diagram, root.cls, cfg_.r))
    throw BuildError("(J, id) is R-reflective, so it is not in P3");
  ++examined_;
  add_object(std::move(root));
  for (std::size_t i = 0; i < objs_.size(); ++i) {
    for (auto& y : neighbours(objs_[i])) {
      if (identify(y)) continue;
      seen_.emplace(std::make_pair(y.nodes, y.cls.representative()), objs_.size());
      add_object(std::move(y));
    }
  }

  CategoryQ4 q;
  q.config = cfg_;
  q.elements_examined = examined_;
  const std::size_t n = objs_.size();
  q.mor.assign(n, std::vector<std::vector<Symmetry>>(n));
  for (std::size_t a = 0; a < n; ++a) {
    q.objects.push_back(objs_[a].el);
    for (std::size_t b = 0; b < n; ++b) {
      const auto sa = objs_[a].el.nodes.size(), sb = objs_[b].el.nodes.size();
      // Equal sizes force gamma(S_a) = S_b, so distinct objects have no morphisms.
      if (sa > sb || (sa == sb && a != b)) continue;
      q.mor[a][b] = morphisms(objs_[a], objs_[b]);
    }
  }
  return q;
}

}  // namespace

CategoryQ4 build_component(const ParabolicConfig& config, Ambient& ambient, const std::vector<NodeId>& j_nodes,
                           const CategoryOptions& opts) {
  return Builder(config, ambient, opts).run(j_nodes);
}

std::optional<std::string> check_category_axioms(const CategoryQ4& q, std::uint64_t max_products) {
  const std::size_t n = q.size();
  for (std::size_t a = 0; a < n; ++a) {
    const auto& m = q.mor[a][a];
    if (std::none_of(m.begin(), m.end(),
                     [](const Symmetry& s) { return s.j_part.is_identity() && pi_is_identity(s.pi_part); }))
      return "object " + std::to_string(a) + " has no identity morphism";
  }
  std::uint64_t total = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) total += q.count(a, b) * q.count(b, c);
  // Large categories are checked on an evenly spaced sample of composable pairs.
  const std::uint64_t stride = max_products && total > max_products ? (total + max_products - 1) / max_products : 1;
  std::uint64_t idx = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        const auto& f = q.mor[a][b];
        const auto& g = q.mor[b][c];
        const auto& h = q.mor[a][c];
        const std::uint64_t block = f.size() * g.size();
        if (!block) continue;
        if (stride > 1 && idx + block <= ((idx + stride - 1) / stride) * stride) {
          idx += block;
          continue;
        }
        for (std::size_t i = 0; i < f.size(); ++i)
          for (std::size_t k = 0; k < g.size(); ++k, ++idx) {
            if (idx % stride) continue;
            if (!std::binary_search(h.begin(), h.end(), g[k] * f[i]))
              return "composite " + std::to_string(a) + "->" + std::to_string(b) + "->" + std::to_string(c) +
                     " is not a morphism";
          }
      }
  return std::nullopt;
}

std::size_t max_chain_length(const CategoryQ4& q) {
  const std::size_t n = q.size();
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return q.objects[a].nodes.size() < q.objects[b].nodes.size(); });
  std::vector<std::size_t> len(n, 1);
  std::size_t best = n ? 1 : 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const auto a = idx[j], b = idx[i];
      if (q.objects[a].nodes.size() < q.objects[b].nodes.size() && q.count(a, b)) {
        len[b] = std::max(len[b], len[a] + 1);
        best = std::max(best, len[b]);
      }
    }
  return best;
}

BrinkGraph brink_graph(const CoxeterDiagram& pi, std::size_t node) {
  if (node >= pi.size()) throw std::out_of_range("node not in diagram");
  auto odd = [&](std::size_t a, std::size_t b) {
    const int m = pi.order(a, b);
    return a != b && m != kInfinity && m % 2 == 1;
  };
  BrinkGraph g;
  std::vector<bool> in(pi.size(), false);
  std::vector<std::size_t> stack{node};
  in[node] = true;
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (std::size_t w = 0; w < pi.size(); ++w)
      if (!in[w] && odd(v, w)) {
        in[w] = true;
        stack.push_back(w);
      }
  }
  for (std::size_t v = 0; v < pi.size(); ++v)
    if (in[v]) g.vertices.push_back(v);
  for (auto v : g.vertices)
    for (auto w : g.vertices)
      if (v < w && odd(v, w)) g.edges.emplace_back(v, w);
  g.free_rank = g.edges.size() + 1 - g.vertices.size();
  return g;
}

}  // namespace coxnorm
