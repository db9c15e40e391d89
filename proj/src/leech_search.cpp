#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "coxnorm/leech.hpp"
#include "exact.hpp"

namespace coxnorm::leech {

namespace {

inline int dot_rows(const std::int8_t* a, const std::int8_t* b) {
  int s = 0;
  for (int k = 0; k < kDim; ++k) s += a[k] * b[k];
  return s;
}

inline std::int64_t dot_row_vec(const std::int8_t* a, const Vec& v) {
  std::int64_t s = 0;
  for (int k = 0; k < kDim; ++k) s += static_cast<std::int64_t>(a[k]) * v[k];
  return s;
}

// Integer coordinates of lattice vectors in the fixed lattice basis.
const std::array<std::array<std::int32_t, kDim>, kDim>& dual_rows() {
  static const auto m = [] {
    const auto& b = search_basis();
    exact::Matrix g(kDim, std::vector<exact::i128>(kDim));
    for (int k = 0; k < kDim; ++k)
      for (int l = 0; l < kDim; ++l) g[k][l] = dot8(b[k], b[l]) / 8;
    auto ginv = exact::unimodular_inverse(g);
    std::array<std::array<std::int32_t, kDim>, kDim> m{};
    for (int k = 0; k < kDim; ++k)
      for (int j = 0; j < kDim; ++j) {
        exact::i128 s = 0;
        for (int l = 0; l < kDim; ++l) s += ginv[k][l] * b[l][j];
        m[k][j] = static_cast<std::int32_t>(s);
      }
    return m;
  }();
  return m;
}

// Grows a list of independent lattice vectors, normally one that extends to a lattice basis. U is unimodular and
// maps the coordinates of the accepted vectors to unit lower triangular rows.
class PrimitiveSpan {
 public:
  PrimitiveSpan() {
    for (int i = 0; i < kDim; ++i) u_[i][i] = 1;
  }
  // With unit = false any independent vector is accepted and the span may get finite index.
  bool add(const std::int8_t* r, bool unit = true) {
    const auto& m = dual_rows();
    std::array<exact::i128, kDim> c{}, w{};
    for (int k = 0; k < kDim; ++k) {
      std::int64_t s = 0;
      for (int j = 0; j < kDim; ++j) s += static_cast<std::int64_t>(m[k][j]) * r[j];
      c[k] = s / 8;
    }
    for (int j = rank_; j < kDim; ++j)
      for (int k = 0; k < kDim; ++k) w[j] += c[k] * u_[k][j];
    exact::i128 g = 0;
    for (int j = rank_; j < kDim; ++j) g = std::gcd(g, exact::abs128(w[j]));
    if (g == 0 || (unit && g != 1)) return false;
    auto col_sub = [&](int dst, int src, exact::i128 q) {
      w[dst] -= q * w[src];
      for (int k = 0; k < kDim; ++k) u_[k][dst] -= q * u_[k][src];
    };
    auto col_swap = [&](int a, int b) {
      std::swap(w[a], w[b]);
      for (int k = 0; k < kDim; ++k) std::swap(u_[k][a], u_[k][b]);
    };
    const int piv = rank_;
    for (int j = piv + 1; j < kDim; ++j)
      while (w[j] != 0) {
        col_sub(piv, j, w[piv] / w[j]);
        col_swap(piv, j);
      }
    if (w[piv] < 0) {
      w[piv] = -w[piv];
      for (int k = 0; k < kDim; ++k) u_[k][piv] = -u_[k][piv];
    }
    ++rank_;
    return true;
  }
  int rank() const { return rank_; }

 private:
  std::array<std::array<exact::i128, kDim>, kDim> u_{};
  int rank_ = 0;
};

// A lattice basis of norm-4 vectors chosen for one search.
struct SearchBasis {
  std::array<std::uint32_t, kDim> idx{};
  std::array<std::array<int, kDim>, kDim> gram8{};
  exact::i128 den = 1;
  exact::Matrix inv;  // (B^T)^-1 = inv / den, B with the basis vectors as rows
};

struct Search {
  const Shell& s4;
  const SearchBasis& bd;
  const SearchOptions& opts;
  std::span<const Vec> from, to;
  std::atomic<std::uint64_t>& nodes;
  std::atomic<bool>& stop;

  std::uint64_t count = 0;
  std::vector<AffineSymmetry> elements;

  struct Slot {
    int k;
    std::vector<std::uint32_t> cands;
  };

  void leaf(const std::array<std::uint32_t, kDim>& img) {
    AffineSymmetry::Matrix n{};
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j) {
        exact::i128 s = 0;
        for (int k = 0; k < kDim; ++k) s += s4.row(img[k])[i] * bd.inv[k][j];
        s *= 8;
        if (s % bd.den != 0) return;
        s /= bd.den;
        if (s > 8 || s < -8) return;
        n[i * kDim + j] = static_cast<std::int8_t>(s);
      }
    AffineSymmetry lin(n, Vec{});
    for (const auto& e : search_basis()) {
      Vec y{};
      for (int i = 0; i < kDim; ++i) {
        std::int64_t t = 0;
        for (int j = 0; j < kDim; ++j) t += static_cast<std::int64_t>(n[i * kDim + j]) * e[j];
        if (t % 8 != 0) return;
        y[i] = static_cast<std::int32_t>(t / 8);
      }
      if (!in_leech(y)) return;
    }
    for (std::size_t i = 1; i < from.size(); ++i)
      if (lin.apply_linear(from[i] - from[0]) != to[i] - to[0]) return;
    ++count;
    if (opts.collect) elements.emplace_back(n, to[0] - lin.apply_linear(from[0]));
    if (opts.stop_after && count >= opts.stop_after) stop = true;
  }

  void run(std::vector<Slot>& slots, std::array<std::uint32_t, kDim>& img) {
    if (stop) return;
    if (nodes.fetch_add(1, std::memory_order_relaxed) + 1 > opts.budget) throw BudgetExceeded(opts.budget);
    if (slots.empty()) {
      leaf(img);
      return;
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < slots.size(); ++i)
      if (slots[i].cands.size() < slots[best].cands.size()) best = i;
    if (slots[best].cands.empty()) return;
    Slot chosen = std::move(slots[best]);
    slots.erase(slots.begin() + static_cast<std::ptrdiff_t>(best));
    for (auto c : chosen.cands) {
      descend(slots, chosen.k, c, img);
      if (stop) break;
    }
    slots.insert(slots.begin() + static_cast<std::ptrdiff_t>(best), std::move(chosen));
  }

  void descend(const std::vector<Slot>& slots, int k, std::uint32_t c, std::array<std::uint32_t, kDim>& img) {
    const auto* v = s4.row(c);
    std::vector<Slot> next;
    next.reserve(slots.size());
    for (const auto& sl : slots) {
      Slot ns{sl.k, {}};
      const int want = bd.gram8[k][sl.k];
      for (auto w : sl.cands)
        if (dot_rows(v, s4.row(w)) == want) ns.cands.push_back(w);
      if (ns.cands.empty()) return;
      next.push_back(std::move(ns));
    }
    img[k] = c;
    run(next, img);
  }
};

inline std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h * 0xff51afd7ed558ccdULL;
}

// Hash of the inner products of each norm-4 vector with a list of points.
std::vector<std::uint64_t> signatures(const Shell& s4, const std::vector<Vec>& pts) {
  std::vector<std::uint64_t> out(s4.size());
  for (std::size_t u = 0; u < s4.size(); ++u) {
    const auto* r = s4.row(u);
    std::uint64_t h = 0;
    for (const auto& v : pts) h = mix(h, static_cast<std::uint64_t>(dot_row_vec(r, v)));
    out[u] = h;
  }
  return out;
}

}  // namespace

ExtensionResult extension_count(std::span<const Vec> from, std::span<const Vec> to, const SearchOptions& opts) {
  if (from.size() != to.size()) throw std::invalid_argument("partial map sizes differ");
  // With fewer than two points the stabilizer contains all of Co_0.
  if (from.size() < 2) throw BudgetExceeded(opts.budget);
  ExtensionResult res;
  for (std::size_t i = 0; i < from.size(); ++i)
    for (std::size_t j = i + 1; j < from.size(); ++j)
      if (norm8(from[i] - from[j]) != norm8(to[i] - to[j])) return res;

  const auto& s4 = shell(4);
  std::vector<Vec> p, q;
  for (std::size_t i = 1; i < from.size(); ++i) {
    p.push_back(from[i] - from[0]);
    q.push_back(to[i] - to[0]);
  }
  // Class ids are hashes; collisions only weaken the pruning since leaves are checked exactly.
  std::unordered_map<std::uint64_t, std::uint32_t> ids;
  std::vector<std::uint32_t> cp(s4.size()), cq(s4.size());
  for (auto [sig, cls] : {std::pair{signatures(s4, p), &cp}, std::pair{signatures(s4, q), &cq}})
    for (std::size_t u = 0; u < s4.size(); ++u)
      (*cls)[u] = ids.emplace(sig[u], static_cast<std::uint32_t>(ids.size())).first->second;
  std::vector<std::uint32_t> np(ids.size(), 0), nq(ids.size(), 0);
  for (auto c : cp) ++np[c];
  for (auto c : cq) ++nq[c];
  // A symmetry maps each class on the source side onto the same class on the target side.
  if (np != nq) return res;

  // A lattice basis from the smallest classes.
  std::vector<std::uint32_t> order(s4.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return np[cp[a]] < np[cp[b]]; });
  SearchBasis bd;
  PrimitiveSpan span;
  for (bool unit : {true, false})
    for (auto u : order) {
      if (span.rank() == kDim) break;
      if (span.add(s4.row(u), unit)) bd.idx[span.rank() - 1] = u;
    }
  if (span.rank() != kDim) throw std::logic_error("norm-4 vectors do not span the lattice");
  exact::Matrix bt(kDim, std::vector<exact::i128>(kDim));
  for (int k = 0; k < kDim; ++k) {
    for (int l = 0; l < kDim; ++l) bd.gram8[k][l] = dot_rows(s4.row(bd.idx[k]), s4.row(bd.idx[l]));
    for (int j = 0; j < kDim; ++j) bt[j][k] = s4.row(bd.idx[k])[j];
  }
  std::tie(bd.den, bd.inv) = exact::scaled_inverse(bt);

  std::vector<std::vector<std::uint32_t>> members(ids.size());
  std::vector<char> wanted(ids.size(), 0);
  for (int k = 0; k < kDim; ++k) wanted[cp[bd.idx[k]]] = 1;
  for (std::size_t u = 0; u < s4.size(); ++u)
    if (wanted[cq[u]]) members[cq[u]].push_back(static_cast<std::uint32_t>(u));
  std::vector<Search::Slot> slots(kDim);
  for (int k = 0; k < kDim; ++k) {
    slots[k].k = k;
    slots[k].cands = members[cp[bd.idx[k]]];
  }

  std::atomic<std::uint64_t> nodes{0};
  std::atomic<bool> stop{false};
  // Split the first branching level across threads; merge in a fixed order.
  std::size_t best = 0;
  for (std::size_t i = 1; i < slots.size(); ++i)
    if (slots[i].cands.size() < slots[best].cands.size()) best = i;
  Search::Slot first = std::move(slots[best]);
  slots.erase(slots.begin() + static_cast<std::ptrdiff_t>(best));
  const int threads = std::max(1, std::min<int>(opts.threads, static_cast<int>(first.cands.size())));
  std::vector<Search> workers;
  for (int t = 0; t < threads; ++t) workers.push_back(Search{s4, bd, opts, from, to, nodes, stop, 0, {}});
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](int t) {
    try {
      std::array<std::uint32_t, kDim> img{};
      for (std::size_t i = t; i < first.cands.size(); i += threads) {
        workers[t].descend(slots, first.k, first.cands[i], img);
        if (stop) break;
      }
    } catch (...) {
      errors[t] = std::current_exception();
      stop = true;
    }
  };
  nodes = 1;
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (auto& w : workers) {
    res.count += w.count;
    for (auto& e : w.elements) res.elements.push_back(std::move(e));
  }
  if (opts.stop_after) res.count = std::min(res.count, opts.stop_after);
  std::sort(res.elements.begin(), res.elements.end());
  if (opts.stop_after && res.elements.size() > opts.stop_after) res.elements.resize(opts.stop_after);
  res.nodes = nodes;
  return res;
}

// ---------------------------------------------------------------------------
// Configurations

CoxeterDiagram PointConfiguration::diagram() const {
  std::vector<Bond> bonds;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      int m = edge_order(points[i], points[j]);
      if (m == 1) throw std::invalid_argument("configuration repeats a point");
      if (m != 2) bonds.push_back({i, j, m});
    }
  return CoxeterDiagram::anonymous(points.size(), bonds);
}

std::vector<std::vector<std::int64_t>> PointConfiguration::gram() const {
  std::vector<std::vector<std::int64_t>> g(points.size(), std::vector<std::int64_t>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j) g[i][j] = norm8(points[i] - points[j]) / 8;
  return g;
}

PointConfiguration PointConfiguration::normalized() const {
  PointConfiguration c;
  if (points.empty()) return c;
  for (const auto& p : points) c.points.push_back(p - points[0]);
  return c;
}

std::vector<ExtensionNode> extension_nodes(const PointConfiguration& cfg, std::span<const std::size_t> bonded_to) {
  if (cfg.points.empty()) throw std::invalid_argument("empty configuration");
  auto base = cfg.diagram();
  if (!is_spherical(base)) throw std::invalid_argument("configuration is not spherical");
  std::vector<char> must(cfg.size(), 0);
  for (auto i : bonded_to) must.at(i) = 1;
  const auto rel = cfg.normalized();
  std::vector<std::int64_t> pn(rel.size());
  for (std::size_t i = 0; i < rel.size(); ++i) pn[i] = norm8(rel.points[i]);

  std::vector<ExtensionNode> out;
  for (int norm : {4, 6}) {
    const auto& sh = shell(norm);
    const std::int64_t un = 8 * norm;
    for (std::size_t u = 0; u < sh.size(); ++u) {
      const auto* r = sh.row(u);
      bool ok = true, bonded = bonded_to.empty() || (must[0] && norm == 6);
      for (std::size_t i = 1; i < rel.size() && ok; ++i) {
        const auto d = un + pn[i] - 2 * dot_row_vec(r, rel.points[i]);
        if (d != 32 && d != 48) ok = false;
        else if (d == 48 && must[i]) bonded = true;
      }
      if (!ok || !bonded) continue;
      PointConfiguration ext = cfg;
      ext.points.push_back(cfg.points[0] + sh.point(u));
      if (auto t = classify_spherical(ext.diagram())) out.push_back({ext.points.back(), *t});
    }
  }
  return out;
}

std::vector<std::uint64_t> point_invariants(const PointConfiguration& cfg) {
  const auto& s4 = shell(4);
  std::vector<std::uint64_t> out;
  std::vector<std::int64_t> d;
  std::vector<std::uint64_t> hs(s4.size());
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    std::vector<Vec> rel;
    for (std::size_t j = 0; j < cfg.size(); ++j)
      if (j != i) rel.push_back(cfg.points[j] - cfg.points[i]);
    for (std::size_t u = 0; u < s4.size(); ++u) {
      d.clear();
      for (const auto& v : rel) d.push_back(dot_row_vec(s4.row(u), v));
      std::sort(d.begin(), d.end());
      std::uint64_t h = 0;
      for (auto x : d) h = mix(h, static_cast<std::uint64_t>(x));
      hs[u] = h;
    }
    std::sort(hs.begin(), hs.end());
    std::uint64_t h = 0;
    for (auto x : hs) h = mix(h, x);
    out.push_back(h);
  }
  return out;
}

StabilizerInfo stabilizer(const PointConfiguration& cfg, const SearchOptions& opts) {
  StabilizerInfo info;
  info.pointwise = extension_count(cfg.points, cfg.points, opts).count;
  auto autos = automorphisms(cfg.diagram());
  const auto inv = point_invariants(cfg);
  SearchOptions once = opts;
  once.collect = false;
  once.stop_after = 1;
  // Extendable automorphisms form a subgroup; membership of a coset is decided once.
  std::vector<Permutation> known;
  std::vector<char> decided(autos.order(), 0), ext(autos.order(), 0);
  auto index_of = [&](const Permutation& p) {
    return static_cast<std::size_t>(std::lower_bound(autos.elements().begin(), autos.elements().end(), p) -
                                    autos.elements().begin());
  };
  for (std::size_t i = 0; i < autos.order(); ++i) {
    if (decided[i]) continue;
    const auto& sigma = autos.elements()[i];
    bool plausible = true;
    for (std::size_t k = 0; k < cfg.size() && plausible; ++k) plausible = inv[sigma(k)] == inv[k];
    if (!plausible) continue;
    std::vector<Vec> img(cfg.size());
    for (std::size_t k = 0; k < cfg.size(); ++k) img[k] = cfg.points[sigma(k)];
    bool yes = sigma.is_identity() || extension_count(cfg.points, img, once).count > 0;
    decided[i] = 1;
    ext[i] = yes;
    if (yes) {
      known.push_back(sigma);
      // Close the known extendable set under products with earlier elements.
      PermutationGroup h(cfg.size(), known);
      for (const auto& g : h.elements()) {
        auto j = index_of(g);
        decided[j] = 1;
        ext[j] = 1;
      }
      known = h.generators();
    } else if (!known.empty()) {
      PermutationGroup h(cfg.size(), known);
      for (const auto& g : h.elements()) {
        auto j = index_of(g * sigma);
        decided[j] = 1;
      }
    }
  }
  for (std::size_t i = 0; i < autos.order(); ++i)
    if (ext[i]) info.extendable.push_back(autos.elements()[i]);
  info.setwise = info.pointwise * info.extendable.size();
  return info;
}

namespace {

// Nodes ordered so that each has as many earlier neighbours as possible, highest degree first.
std::vector<std::size_t> placement_order(const CoxeterDiagram& d) {
  const std::size_t n = d.size();
  std::vector<int> deg(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (d.bonded(a, b)) ++deg[a];
  std::vector<std::size_t> order;
  std::vector<char> used(n, 0);
  while (order.size() < n) {
    std::size_t best = SIZE_MAX;
    int best_key = -1;
    for (std::size_t v = 0; v < n; ++v) {
      if (used[v]) continue;
      int links = 0;
      for (auto u : order)
        if (d.bonded(u, v)) ++links;
      int key = links * 16 + deg[v];
      if (key > best_key) {
        best_key = key;
        best = v;
      }
    }
    used[best] = 1;
    order.push_back(best);
  }
  return order;
}

// Vectors with few nonzero coordinates and small entries first.
std::uint64_t simplicity(const Vec& r) {
  int nz = 0, mx = 0;
  for (int k = 0; k < kDim; ++k) {
    if (r[k]) ++nz;
    mx = std::max(mx, std::abs(r[k]));
  }
  return static_cast<std::uint64_t>(nz) * 16 + static_cast<std::uint64_t>(mx);
}

void sort_by_simplicity(std::vector<Vec>& v) {
  std::stable_sort(v.begin(), v.end(), [](const Vec& a, const Vec& b) { return simplicity(a) < simplicity(b); });
}

// Shell vectors constant off the first octad: the fixed sublattice of the elementary abelian
// group of order 16 in M24 that fixes that octad pointwise.
const std::map<int, std::vector<Vec>>& octad_pool() {
  static const auto pool = [] {
    const auto o = GolayCode::instance().words_of_weight(8).front();
    std::map<int, std::vector<Vec>> pool;
    for (int norm : {4, 6}) {
      const auto& sh = shell(norm);
      auto& out = pool[norm];
      for (std::size_t u = 0; u < sh.size(); ++u) {
        const auto* r = sh.row(u);
        int c = 0;
        bool first = true, ok = true;
        for (int i = 0; i < kDim && ok; ++i) {
          if (o >> i & 1) continue;
          if (first) c = r[i], first = false;
          else ok = r[i] == c;
        }
        if (ok) out.push_back(sh.point(u));
      }
      sort_by_simplicity(out);
    }
    return pool;
  }();
  return pool;
}

class Placer {
 public:
  using Visit = std::function<bool(const PointConfiguration&)>;

  Placer(const CoxeterDiagram& target, std::uint64_t budget)
      : target_(target), order_(placement_order(target)), budget_(budget), placed_(target.size()) {}

  // Squared distance between the k-th and l-th placed nodes.
  int dist(std::size_t k, std::size_t l) const { return target_.order(order_[k], order_[l]) == 3 ? 6 : 4; }

  // All points start at the origin; later points come from a pool of shell vectors.
  bool from_pool(const std::map<int, std::vector<Vec>>& pool, const Visit& visit) {
    lists_ = [&](std::size_t k) -> const std::vector<Vec>& { return pool.at(dist(0, k)); };
    return rec(1, visit);
  }

  // The affine group is transitive on norm-4 and on norm-6 vectors, so the second point is fixed.
  bool from_shells(const Visit& visit) {
    const std::size_t n = target_.size();
    if (n == 1) return rec(1, visit);
    placed_[1] = shell(dist(0, 1)).point(0);
    std::map<std::pair<int, int>, std::vector<Vec>> cache;
    for (std::size_t k = 2; k < n; ++k) {
      auto key = std::make_pair(dist(0, k), dist(1, k));
      if (cache.count(key)) continue;
      const auto& sh = shell(key.first);
      auto& c = cache[key];
      for (std::size_t u = 0; u < sh.size(); ++u) {
        const auto d = 8 * key.first + norm8(placed_[1]) - 2 * dot_row_vec(sh.row(u), placed_[1]);
        if (d == 8 * key.second) c.push_back(sh.point(u));
      }
      sort_by_simplicity(c);
    }
    lists_ = [&](std::size_t k) -> const std::vector<Vec>& { return cache.at({dist(0, k), dist(1, k)}); };
    return rec(2, visit);
  }

 private:
  bool rec(std::size_t k, const Visit& visit) {
    const std::size_t n = target_.size();
    if (k == n) {
      PointConfiguration cfg;
      cfg.points.resize(n);
      for (std::size_t i = 0; i < n; ++i) cfg.points[order_[i]] = placed_[i];
      return visit(cfg);
    }
    for (const auto& v : lists_(k)) {
      if (++nodes_ > budget_) throw BudgetExceeded(budget_);
      bool ok = true;
      for (std::size_t i = 1; i < k && ok; ++i) ok = norm8(v - placed_[i]) == 8 * dist(i, k);
      if (!ok) continue;
      placed_[k] = v;
      if (rec(k + 1, visit)) return true;
    }
    return false;
  }

  const CoxeterDiagram& target_;
  std::vector<std::size_t> order_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<Vec> placed_;
  std::function<const std::vector<Vec>&(std::size_t)> lists_;
};

}  // namespace

PointConfiguration find_configuration(const SphericalType& t, const FindOptions& opts) {
  const auto target = standard_diagram(t);
  for (const auto& b : target.bonds())
    if (b.order != 3) throw std::runtime_error("no configuration of type " + t.to_string() + ": Leech bonds are 3 or infinite");
  std::optional<PointConfiguration> best;
  if (opts.selector == Selector::FirstFound) {
    Placer(target, opts.budget).from_shells([&](const PointConfiguration& cfg) {
      best = cfg;
      return true;
    });
  } else {
    const auto diagram_autos = automorphism_group(target).order;
    SearchOptions so;
    so.budget = opts.budget;
    std::uint64_t best_order = 0;
    auto consider = [&](std::uint64_t& seen) {
      return [&](const PointConfiguration& cfg) {
        ++seen;
        if (!best) best = cfg;
        try {
          // The pointwise count bounds the setwise order cheaply.
          const auto pw = extension_count(cfg.points, cfg.points, so).count;
          if (pw * diagram_autos > best_order) {
            const auto ord = stabilizer(cfg, so).setwise;
            if (ord > best_order) {
              best = cfg;
              best_order = ord;
            }
          }
        } catch (const BudgetExceeded&) {
        }
        return seen >= opts.max_candidates;
      };
    };
    // Symmetric configurations first, then the unrestricted search.
    std::uint64_t seen_pool = 0, seen_all = 0;
    Placer(target, opts.budget).from_pool(octad_pool(), consider(seen_pool));
    Placer(target, opts.budget).from_shells(consider(seen_all));
  }
  if (!best) throw std::runtime_error("no configuration of type " + t.to_string() + " found");
  return *best;
}

bool equivalent_configurations(const PointConfiguration& c1, const PointConfiguration& c2, const SearchOptions& opts) {
  if (c1.size() != c2.size()) return false;
  auto d1 = c1.diagram(), d2 = c2.diagram();
  auto t1 = classify_spherical(d1), t2 = classify_spherical(d2);
  if (!t1 || !t2 || !(*t1 == *t2)) return false;
  const auto inv1 = point_invariants(c1), inv2 = point_invariants(c2);
  auto s1 = inv1, s2 = inv2;
  std::sort(s1.begin(), s1.end());
  std::sort(s2.begin(), s2.end());
  if (s1 != s2) return false;
  SearchOptions once = opts;
  once.collect = false;
  once.stop_after = 1;
  for (const auto& k : isometries(d1, d2)) {
    bool plausible = true;
    for (std::size_t i = 0; i < c1.size() && plausible; ++i) plausible = inv1[i] == inv2[k.image[i]];
    if (!plausible) continue;
    std::vector<Vec> img(c1.size());
    for (std::size_t i = 0; i < c1.size(); ++i) img[i] = c2.points[k.image[i]];
    if (extension_count(c1.points, img, once).count > 0) return true;
  }
  return false;
}

}  // namespace coxnorm::leech
