#include "coxnorm/presentation.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace coxnorm {

namespace {

using i128 = __int128;

std::uint64_t fnv(std::uint64_t h, std::int64_t x) {
  for (int i = 0; i < 8; ++i) {
    h ^= static_cast<std::uint8_t>(x >> (8 * i));
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fingerprint(const Symmetry& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto x : s.j_part.images()) h = fnv(h, x);
  if (const auto* p = std::get_if<Permutation>(&s.pi_part)) {
    for (auto x : p->images()) h = fnv(h, x);
  } else {
    const auto& a = std::get<leech::AffineSymmetry>(s.pi_part);
    for (auto x : a.numerator()) h = fnv(h, x);
    for (auto x : a.translation()) h = fnv(h, x);
  }
  return h;
}

bool is_identity(const Symmetry& s) {
  if (!s.j_part.is_identity()) return false;
  if (const auto* p = std::get_if<Permutation>(&s.pi_part)) return p->is_identity();
  return std::get<leech::AffineSymmetry>(s.pi_part) == leech::AffineSymmetry::identity();
}

void free_reduce(Word& w) {
  Word out;
  for (auto x : w) {
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  std::size_t i = 0, j = out.size();
  while (j - i >= 2 && out[i] == -out[j - 1]) ++i, --j;
  w.assign(out.begin() + i, out.begin() + j);
}

// Least rotation of w or of its inverse.
Word cyclic_canonical(const Word& w) {
  Word best = w;
  Word inv(w.rbegin(), w.rend());
  for (auto& x : inv) x = -x;
  for (const Word* src : {&w, static_cast<const Word*>(&inv)})
    for (std::size_t r = 0; r < src->size(); ++r) {
      Word c(src->begin() + r, src->end());
      c.insert(c.end(), src->begin(), src->begin() + r);
      best = std::min(best, c);
    }
  return best;
}

}  // namespace

std::uint64_t composable_pairs(const CategoryQ4& q) {
  std::uint64_t t = 0;
  for (std::size_t a = 0; a < q.size(); ++a)
    for (std::size_t b = 0; b < q.size(); ++b)
      for (std::size_t c = 0; c < q.size(); ++c) t += q.count(a, b) * q.count(b, c);
  return t;
}

Presentation fundamental_group(const CategoryQ4& q, std::size_t base, const TreeOptions& opts) {
  const std::size_t n = q.size();
  if (base >= n) throw std::out_of_range("base object " + std::to_string(base) + " not in the category");
  const auto pairs = composable_pairs(q);
  if (pairs > opts.max_relators) throw PresentationTooLarge(pairs);

  Presentation p;
  p.base_object = base;
  std::vector<std::vector<std::int32_t>> off(n, std::vector<std::int32_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      off[a][b] = static_cast<std::int32_t>(p.generators.size());
      for (const auto& m : q.mor[a][b]) {
        char buf[24];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fingerprint(m)));
        p.generators.push_back("m" + std::to_string(a) + "." + std::to_string(b) + "." + buf);
      }
    }
  p.relators.reserve(pairs + n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        const auto& h = q.mor[a][c];
        for (std::size_t i = 0; i < q.mor[a][b].size(); ++i)
          for (std::size_t k = 0; k < q.mor[b][c].size(); ++k) {
            auto gf = q.mor[b][c][k] * q.mor[a][b][i];
            auto it = std::lower_bound(h.begin(), h.end(), gf);
            if (it == h.end() || *it != gf) throw std::logic_error("composition leaves the morphism sets");
            p.relators.push_back({off[a][b] + static_cast<std::int32_t>(i) + 1,
                                  off[b][c] + static_cast<std::int32_t>(k) + 1,
                                  -(off[a][c] + static_cast<std::int32_t>(it - h.begin()) + 1)});
          }
      }

  // Spanning tree, breadth first from the base.
  std::optional<std::mt19937_64> rng;
  if (opts.seed) rng.emplace(*opts.seed);
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> queue{base};
  seen[base] = true;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const auto v = queue[qi];
    std::vector<std::size_t> next;
    for (std::size_t w = 0; w < n; ++w)
      if (!seen[w] && (q.count(v, w) || q.count(w, v))) next.push_back(w);
    if (rng) std::shuffle(next.begin(), next.end(), *rng);
    for (auto w : next) {
      seen[w] = true;
      queue.push_back(w);
      // Lexicographically least edge: v -> w before w -> v, then by morphism order.
      std::vector<std::int32_t> edges;
      for (std::size_t i = 0; i < q.count(v, w); ++i) edges.push_back(off[v][w] + static_cast<std::int32_t>(i));
      for (std::size_t i = 0; i < q.count(w, v); ++i) edges.push_back(off[w][v] + static_cast<std::int32_t>(i));
      std::int32_t e = edges.front();
      if (rng) e = edges[std::uniform_int_distribution<std::size_t>(0, edges.size() - 1)(*rng)];
      p.relators.push_back({e + 1});
    }
  }
  if (queue.size() != n) throw std::logic_error("category is not connected");
  return p;
}

Presentation simplify(const Presentation& p) {
  const std::size_t n = p.generators.size();
  // Generator i equals parent^sign, or is trivial.
  std::vector<std::int32_t> parent(n), sign(n, 1);
  std::vector<bool> trivial(n, false);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](auto&& self, std::int32_t x) -> std::pair<std::int32_t, std::int32_t> {
    if (parent[x] == x) return {x, 1};
    auto [r, s] = self(self, parent[x]);
    parent[x] = r;
    sign[x] *= s;
    return {r, sign[x]};
  };
  auto rewrite = [&](Word& w) {
    Word out;
    for (auto l : w) {
      const std::int32_t g = std::abs(l) - 1;
      auto [r, s] = find(find, g);
      if (trivial[r]) continue;
      out.push_back((l > 0 ? s : -s) * (r + 1));
    }
    free_reduce(out);
    w = std::move(out);
  };

  std::vector<Word> rels = p.relators;
  for (int pass = 0; pass < 64; ++pass) {
    bool changed = false;
    std::vector<Word> keep;
    for (auto& w : rels) {
      rewrite(w);
      if (w.empty()) continue;
      if (w.size() == 1) {
        trivial[std::abs(w[0]) - 1] = true;
        changed = true;
        continue;
      }
      if (w.size() == 2 && std::abs(w[0]) != std::abs(w[1])) {
        // x^a y^b = 1 gives x = y^(-ab).
        const std::int32_t x = std::abs(w[0]) - 1, y = std::abs(w[1]) - 1;
        const std::int32_t a = w[0] > 0 ? 1 : -1, b = w[1] > 0 ? 1 : -1;
        parent[x] = y;
        sign[x] = -a * b;
        changed = true;
        continue;
      }
      keep.push_back(std::move(w));
    }
    rels = std::move(keep);
    if (!changed) break;
  }

  std::set<Word> uniq;
  for (auto& w : rels) {
    rewrite(w);
    if (!w.empty()) uniq.insert(cyclic_canonical(w));
  }
  rels.assign(uniq.begin(), uniq.end());

  // A generator occurring once in all relators is defined by that relator; drop both.
  std::vector<bool> gone(n, false);
  for (int pass = 0; pass < 64; ++pass) {
    std::vector<std::uint32_t> occ(n, 0);
    std::vector<std::size_t> where(n);
    for (std::size_t r = 0; r < rels.size(); ++r)
      for (auto l : rels[r]) {
        ++occ[std::abs(l) - 1];
        where[std::abs(l) - 1] = r;
      }
    std::vector<bool> drop(rels.size(), false);
    bool changed = false;
    for (std::size_t g = 0; g < n; ++g)
      if (occ[g] == 1 && !drop[where[g]]) {
        drop[where[g]] = true;
        gone[g] = true;
        changed = true;
      }
    if (!changed) break;
    std::vector<Word> keep;
    for (std::size_t r = 0; r < rels.size(); ++r)
      if (!drop[r]) keep.push_back(std::move(rels[r]));
    rels = std::move(keep);
  }

  Presentation out;
  out.base_object = p.base_object;
  std::vector<std::int32_t> index(n, -1);
  for (std::size_t g = 0; g < n; ++g)
    if (parent[g] == static_cast<std::int32_t>(g) && !trivial[g] && !gone[g]) {
      index[g] = static_cast<std::int32_t>(out.generators.size());
      out.generators.push_back(p.generators[g]);
    }
  for (auto& w : rels) {
    for (auto& l : w) l = (l > 0 ? 1 : -1) * (index[std::abs(l) - 1] + 1);
    out.relators.push_back(std::move(w));
  }
  std::sort(out.relators.begin(), out.relators.end());
  return out;
}

std::string AbelianInvariants::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (auto t : torsion) {
    os << (first ? "" : " x ") << "Z/" << t;
    first = false;
  }
  if (free_rank) os << (first ? "" : " x ") << "Z^" << free_rank;
  if (first && !free_rank) os << "1";
  return os.str();
}

AbelianInvariants abelianization(const Presentation& p) {
  const std::size_t n = p.generators.size();
  auto check = [](i128 x) {
    const i128 lim = i128(1) << 100;
    if (x > lim || x < -lim) throw std::overflow_error("abelianization entries too large");
  };
  // Hermite basis of the relation lattice, one row per pivot column.
  std::vector<std::vector<i128>> piv(n);
  for (const auto& w : p.relators) {
    std::vector<i128> v(n, 0);
    for (auto l : w) v[std::abs(l) - 1] += l > 0 ? 1 : -1;
    for (std::size_t c = 0; c < n; ++c) {
      if (v[c] == 0) continue;
      if (piv[c].empty()) {
        if (v[c] < 0)
          for (auto& x : v) x = -x;
        piv[c] = std::move(v);
        break;
      }
      auto& r = piv[c];
      // Extended gcd of r[c], v[c].
      i128 a0 = r[c], b0 = v[c], s0 = 1, s1 = 0, t0 = 0, t1 = 1;
      while (b0 != 0) {
        i128 qq = a0 / b0;
        std::tie(a0, b0) = std::make_pair(b0, a0 - qq * b0);
        std::tie(s0, s1) = std::make_pair(s1, s0 - qq * s1);
        std::tie(t0, t1) = std::make_pair(t1, t0 - qq * t1);
      }
      const i128 g = a0, ra = r[c] / g, vb = v[c] / g;
      for (std::size_t k = c; k < n; ++k) {
        const i128 nr = s0 * r[k] + t0 * v[k];
        const i128 nv = ra * v[k] - vb * r[k];
        check(nr);
        check(nv);
        r[k] = nr;
        v[k] = nv;
      }
      if (r[c] < 0)
        for (auto& x : r) x = -x;
    }
  }
  std::vector<std::vector<i128>> m;
  for (auto& r : piv)
    if (!r.empty()) m.push_back(std::move(r));
  const std::size_t rows = m.size();

  // Smith normal form of the rows x n matrix.
  std::vector<i128> diag;
  for (std::size_t t = 0; t < rows; ++t) {
    for (;;) {
      std::size_t pr = rows, pc = n;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (m[i][j] != 0 && (pr == rows || (m[i][j] < 0 ? -m[i][j] : m[i][j]) <
                                                 (m[pr][pc] < 0 ? -m[pr][pc] : m[pr][pc]))) {
            pr = i;
            pc = j;
          }
      if (pr == rows) break;
      std::swap(m[t], m[pr]);
      for (auto& row : m) std::swap(row[t], row[pc]);
      bool clean = true;
      const i128 d = m[t][t];
      for (std::size_t i = t + 1; i < rows; ++i)
        if (m[i][t] != 0) {
          const i128 qq = m[i][t] / d;
          for (std::size_t j = t; j < n; ++j) check(m[i][j] -= qq * m[t][j]);
          if (m[i][t] != 0) clean = false;
        }
      for (std::size_t j = t + 1; j < n; ++j)
        if (m[t][j] != 0) {
          const i128 qq = m[t][j] / d;
          for (std::size_t i = t; i < rows; ++i) check(m[i][j] -= qq * m[i][t]);
          if (m[t][j] != 0) clean = false;
        }
      if (!clean) continue;
      // The pivot must divide the rest; otherwise fold an offending row in.
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (m[i][j] % d != 0) {
            for (std::size_t k = t; k < n; ++k) m[t][k] += m[i][k];
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (m[t][t] == 0) break;
    diag.push_back(m[t][t] < 0 ? -m[t][t] : m[t][t]);
  }
  AbelianInvariants out;
  out.free_rank = n - diag.size();
  std::sort(diag.begin(), diag.end());
  for (auto d : diag)
    if (d > 1) out.torsion.push_back(static_cast<std::uint64_t>(d));
  return out;
}

std::string word_to_string(const Presentation& p, const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += p.generators.at(std::abs(w[i]) - 1);
    if (w[i] < 0) s += "^-1";
  }
  return s;
}

std::string kind_name(GroupDescription::Kind k) {
  switch (k) {
    case GroupDescription::Kind::Finite: return "finite";
    case GroupDescription::Kind::Free: return "free";
    case GroupDescription::Kind::Amalgam: return "amalgam";
    case GroupDescription::Kind::Raw: return "raw";
  }
  return "raw";
}

namespace {

std::optional<std::uint64_t> element_order(const Symmetry& s, std::uint64_t limit) {
  Symmetry x = s;
  for (std::uint64_t k = 1; k <= limit; ++k) {
    if (is_identity(x)) return k;
    x = x * s;
  }
  return std::nullopt;
}

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::optional<AmalgamData> two_object_amalgam(const CategoryQ4& q) {
  if (q.size() != 2) return std::nullopt;
  std::size_t p = 0, r = 1;
  if (q.count(p, r) == 0) std::swap(p, r);
  if (q.count(r, p) != 0 || q.count(p, r) == 0) return std::nullopt;
  const auto& a = q.mor[p][p];
  const auto& b = q.mor[r][r];
  const auto& pq = q.mor[p][r];
  std::vector<Symmetry> ab;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(ab));
  // BA always lies in Mor(p,q) when the identity does; equal sizes then force equality.
  if (std::none_of(pq.begin(), pq.end(), [](const Symmetry& s) { return is_identity(s); })) return std::nullopt;
  if (ab.empty() || pq.size() * ab.size() != a.size() * b.size()) return std::nullopt;
  AmalgamData d;
  d.a_order = a.size();
  d.b_order = b.size();
  d.ab_order = ab.size();
  if (b.size() % ab.size() == 0 && is_prime(b.size() / ab.size())) {
    const std::uint64_t pr = b.size() / ab.size();
    for (const auto& c : b) {
      if (std::binary_search(ab.begin(), ab.end(), c)) continue;
      if (element_order(c, pr) != pr) continue;
      if (std::all_of(ab.begin(), ab.end(), [&](const Symmetry& x) { return x * c == c * x; })) {
        d.c_order = pr;
        d.copies = a.size() / ab.size();
        d.quotient_order = a.size();
        break;
      }
    }
  }
  return d;
}

}  // namespace

GroupDescription recognize(const CategoryQ4& q, const std::optional<Presentation>& p) {
  GroupDescription g;
  std::optional<Presentation> simple;
  if (p) {
    simple = simplify(*p);
    try {
      g.abelian = abelianization(*simple);
    } catch (const std::overflow_error&) {
    }
    g.presentation = simple;
  }
  std::ostringstream os;
  os << "N = W_J . W_Omega . Gamma_Omega, ";
  if (q.size() == 1) {
    g.kind = GroupDescription::Kind::Finite;
    g.order = q.count(0, 0);
    os << "Gamma_Omega finite of order " << g.order;
  } else if (auto am = two_object_amalgam(q)) {
    g.kind = GroupDescription::Kind::Amalgam;
    g.amalgam = *am;
    os << "Gamma_Omega = A *_(A n B) B with |A| = " << am->a_order << ", |B| = " << am->b_order
       << ", |A n B| = " << am->ab_order;
    if (am->c_order)
      os << "; Gamma_Omega = (Z/" << am->c_order << ")^{*" << am->copies << "} . [order " << am->quotient_order
         << "]";
  } else if (simple && simple->relators.empty()) {
    g.kind = GroupDescription::Kind::Free;
    g.free_rank = simple->generators.size();
    os << "Gamma_Omega free of rank " << g.free_rank;
  } else {
    g.kind = GroupDescription::Kind::Raw;
    os << "Gamma_Omega given by a presentation";
    if (simple) os << " with " << simple->generators.size() << " generators and " << simple->relators.size() << " relators";
    if (g.abelian) os << ", abelianization " << g.abelian->to_string();
  }
  g.report = os.str();
  return g;
}

}  // namespace coxnorm
