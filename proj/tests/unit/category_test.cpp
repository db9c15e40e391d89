#include <gtest/gtest.h>

#include <map>
#include <numeric>
#include <random>
#include <set>

#include "coxnorm/category.hpp"
#include "coxnorm/presentation.hpp"

using namespace coxnorm;

namespace {

CoxeterDiagram std_diagram(const char* name) { return standard_diagram(SphericalType::parse(name)); }

CoxeterDiagram random_diagram(std::mt19937_64& rng, std::size_t n) {
  std::vector<Bond> bonds;
  std::uniform_int_distribution<int> m(2, 5);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (int x = m(rng); x != 2) bonds.push_back({a, b, x});
  return CoxeterDiagram::anonymous(n, bonds);
}

// Cycle rank of the odd-bond component of `node`, computed directly.
std::size_t odd_cycle_rank(const CoxeterDiagram& d, std::size_t node) {
  std::vector<int> comp(d.size(), -1);
  std::vector<std::size_t> stack{node};
  comp[node] = 0;
  std::size_t v = 0, e2 = 0;
  while (!stack.empty()) {
    auto x = stack.back();
    stack.pop_back();
    ++v;
    for (std::size_t y = 0; y < d.size(); ++y) {
      const int m = d.order(x, y);
      if (x == y || m == kInfinity || m % 2 == 0) continue;
      ++e2;
      if (comp[y] < 0) {
        comp[y] = 0;
        stack.push_back(y);
      }
    }
  }
  return e2 / 2 + 1 - v;
}

CategoryQ4 brink_category(const CoxeterDiagram& pi, std::size_t node) {
  FiniteAmbient amb(pi, PermutationGroup::trivial(pi.size()));
  auto cfg = ParabolicConfig::with_groups(pi.induced(std::vector<std::size_t>{node}), true, true);
  return build_component(cfg, amb, {static_cast<NodeId>(node)});
}

Presentation words(std::size_t gens, std::vector<Word> rels) {
  Presentation p;
  for (std::size_t i = 0; i < gens; ++i) p.generators.push_back("x" + std::to_string(i));
  p.relators = std::move(rels);
  return p;
}

// The amalgam A *_{A n B} B from multiplication tables, one generator per element of A u B.
Presentation amalgam_oracle(const std::vector<Symmetry>& a, const std::vector<Symmetry>& b) {
  std::vector<Symmetry> all = a;
  all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  auto id = [&](const Symmetry& s) {
    return static_cast<std::int32_t>(std::lower_bound(all.begin(), all.end(), s) - all.begin()) + 1;
  };
  Presentation p;
  for (std::size_t i = 0; i < all.size(); ++i) p.generators.push_back("e" + std::to_string(i));
  for (const auto* g : {&a, &b})
    for (const auto& x : *g)
      for (const auto& y : *g) p.relators.push_back({id(x), id(y), -id(x * y)});
  return p;
}

}  // namespace

TEST(Brink, GraphExamples) {
  auto a3 = std_diagram("A3");
  for (std::size_t v = 0; v < 3; ++v) EXPECT_EQ(brink_graph(a3, v).free_rank, 0u);
  auto tri = parse_diagram("nodes: a b c\nedge a b 3\nedge b c 3\nedge a c 3\n");
  EXPECT_EQ(brink_graph(tri, 0).free_rank, 1u);
  auto even = parse_diagram("nodes: a b c\nedge a b 3\nedge b c 5\nedge a c 4\n");
  auto g = brink_graph(even, 0);
  EXPECT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(g.free_rank, 0u);
  EXPECT_THROW(brink_graph(a3, 5), std::out_of_range);
}

TEST(Brink, A3Subdivision) {
  auto q = brink_category(std_diagram("A3"), 0);
  // Vertices and edges of the path a-b-c.
  std::map<std::string, int> types;
  for (const auto& o : q.objects) ++types[o.type.to_string()];
  EXPECT_EQ(types["A1"], 3);
  EXPECT_EQ(types["A2"], 2);
  EXPECT_EQ(q.size(), 5u);
  EXPECT_EQ(check_category_axioms(q), std::nullopt);
  EXPECT_EQ(max_chain_length(q), 2u);
}

TEST(Brink, RandomDiagramsAreFreeOfCycleRank) {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    auto pi = random_diagram(rng, n);
    const std::size_t node = rng() % n;
    auto q = brink_category(pi, node);
    ASSERT_EQ(check_category_axioms(q), std::nullopt);
    ASSERT_LE(max_chain_length(q), 2u);
    auto p = simplify(fundamental_group(q));
    const auto expected = odd_cycle_rank(pi, node);
    EXPECT_TRUE(p.relators.empty()) << serialize_diagram(pi);
    EXPECT_EQ(p.generators.size(), expected) << serialize_diagram(pi);
    EXPECT_EQ(brink_graph(pi, node).free_rank, expected);
    auto g = recognize(q, fundamental_group(q));
    if (q.size() > 1) {
      EXPECT_EQ(g.kind, GroupDescription::Kind::Free);
      EXPECT_EQ(g.free_rank, expected);
    }
  }
}

TEST(Category, GroupOfOneObject) {
  // Pi = J = D4 with Gamma_Pi = Gamma_J = S3 and R trivial: morphisms are the pairs (g, g).
  auto d4 = std_diagram("D4");
  FiniteAmbient amb(d4, automorphisms(d4));
  auto cfg = ParabolicConfig::with_groups(d4, true, false);
  auto q = build_component(cfg, amb, {0, 1, 2, 3});
  ASSERT_EQ(q.size(), 1u);
  EXPECT_EQ(q.count(0, 0), 6u);
  EXPECT_EQ(check_category_axioms(q), std::nullopt);
  EXPECT_EQ(max_chain_length(q), 1u);
  auto p = fundamental_group(q);
  EXPECT_EQ(p.generators.size(), 6u);
  EXPECT_EQ(p.relators.size(), 36u);
  EXPECT_EQ(abelianization(p), (AbelianInvariants{{2}, 0}));
  auto g = recognize(q, p);
  EXPECT_EQ(g.kind, GroupDescription::Kind::Finite);
  EXPECT_EQ(g.order, 6u);
}

TEST(Category, TrivialIdentityConfiguration) {
  auto a2 = std_diagram("A2");
  FiniteAmbient amb(a2, PermutationGroup::trivial(2));
  auto q = build_component(ParabolicConfig::with_groups(a2, false, false), amb, {0, 1});
  ASSERT_EQ(q.size(), 1u);
  EXPECT_EQ(q.count(0, 0), 1u);
}

TEST(Category, NoAnOrD5ComponentsGiveOneObject) {
  // J of types without A_n or D5 components, R = Gamma_J = Aut(J): every larger class is reflective.
  struct Case {
    const char* pi;
    std::vector<NodeId> j;
  };
  auto e8 = std_diagram("E8");
  // Find E6, E7, D4 and D6 inside E8 by isometries from the standard diagrams.
  for (const char* t : {"E6", "E7", "D4", "D6"}) {
    auto jd = std_diagram(t);
    auto ks = isometries(jd, e8);
    ASSERT_FALSE(ks.empty()) << t;
    std::vector<NodeId> nodes(ks[0].image.begin(), ks[0].image.end());
    FiniteAmbient amb(e8, PermutationGroup::trivial(8));
    auto q = build_component(ParabolicConfig::with_groups(jd, true, true), amb, nodes);
    EXPECT_EQ(q.size(), 1u) << t;
    EXPECT_EQ(recognize(q, fundamental_group(q)).kind, GroupDescription::Kind::Finite) << t;
  }
  // A1 is exceptional: an A2 extension gives a second object.
  auto q = brink_category(e8, 0);
  EXPECT_GT(q.size(), 1u);
}

TEST(Category, ConfigMismatchAndLimits) {
  auto a3 = std_diagram("A3");
  FiniteAmbient amb(a3, PermutationGroup::trivial(3));
  // Nodes 0 and 2 are orthogonal, not an A2.
  EXPECT_THROW(build_component(ParabolicConfig::with_groups(std_diagram("A2"), true, false), amb, {0, 2}), ConfigError);
  CategoryOptions small;
  small.max_objects = 2;
  EXPECT_THROW(build_component(ParabolicConfig::with_groups(std_diagram("A1"), true, true), amb, {0}, small),
               BuildError);
  auto q = brink_category(a3, 0);
  EXPECT_THROW(fundamental_group(q, 99), std::out_of_range);
  TreeOptions tiny;
  tiny.max_relators = 1;
  EXPECT_THROW(fundamental_group(q, 0, tiny), PresentationTooLarge);
}

TEST(Category, AxiomCheckCatchesMissingIdentityAndComposite) {
  auto q = brink_category(std_diagram("A3"), 0);
  auto broken = q;
  broken.mor[0][0].clear();
  EXPECT_TRUE(check_category_axioms(broken).has_value());
  auto d4 = std_diagram("D4");
  FiniteAmbient amb(d4, automorphisms(d4));
  auto g = build_component(ParabolicConfig::with_groups(d4, true, false), amb, {0, 1, 2, 3});
  g.mor[0][0].pop_back();
  EXPECT_TRUE(check_category_axioms(g).has_value());
}

TEST(Category, InvariantUnderRelabeling) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + rng() % 4;
    auto pi = random_diagram(rng, n);
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Bond> bonds;
    for (const auto& b : pi.bonds()) bonds.push_back({perm[b.a], perm[b.b], b.order});
    auto shuffled = CoxeterDiagram::anonymous(n, bonds);
    auto q1 = brink_category(pi, 0);
    auto q2 = brink_category(shuffled, perm[0]);
    ASSERT_EQ(q1.size(), q2.size());
    auto counts = [](const CategoryQ4& q) {
      std::multiset<std::pair<std::string, std::uint64_t>> out;
      for (std::size_t a = 0; a < q.size(); ++a)
        for (std::size_t b = 0; b < q.size(); ++b)
          out.insert({q.objects[a].type.to_string() + ">" + q.objects[b].type.to_string(), q.count(a, b)});
      return out;
    };
    EXPECT_EQ(counts(q1), counts(q2));
  }
}

TEST(Presentation, SimplifyExamples) {
  // <a, b | a, ab> is trivial.
  auto p = simplify(words(2, {{1}, {1, 2}}));
  EXPECT_TRUE(p.generators.empty());
  EXPECT_TRUE(p.relators.empty());
  // <a, b | a b a^-1 b^-1> is left alone.
  p = simplify(words(2, {{1, 2, -1, -2}}));
  EXPECT_EQ(p.generators.size(), 2u);
  ASSERT_EQ(p.relators.size(), 1u);
  EXPECT_EQ(p.relators[0].size(), 4u);
  // Duplicate relators up to rotation and inversion collapse.
  p = simplify(words(2, {{1, 1, 2, 2}, {2, 2, 1, 1}, {-1, -1, -2, -2}, {2, 1, 1, 2}}));
  EXPECT_EQ(p.relators.size(), 1u);
}

TEST(Presentation, AbelianizationExamples) {
  EXPECT_EQ(abelianization(words(1, {{1, 1, 1, 1, 1, 1}})), (AbelianInvariants{{6}, 0}));
  EXPECT_EQ(abelianization(words(2, {{1, 1}, {2, 2, 2}, {1, 2, -1, -2}})), (AbelianInvariants{{6}, 0}));
  EXPECT_EQ(abelianization(words(2, {{1, 1, 1, 1, 2, 2, 2, 2, 2, 2}})), (AbelianInvariants{{2}, 1}));
  EXPECT_EQ(abelianization(words(3, {{1, 1}, {2, 2}})), (AbelianInvariants{{2, 2}, 1}));
  EXPECT_EQ(abelianization(words(2, {{1, 1, 2, 2}, {1, 1, -2, -2}})).torsion, (std::vector<std::uint64_t>{2, 4}));
  EXPECT_EQ(abelianization(words(0, {})).to_string(), "1");
}

TEST(Presentation, SimplifyKeepsAbelianization) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    std::vector<Word> rels;
    const std::size_t m = rng() % 6;
    for (std::size_t r = 0; r < m; ++r) {
      Word w;
      const std::size_t len = 1 + rng() % 4;
      for (std::size_t k = 0; k < len; ++k) {
        const auto g = static_cast<std::int32_t>(rng() % n) + 1;
        w.push_back(rng() % 2 ? g : -g);
      }
      rels.push_back(w);
    }
    auto p = words(n, rels);
    EXPECT_EQ(abelianization(p), abelianization(simplify(p)));
  }
}

// ---------------------------------------------------------------------------
// Leech lattice examples

namespace {

struct LeechCase {
  std::unique_ptr<LeechAmbient> amb;
  CategoryQ4 q;
};

LeechCase leech_case(const char* type, std::size_t rotate = 0, leech::Vec shift = {}, bool full_r = false) {
  auto cfg = leech::find_configuration(SphericalType::parse(type));
  std::rotate(cfg.points.begin(), cfg.points.begin() + rotate, cfg.points.end());
  for (auto& p : cfg.points) p = leech::operator+(p, shift);
  LeechCase c;
  c.amb = std::make_unique<LeechAmbient>();
  std::vector<NodeId> nodes;
  for (const auto& p : cfg.points) nodes.push_back(c.amb->add(p));
  c.q = build_component(ParabolicConfig::with_groups(cfg.diagram(), true, full_r), *c.amb, nodes);
  return c;
}

const LeechCase& e6_case() {
  static const LeechCase c = leech_case("E6");
  return c;
}

}  // namespace

TEST(LeechCategory, E6TwoObjects) {
  const auto& q = e6_case().q;
  ASSERT_EQ(q.size(), 2u);
  EXPECT_EQ(q.objects[0].type.to_string(), "E6");
  EXPECT_EQ(q.objects[1].type.to_string(), "E7");
  EXPECT_EQ(q.count(0, 0), 72u);
  EXPECT_EQ(q.count(1, 1), 12u);
  EXPECT_EQ(q.count(0, 1), 144u);
  EXPECT_EQ(q.count(1, 0), 0u);
  EXPECT_EQ(check_category_axioms(q), std::nullopt);
  EXPECT_EQ(max_chain_length(q), 2u);
}

TEST(LeechCategory, E6Amalgam) {
  const auto& q = e6_case().q;
  auto p = fundamental_group(q);
  auto g = recognize(q, p);
  ASSERT_EQ(g.kind, GroupDescription::Kind::Amalgam);
  EXPECT_EQ(g.amalgam.a_order, 72u);
  EXPECT_EQ(g.amalgam.ab_order, 6u);
  EXPECT_EQ(g.amalgam.c_order, 2u);
  EXPECT_EQ(g.amalgam.copies, 12u);
  EXPECT_EQ(g.amalgam.quotient_order, 72u);
  // The abelianization agrees with that of A *_{A n B} B written from multiplication tables.
  ASSERT_TRUE(g.abelian.has_value());
  EXPECT_EQ(*g.abelian, abelianization(amalgam_oracle(q.mor[0][0], q.mor[1][1])));
  EXPECT_EQ(*g.abelian, abelianization(p));
}

TEST(LeechCategory, SpanningTreeIndependence) {
  const auto& q = e6_case().q;
  const auto base = abelianization(fundamental_group(q));
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    TreeOptions t;
    t.seed = seed;
    EXPECT_EQ(abelianization(simplify(fundamental_group(q, 0, t))), base) << seed;
  }
  EXPECT_EQ(abelianization(simplify(fundamental_group(q, 1))), base);
}

TEST(LeechCategory, E6InvariantUnderConjugation) {
  // Reordering J's points and translating by a lattice vector gives the same counts.
  leech::Vec shift{};
  shift[0] = 4;
  shift[1] = 4;
  ASSERT_TRUE(leech::in_leech(shift));
  auto c = leech_case("E6", 2, shift);
  const auto& q0 = e6_case().q;
  ASSERT_EQ(c.q.size(), q0.size());
  for (std::size_t a = 0; a < q0.size(); ++a)
    for (std::size_t b = 0; b < q0.size(); ++b) EXPECT_EQ(c.q.count(a, b), q0.count(a, b));
}

TEST(LeechCategory, D6FiveCopies) {
  auto c = leech_case("D6");
  const auto& q = c.q;
  ASSERT_EQ(q.size(), 2u);
  EXPECT_EQ(q.objects[1].type.to_string(), "D7");
  EXPECT_EQ(check_category_axioms(q), std::nullopt);
  auto g = recognize(q, std::nullopt);
  ASSERT_EQ(g.kind, GroupDescription::Kind::Amalgam);
  EXPECT_EQ(g.amalgam.copies, 5u);
  EXPECT_EQ(g.amalgam.quotient_order, 120u);
  EXPECT_EQ(g.amalgam.c_order, 2u);
}

TEST(LeechCategory, E6WithFullRIsFinite) {
  auto c = leech_case("E6", 0, {}, true);
  ASSERT_EQ(c.q.size(), 1u);
  auto g = recognize(c.q, fundamental_group(c.q));
  EXPECT_EQ(g.kind, GroupDescription::Kind::Finite);
  EXPECT_EQ(g.order, 72u);
}
