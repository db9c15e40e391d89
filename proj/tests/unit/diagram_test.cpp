#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <unordered_map>

#include "coxnorm/diagram.hpp"
#include "oracles/gram_oracle.hpp"

using namespace coxnorm;

namespace {

CoxeterDiagram std_diagram(const char* name) { return standard_diagram(SphericalType::parse(name)); }

std::string type_of(const CoxeterDiagram& d) {
  auto t = classify_spherical(d);
  return t ? t->to_string() : "NotSpherical";
}

}  // namespace

TEST(ParseDiagram, PathA3) {
  auto d = parse_diagram("nodes: a b c\nedge a b 3\nedge b c 3\n");
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d.order(0, 1), 3);
  EXPECT_EQ(d.order(0, 2), 2);
  EXPECT_EQ(type_of(d), "A3");
}

TEST(ParseDiagram, SingleNode) {
  auto d = parse_diagram("nodes: a");
  EXPECT_EQ(d.size(), 1u);
  EXPECT_EQ(type_of(d), "A1");
}

TEST(ParseDiagram, Errors) {
  EXPECT_THROW(parse_diagram("nodes: a\nedge a a 3\n"), DiagramError);
  EXPECT_THROW(parse_diagram("nodes: a a\n"), DiagramError);
  EXPECT_THROW(parse_diagram("nodes: a b\nedge a b 2\n"), DiagramError);
  EXPECT_THROW(parse_diagram("nodes: a b\nedge a c 3\n"), DiagramError);
  EXPECT_THROW(parse_diagram("edge a b 3\n"), DiagramError);
  try {
    parse_diagram("nodes: a b\n# comment\nbogus line\n");
    FAIL();
  } catch (const DiagramError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(ParseDiagram, RoundTripSortsAndKeepsInfinity) {
  const std::string text = "# triangle\nnodes: z y x\nedge z x inf\nedge y z 4 # tail\n";
  auto d = parse_diagram(text);
  auto out = serialize_diagram(d);
  EXPECT_EQ(out, "nodes: x y z\nedge x z inf\nedge y z 4\n");
  EXPECT_EQ(serialize_diagram(parse_diagram(out)), out);
  EXPECT_EQ(parse_diagram(out), d);
}

TEST(Classify, Examples) {
  EXPECT_EQ(type_of(parse_diagram("nodes: a b c\nedge a b 3\nedge b c 3\nedge a c 3")), "NotSpherical");
  EXPECT_EQ(type_of(parse_diagram("nodes: a b")), "A1^2");
  for (const char* t : {"A1", "A7", "B2", "B5", "D4", "D7", "E6", "E7", "E8", "F4", "H3", "H4", "I2(5)",
                        "I2(8)", "A3A1^6", "A5A1^5", "D6A2B3"})
    EXPECT_EQ(type_of(std_diagram(t)), SphericalType::parse(t).to_string()) << t;
}

TEST(Classify, AliasesNormalized) {
  EXPECT_EQ(SphericalType::parse("D3").to_string(), "A3");
  EXPECT_EQ(SphericalType::parse("D2").to_string(), "A1^2");
  EXPECT_EQ(SphericalType::parse("E5").to_string(), "D5");
  EXPECT_EQ(SphericalType::parse("E4").to_string(), "A4");
  EXPECT_EQ(SphericalType::parse("E3").to_string(), "A2A1");
  EXPECT_EQ(SphericalType::parse("B1").to_string(), "A1");
  EXPECT_EQ(SphericalType::parse("I2(3)").to_string(), "A2");
  EXPECT_EQ(SphericalType::parse("I2(4)").to_string(), "B2");
  EXPECT_EQ(SphericalType::parse("G2").to_string(), "I2(6)");
  EXPECT_EQ(SphericalType::parse("C4").to_string(), "B4");
}

TEST(Classify, NonSphericalShapes) {
  // Affine E6~, D4~, B3 with two 4-bonds, H5-like path, F5-like.
  EXPECT_EQ(type_of(std_diagram("E6")), "E6");
  std::vector<Bond> e6t{{0, 1, 3}, {1, 2, 3}, {2, 3, 3}, {3, 4, 3}, {2, 5, 3}, {5, 6, 3}};
  EXPECT_EQ(type_of(CoxeterDiagram::anonymous(7, e6t)), "NotSpherical");
  std::vector<Bond> d4t{{0, 1, 3}, {0, 2, 3}, {0, 3, 3}, {0, 4, 3}};
  EXPECT_EQ(type_of(CoxeterDiagram::anonymous(5, d4t)), "NotSpherical");
  std::vector<Bond> bb{{0, 1, 4}, {1, 2, 4}};
  EXPECT_EQ(type_of(CoxeterDiagram::anonymous(3, bb)), "NotSpherical");
  std::vector<Bond> h5{{0, 1, 5}, {1, 2, 3}, {2, 3, 3}, {3, 4, 3}};
  EXPECT_EQ(type_of(CoxeterDiagram::anonymous(5, h5)), "NotSpherical");
  std::vector<Bond> f5{{0, 1, 3}, {1, 2, 4}, {2, 3, 3}, {3, 4, 3}};
  EXPECT_EQ(type_of(CoxeterDiagram::anonymous(5, f5)), "NotSpherical");
}

TEST(Opposition, ComponentRules) {
  auto a3 = std_diagram("A3");
  EXPECT_EQ(opposition_involution(a3), Permutation({2, 1, 0}));
  EXPECT_TRUE(opposition_involution(std_diagram("E7")).is_identity());
  auto a2a1 = std_diagram("A2A1");
  EXPECT_EQ(opposition_involution(a2a1), Permutation({1, 0, 2}));
  for (const char* t : {"A1", "B4", "D4", "D6", "E7", "E8", "F4", "H3", "H4", "I2(6)", "I2(8)"})
    EXPECT_TRUE(opposition_involution(std_diagram(t)).is_identity()) << t;
  for (const char* t : {"A2", "A5", "D5", "D7", "E6", "I2(5)", "I2(7)"})
    EXPECT_FALSE(opposition_involution(std_diagram(t)).is_identity()) << t;
  EXPECT_THROW(opposition_involution(parse_diagram("nodes: a b c\nedge a b 3\nedge b c 3\nedge a c 3")),
               DiagramError);
}

TEST(Opposition, IsAnInvolutiveAutomorphism) {
  for (const char* t : {"A6", "D5", "D7", "E6", "I2(5)", "A3A1^6", "A2^3D5", "E6A5"}) {
    auto d = std_diagram(t);
    auto nu = opposition_involution(d);
    EXPECT_TRUE(is_automorphism(d, nu)) << t;
    EXPECT_TRUE((nu * nu).is_identity()) << t;
  }
}

TEST(Automorphisms, Orders) {
  EXPECT_EQ(automorphism_group(std_diagram("A3")).order, 2u);
  EXPECT_EQ(automorphism_group(std_diagram("D4")).order, 6u);
  EXPECT_EQ(automorphism_group(std_diagram("A6")).order, 2u);
  EXPECT_EQ(automorphism_group(std_diagram("E7")).order, 1u);
  EXPECT_EQ(automorphism_group(std_diagram("A3A1^6")).order, 1440u);
  EXPECT_EQ(automorphisms(std_diagram("A3A1^6")).order(), 1440u);
  auto g = automorphism_group(std_diagram("D4"));
  for (const auto& p : g.generators) EXPECT_TRUE(is_automorphism(std_diagram("D4"), p));
}

TEST(Isometries, KnownCounts) {
  EXPECT_EQ(isometries(std_diagram("D5"), std_diagram("D6")).size(), 2u);
  EXPECT_EQ(isometries(std_diagram("A3"), std_diagram("D5")).size(), 8u);
  EXPECT_EQ(isometries(std_diagram("A1"), std_diagram("A1")).size(), 1u);
  EXPECT_EQ(isometries(std_diagram("A2"), std_diagram("B3")).size(), 2u);
  EXPECT_TRUE(isometries(std_diagram("B2"), std_diagram("A5")).empty());
}

TEST(Isometries, CountInvariantUnderRelabeling) {
  std::mt19937 rng(7);
  const std::pair<const char*, const char*> cases[] = {{"A3", "D5"}, {"A2", "E6"}, {"A1^2", "D4"}, {"A2A1", "E7"}};
  for (auto [j, s] : cases) {
    auto dj = std_diagram(j), ds = std_diagram(s);
    auto base = isometries(dj, ds).size();
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<std::size_t> pj(dj.size()), ps(ds.size());
      std::iota(pj.begin(), pj.end(), 0);
      std::iota(ps.begin(), ps.end(), 0);
      std::shuffle(pj.begin(), pj.end(), rng);
      std::shuffle(ps.begin(), ps.end(), rng);
      EXPECT_EQ(isometries(dj.induced(pj), ds.induced(ps)).size(), base);
    }
  }
}

TEST(SphericalSubdiagrams, Examples) {
  auto a3 = std_diagram("A3");
  std::vector<std::size_t> mid{1};
  auto subs = spherical_subdiagrams(a3, mid, 2);
  std::vector<std::vector<std::size_t>> expect{{1}, {0, 1}, {1, 2}};
  EXPECT_EQ(subs, expect);

  auto tri = parse_diagram("nodes: a b c\nedge a b 3\nedge b c 3\nedge a c 3");
  auto all = spherical_subdiagrams(tri, {}, 3);
  EXPECT_EQ(all.size(), 7u);  // every subset except the triangle, including the empty set
  EXPECT_TRUE(std::find(all.begin(), all.end(), std::vector<std::size_t>{0, 1, 2}) == all.end());
}

TEST(SphericalSubdiagrams, MatchesBruteForceOnE8) {
  auto e8 = std_diagram("E8");
  // Standard E8: path 0..6, node 7 on node 2; E6 = {0,1,2,3,4,7}.
  std::vector<std::size_t> e6{0, 1, 2, 3, 4, 7};
  ASSERT_EQ(type_of(e8.induced(e6)), "E6");
  auto subs = spherical_subdiagrams(e8, e6, 8);
  std::vector<std::vector<std::size_t>> brute;
  for (unsigned mask = 0; mask < 256; ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < 8; ++i)
      if (mask >> i & 1) s.push_back(i);
    if (!std::includes(s.begin(), s.end(), e6.begin(), e6.end())) continue;
    if (is_spherical(e8.induced(s))) brute.push_back(s);
  }
  std::sort(brute.begin(), brute.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  EXPECT_EQ(subs, brute);
  std::vector<std::string> types;
  for (const auto& s : subs) types.push_back(type_of(e8.induced(s)));
  EXPECT_NE(std::find(types.begin(), types.end(), "E7"), types.end());
  EXPECT_NE(std::find(types.begin(), types.end(), "E8"), types.end());
}

TEST(CanonicalForm, Examples) {
  auto a = parse_diagram("nodes: a b c\nedge a b 3\nedge b c 3");
  auto b = parse_diagram("nodes: a b c\nedge a c 3\nedge b c 3");
  EXPECT_EQ(canonical_form(a).certificate, canonical_form(b).certificate);
  EXPECT_NE(canonical_form(std_diagram("A3")).certificate, canonical_form(std_diagram("B3")).certificate);
  EXPECT_NE(canonical_form(std_diagram("D4")).certificate, canonical_form(std_diagram("A4")).certificate);
}

TEST(CanonicalForm, RelabelingProducesIsomorphicOrder) {
  std::mt19937 rng(11);
  for (const char* t : {"D6A2", "E7A1^3", "F4B3", "H4I2(5)"}) {
    auto d = std_diagram(t);
    auto cf = canonical_form(d);
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<std::size_t> p(d.size());
      std::iota(p.begin(), p.end(), 0);
      std::shuffle(p.begin(), p.end(), rng);
      auto e = d.induced(p);
      EXPECT_EQ(canonical_form(e).certificate, cf.certificate) << t;
    }
  }
}

// classify_spherical agrees with positive definiteness of the Gram matrix on
// every diagram with <= 4 nodes and bonds in {2..6}, and on every 5-node
// diagram with bonds in {2,3,4,6}; 5-node diagrams with 5-bonds are sampled.
TEST(ClassifyProperty, AgreesWithGramOracle) {
  const int values[] = {2, 3, 4, 5, 6};
  std::unordered_map<std::string, bool> cache;
  auto check_all = [&](std::size_t n, std::span<const int> vals) -> std::size_t {
    const std::size_t pairs = n * (n - 1) / 2;
    std::vector<std::size_t> digit(pairs, 0);
    std::size_t checked = 0;
    while (true) {
      std::vector<Bond> bonds;
      std::size_t k = 0;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b, ++k)
          if (vals[digit[k]] != 2) bonds.push_back({a, b, vals[digit[k]]});
      auto d = CoxeterDiagram::anonymous(n, bonds);
      // Oracle results are cached per isomorphism class.
      auto cert = canonical_form(d).certificate;
      auto it = cache.find(cert);
      if (it == cache.end()) it = cache.emplace(cert, oracle::gram_positive_definite(d)).first;
      if (is_spherical(d) != it->second) {
        ADD_FAILURE() << serialize_diagram(d);
        return checked;
      }
      ++checked;
      std::size_t i = 0;
      while (i < pairs && ++digit[i] == vals.size()) digit[i++] = 0;
      if (i == pairs) break;
    }
    return checked;
  };
  for (std::size_t n = 1; n <= 4; ++n) check_all(n, values);
  const int crystallographic[] = {2, 3, 4, 6};
  EXPECT_EQ(check_all(5, crystallographic), 1048576u);

  std::mt19937 rng(2024);
  for (int trial = 0; trial < 20000; ++trial) {
    std::vector<Bond> bonds;
    for (std::size_t a = 0; a < 5; ++a)
      for (std::size_t b = a + 1; b < 5; ++b) {
        int m = values[rng() % 5];
        if (rng() % 3 == 0) m = 2;
        if (m != 2) bonds.push_back({a, b, m});
      }
    auto d = CoxeterDiagram::anonymous(5, bonds);
    ASSERT_EQ(is_spherical(d), oracle::gram_positive_definite(d)) << serialize_diagram(d);
  }
}
