#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "coxnorm/diagram.hpp"
#include "coxnorm/leech.hpp"
#include "coxnorm/parabolic.hpp"
#include "coxnorm/permutation.hpp"

namespace coxnorm {

using NodeId = std::uint32_t;

/// An element of Gamma_Pi: a diagram automorphism of a finite Pi, or an affine Leech symmetry.
using PiElement = std::variant<Permutation, leech::AffineSymmetry>;

/// An element (rho, g) of Gamma_J x Gamma_Pi. It sends K to g o K o rho^-1.
struct Symmetry {
  Permutation j_part;
  PiElement pi_part;
  auto operator<=>(const Symmetry&) const = default;
  bool operator==(const Symmetry&) const = default;
};
Symmetry operator*(const Symmetry& a, const Symmetry& b);

struct Realization {
  std::uint64_t count = 0;
  std::vector<PiElement> elements;  // sorted, when collected
};

/// The Coxeter diagram Pi together with Gamma_Pi.
class Ambient {
 public:
  virtual ~Ambient() = default;

  virtual std::string kind() const = 0;
  /// Bond order between two nodes (1 for a node with itself).
  virtual int order(NodeId a, NodeId b) const = 0;
  /// Nodes outside s with a finite bond to every node of s, sorted.
  virtual std::vector<NodeId> candidates(const std::vector<NodeId>& s) = 0;
  /// Elements g of Gamma_Pi with g(from[i]) = to[i]; stop_after = 0 counts them all.
  virtual Realization realize(const std::vector<NodeId>& from, const std::vector<NodeId>& to, bool collect,
                              std::uint64_t stop_after) = 0;
  virtual NodeId apply(const PiElement& g, NodeId n) = 0;
  virtual PiElement identity() const = 0;
  /// Per-node values on s preserved by any g in Gamma_Pi carrying s onto another set.
  virtual std::vector<std::uint64_t> invariants(const std::vector<NodeId>& s) = 0;
  virtual std::string label(NodeId n) const = 0;

  CoxeterDiagram induced(const std::vector<NodeId>& s) const;
};

/// Pi finite with Gamma_Pi a group of diagram automorphisms.
class FiniteAmbient : public Ambient {
 public:
  FiniteAmbient(CoxeterDiagram pi, PermutationGroup gamma_pi);

  const CoxeterDiagram& diagram() const { return pi_; }
  const PermutationGroup& group() const { return gamma_; }

  std::string kind() const override { return "finite"; }
  int order(NodeId a, NodeId b) const override;
  std::vector<NodeId> candidates(const std::vector<NodeId>& s) override;
  Realization realize(const std::vector<NodeId>& from, const std::vector<NodeId>& to, bool collect,
                      std::uint64_t stop_after) override;
  NodeId apply(const PiElement& g, NodeId n) override;
  PiElement identity() const override;
  std::vector<std::uint64_t> invariants(const std::vector<NodeId>& s) override;
  std::string label(NodeId n) const override;

 private:
  CoxeterDiagram pi_;
  PermutationGroup gamma_;
  std::vector<std::uint64_t> orbit_;
};

/// Pi = the Leech lattice, Gamma_Pi = its affine automorphism group. Nodes are numbered in
/// the order points are first seen.
class LeechAmbient : public Ambient {
 public:
  explicit LeechAmbient(leech::SearchOptions opts = {});

  NodeId add(const leech::Vec& p);
  const leech::Vec& point(NodeId n) const { return points_.at(n); }
  std::size_t size() const { return points_.size(); }

  std::string kind() const override { return "leech"; }
  int order(NodeId a, NodeId b) const override;
  std::vector<NodeId> candidates(const std::vector<NodeId>& s) override;
  Realization realize(const std::vector<NodeId>& from, const std::vector<NodeId>& to, bool collect,
                      std::uint64_t stop_after) override;
  NodeId apply(const PiElement& g, NodeId n) override;
  PiElement identity() const override;
  std::vector<std::uint64_t> invariants(const std::vector<NodeId>& s) override;
  std::string label(NodeId n) const override;

 private:
  leech::SearchOptions opts_;
  std::vector<leech::Vec> points_;
  std::map<leech::Vec, NodeId> index_;
  std::map<std::vector<NodeId>, std::vector<NodeId>> candidate_cache_;
};

/// An element (S, class of K) of P3. Isometries are into the induced diagram on `nodes`.
struct PosetElement {
  std::vector<NodeId> nodes;  // sorted ambient nodes
  CoxeterDiagram diagram;
  SphericalType type;
  AssociateClass cls;
};

struct CategoryOptions {
  bool reflective_filter = true;  // false explores P3+ instead of P3
  std::size_t max_objects = 256;
  std::size_t max_rank = 0;  // 0: twice the rank of J
};

class BuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The component of Q4 containing (J, id).
struct CategoryQ4 {
  ParabolicConfig config;
  std::vector<PosetElement> objects;  // objects[0] is (J, id)
  /// mor[a][b]: sorted morphisms a -> b.
  std::vector<std::vector<std::vector<Symmetry>>> mor;
  std::size_t elements_examined = 0;  // P3 elements met by the search

  std::size_t size() const { return objects.size(); }
  std::uint64_t count(std::size_t a, std::size_t b) const { return mor.at(a).at(b).size(); }
  std::uint64_t total_morphisms() const;
};

/// Builds the component by breadth-first search through single-node extensions and
/// deletions. `j_nodes[i]` is the ambient node of J's node i.
CategoryQ4 build_component(const ParabolicConfig& config, Ambient& ambient, const std::vector<NodeId>& j_nodes,
                           const CategoryOptions& opts = {});

/// Checks identities and closure of composition; returns a description of the first failure.
/// With max_products > 0, larger categories are checked on that many evenly spaced composable pairs.
std::optional<std::string> check_category_axioms(const CategoryQ4& q, std::uint64_t max_products = 0);

/// Longest strictly increasing chain among the objects (morphisms ordered by inclusion).
std::size_t max_chain_length(const CategoryQ4& q);

struct BrinkGraph {
  std::vector<std::size_t> vertices;                         // the component of the chosen node
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // odd bonds inside it
  std::size_t free_rank = 0;                               // E - V + 1
};
BrinkGraph brink_graph(const CoxeterDiagram& pi, std::size_t node);

}  // namespace coxnorm
