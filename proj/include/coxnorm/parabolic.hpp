#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "coxnorm/diagram.hpp"
#include "coxnorm/permutation.hpp"

namespace coxnorm {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// J, Gamma_J and R. The ambient Pi is supplied separately to the category builder.
struct ParabolicConfig {
  CoxeterDiagram j;
  PermutationGroup gamma_j;
  PermutationGroup r;

  /// Checks that j is spherical, gamma_j acts by automorphisms of j, and r is a
  /// normal subgroup of gamma_j. Throws ConfigError otherwise.
  static ParabolicConfig make(CoxeterDiagram j, std::vector<Permutation> gamma_j_gens,
                              std::vector<Permutation> r_gens);
  /// gamma_j = r = Aut(j) when `full`, trivial groups otherwise.
  static ParabolicConfig with_groups(CoxeterDiagram j, bool gamma_full, bool r_full);
};

/// K'(j) = nu_{K(J)+s}(nu_{K(J)}(K(j))), or nullopt if K(J)+s is not spherical.
/// Throws std::invalid_argument if s is already in the image.
std::optional<DiagramIsometry> adjacent_images(const CoxeterDiagram& s, const DiagramIsometry& k,
                                               std::size_t node);

struct AssociateClass {
  std::vector<DiagramIsometry> members;  // sorted; members.front() is the canonical representative
  const DiagramIsometry& representative() const { return members.front(); }
  bool contains(const DiagramIsometry& k) const;
};

/// Partition of isometries(j, s) under adjacency, ordered by representative.
std::vector<AssociateClass> associate_classes(const CoxeterDiagram& j, const CoxeterDiagram& s);
/// The class of k inside s.
AssociateClass associate_class_of(const CoxeterDiagram& s, const DiagramIsometry& k);

bool is_r_reflective(const CoxeterDiagram& s, const DiagramIsometry& k, const PermutationGroup& r);
bool class_is_r_reflective(const CoxeterDiagram& s, const AssociateClass& c, const PermutationGroup& r);

/// The permutation rho of J with K' = K o rho when nu_{K(J)+s} stabilizes K(J); nullopt otherwise.
std::optional<Permutation> reflection_action(const CoxeterDiagram& s, const DiagramIsometry& k,
                                             std::size_t node);

/// K o rho, i.e. precomposition by a permutation of J.
DiagramIsometry compose(const DiagramIsometry& k, const Permutation& rho);

/// Root system of a crystallographic spherical diagram in simple-root coordinates.
class RootSystemModel {
 public:
  using Root = std::vector<std::int64_t>;

  /// Throws ConfigError for non-spherical or non-crystallographic diagrams.
  explicit RootSystemModel(const CoxeterDiagram& s);

  std::size_t rank() const { return cartan_.size(); }
  const std::vector<Root>& roots() const { return roots_; }
  Root simple_root(std::size_t i) const;
  Root reflect(std::size_t i, const Root& v) const;
  /// Order of W from the type.
  std::uint64_t weyl_order() const { return weyl_order_; }

 private:
  std::vector<std::vector<std::int64_t>> cartan_;  // cartan_[a][b] = <alpha_a, alpha_b^vee>
  std::vector<Root> roots_;
  std::uint64_t weyl_order_ = 1;
};

inline constexpr std::uint64_t kDefaultOracleLimit = 1000000;

std::uint64_t weyl_group_order(const SphericalType& t);

/// True iff some w in W_S maps the simple-root tuple of k1 to that of k2.
/// Throws ConfigError if |W_S| exceeds `limit` or S is not crystallographic.
bool oracle_conjugate(const CoxeterDiagram& s, const DiagramIsometry& k1, const DiagramIsometry& k2,
                      std::uint64_t limit = kDefaultOracleLimit);

/// Conjugacy classes of isometries(j, s) under W_S, each sorted, ordered by least member.
std::vector<std::vector<DiagramIsometry>> oracle_partition(const CoxeterDiagram& j, const CoxeterDiagram& s,
                                                           std::uint64_t limit = kDefaultOracleLimit);

struct ReflectivityWitness {
  SphericalType target;
  DiagramIsometry isometry;
};

struct ExtensionScan {
  bool all_reflective = true;
  std::optional<ReflectivityWitness> witness;  // first non-reflective isometry found
  std::size_t targets_checked = 0;
  std::size_t isometries_checked = 0;
};

/// Scans spherical S with rank(J) < rank(S) <= 2 rank(J) for an isometry J -> S that
/// is not Aut(J)-reflective. Targets with a component missing the image are skipped
/// (a node orthogonal to K(J) makes K reflective). I2(m) targets use m <= max_dihedral.
ExtensionScan all_larger_extensions_reflective(const CoxeterDiagram& j, int max_dihedral = 12);

}  // namespace coxnorm
