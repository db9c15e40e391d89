#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coxnorm/category.hpp"

namespace coxnorm {

/// Letters are +(i+1) for generator i and -(i+1) for its inverse.
using Word = std::vector<std::int32_t>;

struct Presentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;
  std::size_t base_object = 0;
};

class PresentationTooLarge : public std::runtime_error {
 public:
  explicit PresentationTooLarge(std::uint64_t relators)
      : std::runtime_error("presentation would have " + std::to_string(relators) + " relators"),
        relators_(relators) {}
  std::uint64_t relators() const { return relators_; }

 private:
  std::uint64_t relators_;
};

inline constexpr std::uint64_t kDefaultMaxRelators = 2'000'000;

struct TreeOptions {
  std::optional<std::uint64_t> seed;  // random spanning tree instead of the canonical one
  std::uint64_t max_relators = kDefaultMaxRelators;
};

/// Number of composable pairs, i.e. relators before the tree generators are added.
std::uint64_t composable_pairs(const CategoryQ4& q);

/// One generator per morphism, one relator per composable pair (f then g: f g (gf)^-1),
/// and one per spanning tree edge. Generators are named m<src>.<dst>.<fingerprint>.
Presentation fundamental_group(const CategoryQ4& q, std::size_t base = 0, const TreeOptions& opts = {});

/// Bounded Tietze moves: kills trivial generators, substitutes along two-letter
/// relators, drops a generator occurring once, removes duplicate relators.
Presentation simplify(const Presentation& p);

/// Invariants of the abelianization: torsion coefficients (> 1, each dividing the next) and free rank.
struct AbelianInvariants {
  std::vector<std::uint64_t> torsion;
  std::size_t free_rank = 0;
  bool operator==(const AbelianInvariants&) const = default;
  std::string to_string() const;
};
AbelianInvariants abelianization(const Presentation& p);

std::string word_to_string(const Presentation& p, const Word& w);

struct AmalgamData {
  std::uint64_t a_order = 0;   // Mor(p, p)
  std::uint64_t b_order = 0;   // Mor(q, q)
  std::uint64_t ab_order = 0;  // their intersection
  std::uint64_t c_order = 0;   // B = (A n B) x C with C cyclic of prime order; 0 if not detected
  std::uint64_t copies = 0;    // |A| / |A n B| copies of C in the normal free product
  std::uint64_t quotient_order = 0;
};

struct GroupDescription {
  enum class Kind { Finite, Free, Amalgam, Raw };
  Kind kind = Kind::Raw;
  std::uint64_t order = 0;  // Finite
  std::size_t free_rank = 0;  // Free
  AmalgamData amalgam;        // Amalgam
  std::optional<Presentation> presentation;  // simplified, when one was built
  std::optional<AbelianInvariants> abelian;
  std::string report;
};

std::string kind_name(GroupDescription::Kind k);

/// Finite for one object, the amalgam of a two-object component of the shape
/// Mor(q,p) empty and Mor(p,q) = BA, free when the simplified presentation has no
/// relators, raw otherwise. `p` may be absent when it was too large to build.
GroupDescription recognize(const CategoryQ4& q, const std::optional<Presentation>& p);

}  // namespace coxnorm
