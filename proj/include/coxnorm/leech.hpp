#pragma once

#include <array>
#include <atomic>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "coxnorm/diagram.hpp"
#include "coxnorm/permutation.hpp"

namespace coxnorm::leech {

inline constexpr int kDim = 24;

/// Integer coordinates; the quadratic norm is (sum x_i^2) / 8.
using Vec = std::array<std::int32_t, kDim>;

inline std::int64_t dot8(const Vec& a, const Vec& b) {
  std::int64_t s = 0;
  for (int i = 0; i < kDim; ++i) s += static_cast<std::int64_t>(a[i]) * b[i];
  return s;
}
inline std::int64_t norm8(const Vec& a) { return dot8(a, a); }
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);

/// Extended binary Golay code from the cyclic generator polynomial
/// x^11 + x^10 + x^6 + x^5 + x^4 + x^2 + 1 plus an overall parity bit.
class GolayCode {
 public:
  static const GolayCode& instance();

  const std::array<std::uint32_t, 12>& rows() const { return rows_; }
  /// All 4096 codewords as 24-bit masks, sorted.
  const std::vector<std::uint32_t>& codewords() const { return words_; }
  bool contains(std::uint32_t mask) const;
  std::vector<std::uint32_t> words_of_weight(int w) const;
  /// Hash of the generator rows, stored in shell cache files.
  std::uint64_t matrix_hash() const;

 private:
  GolayCode();
  std::array<std::uint32_t, 12> rows_{};
  std::vector<std::uint32_t> words_;
};

bool in_leech(const Vec& x);

/// Bond order of the Coxeter diagram of II_{1,25} between two Leech points:
/// 1, 2, 3 or kInfinity for squared distance 0, 4, 6, >6.
int edge_order(const Vec& a, const Vec& b);

/// All lattice vectors of one norm, stored row-major as int8.
class Shell {
 public:
  struct Family {
    std::string shape;
    std::uint64_t count = 0;
  };

  Shell() = default;
  Shell(int norm, std::vector<std::int8_t> data, std::vector<Family> families = {});

  int norm() const { return norm_; }
  std::size_t size() const { return data_.size() / kDim; }
  const std::int8_t* row(std::size_t i) const { return data_.data() + i * kDim; }
  Vec point(std::size_t i) const;
  const std::vector<std::int8_t>& data() const { return data_; }
  /// Per-shape subtotals from generation (empty when loaded from cache).
  const std::vector<Family>& families() const { return families_; }

 private:
  int norm_ = 0;
  std::vector<std::int8_t> data_;
  std::vector<Family> families_;
};

class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kShellCacheVersion = 1;

/// Generates the shell by shape families (norm 4 or 6; other norms give an empty shell
/// for norm 2 and throw otherwise).
Shell generate_shell(int norm, int threads = 1);
void write_shell_cache(const Shell& s, const std::filesystem::path& file);
/// Throws CacheError on a bad magic, version, norm, Golay matrix hash or checksum.
Shell read_shell_cache(const std::filesystem::path& file, int norm);
std::filesystem::path shell_cache_file(const std::filesystem::path& dir, int norm);

/// Process-wide shell access. When a cache directory is set, shells are loaded from it
/// or generated and written there.
void set_cache_dir(std::optional<std::filesystem::path> dir);
void set_threads(int threads);
const Shell& shell(int norm);

/// Affine automorphism x -> (N x) / 8 + t of the Leech lattice.
class AffineSymmetry {
 public:
  using Matrix = std::array<std::int8_t, kDim * kDim>;

  static AffineSymmetry identity();
  AffineSymmetry() : AffineSymmetry(identity()) {}
  AffineSymmetry(const Matrix& numerator, const Vec& translation);

  const Matrix& numerator() const { return n_; }
  const Vec& translation() const { return t_; }
  Vec apply(const Vec& x) const;
  Vec apply_linear(const Vec& x) const;
  /// (a * b)(x) = a(b(x)).
  friend AffineSymmetry operator*(const AffineSymmetry& a, const AffineSymmetry& b);
  AffineSymmetry inverse() const;
  /// Checks N N^T = 64 I and that the images of a lattice basis lie in the lattice.
  bool verify() const;

  auto operator<=>(const AffineSymmetry&) const = default;
  std::size_t hash() const;

 private:
  Matrix n_{};
  Vec t_{};
};

struct AffineSymmetryHash {
  std::size_t operator()(const AffineSymmetry& a) const { return a.hash(); }
};

class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(std::uint64_t nodes)
      : std::runtime_error("backtracking budget of " + std::to_string(nodes) + " nodes exceeded"),
        nodes_(nodes) {}
  std::uint64_t nodes() const { return nodes_; }

 private:
  std::uint64_t nodes_;
};

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

struct SearchOptions {
  std::uint64_t budget = kDefaultBudget;  // backtracking nodes
  bool collect = false;                   // return the symmetries themselves
  std::uint64_t stop_after = 0;           // stop after this many leaves (0: count all)
  int threads = 1;
};

struct ExtensionResult {
  std::uint64_t count = 0;
  std::vector<AffineSymmetry> elements;  // sorted, when collected
  std::uint64_t nodes = 0;
};

/// Number of affine lattice automorphisms g with g(from[i]) = to[i] for all i.
/// Throws BudgetExceeded when the search would exceed the node budget.
ExtensionResult extension_count(std::span<const Vec> from, std::span<const Vec> to,
                                const SearchOptions& opts = {});

/// A finite ordered list of Leech points.
struct PointConfiguration {
  std::vector<Vec> points;

  std::size_t size() const { return points.size(); }
  /// Induced Coxeter diagram, nodes named "0", "1", ... in point order.
  CoxeterDiagram diagram() const;
  /// Squared distances (in lattice norm units).
  std::vector<std::vector<std::int64_t>> gram() const;
  /// Same points, translated so the first is the origin.
  PointConfiguration normalized() const;
  bool operator==(const PointConfiguration&) const = default;
};

struct ExtensionNode {
  Vec point;
  SphericalType type;
};

/// All s not in cfg with squared distance 4 or 6 to every point of cfg whose union
/// with cfg is spherical. `bonded_to`, when nonempty, keeps only s with squared
/// distance 6 to at least one of those point indices.
std::vector<ExtensionNode> extension_nodes(const PointConfiguration& cfg,
                                           std::span<const std::size_t> bonded_to = {});

/// Per-point hashes of how the norm-4 shell around each point meets the rest of cfg.
/// Affine symmetries carrying one configuration onto another preserve them pointwise.
std::vector<std::uint64_t> point_invariants(const PointConfiguration& cfg);

/// Number of diagram automorphisms of cfg that extend to affine symmetries, times the
/// pointwise stabilizer order.
struct StabilizerInfo {
  std::uint64_t pointwise = 0;
  std::uint64_t setwise = 0;
  std::vector<Permutation> extendable;  // diagram automorphisms realised by the lattice
};
StabilizerInfo stabilizer(const PointConfiguration& cfg, const SearchOptions& opts = {});

enum class Selector { FirstFound, LargestStabilizer };

struct FindOptions {
  Selector selector = Selector::FirstFound;
  std::uint64_t max_candidates = 64;  // configurations examined by LargestStabilizer
  std::uint64_t budget = kDefaultBudget;
};

/// A configuration whose induced diagram has type t. Throws std::runtime_error if none
/// is found within the budget.
PointConfiguration find_configuration(const SphericalType& t, const FindOptions& opts = {});

/// True iff some bond-preserving bijection c1 -> c2 extends to an affine lattice automorphism.
bool equivalent_configurations(const PointConfiguration& c1, const PointConfiguration& c2,
                               const SearchOptions& opts = {});

/// The fixed basis of norm-4 vectors used by the symmetry search.
const std::array<Vec, kDim>& search_basis();

}  // namespace coxnorm::leech
