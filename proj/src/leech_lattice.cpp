#include <algorithm>
#include <bit>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <thread>

#include "coxnorm/leech.hpp"
#include "exact.hpp"

namespace coxnorm::leech {

Vec operator+(const Vec& a, const Vec& b) {
  Vec r;
  for (int i = 0; i < kDim; ++i) r[i] = a[i] + b[i];
  return r;
}

Vec operator-(const Vec& a, const Vec& b) {
  Vec r;
  for (int i = 0; i < kDim; ++i) r[i] = a[i] - b[i];
  return r;
}

// ---------------------------------------------------------------------------
// Golay code

GolayCode::GolayCode() {
  // g(x) = x^11 + x^10 + x^6 + x^5 + x^4 + x^2 + 1; bit i is the coefficient of x^i.
  const std::uint32_t g = (1u << 11) | (1u << 10) | (1u << 6) | (1u << 5) | (1u << 4) | (1u << 2) | 1u;
  for (int i = 0; i < 12; ++i) {
    std::uint32_t w = g << i;
    if (std::popcount(w) % 2) w |= 1u << 23;
    rows_[i] = w;
  }
  words_.reserve(4096);
  for (std::uint32_t m = 0; m < 4096; ++m) {
    std::uint32_t w = 0;
    for (int i = 0; i < 12; ++i)
      if (m & (1u << i)) w ^= rows_[i];
    words_.push_back(w);
  }
  std::sort(words_.begin(), words_.end());
}

const GolayCode& GolayCode::instance() {
  static const GolayCode code;
  return code;
}

bool GolayCode::contains(std::uint32_t mask) const { return std::binary_search(words_.begin(), words_.end(), mask); }

std::vector<std::uint32_t> GolayCode::words_of_weight(int w) const {
  std::vector<std::uint32_t> out;
  for (auto c : words_)
    if (std::popcount(c) == w) out.push_back(c);
  return out;
}

std::uint64_t GolayCode::matrix_hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (auto r : rows_)
    for (int b = 0; b < 4; ++b) {
      h ^= (r >> (8 * b)) & 0xff;
      h *= 1099511628211ULL;
    }
  return h;
}

bool in_leech(const Vec& x) {
  const int m = ((x[0] % 2) + 2) % 2;
  std::int64_t sum = 0;
  std::uint32_t mask = 0;
  for (int i = 0; i < kDim; ++i) {
    if ((((x[i] % 2) + 2) % 2) != m) return false;
    sum += x[i];
    const int r = ((x[i] % 4) + 4) % 4;
    if ((m == 0 && r == 2) || (m == 1 && r == 1)) mask |= 1u << i;
  }
  if ((((sum - 4 * m) % 8) + 8) % 8 != 0) return false;
  return GolayCode::instance().contains(mask);
}

int edge_order(const Vec& a, const Vec& b) {
  const auto d = norm8(a - b);
  if (d == 0) return 1;
  if (d == 32) return 2;
  if (d == 48) return 3;
  return kInfinity;
}

// ---------------------------------------------------------------------------
// Shells

Shell::Shell(int norm, std::vector<std::int8_t> data, std::vector<Family> families)
    : norm_(norm), data_(std::move(data)), families_(std::move(families)) {
  if (data_.size() % kDim) throw std::invalid_argument("shell data is not a multiple of 24");
}

Vec Shell::point(std::size_t i) const {
  Vec v;
  const auto* r = row(i);
  for (int k = 0; k < kDim; ++k) v[k] = r[k];
  return v;
}

namespace {

using Row = std::array<std::int8_t, kDim>;

void push(std::vector<std::int8_t>& out, const Row& r) { out.insert(out.end(), r.begin(), r.end()); }

// Sign patterns on the set bits of `support`, with parity of minus signs fixed.
template <class F>
void signed_patterns(std::uint32_t support, int parity, F&& f) {
  int pos[kDim];
  int n = 0;
  for (int i = 0; i < kDim; ++i)
    if (support & (1u << i)) pos[n++] = i;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    if (std::popcount(s) % 2 != parity) continue;
    std::uint32_t minus = 0;
    for (int k = 0; k < n; ++k)
      if (s & (1u << k)) minus |= 1u << pos[k];
    f(minus);
  }
}

// The odd vector x_j = +1 on c, -1 off c.
Row odd_base(std::uint32_t c) {
  Row r;
  for (int j = 0; j < kDim; ++j) r[j] = (c & (1u << j)) ? 1 : -1;
  return r;
}

std::vector<std::int8_t> family_pairs4() {
  std::vector<std::int8_t> out;
  for (int i = 0; i < kDim; ++i)
    for (int j = i + 1; j < kDim; ++j)
      for (int s = 0; s < 4; ++s) {
        Row r{};
        r[i] = (s & 2) ? -4 : 4;
        r[j] = (s & 1) ? -4 : 4;
        push(out, r);
      }
  return out;
}

std::vector<std::int8_t> family_twos(int weight, int parity) {
  std::vector<std::int8_t> out;
  for (auto c : GolayCode::instance().words_of_weight(weight))
    signed_patterns(c, parity, [&](std::uint32_t minus) {
      Row r{};
      for (int i = 0; i < kDim; ++i)
        if (c & (1u << i)) r[i] = (minus & (1u << i)) ? -2 : 2;
      push(out, r);
    });
  return out;
}

std::vector<std::int8_t> family_four_octad() {
  std::vector<std::int8_t> out;
  for (auto c : GolayCode::instance().words_of_weight(8))
    for (int p = 0; p < kDim; ++p) {
      if (c & (1u << p)) continue;
      for (int s4 : {4, -4})
        signed_patterns(c, 1, [&](std::uint32_t minus) {
          Row r{};
          for (int i = 0; i < kDim; ++i)
            if (c & (1u << i)) r[i] = (minus & (1u << i)) ? -2 : 2;
          r[p] = static_cast<std::int8_t>(s4);
          push(out, r);
        });
    }
  return out;
}

std::vector<std::uint32_t> subsets_of_size(int k) {
  std::vector<std::uint32_t> out;
  // Gosper's hack over 24-bit masks.
  std::uint32_t s = (1u << k) - 1;
  while (s < (1u << kDim)) {
    out.push_back(s);
    std::uint32_t c = s & -s, r = s + c;
    s = (((r ^ s) >> 2) / c) | r;
  }
  return out;
}

// Odd vectors: base pattern from a codeword, then the positions in `picks` multiplied by `factor`.
std::vector<std::int8_t> family_odd(int picks, int factor) {
  std::vector<std::int8_t> out;
  const auto subsets = subsets_of_size(picks);
  out.reserve(subsets.size() * 4096 * kDim);
  for (auto c : GolayCode::instance().codewords())
    for (auto s : subsets) {
      Row r = odd_base(c);
      for (int i = 0; i < kDim; ++i)
        if (s & (1u << i)) r[i] = static_cast<std::int8_t>(r[i] * factor);
      push(out, r);
    }
  return out;
}

}  // namespace

Shell generate_shell(int norm, int threads) {
  using Gen = std::function<std::vector<std::int8_t>()>;
  std::vector<std::pair<std::string, Gen>> fams;
  if (norm == 2) return Shell(2, {});
  if (norm == 4) {
    fams = {{"(4^2,0^22)", family_pairs4},
            {"(2^8,0^16)", [] { return family_twos(8, 0); }},
            {"(-3,1^23)", [] { return family_odd(1, -3); }}};
  } else if (norm == 6) {
    fams = {{"(2^12,0^12)", [] { return family_twos(12, 0); }},
            {"(4,2^8,0^15)", family_four_octad},
            {"(-3^3,1^21)", [] { return family_odd(3, -3); }},
            {"(5,1^23)", [] { return family_odd(1, 5); }}};
  } else {
    throw std::invalid_argument("shells are generated for norms 2, 4 and 6 only");
  }
  std::vector<std::vector<std::int8_t>> parts(fams.size());
  if (threads > 1) {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < fams.size(); ++i) pool.emplace_back([&, i] { parts[i] = fams[i].second(); });
    for (auto& t : pool) t.join();
  } else {
    for (std::size_t i = 0; i < fams.size(); ++i) parts[i] = fams[i].second();
  }
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  std::vector<std::int8_t> data;
  data.reserve(total);
  std::vector<Shell::Family> families;
  for (std::size_t i = 0; i < fams.size(); ++i) {
    families.push_back({fams[i].first, parts[i].size() / kDim});
    data.insert(data.end(), parts[i].begin(), parts[i].end());
    std::vector<std::int8_t>().swap(parts[i]);
  }
  return Shell(norm, std::move(data), std::move(families));
}

// ---------------------------------------------------------------------------
// Cache files: "LSHL", u32 version, u32 norm, u64 count, count*24 int16 LE,
// then u64 Golay matrix hash and u64 FNV-1a of the coordinate bytes.

namespace {

constexpr char kMagic[4] = {'L', 'S', 'H', 'L'};

template <class T>
void put_le(std::string& buf, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) buf.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff));
}

template <class T>
T get_le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return static_cast<T>(v);
}

struct Fnv {
  std::uint64_t h = 1469598103934665603ULL;
  void update(const unsigned char* p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  }
};

}  // namespace

std::filesystem::path shell_cache_file(const std::filesystem::path& dir, int norm) {
  return dir / ("leech-shell-" + std::to_string(norm) + ".lshl");
}

void write_shell_cache(const Shell& s, const std::filesystem::path& file) {
  std::filesystem::create_directories(file.parent_path().empty() ? "." : file.parent_path());
  // Unique name so concurrent writers never share a partial file; rename is atomic.
  auto tmp = file;
  tmp += ".tmp" + std::to_string(std::random_device{}());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheError("cannot write " + tmp.string());
    std::string head(kMagic, 4);
    put_le<std::uint32_t>(head, kShellCacheVersion);
    put_le<std::uint32_t>(head, static_cast<std::uint32_t>(s.norm()));
    put_le<std::uint64_t>(head, s.size());
    out.write(head.data(), static_cast<std::streamsize>(head.size()));
    Fnv fnv;
    std::string buf;
    constexpr std::size_t kChunk = 1 << 16;
    for (std::size_t i = 0; i < s.data().size(); i += kChunk) {
      buf.clear();
      const auto end = std::min(s.data().size(), i + kChunk);
      for (std::size_t k = i; k < end; ++k) put_le<std::uint16_t>(buf, static_cast<std::uint16_t>(static_cast<std::int16_t>(s.data()[k])));
      fnv.update(reinterpret_cast<const unsigned char*>(buf.data()), buf.size());
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
    std::string tail;
    put_le<std::uint64_t>(tail, GolayCode::instance().matrix_hash());
    put_le<std::uint64_t>(tail, fnv.h);
    out.write(tail.data(), static_cast<std::streamsize>(tail.size()));
    if (!out) throw CacheError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

Shell read_shell_cache(const std::filesystem::path& file, int norm) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw CacheError("cannot open " + file.string());
  unsigned char head[20];
  if (!in.read(reinterpret_cast<char*>(head), sizeof head)) throw CacheError("truncated header");
  if (std::memcmp(head, kMagic, 4) != 0) throw CacheError("bad magic");
  if (get_le<std::uint32_t>(head + 4) != kShellCacheVersion) throw CacheError("cache version mismatch");
  if (get_le<std::uint32_t>(head + 8) != static_cast<std::uint32_t>(norm)) throw CacheError("cache norm mismatch");
  const auto count = get_le<std::uint64_t>(head + 12);
  const auto expected = 20 + count * kDim * 2 + 16;
  if (std::filesystem::file_size(file) != expected) throw CacheError("cache size mismatch");
  std::vector<std::int8_t> data(count * kDim);
  Fnv fnv;
  std::vector<unsigned char> buf(1 << 20);
  std::size_t k = 0;
  std::uint64_t remaining = count * kDim * 2;
  while (remaining) {
    const auto n = static_cast<std::size_t>(std::min<std::uint64_t>(remaining, buf.size()));
    if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n))) throw CacheError("truncated data");
    fnv.update(buf.data(), n);
    for (std::size_t i = 0; i < n; i += 2) {
      const auto v = static_cast<std::int16_t>(get_le<std::uint16_t>(buf.data() + i));
      if (v < -128 || v > 127) throw CacheError("coordinate out of range");
      data[k++] = static_cast<std::int8_t>(v);
    }
    remaining -= n;
  }
  unsigned char tail[16];
  if (!in.read(reinterpret_cast<char*>(tail), sizeof tail)) throw CacheError("truncated trailer");
  if (get_le<std::uint64_t>(tail) != GolayCode::instance().matrix_hash()) throw CacheError("Golay matrix changed");
  if (get_le<std::uint64_t>(tail + 8) != fnv.h) throw CacheError("checksum mismatch");
  return Shell(norm, std::move(data));
}

namespace {

struct ShellStore {
  std::mutex mu;
  std::optional<std::filesystem::path> dir;
  bool dir_set = false;
  int threads = 1;
  std::map<int, std::unique_ptr<Shell>> shells;
};

ShellStore& store() {
  static ShellStore s;
  return s;
}

}  // namespace

void set_cache_dir(std::optional<std::filesystem::path> dir) {
  std::lock_guard lock(store().mu);
  store().dir = std::move(dir);
  store().dir_set = true;
}

void set_threads(int threads) {
  std::lock_guard lock(store().mu);
  store().threads = std::max(1, threads);
}

const Shell& shell(int norm) {
  auto& st = store();
  std::lock_guard lock(st.mu);
  auto it = st.shells.find(norm);
  if (it != st.shells.end()) return *it->second;
  std::optional<std::filesystem::path> dir = st.dir;
  if (!st.dir_set)
    if (const char* env = std::getenv("COXNORM_CACHE"); env && *env) dir = env;
  std::unique_ptr<Shell> s;
  if (dir && norm != 2) {
    auto file = shell_cache_file(*dir, norm);
    if (std::filesystem::exists(file)) {
      try {
        s = std::make_unique<Shell>(read_shell_cache(file, norm));
      } catch (const CacheError&) {
        s.reset();  // stale or damaged: regenerate below
      }
    }
  }
  if (!s) {
    s = std::make_unique<Shell>(generate_shell(norm, st.threads));
    if (dir && norm != 2) write_shell_cache(*s, shell_cache_file(*dir, norm));
  }
  return *st.shells.emplace(norm, std::move(s)).first->second;
}

// ---------------------------------------------------------------------------
// Affine symmetries

AffineSymmetry AffineSymmetry::identity() {
  Matrix n{};
  for (int i = 0; i < kDim; ++i) n[i * kDim + i] = 8;
  AffineSymmetry a(n, Vec{});
  return a;
}

AffineSymmetry::AffineSymmetry(const Matrix& numerator, const Vec& translation) : n_(numerator), t_(translation) {}

Vec AffineSymmetry::apply_linear(const Vec& x) const {
  Vec r;
  for (int i = 0; i < kDim; ++i) {
    std::int64_t s = 0;
    for (int k = 0; k < kDim; ++k) s += static_cast<std::int64_t>(n_[i * kDim + k]) * x[k];
    if (s % 8) throw std::logic_error("affine symmetry does not preserve the lattice");
    r[i] = static_cast<std::int32_t>(s / 8);
  }
  return r;
}

Vec AffineSymmetry::apply(const Vec& x) const { return apply_linear(x) + t_; }

AffineSymmetry operator*(const AffineSymmetry& a, const AffineSymmetry& b) {
  AffineSymmetry::Matrix n{};
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      int s = 0;
      for (int k = 0; k < kDim; ++k) s += a.n_[i * kDim + k] * b.n_[k * kDim + j];
      if (s % 8) throw std::logic_error("non-integral product of affine symmetries");
      n[i * kDim + j] = static_cast<std::int8_t>(s / 8);
    }
  return AffineSymmetry(n, a.apply_linear(b.t_) + a.t_);
}

AffineSymmetry AffineSymmetry::inverse() const {
  Matrix n{};
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) n[i * kDim + j] = n_[j * kDim + i];
  AffineSymmetry inv(n, Vec{});
  Vec t = inv.apply_linear(t_);
  for (auto& v : t) v = -v;
  inv.t_ = t;
  return inv;
}

bool AffineSymmetry::verify() const {
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      int s = 0;
      for (int k = 0; k < kDim; ++k) s += n_[i * kDim + k] * n_[j * kDim + k];
      if (s != (i == j ? 64 : 0)) return false;
    }
  if (!in_leech(t_)) return false;
  try {
    for (const auto& b : search_basis())
      if (!in_leech(apply_linear(b))) return false;
  } catch (const std::logic_error&) {
    return false;
  }
  return true;
}

std::size_t AffineSymmetry::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (auto v : n_) {
    h ^= static_cast<std::uint8_t>(v);
    h *= 1099511628211ULL;
  }
  for (auto v : t_) {
    h ^= static_cast<std::uint32_t>(v);
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------------------
// Basis of norm-4 vectors

const std::array<Vec, kDim>& search_basis() {
  static const std::array<Vec, kDim> basis = [] {
    const auto& s4 = shell(4);
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<std::size_t> pick(0, s4.size() - 1);
    auto det_of = [&](const std::array<std::size_t, kDim>& idx) {
      exact::Matrix m(kDim, std::vector<exact::i128>(kDim));
      for (int i = 0; i < kDim; ++i)
        for (int k = 0; k < kDim; ++k) m[i][k] = s4.row(idx[i])[k];
      return exact::abs128(exact::determinant(m));
    };
    const exact::i128 target = exact::i128{1} << 36;
    std::array<std::size_t, kDim> idx{};
    exact::i128 det = 0;
    while (det == 0) {
      for (auto& i : idx) i = pick(rng);
      det = det_of(idx);
    }
    std::uniform_int_distribution<int> slot(0, kDim - 1);
    while (det != target) {
      auto trial = idx;
      trial[slot(rng)] = pick(rng);
      auto d = det_of(trial);
      if (d != 0 && d < det) {
        idx = trial;
        det = d;
      }
    }
    std::array<Vec, kDim> b{};
    for (int i = 0; i < kDim; ++i) b[i] = s4.point(idx[i]);
    return b;
  }();
  return basis;
}

}  // namespace coxnorm::leech
