#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "latmon/errors.hpp"

namespace latmon {

/// Representation counts of squared norms on Z^d \ {0}:
/// counts[k] = #{ n in Z^d, n != 0 : |n|^2 = k } for k = 0..max_norm_sq.
struct ShellTable {
  int dimension = 0;
  std::uint64_t max_norm_sq = 0;
  std::vector<std::uint32_t> counts;  // index 0 is always 0

  std::uint32_t r(std::uint64_t k) const {
    return k <= max_norm_sq ? counts[static_cast<std::size_t>(k)] : 0u;
  }
};

/// Exact bucket-count construction by octant enumeration.
/// d=2: count a >= b >= 0 with multiplicity 8 / 4; d=3: a >= b >= c >= 0
/// with multiplicity (#distinct permutations) * 2^(#nonzero coordinates).
inline ShellTable build_shell_table(int dimension, std::uint64_t max_norm_sq) {
  if (dimension != 2 && dimension != 3)
    throw std::domain_error("build_shell_table: dimension must be 2 or 3");
  if (max_norm_sq < 1)
    throw std::domain_error("build_shell_table: max_norm_sq must be >= 1");
  const std::uint64_t cap = dimension == 2 ? 1000000000ull : 100000000ull;
  if (max_norm_sq > cap)
    throw capacity_error("build_shell_table: max_norm_sq exceeds memory budget");

  ShellTable t;
  t.dimension = dimension;
  t.max_norm_sq = max_norm_sq;
  t.counts.assign(static_cast<std::size_t>(max_norm_sq) + 1, 0u);

  const std::uint64_t K = max_norm_sq;
  if (dimension == 2) {
    for (std::uint64_t a = 0; a * a <= K; ++a) {
      for (std::uint64_t b = 0; b <= a; ++b) {
        const std::uint64_t k = a * a + b * b;
        if (k == 0 || k > K) {
          if (k > K) break;
          continue;
        }
        std::uint32_t mult = (b == 0 || a == b) ? 4u : 8u;
        t.counts[static_cast<std::size_t>(k)] += mult;
      }
    }
  } else {
    for (std::uint64_t a = 0; a * a <= K; ++a) {
      for (std::uint64_t b = 0; b <= a && a * a + b * b <= K; ++b) {
        const std::uint64_t ab = a * a + b * b;
        for (std::uint64_t c = 0; c <= b; ++c) {
          const std::uint64_t k = ab + c * c;
          if (k > K) break;
          if (k == 0) continue;
          std::uint32_t perms;
          if (a == b && b == c) perms = 1;
          else if (a == b || b == c || a == c) perms = 3;
          else perms = 6;
          const int nz = (a != 0) + (b != 0) + (c != 0);
          t.counts[static_cast<std::size_t>(k)] += perms << nz;
        }
      }
    }
  }
  return t;
}

/// Process-local registry keyed by (dimension, max_norm_sq); completed tables
/// are immutable and shared.
inline std::shared_ptr<const ShellTable> get_shell_table(
    int dimension, std::uint64_t max_norm_sq) {
  static std::mutex mu;
  static std::map<std::pair<int, std::uint64_t>, std::shared_ptr<const ShellTable>>
      registry;
  const auto key = std::make_pair(dimension, max_norm_sq);
  std::lock_guard<std::mutex> lock(mu);
  auto it = registry.find(key);
  if (it != registry.end()) return it->second;
  auto ptr = std::make_shared<const ShellTable>(
      build_shell_table(dimension, max_norm_sq));
  registry.emplace(key, ptr);
  return ptr;
}

// ---------------------------------------------------------------------------
// Binary cache file.
// Layout: magic "LATSHELL" (8 bytes), u32 version (= 1), u32 dimension,
// u64 max_norm_sq, then (max_norm_sq + 1) little-endian u32 counts.
// ---------------------------------------------------------------------------

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

inline void put_u64(std::ostream& os, std::uint64_t v) {
  put_u32(os, static_cast<std::uint32_t>(v));
  put_u32(os, static_cast<std::uint32_t>(v >> 32));
}

inline std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

inline std::uint64_t get_u64(std::istream& is) {
  std::uint64_t lo = get_u32(is);
  std::uint64_t hi = get_u32(is);
  return lo | (hi << 32);
}

}  // namespace detail

inline void write_shell_cache(const ShellTable& t, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("write_shell_cache: cannot open " + path);
  os.write("LATSHELL", 8);
  detail::put_u32(os, 1u);
  detail::put_u32(os, static_cast<std::uint32_t>(t.dimension));
  detail::put_u64(os, t.max_norm_sq);
  for (std::uint32_t c : t.counts) detail::put_u32(os, c);
  if (!os) throw std::runtime_error("write_shell_cache: write failed: " + path);
}

inline ShellTable read_shell_cache(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_shell_cache: cannot open " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, "LATSHELL", 8) != 0)
    throw std::runtime_error("read_shell_cache: bad magic in " + path);
  const std::uint32_t version = detail::get_u32(is);
  if (version != 1u)
    throw std::runtime_error("read_shell_cache: unsupported version");
  ShellTable t;
  t.dimension = static_cast<int>(detail::get_u32(is));
  t.max_norm_sq = detail::get_u64(is);
  t.counts.resize(static_cast<std::size_t>(t.max_norm_sq) + 1);
  for (auto& c : t.counts) c = detail::get_u32(is);
  if (!is) throw std::runtime_error("read_shell_cache: truncated file " + path);
  return t;
}

}  // namespace latmon
