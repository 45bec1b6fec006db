#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "spectral.hpp"

namespace mbl {

inline constexpr std::uint32_t kCacheVersion = 1;
inline constexpr std::size_t kCacheHeaderBytes = 64;

struct CacheKey {
  std::uint32_t n_sites = 0;
  std::uint64_t seed = 0;
  double h = 0.0;
};

// Binary eigensystem file: 64-byte header ("MBLCACHE", version, n, dim, seed,
// h, zero pad), then dim energies, then the dim x dim eigenvectors column-major
// as interleaved (re, im). Everything little-endian.
void save_eigensystem(const std::string& path, const EigenSystem& eig, const CacheKey& key);

// Throws CacheCorrupt on a bad magic, version, size or key mismatch and Io
// when the file cannot be read.
EigenSystem load_eigensystem(const std::string& path, const CacheKey& key);
RealVec load_energies(const std::string& path, const CacheKey& key);

// nullopt when the file is missing or unusable; never throws.
std::optional<EigenSystem> try_load_eigensystem(const std::string& path, const CacheKey& key);
std::optional<RealVec> try_load_energies(const std::string& path, const CacheKey& key);

}  // namespace mbl
