#include "cache.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include "error.hpp"

namespace mbl {

namespace {

constexpr char kMagic[8] = {'M', 'B', 'L', 'C', 'A', 'C', 'H', 'E'};

template <typename T>
void put_le(unsigned char* out, T value) {
  std::uint64_t bits = 0;
  if constexpr (std::is_same_v<T, double>) {
    bits = std::bit_cast<std::uint64_t>(value);
  } else {
    bits = static_cast<std::uint64_t>(value);
  }
  for (std::size_t i = 0; i < sizeof(T); ++i) out[i] = static_cast<unsigned char>(bits >> (8 * i));
}

template <typename T>
T get_le(const unsigned char* in) {
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<std::uint64_t>(in[i]) << (8 * i);
  if constexpr (std::is_same_v<T, double>) {
    return std::bit_cast<double>(bits);
  } else {
    return static_cast<T>(bits);
  }
}

void write_doubles(std::ofstream& out, const double* data, std::size_t count) {
  std::vector<unsigned char> buf(count * 8);
  for (std::size_t i = 0; i < count; ++i) put_le(buf.data() + 8 * i, data[i]);
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

void read_doubles(std::ifstream& in, double* data, std::size_t count) {
  std::vector<unsigned char> buf(count * 8);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  require(static_cast<std::size_t>(in.gcount()) == buf.size(), ErrorCode::CacheCorrupt,
          "cache file truncated");
  for (std::size_t i = 0; i < count; ++i) data[i] = get_le<double>(buf.data() + 8 * i);
}

// Validates the header and returns dim; leaves the stream at the energies.
std::uint64_t read_header(std::ifstream& in, const std::string& path, const CacheKey& key) {
  require(in.good(), ErrorCode::Io, "cannot open cache file " + path);
  std::array<unsigned char, kCacheHeaderBytes> h{};
  in.read(reinterpret_cast<char*>(h.data()), h.size());
  require(static_cast<std::size_t>(in.gcount()) == h.size(), ErrorCode::CacheCorrupt,
          "cache header truncated: " + path);
  require(std::memcmp(h.data(), kMagic, 8) == 0, ErrorCode::CacheCorrupt,
          "bad cache magic: " + path);
  require(get_le<std::uint32_t>(h.data() + 8) == kCacheVersion, ErrorCode::CacheCorrupt,
          "unsupported cache version: " + path);
  const auto n = get_le<std::uint32_t>(h.data() + 12);
  const auto dim = get_le<std::uint64_t>(h.data() + 16);
  const auto seed = get_le<std::uint64_t>(h.data() + 24);
  const auto hval = get_le<double>(h.data() + 32);
  require(n == key.n_sites && seed == key.seed &&
              std::bit_cast<std::uint64_t>(hval) == std::bit_cast<std::uint64_t>(key.h),
          ErrorCode::CacheCorrupt, "cache key mismatch: " + path);
  require(n < 64 && dim == (std::uint64_t{1} << n), ErrorCode::CacheCorrupt,
          "cache dimension inconsistent with site count: " + path);

  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  require(!ec, ErrorCode::Io, "cannot stat cache file " + path);
  require(size == kCacheHeaderBytes + 8 * dim + 16 * dim * dim, ErrorCode::CacheCorrupt,
          "cache file size mismatch: " + path);
  return dim;
}

}  // namespace

void save_eigensystem(const std::string& path, const EigenSystem& eig, const CacheKey& key) {
  const auto dim = static_cast<std::uint64_t>(eig.dim());
  require(eig.vectors.rows() == eig.dim() && eig.vectors.cols() == eig.dim(),
          ErrorCode::DimensionMismatch, "cache needs a full eigensystem");

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), ErrorCode::Io, "cannot write cache file " + tmp);
    std::array<unsigned char, kCacheHeaderBytes> h{};
    std::memcpy(h.data(), kMagic, 8);
    put_le(h.data() + 8, kCacheVersion);
    put_le(h.data() + 12, key.n_sites);
    put_le(h.data() + 16, dim);
    put_le(h.data() + 24, key.seed);
    put_le(h.data() + 32, key.h);
    out.write(reinterpret_cast<const char*>(h.data()), h.size());
    write_doubles(out, eig.energies.data(), dim);
    // Complex column-major storage is already interleaved (re, im).
    write_doubles(out, reinterpret_cast<const double*>(eig.vectors.data()), 2 * dim * dim);
    require(out.good(), ErrorCode::Io, "write failed for cache file " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  require(!ec, ErrorCode::Io, "cannot move cache file into place: " + path);
}

EigenSystem load_eigensystem(const std::string& path, const CacheKey& key) {
  std::ifstream in(path, std::ios::binary);
  const auto dim = static_cast<Eigen::Index>(read_header(in, path, key));
  RealVec energies(dim);
  read_doubles(in, energies.data(), static_cast<std::size_t>(dim));
  Mat vectors(dim, dim);
  read_doubles(in, reinterpret_cast<double*>(vectors.data()),
               2 * static_cast<std::size_t>(dim * dim));
  return make_eigensystem(std::move(energies), std::move(vectors));
}

RealVec load_energies(const std::string& path, const CacheKey& key) {
  std::ifstream in(path, std::ios::binary);
  const auto dim = static_cast<Eigen::Index>(read_header(in, path, key));
  RealVec energies(dim);
  read_doubles(in, energies.data(), static_cast<std::size_t>(dim));
  return energies;
}

std::optional<EigenSystem> try_load_eigensystem(const std::string& path, const CacheKey& key) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    return load_eigensystem(path, key);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::optional<RealVec> try_load_energies(const std::string& path, const CacheKey& key) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    return load_energies(path, key);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace mbl
