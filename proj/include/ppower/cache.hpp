#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ppower/bigint.hpp"
#include "ppower/census_kernel.hpp"

namespace ppower {

/// One recorded census |U(n,q)^m|.
struct CacheEntry {
  unsigned n = 0;
  unsigned q = 0;
  std::uint64_t m = 0;
  BigInt count;
  std::vector<unsigned> modulus;
  std::string method = "brute";
};

/// Census cache document:
///   {"version":1,"entries":[{"n":..,"q":..,"m":..,"count":"..","modulus":[..],"method":"brute"}]}
/// Counts are decimal strings. Entries are kept sorted by (n, q, m).
class CensusCache {
 public:
  static constexpr int kVersion = 1;

  /// A missing file yields an empty cache; a malformed one throws std::runtime_error.
  static CensusCache load(const std::string& path);
  static CensusCache parse(const std::string& text);
  void save(const std::string& path) const;
  std::string dump() const;

  std::optional<CacheEntry> find(unsigned n, unsigned q, std::uint64_t m) const;
  /// Inserts or replaces the entry for (n, q, m).
  void store(CacheEntry entry);
  const std::vector<CacheEntry>& entries() const { return entries_; }

  /// Drops entries whose modulus no longer matches the field construction
  /// (or every entry when `all`); returns how many were removed.
  std::size_t prune(bool all = false);

 private:
  std::vector<CacheEntry> entries_;
};

/// $PPOWER_CACHE when set, otherwise "ppower_cache.json".
std::string default_cache_path();

/// Raw bitmap dump: a 16-byte header ("PPWB", n, q, p, 0, bit length as
/// u64 little-endian) followed by the bits, bit k at byte k/8, bit k%8.
void write_bitmap_dump(std::ostream& out, const PowerImage& image);

struct BitmapDump {
  unsigned n = 0;
  unsigned q = 0;
  unsigned p = 0;
  Bitmap bits;
};

/// Throws std::runtime_error on a bad header or short read.
BitmapDump read_bitmap_dump(std::istream& in);

}  // namespace ppower
