#include "ppower/cache.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ppower/gf.hpp"

namespace ppower {

namespace {

using nlohmann::json;

bool key_less(const CacheEntry& a, const CacheEntry& b) {
  return std::tie(a.n, a.q, a.m) < std::tie(b.n, b.q, b.m);
}

}  // namespace

CensusCache CensusCache::parse(const std::string& text) {
  CensusCache cache;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("census cache is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("version", 0) != kVersion || !doc.contains("entries") || !doc["entries"].is_array())
    throw std::runtime_error("census cache has an unsupported layout");
  for (const auto& item : doc["entries"]) {
    CacheEntry e;
    try {
      e.n = item.at("n").get<unsigned>();
      e.q = item.at("q").get<unsigned>();
      e.m = item.at("m").get<std::uint64_t>();
      e.count = parse_decimal(item.at("count").get<std::string>());
      e.modulus = item.value("modulus", std::vector<unsigned>{});
      e.method = item.value("method", std::string("brute"));
    } catch (const std::exception& ex) {
      throw std::runtime_error(std::string("malformed census cache entry: ") + ex.what());
    }
    cache.store(std::move(e));
  }
  return cache;
}

CensusCache CensusCache::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return {};
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::string CensusCache::dump() const {
  json entries = json::array();
  for (const auto& e : entries_) {
    json item;
    item["n"] = e.n;
    item["q"] = e.q;
    item["m"] = e.m;
    item["count"] = to_decimal(e.count);
    item["modulus"] = e.modulus;
    item["method"] = e.method;
    entries.push_back(std::move(item));
  }
  json doc;
  doc["version"] = kVersion;
  doc["entries"] = std::move(entries);
  return doc.dump(2) + "\n";
}

void CensusCache::save(const std::string& path) const {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write census cache " + tmp);
    out << dump();
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw std::runtime_error("cannot replace census cache " + path);
}

std::optional<CacheEntry> CensusCache::find(unsigned n, unsigned q, std::uint64_t m) const {
  for (const auto& e : entries_)
    if (e.n == n && e.q == q && e.m == m) return e;
  return std::nullopt;
}

void CensusCache::store(CacheEntry entry) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), entry, key_less);
  if (it != entries_.end() && !key_less(entry, *it))
    *it = std::move(entry);
  else
    entries_.insert(it, std::move(entry));
}

std::size_t CensusCache::prune(bool all) {
  const std::size_t before = entries_.size();
  if (all) {
    entries_.clear();
    return before;
  }
  std::erase_if(entries_, [](const CacheEntry& e) {
    try {
      return FieldTable::of_order(e.q)->modulus() != e.modulus;
    } catch (const std::exception&) {
      return true;
    }
  });
  return before - entries_.size();
}

std::string default_cache_path() {
  if (const char* env = std::getenv("PPOWER_CACHE"); env != nullptr && *env != '\0') return env;
  return "ppower_cache.json";
}

void write_bitmap_dump(std::ostream& out, const PowerImage& image) {
  const FieldTable& f = *image.domain.field_ptr();
  unsigned char header[16] = {'P', 'P', 'W', 'B'};
  header[4] = static_cast<unsigned char>(image.domain.dim());
  header[5] = static_cast<unsigned char>(f.order());
  header[6] = static_cast<unsigned char>(f.characteristic());
  header[7] = 0;
  const std::uint64_t bits = image.members.size();
  for (unsigned b = 0; b < 8; ++b) header[8 + b] = static_cast<unsigned char>(bits >> (8 * b));
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  const std::uint64_t bytes = (bits + 7) / 8;
  const auto& words = image.members.words();
  for (std::uint64_t k = 0; k < bytes; ++k) {
    const char c = static_cast<char>(words[k / 8] >> (8 * (k % 8)));
    out.put(c);
  }
  if (!out) throw std::runtime_error("bitmap dump write failed");
}

BitmapDump read_bitmap_dump(std::istream& in) {
  unsigned char header[16];
  if (!in.read(reinterpret_cast<char*>(header), sizeof header)) throw std::runtime_error("bitmap dump truncated header");
  if (header[0] != 'P' || header[1] != 'P' || header[2] != 'W' || header[3] != 'B')
    throw std::runtime_error("bitmap dump has a bad magic");
  BitmapDump dump;
  dump.n = header[4];
  dump.q = header[5];
  dump.p = header[6];
  std::uint64_t bits = 0;
  for (unsigned b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(header[8 + b]) << (8 * b);
  dump.bits = Bitmap(bits);
  auto& words = dump.bits.words();
  const std::uint64_t bytes = (bits + 7) / 8;
  for (std::uint64_t k = 0; k < bytes; ++k) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw std::runtime_error("bitmap dump truncated body");
    words[k / 8] |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * (k % 8));
  }
  return dump;
}

}  // namespace ppower
