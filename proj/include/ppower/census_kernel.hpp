#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "ppower/errors.hpp"
#include "ppower/trimat.hpp"

namespace ppower {

/// Dense membership set over [0, size).
class Bitmap {
 public:
  Bitmap() = default;
  explicit Bitmap(std::uint64_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  std::uint64_t size() const { return bits_; }
  void set(std::uint64_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool test(std::uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  std::uint64_t popcount() const {
    std::uint64_t c = 0;
    for (auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
    return c;
  }
  void merge(const Bitmap& other) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= other.words_[k];
  }
  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

  friend bool operator==(const Bitmap&, const Bitmap&) = default;

 private:
  std::uint64_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

struct CensusOptions {
  unsigned shards = 1;
  unsigned threads = 0;  ///< 0 keeps the OpenMP default
  std::uint64_t max_elements = std::uint64_t{1} << 34;
};

/// Image of x -> x^m on U(n,q), as a bitmap over its domain space: U_{p-1}(n,q)
/// when m = p, U(n,q) otherwise.
struct PowerImage {
  MatrixSpace domain;
  std::uint64_t exponent = 0;
  Bitmap members;
  std::uint64_t elements = 0;  ///< base elements enumerated
  std::uint64_t overflow = 0;  ///< powers that fell outside the domain (always 0 if correct)

  std::uint64_t count() const { return members.popcount(); }
};

/// The domain the image of x^m is recorded in.
MatrixSpace power_domain(const FieldPtr& field, unsigned n, std::uint64_t m);

/// Sharded OpenMP census. Splits each base matrix into its top-left block
/// A' and last row v: the last row of A^m is v (I + A' + ... + A'^(m-1)), so
/// the inner loop over v is an additive walk. Throws SizeGuardError when
/// q^(n(n-1)/2) > max_elements.
PowerImage power_image_parallel(const FieldPtr& field, unsigned n, std::uint64_t m, const CensusOptions& options = {});

/// Serial reference: decode every element, raise it by repeated squaring,
/// encode the result. Slow; kept as the oracle for the parallel kernel.
PowerImage power_image_reference(const FieldPtr& field, unsigned n, std::uint64_t m,
                                 std::uint64_t max_elements = std::uint64_t{1} << 24);

}  // namespace ppower
