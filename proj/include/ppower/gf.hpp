#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ppower {

/// An element of a small finite field, identified by its table index.
///
/// Index 0 is zero, index 1 is one, and indices 0..p-1 form the prime
/// subfield in natural order. For q = p^e the index is the base-p reading
/// of the coefficient vector of the polynomial representative, so index
/// p^t is the class of x^t.
struct FieldElement {
  std::uint8_t index = 0;

  friend constexpr bool operator==(FieldElement, FieldElement) = default;
  friend constexpr auto operator<=>(FieldElement, FieldElement) = default;
};

/// Dense lookup-table arithmetic for GF(p^e) with p^e <= 64.
///
/// Extension fields are built as GF(p)[x]/(f) with f a fixed Conway
/// polynomial, so every table (and every count derived from one) is
/// reproducible. Instances are immutable; share them through
/// `std::shared_ptr<const FieldTable>`.
class FieldTable {
 public:
  static constexpr unsigned kMaxOrder = 64;

  /// Throws std::invalid_argument for a non-prime p, e == 0 or p^e > 64.
  FieldTable(unsigned p, unsigned e);

  static std::shared_ptr<const FieldTable> make(unsigned p, unsigned e);
  /// Field of order q; throws unless q is a prime power <= 64.
  static std::shared_ptr<const FieldTable> of_order(unsigned q);

  unsigned characteristic() const { return p_; }
  unsigned degree() const { return e_; }
  unsigned order() const { return q_; }

  /// Modulus coefficients, constant term first; {0, 1} (i.e. x) for e = 1.
  const std::vector<unsigned>& modulus() const { return modulus_; }
  std::string modulus_string() const;

  FieldElement zero() const { return {0}; }
  FieldElement one() const { return {1}; }
  /// Throws std::out_of_range when index >= q.
  FieldElement element(unsigned index) const;
  /// Image of an integer under Z -> Z/p -> GF(q).
  FieldElement from_int(long long value) const;

  FieldElement add(FieldElement x, FieldElement y) const {
    check(x);
    check(y);
    return {add_[x.index * q_ + y.index]};
  }
  FieldElement sub(FieldElement x, FieldElement y) const { return add(x, neg(y)); }
  FieldElement neg(FieldElement x) const {
    check(x);
    return {neg_[x.index]};
  }
  FieldElement mul(FieldElement x, FieldElement y) const {
    check(x);
    check(y);
    return {mul_[x.index * q_ + y.index]};
  }
  /// Throws std::domain_error on zero.
  FieldElement inv(FieldElement x) const;
  FieldElement div(FieldElement x, FieldElement y) const { return mul(x, inv(y)); }
  FieldElement pow(FieldElement x, std::uint64_t exponent) const;

  /// A generator of the multiplicative group (smallest index).
  FieldElement primitive_element() const { return {primitive_}; }
  /// The classes of 1, x, ..., x^(e-1): a basis of GF(q) over GF(p).
  std::vector<FieldElement> additive_basis() const;

  // Raw tables for the hot kernels. Row-major q*q for add/mul.
  std::span<const std::uint8_t> add_table() const { return add_; }
  std::span<const std::uint8_t> mul_table() const { return mul_; }
  std::span<const std::uint8_t> neg_table() const { return neg_; }
  std::span<const std::uint8_t> inv_table() const { return inv_; }

  bool operator==(const FieldTable& other) const { return p_ == other.p_ && e_ == other.e_; }

 private:
  void check(FieldElement x) const;

  unsigned p_;
  unsigned e_;
  unsigned q_;
  std::vector<unsigned> modulus_;
  std::vector<std::uint8_t> add_;
  std::vector<std::uint8_t> mul_;
  std::vector<std::uint8_t> neg_;
  std::vector<std::uint8_t> inv_;
  std::uint8_t primitive_ = 1;
};

using FieldPtr = std::shared_ptr<const FieldTable>;

bool is_prime(unsigned n);

/// Splits q = p^e; returns false when q is not a prime power.
bool split_prime_power(unsigned q, unsigned& p, unsigned& e);

}  // namespace ppower
