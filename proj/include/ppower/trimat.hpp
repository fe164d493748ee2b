#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ppower/gf.hpp"

namespace ppower {

/// A strictly-lower position (r, s), 1-based, s < r.
///
/// Positions are totally ordered column by column from the right: larger
/// column first, then smaller row first. For n = 4 the order is
/// (4,3) < (3,2) < (4,2) < (2,1) < (3,1) < (4,1).
struct IndexPair {
  unsigned r = 0;
  unsigned s = 0;

  friend constexpr bool operator==(IndexPair, IndexPair) = default;
};

constexpr std::size_t strict_count(unsigned n) { return static_cast<std::size_t>(n) * (n - 1) / 2; }

/// Rank of (r, s) in the pair order of dimension n; this is also the
/// storage slot of a_rs inside TriMatrix.
constexpr std::size_t pair_position(unsigned n, unsigned r, unsigned s) {
  const std::size_t before = static_cast<std::size_t>(n - s - 1) * (n - s) / 2;
  return before + (r - s - 1);
}

IndexPair pair_at(unsigned n, std::size_t position);

/// True when a comes strictly before b in the pair order.
constexpr bool pair_less(IndexPair a, IndexPair b) {
  return a.s > b.s || (a.s == b.s && a.r < b.r);
}

/// Lower-triangular n x n matrix over a small finite field.
///
/// The diagonal is stored separately from the strictly-lower entries,
/// which are kept in pair order (see IndexPair). Entries above the
/// diagonal are implicitly zero.
class TriMatrix {
 public:
  /// The identity of dimension n.
  TriMatrix(FieldPtr field, unsigned n);

  static TriMatrix identity(FieldPtr field, unsigned n) { return TriMatrix(std::move(field), n); }

  unsigned dim() const { return n_; }
  const FieldTable& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }

  /// Entry (i, j), 1-based; zero above the diagonal.
  FieldElement at(unsigned i, unsigned j) const;
  /// Throws std::out_of_range for positions above the diagonal.
  void set(unsigned i, unsigned j, FieldElement value);

  std::span<const FieldElement> diagonal() const { return diag_; }
  std::span<const FieldElement> strictly_lower() const { return sub_; }

  bool is_unitriangular() const;
  bool is_invertible() const;

  /// True when a_ij = 0 for every 0 < i - j <= band.
  bool in_band(unsigned band) const;

  friend bool operator==(const TriMatrix& a, const TriMatrix& b) {
    return a.n_ == b.n_ && *a.field_ == *b.field_ && a.diag_ == b.diag_ && a.sub_ == b.sub_;
  }

  std::string to_string() const;

 private:
  FieldPtr field_;
  unsigned n_;
  std::vector<FieldElement> diag_;
  std::vector<FieldElement> sub_;
};

/// I + lambda * e_rs (r > s), or the diagonal matrix with one entry changed (r == s).
TriMatrix elementary(FieldPtr field, unsigned n, unsigned r, unsigned s, FieldElement lambda);

/// Throws std::invalid_argument on dimension or field mismatch.
TriMatrix mat_mul(const TriMatrix& a, const TriMatrix& b);
inline TriMatrix operator*(const TriMatrix& a, const TriMatrix& b) { return mat_mul(a, b); }

/// Throws std::domain_error when a diagonal entry is zero.
TriMatrix mat_inverse(const TriMatrix& a);

/// b^-1 a b.
TriMatrix conjugate(const TriMatrix& a, const TriMatrix& b);

/// a^m by square-and-multiply; a^0 = I.
TriMatrix mat_pow_repeated(const TriMatrix& a, std::uint64_t m);

/// C(m, k) reduced modulo the prime p (Lucas' theorem).
unsigned binomial_mod_p(std::uint64_t m, std::uint64_t k, unsigned p);

/// A^m for unitriangular A from the binomial expansion of (I + N)^m, where
/// the k-th term is C(m, k) times the chain sums collected in N^k.
/// Throws std::invalid_argument unless A is unitriangular.
TriMatrix mth_power_closed_form(const TriMatrix& a, std::uint64_t m);

/// A^p in characteristic p: only the N^p chain sums survive, so the
/// result is I + N^p and vanishes on the first p - 1 subdiagonals.
TriMatrix pth_power_closed_form(const TriMatrix& a);

/// Mixed-radix key of a matrix inside a declared enumeration set.
struct PackedKey {
  std::uint64_t value = 0;
  unsigned bit_width = 0;

  friend constexpr bool operator==(PackedKey, PackedKey) = default;
};

/// A declared enumeration set: U_l(n,q) or T(n,q), with a bijection onto
/// [0, size()).
///
/// Digits are laid out least-significant first: for T(n,q) the n diagonal
/// digits (radix q - 1, digit = index - 1) come first, then the free
/// strictly-lower entries in pair order (radix q). For U_l(n,q) the free
/// entries are those with i - j > l.
class MatrixSpace {
 public:
  static MatrixSpace unitriangular(FieldPtr field, unsigned n, unsigned band = 0);
  static MatrixSpace triangular(FieldPtr field, unsigned n);

  unsigned dim() const { return n_; }
  unsigned band() const { return band_; }
  bool triangular() const { return triangular_; }
  const FieldPtr& field_ptr() const { return field_; }

  std::uint64_t size() const { return size_; }
  unsigned bit_width() const { return bit_width_; }
  /// Storage slots (pair positions) of the free strictly-lower entries.
  const std::vector<std::size_t>& free_positions() const { return free_; }

  bool contains(const TriMatrix& a) const;
  /// Throws std::invalid_argument when a lies outside the set.
  PackedKey encode(const TriMatrix& a) const;
  /// Throws std::out_of_range for keys >= size().
  TriMatrix decode(std::uint64_t key) const;
  TriMatrix decode(PackedKey key) const { return decode(key.value); }

 private:
  MatrixSpace(FieldPtr field, unsigned n, unsigned band, bool triangular);

  FieldPtr field_;
  unsigned n_;
  unsigned band_;
  bool triangular_;
  std::vector<std::size_t> free_;
  std::uint64_t size_ = 1;
  unsigned bit_width_ = 0;
};

}  // namespace ppower
