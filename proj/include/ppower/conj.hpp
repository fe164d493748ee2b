#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "ppower/bigint.hpp"
#include "ppower/errors.hpp"
#include "ppower/trimat.hpp"

namespace ppower {

/// All n(n-1)/2 strictly-lower pairs, least first.
std::vector<IndexPair> pair_order(unsigned n);

/// 0/1 pattern of nonzero entries at the pairs up to `anchor`, in pair order.
/// Compared lexicographically with 0 < 1.
struct WeightVector {
  IndexPair anchor;
  std::vector<std::uint8_t> bits;

  friend bool operator==(const WeightVector& a, const WeightVector& b) { return a.bits == b.bits; }
  friend std::strong_ordering operator<=>(const WeightVector& a, const WeightVector& b) {
    return a.bits <=> b.bits;
  }
};

WeightVector weight(const TriMatrix& a, IndexPair anchor);

/// The normal subgroup of U(n,q) vanishing at every pair <= anchor.
struct QuotientShape {
  IndexPair anchor;
  unsigned exponent = 0;  ///< order = q^exponent = q^(ns - r - s(s-1)/2)
  BigInt order;
  std::vector<IndexPair> free_positions;  ///< pairs strictly above the anchor
};

QuotientShape quotient_shape(unsigned n, unsigned q, IndexPair anchor);

enum class Ambient { Unitriangular, Triangular };

struct OrbitLimits {
  std::uint64_t max_ambient = 100'000'000;  ///< refuse ambient groups larger than this
  std::uint64_t max_orbit = 10'000'000;     ///< abort a closure that visits more elements
};

/// A full conjugacy class, stored as sorted keys of the ambient space.
class ConjugacyClass {
 public:
  ConjugacyClass(MatrixSpace space, std::vector<std::uint64_t> keys);

  std::size_t size() const { return keys_.size(); }
  bool contains(const TriMatrix& a) const;
  const std::vector<std::uint64_t>& keys() const { return keys_; }
  const MatrixSpace& space() const { return space_; }
  std::vector<TriMatrix> members() const;

 private:
  MatrixSpace space_;
  std::vector<std::uint64_t> keys_;
};

/// Orbit of `a` under conjugation by U(n,q) or T(n,q), by closure under the
/// generators I + lambda e_{i+1,i} (lambda over an additive basis) and, for
/// T, the diagonal matrices with one primitive entry.
ConjugacyClass class_of(const TriMatrix& a, Ambient ambient, const OrbitLimits& limits = {});

/// Number of conjugacy classes of U(n,q)/G_anchor meeting the coset
/// A N_anchor (which only varies the anchor entry). Always 1 or q.
unsigned coset_class_count(const TriMatrix& a, IndexPair anchor, const OrbitLimits& limits = {});

/// True when the coset meets exactly one class of the quotient.
bool inert_point_test(const TriMatrix& a, IndexPair anchor, const OrbitLimits& limits = {});

std::vector<IndexPair> inert_points(const TriMatrix& a, const OrbitLimits& limits = {});

/// True when, for every anchor, the image of A in U(n,q)/G_anchor is the
/// unique element of minimal weight in its quotient class.
bool is_canonical(const TriMatrix& a, const OrbitLimits& limits = {});

/// Whether the minimal weight in the quotient class of A is attained by
/// exactly one element, for every anchor.
bool minimal_weight_unique(const TriMatrix& a, const OrbitLimits& limits = {});

/// Inert points promised by the two duality rules for a canonical matrix:
/// a nonzero a_rs with zeros below it in column s makes every (r, s'),
/// s' < s, inert; with zeros left of it in row r, (r', s) is inert for each
/// r' > r whose column r' vanishes below the diagonal.
std::vector<IndexPair> dual_lemma_predictions(const TriMatrix& a);

}  // namespace ppower
