#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ppower/bigint.hpp"
#include "ppower/errors.hpp"
#include "ppower/trimat.hpp"

namespace ppower {

/// A partition of n, kept both as weakly decreasing parts and in power
/// notation (mults[i] = number of parts equal to i, for 1 <= i <= n).
struct Partition {
  std::vector<unsigned> parts;
  std::vector<unsigned> mults;

  /// Sorts the parts; throws std::invalid_argument on a zero part.
  static Partition from_parts(std::vector<unsigned> parts);

  unsigned total() const;
  unsigned length() const { return static_cast<unsigned>(parts.size()); }
  std::string to_string() const;

  friend bool operator==(const Partition& a, const Partition& b) { return a.parts == b.parts; }
  friend bool operator<(const Partition& a, const Partition& b) { return a.parts < b.parts; }
};

/// Partitions of n with at most max_len parts, in reverse-lexicographic order.
std::vector<Partition> partitions_up_to_length(unsigned n, unsigned max_len);

/// |D_delta(n,q)| = (q-1)(q-2)...(q-k) n! / prod (i!)^{m_i} m_i!.
/// Throws std::invalid_argument when l(delta) >= q.
BigInt d_delta_count(const Partition& delta, unsigned q);

/// |C_U(d)| = q^(sum C(a_i, 2)) for d of type delta.
BigInt centralizer_order(const Partition& delta, unsigned q);
/// [U : C_U(d)] = q^(C(n,2) - sum C(a_i, 2)).
BigInt centralizer_index(const Partition& delta, unsigned q);

/// Type of a diagonal: the sizes of its fibers.
Partition diagonal_type(std::span<const FieldElement> diagonal);

/// Tally of D(n,q) by type, by enumerating all (q-1)^n diagonals.
std::map<Partition, std::uint64_t> diagonal_type_census(const FieldPtr& field, unsigned n);

/// |C_U(d)| by filtering U(n,q) for matrices commuting with d.
std::uint64_t centralizer_order_brute(const TriMatrix& d, std::uint64_t max_elements = 10'000'000);

struct CentralizerCheck {
  unsigned n = 0;
  unsigned q = 0;
  std::uint64_t diagonals = 0;
  std::uint64_t mismatches = 0;  ///< diagonals whose brute order differs from the formula
  bool types_consistent = true;   ///< every type shows a single centralizer order
  bool holds() const { return mismatches == 0 && types_consistent; }
};

/// Compares the brute centralizer order of every d in D(n,q) with the formula.
CentralizerCheck cent_structure_check(const FieldPtr& field, unsigned n, std::uint64_t max_work = 200'000'000);

std::uint64_t element_order(const TriMatrix& g);

struct PPartSplit {
  TriMatrix p_part;
  TriMatrix p_prime_part;
};

/// g = u d0 = d0 u with u of p-power order and d0 of order prime to p,
/// via g^(alpha m') and g^(beta p^k) where |g| = p^k m' and
/// alpha m' + beta p^k = 1.
PPartSplit p_part_decompose(const TriMatrix& g);

struct TypeSummand {
  Partition delta;
  BigInt d_count;
  BigInt class_index;
  BigInt cent_image;  ///< prod |U(a_i, q)^p|
  BigInt product;
};

/// Supplies |U(a, q)^p| for a given a.
using CensusSource = std::function<BigInt(unsigned)>;

struct TImageFormula {
  BigInt total;
  std::vector<TypeSummand> summands;
  bool delegated = false;  ///< q = 2: T(n,2) = U(n,2), total taken from the source
};

/// |T(n,q)^p| as a sum over types delta with l(delta) <= q - 1 of
/// |D_delta| [U : C_delta] |C_delta^p|.
TImageFormula t_image_by_formula(unsigned n, unsigned q, const CensusSource& source);

struct TImageBrute {
  BigInt count;
  std::map<Partition, std::uint64_t> per_type;  ///< image size grouped by diagonal type
  std::uint64_t elements = 0;
  double elapsed = 0.0;
};

struct BruteOptions {
  std::uint64_t max_elements = 10'000'000;
  unsigned shards = 1;
};

/// |T(n,q)^p| by raising every element of T(n,q) to the p-th power.
TImageBrute t_image_brute(const FieldPtr& field, unsigned n, const BruteOptions& options = {});

struct CorollaryCReport {
  unsigned n = 0;
  unsigned q = 0;
  unsigned p = 0;
  bool hypothesis = false;  ///< q > n - p - 1
  Ratio lhs;                ///< |T^p| / |T|
  Ratio rhs;                ///< 2^(n-2) / (9 (q-1)^(n-2) q^((p-1)(n-p)))
  bool inequality = false;  ///< lhs >= rhs, exact
  Ratio slack;              ///< lhs / rhs
};

CorollaryCReport corollary_c_check(unsigned n, unsigned q, const BigInt& t_image_count);

}  // namespace ppower
