#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ppower/bigint.hpp"
#include "ppower/census_kernel.hpp"
#include "ppower/conj.hpp"

namespace ppower {

/// Exact size of U(n,q)^m, optionally with the membership bitmap.
struct ImageCensus {
  unsigned n = 0;
  unsigned q = 0;
  unsigned p = 0;
  std::uint64_t exponent = 0;
  BigInt count;
  std::optional<PowerImage> image;  ///< present when the bitmap was kept
  std::string method = "brute";
  double elapsed = 0.0;
  unsigned shards = 1;

  /// |U_{p-1}(n,q)| for exponent p, |U(n,q)| otherwise.
  BigInt domain_size() const;
};

ImageCensus u_image_census(const FieldPtr& field, unsigned n, std::uint64_t exponent,
                           const CensusOptions& options = {}, bool keep_bitmap = false);

/// |U_l(n,q)| = q^((n-l)(n-l-1)/2).
BigInt band_group_order(unsigned n, unsigned q, unsigned band);

/// I + sum a_i e_{l+1+i, i}: the values a_1..a_{n-l-1} on subdiagonal l+1.
TriMatrix canonical_element(const FieldPtr& field, unsigned n, unsigned band, std::span<const FieldElement> values);

enum class Family { A, B };

/// One of the families of canonical elements with prescribed zero pattern:
/// A_m has a_i = 0 for i <= m and a_i != 0 after; B_m has a_i != 0 for
/// i < m and a_i = 0 from m on.
struct CanonicalFamilySpec {
  unsigned n = 0;
  unsigned q = 0;
  unsigned band = 0;  ///< l
  Family family = Family::A;
  unsigned m = 0;

  /// Throws std::invalid_argument when m is outside the family's range.
  void validate() const;
  unsigned parameter_count() const { return n - band - 1; }
  /// Exponent of the class size q^k of every member.
  unsigned class_size_exponent() const;
  /// Number of members, (q-1)^(#nonzero slots).
  BigInt member_count() const;
  bool admits(std::span<const FieldElement> values) const;
  std::string label() const;
};

/// Every valid family spec for (n, q, l), A_m first.
std::vector<CanonicalFamilySpec> all_families(unsigned n, unsigned q, unsigned band);

/// All members of a family as matrices.
std::vector<TriMatrix> family_members(const FieldPtr& field, const CanonicalFamilySpec& spec);

/// A matrix C supported on the first subdiagonal with C^p = A, for A in the
/// family (band must be p - 1). Throws std::invalid_argument when A does
/// not have the family's shape; throws std::logic_error if the result does
/// not verify.
TriMatrix pth_root_of_family(const TriMatrix& a, const CanonicalFamilySpec& spec);

enum class BuBranch { Trivial, Whole, ProperGenerating };

struct BuReport {
  unsigned n = 0;
  unsigned q = 0;
  unsigned p = 0;
  BuBranch branch = BuBranch::Trivial;
  std::uint64_t image_count = 0;
  std::uint64_t domain_size = 0;
  std::uint64_t closure_size = 0;  ///< order of the subgroup generated by the image
  std::size_t generators_used = 0;
  bool holds = false;
};

const char* to_string(BuBranch branch);

/// Checks the branch that applies to (n, q): trivial image for n <= p,
/// image equal to U_{p-1} for n in {p+1, p+2}, and otherwise a proper
/// subset whose generated subgroup is all of U_{p-1}.
BuReport bu_trichotomy_check(const FieldPtr& field, unsigned n, const CensusOptions& options = {});

/// Order of the subgroup of the domain generated by the set bits of `image`.
std::uint64_t generated_subgroup_order(const PowerImage& image, std::size_t* generators_used = nullptr);

struct LboundTerm {
  BigInt value;
  std::vector<CanonicalFamilySpec> families;  ///< families whose classes the term counts
};

/// The summands of the lower bound on |U(n,q)^p| for n >= p + 3.
/// Throws std::invalid_argument for n < p + 3.
std::vector<LboundTerm> lbound_terms(unsigned n, unsigned q, unsigned p);
BigInt lbound_value(unsigned n, unsigned q, unsigned p);

struct TheoremAReport {
  unsigned n = 0;
  unsigned q = 0;
  unsigned p = 0;
  BigInt count;
  BigInt domain_size;
  Ratio ratio;
  bool hypothesis = false;  ///< q >= n - p - 1
  bool above_third = false;
  Ratio analytic;  ///< (1 - 1/q)^(n-p-1) (1 + 1/q)
  bool analytic_above_third = false;
  bool proper = false;  ///< count < |U_{p-1}|
  /// The bound must hold when the hypothesis does.
  bool holds() const { return proper && (!hypothesis || (above_third && analytic_above_third)); }
};

/// Throws std::invalid_argument for n < p + 3.
TheoremAReport theorem_a_check(unsigned n, unsigned q, const BigInt& count);

}  // namespace ppower
