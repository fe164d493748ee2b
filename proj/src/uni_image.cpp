#include "ppower/uni_image.hpp"

#include <chrono>
#include <deque>
#include <stdexcept>

namespace ppower {

BigInt ImageCensus::domain_size() const { return band_group_order(n, q, exponent == p ? p - 1 : 0); }

BigInt band_group_order(unsigned n, unsigned q, unsigned band) {
  if (band + 1 >= n) return 1;
  const unsigned k = n - band;
  return big_pow(q, static_cast<std::uint64_t>(k) * (k - 1) / 2);
}

ImageCensus u_image_census(const FieldPtr& field, unsigned n, std::uint64_t exponent, const CensusOptions& options,
                           bool keep_bitmap) {
  const auto start = std::chrono::steady_clock::now();
  PowerImage image = power_image_parallel(field, n, exponent, options);
  if (image.overflow != 0) throw std::logic_error("power landed outside its expected domain");
  ImageCensus census;
  census.n = n;
  census.q = field->order();
  census.p = field->characteristic();
  census.exponent = exponent;
  census.count = image.count();
  census.shards = std::max(1U, options.shards);
  if (keep_bitmap) census.image = std::move(image);
  census.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return census;
}

TriMatrix canonical_element(const FieldPtr& field, unsigned n, unsigned band, std::span<const FieldElement> values) {
  if (band + 2 > n) throw std::invalid_argument("band must satisfy 0 <= l <= n - 2");
  if (values.size() != n - band - 1) throw std::invalid_argument("canonical element needs n - l - 1 values");
  TriMatrix a(field, n);
  for (unsigned i = 1; i + band + 1 <= n; ++i) a.set(band + 1 + i, i, values[i - 1]);
  return a;
}

void CanonicalFamilySpec::validate() const {
  if (band + 2 > n) throw std::invalid_argument("family needs 0 <= l <= n - 2");
  const unsigned half = (n - band - 1) / 2;
  if (family == Family::A ? m > half + 1 : (m <= half || m > n - band))
    throw std::invalid_argument("family index out of range: " + label());
}

unsigned CanonicalFamilySpec::class_size_exponent() const {
  const unsigned k = n - band - 1;
  const unsigned full = k * (k - 1) / 2;
  if (family == Family::A) return full - m * (m - 1) / 2;
  const unsigned t = n - band - m;
  return full - t * (t == 0 ? 0 : t - 1) / 2;
}

BigInt CanonicalFamilySpec::member_count() const {
  const unsigned k = parameter_count();
  const unsigned nonzero = family == Family::A ? (m >= k ? 0 : k - m) : std::min(m - 1, k);
  return big_pow(q - 1, nonzero);
}

bool CanonicalFamilySpec::admits(std::span<const FieldElement> values) const {
  if (values.size() != parameter_count()) return false;
  for (unsigned i = 1; i <= values.size(); ++i) {
    const bool zero = values[i - 1].index == 0;
    const bool want_zero = family == Family::A ? i <= m : i >= m;
    if (zero != want_zero) return false;
  }
  return true;
}

std::string CanonicalFamilySpec::label() const {
  return std::string(family == Family::A ? "A" : "B") + "_" + std::to_string(m);
}

std::vector<CanonicalFamilySpec> all_families(unsigned n, unsigned q, unsigned band) {
  std::vector<CanonicalFamilySpec> out;
  const unsigned half = (n - band - 1) / 2;
  for (unsigned m = 0; m <= half + 1; ++m) out.push_back({n, q, band, Family::A, m});
  for (unsigned m = half + 1; m <= n - band; ++m) out.push_back({n, q, band, Family::B, m});
  return out;
}

std::vector<TriMatrix> family_members(const FieldPtr& field, const CanonicalFamilySpec& spec) {
  spec.validate();
  const unsigned k = spec.parameter_count();
  const unsigned q = field->order();
  std::vector<unsigned> free_slots;
  for (unsigned i = 1; i <= k; ++i)
    if (spec.family == Family::A ? i > spec.m : i < spec.m) free_slots.push_back(i);

  std::vector<TriMatrix> out;
  std::vector<FieldElement> values(k, field->zero());
  std::vector<unsigned> digit(free_slots.size(), 1);
  for (;;) {
    for (std::size_t t = 0; t < free_slots.size(); ++t) values[free_slots[t] - 1] = field->element(digit[t]);
    out.push_back(canonical_element(field, spec.n, spec.band, values));
    std::size_t t = 0;
    for (; t < digit.size(); ++t) {
      if (++digit[t] < q) break;
      digit[t] = 1;
    }
    if (t == digit.size()) break;
  }
  return out;
}

TriMatrix pth_root_of_family(const TriMatrix& a, const CanonicalFamilySpec& spec) {
  const FieldTable& f = a.field();
  const unsigned p = f.characteristic();
  const unsigned n = a.dim();
  spec.validate();
  if (spec.n != n || spec.band + 1 != p) throw std::invalid_argument("roots are built for l = p - 1 and matching n");
  if (n <= p) throw std::invalid_argument("roots of canonical elements need n > p");

  std::vector<FieldElement> values;
  for (unsigned i = 1; i + p <= n; ++i) values.push_back(a.at(p + i, i));
  if (!(canonical_element(a.field_ptr(), n, p - 1, values) == a) || !spec.admits(values))
    throw std::invalid_argument("matrix is not a member of family " + spec.label());

  // b[t] is the entry c_{t,t-1}; the product b[i+1] ... b[i+p] must equal a_i.
  std::vector<FieldElement> b(n + 1, f.zero());
  auto run_recursion = [&](unsigned first_i) {
    for (unsigned i = first_i; i + p < n; ++i) {
      FieldElement prod = f.one();
      for (unsigned t = i + 2; t <= p + i; ++t) prod = f.mul(prod, b[t]);
      b[p + i + 1] = f.mul(f.inv(prod), values[i]);
    }
  };

  const unsigned k = n - p;
  if (spec.family == Family::B) {
    // Ones to start, solve while a_{i+1} is nonzero, zeros from p + m on.
    for (unsigned t = 2; t <= p && t <= n; ++t) b[t] = f.one();
    for (unsigned i = 0; i + p < n && i + 1 < spec.m; ++i) {
      FieldElement prod = f.one();
      for (unsigned t = i + 2; t <= p + i; ++t) prod = f.mul(prod, b[t]);
      b[p + i + 1] = f.mul(f.inv(prod), values[i]);
    }
  } else {
    // Zeros up to m + 1, ones up to m + p, then solve for the rest.
    for (unsigned t = spec.m + 2; t <= spec.m + p && t <= n; ++t) b[t] = f.one();
    if (spec.m < k) run_recursion(spec.m);
  }

  TriMatrix c(a.field_ptr(), n);
  for (unsigned t = 2; t <= n; ++t) c.set(t, t - 1, b[t]);
  if (!(pth_power_closed_form(c) == a)) throw std::logic_error("constructed root does not reproduce " + spec.label());
  return c;
}

const char* to_string(BuBranch branch) {
  switch (branch) {
    case BuBranch::Trivial:
      return "trivial";
    case BuBranch::Whole:
      return "whole";
    case BuBranch::ProperGenerating:
      return "proper-generating";
  }
  return "?";
}

std::uint64_t generated_subgroup_order(const PowerImage& image, std::size_t* generators_used) {
  const MatrixSpace& space = image.domain;
  Bitmap closure(space.size());
  std::vector<TriMatrix> gens;

  auto rebuild = [&]() {
    closure = Bitmap(space.size());
    closure.set(0);
    std::deque<std::uint64_t> queue{0};
    while (!queue.empty()) {
      const TriMatrix x = space.decode(queue.front());
      queue.pop_front();
      for (const auto& g : gens) {
        const std::uint64_t k = space.encode(mat_mul(x, g)).value;
        if (!closure.test(k)) {
          closure.set(k);
          queue.push_back(k);
        }
      }
    }
  };

  rebuild();
  for (std::uint64_t key = 0; key < space.size(); ++key) {
    if (!image.members.test(key) || closure.test(key)) continue;
    gens.push_back(space.decode(key));
    rebuild();
  }
  if (generators_used != nullptr) *generators_used = gens.size();
  return closure.popcount();
}

BuReport bu_trichotomy_check(const FieldPtr& field, unsigned n, const CensusOptions& options) {
  BuReport r;
  r.n = n;
  r.q = field->order();
  r.p = field->characteristic();
  const PowerImage image = power_image_parallel(field, n, r.p, options);
  r.image_count = image.count();
  r.domain_size = image.domain.size();
  r.closure_size = generated_subgroup_order(image, &r.generators_used);
  if (image.overflow != 0) return r;

  if (n <= r.p) {
    r.branch = BuBranch::Trivial;
    r.holds = r.image_count == 1 && image.members.test(0);
  } else if (n <= r.p + 2) {
    r.branch = BuBranch::Whole;
    r.holds = r.image_count == r.domain_size;
  } else {
    r.branch = BuBranch::ProperGenerating;
    r.holds = r.image_count < r.domain_size && r.closure_size == r.domain_size;
  }
  return r;
}

std::vector<LboundTerm> lbound_terms(unsigned n, unsigned q, unsigned p) {
  if (n < p + 3) throw std::invalid_argument("the lower bound needs n >= p + 3");
  const unsigned k = n - p;
  const unsigned top = k * (k - 1) / 2;
  const unsigned band = p - 1;
  std::vector<LboundTerm> terms;
  terms.push_back({big_pow(q, top) * big_pow(q - 1, k), {{n, q, band, Family::A, 0}}});
  for (unsigned m = 1; m <= k / 2; ++m)
    terms.push_back({big_pow(q, top - m * (m - 1) / 2) * 2 * big_pow(q - 1, k - m),
                     {{n, q, band, Family::A, m}, {n, q, band, Family::B, k + 1 - m}}});
  if (k % 2 == 1) {
    const unsigned r = k / 2 + 1;
    terms.push_back({big_pow(q, top - r * (r - 1) / 2) * 2 * big_pow(q - 1, k - r),
                     {{n, q, band, Family::A, r}, {n, q, band, Family::B, k + 1 - r}}});
  }
  return terms;
}

BigInt lbound_value(unsigned n, unsigned q, unsigned p) {
  BigInt total = 0;
  for (const auto& t : lbound_terms(n, q, p)) total += t.value;
  return total;
}

TheoremAReport theorem_a_check(unsigned n, unsigned q, const BigInt& count) {
  unsigned p = 0;
  unsigned e = 0;
  if (!split_prime_power(q, p, e)) throw std::invalid_argument("q must be a prime power");
  if (n < p + 3) throw std::invalid_argument("the ratio bound needs n >= p + 3");
  TheoremAReport r;
  r.n = n;
  r.q = q;
  r.p = p;
  r.count = count;
  r.domain_size = band_group_order(n, q, p - 1);
  r.ratio = Ratio::reduced(count, r.domain_size);
  r.hypothesis = q + p + 1 >= n;
  const Ratio third{1, 3};
  r.above_third = r.ratio > third;
  r.analytic = Ratio::reduced(big_pow(q - 1, n - p - 1) * (q + 1), big_pow(q, n - p));
  r.analytic_above_third = r.analytic > third;
  r.proper = count < r.domain_size;
  return r;
}

}  // namespace ppower
