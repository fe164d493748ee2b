#include "ppower/conj.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace ppower {

namespace {

// Conjugation closure on dense row-major matrices of field indices.
class OrbitEngine {
 public:
  OrbitEngine(const FieldTable& field, unsigned n, bool with_diagonal)
      : f_(field), n_(n), q_(field.order()), add_(field.add_table()), mul_(field.mul_table()),
        neg_(field.neg_table()), inv_(field.inv_table()) {
    for (std::size_t pos = 0; pos < strict_count(n); ++pos) slots_.push_back(pair_at(n, pos));
    for (auto lambda : field.additive_basis())
      for (unsigned k = 1; k < n; ++k) root_gens_.push_back({k, lambda.index});
    if (with_diagonal && q_ > 2)
      for (unsigned k = 1; k <= n; ++k) diag_gens_.push_back(k);
  }

  using Dense = std::vector<std::uint8_t>;

  Dense to_dense(const TriMatrix& a) const {
    Dense d(n_ * n_, 0);
    for (unsigned i = 1; i <= n_; ++i)
      for (unsigned j = 1; j <= i; ++j) d[(i - 1) * n_ + (j - 1)] = a.at(i, j).index;
    return d;
  }

  // Key over the first `prefix` pair slots (radix q) followed, when
  // requested, by the diagonal (radix q - 1).
  std::uint64_t key(const Dense& d, std::size_t prefix, bool diag) const {
    std::uint64_t k = 0;
    std::uint64_t w = 1;
    if (diag)
      for (unsigned i = 0; i < n_; ++i) {
        k += w * (d[i * n_ + i] - 1U);
        w *= q_ - 1;
      }
    for (std::size_t pos = 0; pos < prefix; ++pos) {
      const IndexPair ij = slots_[pos];
      k += w * d[(ij.r - 1) * n_ + (ij.s - 1)];
      w *= q_;
    }
    return k;
  }

  void truncate(Dense& d, std::size_t prefix) const {
    for (std::size_t pos = prefix; pos < slots_.size(); ++pos) {
      const IndexPair ij = slots_[pos];
      d[(ij.r - 1) * n_ + (ij.s - 1)] = 0;
    }
  }

  // B^-1 A B with B = I + lambda e_{k+1,k}: column k += lambda * column k+1,
  // then row k+1 -= lambda * row k.
  Dense conj_root(const Dense& a, unsigned k, std::uint8_t lambda) const {
    Dense m = a;
    const unsigned c = k - 1;
    for (unsigned i = 0; i < n_; ++i) m[i * n_ + c] = add(m[i * n_ + c], mul(a[i * n_ + c + 1], lambda));
    const std::uint8_t neg_lambda = neg_[lambda];
    const unsigned r = k;
    Dense out = m;
    for (unsigned j = 0; j < n_; ++j) out[r * n_ + j] = add(m[r * n_ + j], mul(neg_lambda, m[(r - 1) * n_ + j]));
    return out;
  }

  // D^-1 A D with D the identity except g at slot k: row k scales by g^-1,
  // column k by g.
  Dense conj_diag(const Dense& a, unsigned k, std::uint8_t g) const {
    Dense m = a;
    const unsigned t = k - 1;
    const std::uint8_t gi = inv_[g];
    for (unsigned j = 0; j < n_; ++j) m[t * n_ + j] = mul(m[t * n_ + j], gi);
    for (unsigned i = 0; i < n_; ++i) m[i * n_ + t] = mul(m[i * n_ + t], g);
    return m;
  }

  // Every element reachable from `start`, as keys; prefix < slot count means
  // the quotient by the subgroup vanishing on the first `prefix` slots.
  std::vector<std::uint64_t> closure(Dense start, std::size_t prefix, bool diag, const OrbitLimits& limits) const {
    truncate(start, prefix);
    std::unordered_set<std::uint64_t> seen;
    std::deque<Dense> frontier;
    seen.insert(key(start, prefix, diag));
    frontier.push_back(std::move(start));
    const std::uint8_t g = f_.primitive_element().index;
    auto visit = [&](Dense next) {
      truncate(next, prefix);
      if (seen.insert(key(next, prefix, diag)).second) {
        if (seen.size() > limits.max_orbit) throw SizeGuardError("orbit exceeds the configured limit");
        frontier.push_back(std::move(next));
      }
    };
    while (!frontier.empty()) {
      Dense cur = std::move(frontier.front());
      frontier.pop_front();
      for (auto [k, lambda] : root_gens_) visit(conj_root(cur, k, lambda));
      for (unsigned k : diag_gens_) visit(conj_diag(cur, k, g));
    }
    std::vector<std::uint64_t> keys(seen.begin(), seen.end());
    std::sort(keys.begin(), keys.end());
    return keys;
  }

  const std::vector<IndexPair>& slots() const { return slots_; }
  unsigned dim() const { return n_; }

 private:
  std::uint8_t add(std::uint8_t x, std::uint8_t y) const { return add_[x * q_ + y]; }
  std::uint8_t mul(std::uint8_t x, std::uint8_t y) const { return mul_[x * q_ + y]; }

  struct RootGen {
    unsigned k;
    std::uint8_t lambda;
  };

  const FieldTable& f_;
  unsigned n_;
  unsigned q_;
  std::span<const std::uint8_t> add_, mul_, neg_, inv_;
  std::vector<IndexPair> slots_;
  std::vector<RootGen> root_gens_;
  std::vector<unsigned> diag_gens_;
};

void require_unitriangular(const TriMatrix& a) {
  if (!a.is_unitriangular()) throw std::invalid_argument("expected a unitriangular matrix");
}

std::size_t anchor_prefix(unsigned n, IndexPair anchor) {
  if (anchor.s < 1 || anchor.s >= anchor.r || anchor.r > n) throw std::invalid_argument("invalid index pair");
  return pair_position(n, anchor.r, anchor.s) + 1;
}

void guard_quotient(unsigned q, std::size_t prefix, const OrbitLimits& limits) {
  // The quotient has q^prefix elements; refuse once that passes the ambient budget.
  BigInt size = big_pow(q, prefix);
  if (size > limits.max_ambient) throw SizeGuardError("quotient group exceeds the configured limit");
}

// Quotient-class summary of A modulo G_anchor: the keys of the class of A
// and the minimal weight reached in it, with its multiplicity.
struct QuotientOrbit {
  std::vector<std::uint64_t> keys;
  std::vector<std::uint8_t> min_bits;
  std::size_t min_count = 0;
};

std::vector<std::uint8_t> bits_from_key(std::uint64_t key, std::size_t prefix, unsigned q) {
  std::vector<std::uint8_t> bits(prefix);
  for (std::size_t pos = 0; pos < prefix; ++pos) {
    bits[pos] = (key % q) != 0 ? 1 : 0;
    key /= q;
  }
  return bits;
}

QuotientOrbit quotient_orbit(const OrbitEngine& engine, const TriMatrix& a, std::size_t prefix, const OrbitLimits& limits) {
  QuotientOrbit out;
  out.keys = engine.closure(engine.to_dense(a), prefix, false, limits);
  const unsigned q = a.field().order();
  for (std::uint64_t k : out.keys) {
    auto bits = bits_from_key(k, prefix, q);
    if (out.min_count == 0 || bits < out.min_bits) {
      out.min_bits = std::move(bits);
      out.min_count = 1;
    } else if (bits == out.min_bits) {
      ++out.min_count;
    }
  }
  return out;
}

}  // namespace

std::vector<IndexPair> pair_order(unsigned n) {
  std::vector<IndexPair> pairs;
  for (std::size_t pos = 0; pos < strict_count(n); ++pos) pairs.push_back(pair_at(n, pos));
  return pairs;
}

WeightVector weight(const TriMatrix& a, IndexPair anchor) {
  const std::size_t prefix = anchor_prefix(a.dim(), anchor);
  WeightVector w{anchor, {}};
  const auto sub = a.strictly_lower();
  for (std::size_t pos = 0; pos < prefix; ++pos) w.bits.push_back(sub[pos].index != 0 ? 1 : 0);
  return w;
}

QuotientShape quotient_shape(unsigned n, unsigned q, IndexPair anchor) {
  const std::size_t prefix = anchor_prefix(n, anchor);
  QuotientShape shape;
  shape.anchor = anchor;
  for (std::size_t pos = prefix; pos < strict_count(n); ++pos) shape.free_positions.push_back(pair_at(n, pos));
  const long long exponent = static_cast<long long>(n) * anchor.s - anchor.r -
                             static_cast<long long>(anchor.s) * (anchor.s - 1) / 2;
  if (exponent != static_cast<long long>(shape.free_positions.size()))
    throw std::logic_error("subgroup order formula disagrees with the free-position count");
  shape.exponent = static_cast<unsigned>(exponent);
  shape.order = big_pow(q, shape.exponent);
  return shape;
}

ConjugacyClass::ConjugacyClass(MatrixSpace space, std::vector<std::uint64_t> keys)
    : space_(std::move(space)), keys_(std::move(keys)) {}

bool ConjugacyClass::contains(const TriMatrix& a) const {
  if (!space_.contains(a)) return false;
  return std::binary_search(keys_.begin(), keys_.end(), space_.encode(a).value);
}

std::vector<TriMatrix> ConjugacyClass::members() const {
  std::vector<TriMatrix> out;
  out.reserve(keys_.size());
  for (auto k : keys_) out.push_back(space_.decode(k));
  return out;
}

ConjugacyClass class_of(const TriMatrix& a, Ambient ambient, const OrbitLimits& limits) {
  const unsigned n = a.dim();
  const unsigned q = a.field().order();
  const bool tri = ambient == Ambient::Triangular;
  if (tri ? !a.is_invertible() : !a.is_unitriangular())
    throw std::invalid_argument("matrix does not belong to the ambient group");
  BigInt ambient_order = big_pow(q, strict_count(n));
  if (tri) ambient_order *= big_pow(q - 1, n);
  if (ambient_order > limits.max_ambient)
    throw SizeGuardError("ambient group of order " + ambient_order.str() + " exceeds the configured limit");

  OrbitEngine engine(a.field(), n, tri);
  auto keys = engine.closure(engine.to_dense(a), strict_count(n), tri, limits);
  MatrixSpace space = tri ? MatrixSpace::triangular(a.field_ptr(), n) : MatrixSpace::unitriangular(a.field_ptr(), n);
  return ConjugacyClass(std::move(space), std::move(keys));
}

unsigned coset_class_count(const TriMatrix& a, IndexPair anchor, const OrbitLimits& limits) {
  require_unitriangular(a);
  const unsigned n = a.dim();
  const unsigned q = a.field().order();
  const std::size_t prefix = anchor_prefix(n, anchor);
  guard_quotient(q, prefix, limits);
  OrbitEngine engine(a.field(), n, false);

  // Coset members differ only at the anchor slot, i.e. in the top key digit.
  std::vector<bool> covered(q, false);
  unsigned classes = 0;
  for (unsigned lambda = 0; lambda < q; ++lambda) {
    if (covered[lambda]) continue;
    TriMatrix member = a;
    member.set(anchor.r, anchor.s, a.field().element(lambda));
    auto keys = engine.closure(engine.to_dense(member), prefix, false, limits);
    ++classes;
    std::uint64_t top = 1;
    for (std::size_t pos = 0; pos + 1 < prefix; ++pos) top *= q;
    std::uint64_t low = 0;
    {
      auto dense = engine.to_dense(member);
      low = engine.key(dense, prefix - 1, false);
    }
    for (unsigned mu = 0; mu < q; ++mu)
      if (std::binary_search(keys.begin(), keys.end(), low + top * mu)) covered[mu] = true;
  }
  return classes;
}

bool inert_point_test(const TriMatrix& a, IndexPair anchor, const OrbitLimits& limits) {
  return coset_class_count(a, anchor, limits) == 1;
}

std::vector<IndexPair> inert_points(const TriMatrix& a, const OrbitLimits& limits) {
  std::vector<IndexPair> out;
  for (IndexPair ij : pair_order(a.dim()))
    if (inert_point_test(a, ij, limits)) out.push_back(ij);
  return out;
}

bool is_canonical(const TriMatrix& a, const OrbitLimits& limits) {
  require_unitriangular(a);
  const unsigned n = a.dim();
  OrbitEngine engine(a.field(), n, false);
  for (IndexPair anchor : pair_order(n)) {
    const std::size_t prefix = anchor_prefix(n, anchor);
    guard_quotient(a.field().order(), prefix, limits);
    auto orbit = quotient_orbit(engine, a, prefix, limits);
    if (orbit.min_count != 1 || orbit.min_bits != weight(a, anchor).bits) return false;
  }
  return true;
}

bool minimal_weight_unique(const TriMatrix& a, const OrbitLimits& limits) {
  require_unitriangular(a);
  const unsigned n = a.dim();
  OrbitEngine engine(a.field(), n, false);
  for (IndexPair anchor : pair_order(n)) {
    const std::size_t prefix = anchor_prefix(n, anchor);
    guard_quotient(a.field().order(), prefix, limits);
    if (quotient_orbit(engine, a, prefix, limits).min_count != 1) return false;
  }
  return true;
}

std::vector<IndexPair> dual_lemma_predictions(const TriMatrix& a) {
  const unsigned n = a.dim();
  auto nz = [&](unsigned i, unsigned j) { return a.at(i, j).index != 0; };
  std::vector<IndexPair> out;
  auto note = [&](IndexPair ij) {
    if (std::find(out.begin(), out.end(), ij) == out.end()) out.push_back(ij);
  };
  for (unsigned r = 2; r <= n; ++r)
    for (unsigned s = 1; s < r; ++s) {
      if (!nz(r, s)) continue;
      bool column_clear = true;
      for (unsigned j = s + 1; j < r; ++j) column_clear = column_clear && !nz(j, s);
      if (column_clear)
        for (unsigned t = 1; t < s; ++t) note({r, t});
      bool row_clear = true;
      for (unsigned i = s + 1; i < r; ++i) row_clear = row_clear && !nz(r, i);
      if (row_clear)
        for (unsigned rr = r + 1; rr <= n; ++rr) {
          bool below_clear = true;
          for (unsigned j = rr + 1; j <= n; ++j) below_clear = below_clear && !nz(j, rr);
          if (below_clear) note({rr, s});
        }
    }
  std::sort(out.begin(), out.end(), [](IndexPair x, IndexPair y) { return pair_less(x, y); });
  return out;
}

}  // namespace ppower
