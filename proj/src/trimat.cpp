#include "ppower/trimat.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

namespace ppower {

namespace {

// Row-major n x n scratch matrix of field indices, 0-based.
struct Dense {
  unsigned n;
  std::vector<std::uint8_t> v;

  Dense(unsigned dim) : n(dim), v(static_cast<std::size_t>(dim) * dim, 0) {}
  std::uint8_t& operator()(unsigned i, unsigned j) { return v[i * n + j]; }
  std::uint8_t operator()(unsigned i, unsigned j) const { return v[i * n + j]; }
};

Dense to_dense(const TriMatrix& a) {
  Dense d(a.dim());
  for (unsigned i = 1; i <= a.dim(); ++i)
    for (unsigned j = 1; j <= i; ++j) d(i - 1, j - 1) = a.at(i, j).index;
  return d;
}

TriMatrix from_dense(const FieldPtr& field, const Dense& d) {
  TriMatrix out(field, d.n);
  for (unsigned i = 1; i <= d.n; ++i)
    for (unsigned j = 1; j <= i; ++j) out.set(i, j, FieldElement{d(i - 1, j - 1)});
  return out;
}

// Product of lower-triangular dense matrices.
Dense dense_mul(const FieldTable& f, const Dense& a, const Dense& b) {
  const unsigned q = f.order();
  const auto add = f.add_table();
  const auto mul = f.mul_table();
  Dense c(a.n);
  for (unsigned i = 0; i < a.n; ++i)
    for (unsigned j = 0; j <= i; ++j) {
      std::uint8_t acc = 0;
      for (unsigned k = j; k <= i; ++k) acc = add[acc * q + mul[a(i, k) * q + b(k, j)]];
      c(i, j) = acc;
    }
  return c;
}

void check_compatible(const TriMatrix& a, const TriMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("matrix dimension mismatch");
  if (!(a.field() == b.field())) throw std::invalid_argument("matrices over different fields");
}

}  // namespace

IndexPair pair_at(unsigned n, std::size_t position) {
  if (position >= strict_count(n)) throw std::out_of_range("pair position out of range");
  for (unsigned s = n - 1; s >= 1; --s) {
    const std::size_t column = n - s;
    if (position < column) return {static_cast<unsigned>(s + 1 + position), s};
    position -= column;
  }
  throw std::logic_error("unreachable");
}

TriMatrix::TriMatrix(FieldPtr field, unsigned n)
    : field_(std::move(field)), n_(n), diag_(n, FieldElement{1}), sub_(strict_count(n), FieldElement{0}) {
  if (!field_) throw std::invalid_argument("null field");
  if (n == 0) throw std::invalid_argument("matrix dimension must be positive");
}

FieldElement TriMatrix::at(unsigned i, unsigned j) const {
  if (i == 0 || j == 0 || i > n_ || j > n_) throw std::out_of_range("matrix index out of range");
  if (j > i) return FieldElement{0};
  if (i == j) return diag_[i - 1];
  return sub_[pair_position(n_, i, j)];
}

void TriMatrix::set(unsigned i, unsigned j, FieldElement value) {
  if (i == 0 || j == 0 || i > n_ || j > i) throw std::out_of_range("position is not on or below the diagonal");
  if (value.index >= field_->order()) throw std::invalid_argument("entry outside the field");
  if (i == j)
    diag_[i - 1] = value;
  else
    sub_[pair_position(n_, i, j)] = value;
}

bool TriMatrix::is_unitriangular() const {
  for (auto d : diag_)
    if (d.index != 1) return false;
  return true;
}

bool TriMatrix::is_invertible() const {
  for (auto d : diag_)
    if (d.index == 0) return false;
  return true;
}

bool TriMatrix::in_band(unsigned band) const {
  for (unsigned i = 2; i <= n_; ++i)
    for (unsigned j = (i > band ? i - band : 1); j < i; ++j)
      if (at(i, j).index != 0) return false;
  return true;
}

std::string TriMatrix::to_string() const {
  std::ostringstream out;
  for (unsigned i = 1; i <= n_; ++i) {
    out << "[";
    for (unsigned j = 1; j <= n_; ++j) out << (j > 1 ? " " : "") << static_cast<unsigned>(at(i, j).index);
    out << "]";
  }
  return out.str();
}

TriMatrix elementary(FieldPtr field, unsigned n, unsigned r, unsigned s, FieldElement lambda) {
  TriMatrix m(std::move(field), n);
  if (r == s)
    m.set(r, r, lambda);
  else
    m.set(r, s, lambda);
  return m;
}

TriMatrix mat_mul(const TriMatrix& a, const TriMatrix& b) {
  check_compatible(a, b);
  return from_dense(a.field_ptr(), dense_mul(a.field(), to_dense(a), to_dense(b)));
}

TriMatrix mat_inverse(const TriMatrix& a) {
  const FieldTable& f = a.field();
  if (!a.is_invertible()) throw std::domain_error("singular triangular matrix");
  const unsigned n = a.dim();
  // Forward substitution column by column: X with A X = I.
  TriMatrix x(a.field_ptr(), n);
  for (unsigned j = 1; j <= n; ++j) {
    x.set(j, j, f.inv(a.at(j, j)));
    for (unsigned i = j + 1; i <= n; ++i) {
      FieldElement acc = f.zero();
      for (unsigned k = j; k < i; ++k) acc = f.add(acc, f.mul(a.at(i, k), x.at(k, j)));
      x.set(i, j, f.neg(f.mul(f.inv(a.at(i, i)), acc)));
    }
  }
  return x;
}

TriMatrix conjugate(const TriMatrix& a, const TriMatrix& b) { return mat_mul(mat_mul(mat_inverse(b), a), b); }

TriMatrix mat_pow_repeated(const TriMatrix& a, std::uint64_t m) {
  const FieldTable& f = a.field();
  Dense result = to_dense(TriMatrix::identity(a.field_ptr(), a.dim()));
  Dense base = to_dense(a);
  while (m != 0) {
    if (m & 1U) result = dense_mul(f, result, base);
    m >>= 1U;
    if (m != 0) base = dense_mul(f, base, base);
  }
  return from_dense(a.field_ptr(), result);
}

unsigned binomial_mod_p(std::uint64_t m, std::uint64_t k, unsigned p) {
  if (k > m) return 0;
  // Lucas: product of digit binomials, each from a small Pascal row.
  unsigned result = 1;
  while (m != 0 || k != 0) {
    const unsigned mi = static_cast<unsigned>(m % p);
    const unsigned ki = static_cast<unsigned>(k % p);
    if (ki > mi) return 0;
    std::vector<unsigned> row(mi + 1, 0);
    row[0] = 1;
    for (unsigned t = 1; t <= mi; ++t)
      for (unsigned u = t; u >= 1; --u) row[u] = (row[u] + row[u - 1]) % p;
    result = (result * row[ki]) % p;
    m /= p;
    k /= p;
  }
  return result;
}

TriMatrix mth_power_closed_form(const TriMatrix& a, std::uint64_t m) {
  if (!a.is_unitriangular()) throw std::invalid_argument("closed-form power needs a unitriangular matrix");
  const FieldTable& f = a.field();
  const unsigned n = a.dim();
  const unsigned p = f.characteristic();

  Dense nil = to_dense(a);
  for (unsigned i = 0; i < n; ++i) nil(i, i) = 0;

  TriMatrix out(a.field_ptr(), n);
  if (m == 0) return out;
  // chain(i, j) after k rounds = sum over j < r1 < ... < r_{k-1} < i of
  // a_{i,r_{k-1}} ... a_{r1,j}, i.e. (N^k)_{ij}.
  Dense chain = nil;
  for (std::uint64_t k = 1; k <= m && k < n; ++k) {
    const FieldElement coeff = f.from_int(binomial_mod_p(m, k, p));
    if (coeff.index != 0)
      for (unsigned i = 2; i <= n; ++i)
        for (unsigned j = 1; j < i; ++j) {
          const FieldElement term = f.mul(coeff, FieldElement{chain(i - 1, j - 1)});
          out.set(i, j, f.add(out.at(i, j), term));
        }
    chain = dense_mul(f, chain, nil);
  }
  return out;
}

TriMatrix pth_power_closed_form(const TriMatrix& a) {
  if (!a.is_unitriangular()) throw std::invalid_argument("closed-form power needs a unitriangular matrix");
  const FieldTable& f = a.field();
  const unsigned n = a.dim();
  const unsigned p = f.characteristic();
  TriMatrix out(a.field_ptr(), n);
  if (n <= p) return out;

  Dense nil = to_dense(a);
  for (unsigned i = 0; i < n; ++i) nil(i, i) = 0;
  Dense chain = nil;
  for (unsigned k = 1; k < p; ++k) chain = dense_mul(f, chain, nil);
  for (unsigned i = p + 1; i <= n; ++i)
    for (unsigned j = 1; j + p <= i; ++j) out.set(i, j, FieldElement{chain(i - 1, j - 1)});
  return out;
}

MatrixSpace::MatrixSpace(FieldPtr field, unsigned n, unsigned band, bool triangular)
    : field_(std::move(field)), n_(n), band_(band), triangular_(triangular) {
  if (!field_) throw std::invalid_argument("null field");
  if (n == 0) throw std::invalid_argument("matrix dimension must be positive");
  const unsigned q = field_->order();
  for (std::size_t pos = 0; pos < strict_count(n); ++pos) {
    const IndexPair ij = pair_at(n, pos);
    if (ij.r - ij.s > band) free_.push_back(pos);
  }
  // Track the exact size in 128 bits to reject anything that would overflow a key.
  unsigned __int128 size = 1;
  const unsigned __int128 limit = static_cast<unsigned __int128>(std::numeric_limits<std::uint64_t>::max());
  auto grow = [&](unsigned radix) {
    size *= radix;
    if (size > limit) throw std::length_error("enumeration set too large for a 64-bit key");
  };
  if (triangular_)
    for (unsigned i = 0; i < n; ++i) grow(q - 1);
  for (std::size_t k = 0; k < free_.size(); ++k) grow(q);
  size_ = static_cast<std::uint64_t>(size);
  std::uint64_t span = size_ - 1;
  while (span != 0) {
    ++bit_width_;
    span >>= 1U;
  }
}

MatrixSpace MatrixSpace::unitriangular(FieldPtr field, unsigned n, unsigned band) {
  return MatrixSpace(std::move(field), n, band, false);
}

MatrixSpace MatrixSpace::triangular(FieldPtr field, unsigned n) { return MatrixSpace(std::move(field), n, 0, true); }

bool MatrixSpace::contains(const TriMatrix& a) const {
  if (a.dim() != n_ || !(a.field() == *field_)) return false;
  if (triangular_ ? !a.is_invertible() : !a.is_unitriangular()) return false;
  return a.in_band(band_);
}

PackedKey MatrixSpace::encode(const TriMatrix& a) const {
  if (!contains(a)) throw std::invalid_argument("matrix outside the declared enumeration set");
  const std::uint64_t q = field_->order();
  std::uint64_t key = 0;
  std::uint64_t weight = 1;
  if (triangular_)
    for (auto d : a.diagonal()) {
      key += weight * (d.index - 1U);
      weight *= q - 1;
    }
  const auto sub = a.strictly_lower();
  for (std::size_t pos : free_) {
    key += weight * sub[pos].index;
    weight *= q;
  }
  return {key, bit_width_};
}

TriMatrix MatrixSpace::decode(std::uint64_t key) const {
  if (key >= size_) throw std::out_of_range("key outside the enumeration set");
  const std::uint64_t q = field_->order();
  TriMatrix a(field_, n_);
  if (triangular_)
    for (unsigned i = 1; i <= n_; ++i) {
      a.set(i, i, FieldElement{static_cast<std::uint8_t>(key % (q - 1) + 1)});
      key /= q - 1;
    }
  for (std::size_t pos : free_) {
    const IndexPair ij = pair_at(n_, pos);
    a.set(ij.r, ij.s, FieldElement{static_cast<std::uint8_t>(key % q)});
    key /= q;
  }
  return a;
}

}  // namespace ppower
