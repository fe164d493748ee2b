#include "ppower/gf.hpp"

#include <array>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace ppower {

namespace {

// Conway polynomials, constant term first.
const std::map<std::pair<unsigned, unsigned>, std::vector<unsigned>>& conway_table() {
  static const std::map<std::pair<unsigned, unsigned>, std::vector<unsigned>> table = {
      {{2, 2}, {1, 1, 1}},
      {{2, 3}, {1, 1, 0, 1}},
      {{2, 4}, {1, 1, 0, 0, 1}},
      {{2, 5}, {1, 0, 1, 0, 0, 1}},
      {{2, 6}, {1, 1, 0, 1, 1, 0, 1}},
      {{3, 2}, {2, 2, 1}},
      {{3, 3}, {1, 2, 0, 1}},
      {{5, 2}, {2, 4, 1}},
      {{7, 2}, {3, 6, 1}},
  };
  return table;
}

std::vector<unsigned> digits_of(unsigned index, unsigned p, unsigned e) {
  std::vector<unsigned> d(e);
  for (unsigned t = 0; t < e; ++t) {
    d[t] = index % p;
    index /= p;
  }
  return d;
}

unsigned index_of(const std::vector<unsigned>& d, unsigned p) {
  unsigned index = 0;
  for (auto it = d.rbegin(); it != d.rend(); ++it) index = index * p + *it;
  return index;
}

}  // namespace

bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool split_prime_power(unsigned q, unsigned& p, unsigned& e) {
  if (q < 2) return false;
  unsigned d = 2;
  while (q % d != 0) ++d;
  unsigned rest = q;
  unsigned k = 0;
  while (rest % d == 0) {
    rest /= d;
    ++k;
  }
  if (rest != 1) return false;
  p = d;
  e = k;
  return true;
}

FieldTable::FieldTable(unsigned p, unsigned e) : p_(p), e_(e) {
  if (!is_prime(p)) throw std::invalid_argument("field characteristic " + std::to_string(p) + " is not prime");
  if (e == 0) throw std::invalid_argument("field degree must be at least 1");
  unsigned q = 1;
  for (unsigned t = 0; t < e; ++t) {
    q *= p;
    if (q > kMaxOrder) throw std::invalid_argument("field order exceeds 64");
  }
  q_ = q;

  if (e == 1) {
    modulus_ = {0, 1};
  } else {
    auto it = conway_table().find({p, e});
    if (it == conway_table().end())
      throw std::invalid_argument("no modulus recorded for GF(" + std::to_string(p) + "^" + std::to_string(e) + ")");
    modulus_ = it->second;
  }

  add_.resize(q * q);
  mul_.resize(q * q);
  neg_.resize(q);
  inv_.assign(q, 0);

  std::vector<std::vector<unsigned>> digits(q);
  for (unsigned i = 0; i < q; ++i) digits[i] = digits_of(i, p, e);

  for (unsigned a = 0; a < q; ++a) {
    std::vector<unsigned> n(e);
    for (unsigned t = 0; t < e; ++t) n[t] = (p - digits[a][t]) % p;
    neg_[a] = static_cast<std::uint8_t>(index_of(n, p));
    for (unsigned b = 0; b < q; ++b) {
      std::vector<unsigned> s(e);
      for (unsigned t = 0; t < e; ++t) s[t] = (digits[a][t] + digits[b][t]) % p;
      add_[a * q + b] = static_cast<std::uint8_t>(index_of(s, p));

      // Schoolbook product, then reduce by the monic modulus from the top.
      std::vector<unsigned> prod(2 * e - 1, 0);
      for (unsigned i = 0; i < e; ++i)
        for (unsigned j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + digits[a][i] * digits[b][j]) % p;
      for (unsigned deg = 2 * e - 2; deg >= e; --deg) {
        unsigned c = prod[deg];
        if (c != 0)
          for (unsigned t = 0; t <= e; ++t)
            prod[deg - e + t] = (prod[deg - e + t] + (p - c) * modulus_[t]) % p;
        if (deg == e) break;
      }
      prod.resize(e);
      mul_[a * q + b] = static_cast<std::uint8_t>(index_of(prod, p));
    }
  }

  for (unsigned a = 1; a < q; ++a) {
    for (unsigned b = 1; b < q; ++b) {
      if (mul_[a * q + b] == 1) {
        inv_[a] = static_cast<std::uint8_t>(b);
        break;
      }
    }
    if (inv_[a] == 0) throw std::logic_error("modulus is reducible: " + modulus_string());
  }

  for (unsigned g = 1; g < q; ++g) {
    unsigned x = g;
    unsigned ord = 1;
    while (x != 1) {
      x = mul_[x * q + g];
      ++ord;
    }
    if (ord == q - 1) {
      primitive_ = static_cast<std::uint8_t>(g);
      break;
    }
  }
}

FieldPtr FieldTable::make(unsigned p, unsigned e) { return std::make_shared<const FieldTable>(p, e); }

FieldPtr FieldTable::of_order(unsigned q) {
  unsigned p = 0;
  unsigned e = 0;
  if (!split_prime_power(q, p, e)) throw std::invalid_argument(std::to_string(q) + " is not a prime power");
  return make(p, e);
}

std::string FieldTable::modulus_string() const {
  std::ostringstream out;
  bool first = true;
  for (unsigned t = static_cast<unsigned>(modulus_.size()); t-- > 0;) {
    unsigned c = modulus_[t];
    if (c == 0) continue;
    if (!first) out << " + ";
    first = false;
    if (t == 0 || c != 1) out << c;
    if (t >= 1) out << "x";
    if (t >= 2) out << "^" << t;
  }
  return out.str();
}

FieldElement FieldTable::element(unsigned index) const {
  if (index >= q_) throw std::out_of_range("element index " + std::to_string(index) + " outside GF(" + std::to_string(q_) + ")");
  return {static_cast<std::uint8_t>(index)};
}

FieldElement FieldTable::from_int(long long value) const {
  long long r = value % static_cast<long long>(p_);
  if (r < 0) r += p_;
  return {static_cast<std::uint8_t>(r)};
}

FieldElement FieldTable::inv(FieldElement x) const {
  check(x);
  if (x.index == 0) throw std::domain_error("inverse of zero");
  return {inv_[x.index]};
}

FieldElement FieldTable::pow(FieldElement x, std::uint64_t exponent) const {
  check(x);
  FieldElement result = one();
  FieldElement base = x;
  while (exponent != 0) {
    if (exponent & 1U) result = {mul_[result.index * q_ + base.index]};
    base = {mul_[base.index * q_ + base.index]};
    exponent >>= 1U;
  }
  return result;
}

std::vector<FieldElement> FieldTable::additive_basis() const {
  std::vector<FieldElement> basis;
  unsigned idx = 1;
  for (unsigned t = 0; t < e_; ++t) {
    basis.push_back({static_cast<std::uint8_t>(idx)});
    idx *= p_;
  }
  return basis;
}

void FieldTable::check(FieldElement x) const {
  if (x.index >= q_)
    throw std::invalid_argument("element index " + std::to_string(x.index) + " does not belong to GF(" + std::to_string(q_) + ")");
}

}  // namespace ppower
