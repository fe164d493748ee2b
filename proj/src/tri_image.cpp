#include "ppower/tri_image.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <numeric>
#include <sstream>

#include <omp.h>

#include "ppower/census_kernel.hpp"

namespace ppower {

namespace {

void partitions_rec(unsigned remaining, unsigned max_part, unsigned max_len, std::vector<unsigned>& cur,
                    std::vector<Partition>& out) {
  if (remaining == 0) {
    out.push_back(Partition::from_parts(cur));
    return;
  }
  if (cur.size() == max_len) return;
  for (unsigned part = std::min(remaining, max_part); part >= 1; --part) {
    cur.push_back(part);
    partitions_rec(remaining - part, part, max_len, cur, out);
    cur.pop_back();
  }
}

BigInt factorial(unsigned k) {
  BigInt r = 1;
  for (unsigned i = 2; i <= k; ++i) r *= i;
  return r;
}

std::uint64_t choose2_sum(const Partition& delta) {
  std::uint64_t s = 0;
  for (unsigned a : delta.parts) s += static_cast<std::uint64_t>(a) * (a - 1) / 2;
  return s;
}

// Signed power folded into a fraction.
void scale(BigInt& num, BigInt& den, std::uint64_t base, long long exponent) {
  if (exponent >= 0)
    num *= big_pow(base, static_cast<std::uint64_t>(exponent));
  else
    den *= big_pow(base, static_cast<std::uint64_t>(-exponent));
}

long long ext_gcd(long long a, long long b, long long& x, long long& y) {
  if (b == 0) {
    x = 1;
    y = 0;
    return a;
  }
  long long x1 = 0;
  long long y1 = 0;
  const long long g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

}  // namespace

Partition Partition::from_parts(std::vector<unsigned> parts) {
  std::sort(parts.begin(), parts.end(), std::greater<>());
  Partition out;
  unsigned n = 0;
  for (unsigned a : parts) {
    if (a == 0) throw std::invalid_argument("partition parts must be positive");
    n += a;
  }
  out.parts = std::move(parts);
  out.mults.assign(n + 1, 0);
  for (unsigned a : out.parts) ++out.mults[a];
  return out;
}

unsigned Partition::total() const { return std::accumulate(parts.begin(), parts.end(), 0U); }

std::string Partition::to_string() const {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < parts.size(); ++i) out << (i ? "," : "") << parts[i];
  out << ")";
  return out.str();
}

std::vector<Partition> partitions_up_to_length(unsigned n, unsigned max_len) {
  std::vector<Partition> out;
  if (n == 0 || max_len == 0) return out;
  std::vector<unsigned> cur;
  partitions_rec(n, n, max_len, cur, out);
  return out;
}

BigInt d_delta_count(const Partition& delta, unsigned q) {
  const unsigned k = delta.length();
  if (k >= q) throw std::invalid_argument("no diagonal of type " + delta.to_string() + " over GF(" + std::to_string(q) + ")");
  BigInt falling = 1;
  for (unsigned i = 1; i <= k; ++i) falling *= q - i;
  BigInt denom = 1;
  for (unsigned i = 1; i < delta.mults.size(); ++i) {
    const unsigned mi = delta.mults[i];
    if (mi == 0) continue;
    denom *= boost::multiprecision::pow(factorial(i), mi) * factorial(mi);
  }
  return falling * factorial(delta.total()) / denom;
}

BigInt centralizer_order(const Partition& delta, unsigned q) { return big_pow(q, choose2_sum(delta)); }

BigInt centralizer_index(const Partition& delta, unsigned q) {
  const std::uint64_t n = delta.total();
  return big_pow(q, n * (n - 1) / 2 - choose2_sum(delta));
}

Partition diagonal_type(std::span<const FieldElement> diagonal) {
  std::map<std::uint8_t, unsigned> fibers;
  for (auto d : diagonal) ++fibers[d.index];
  std::vector<unsigned> parts;
  for (auto [value, size] : fibers) parts.push_back(size);
  return Partition::from_parts(std::move(parts));
}

std::map<Partition, std::uint64_t> diagonal_type_census(const FieldPtr& field, unsigned n) {
  const unsigned q = field->order();
  std::map<Partition, std::uint64_t> tally;
  std::vector<FieldElement> diag(n, field->one());
  std::vector<unsigned> digit(n, 1);
  for (;;) {
    for (unsigned i = 0; i < n; ++i) diag[i] = field->element(digit[i]);
    ++tally[diagonal_type(diag)];
    unsigned i = 0;
    for (; i < n; ++i) {
      if (++digit[i] < q) break;
      digit[i] = 1;
    }
    if (i == n) break;
  }
  return tally;
}

std::uint64_t centralizer_order_brute(const TriMatrix& d, std::uint64_t max_elements) {
  const unsigned n = d.dim();
  const MatrixSpace u = MatrixSpace::unitriangular(d.field_ptr(), n);
  if (u.size() > max_elements) throw SizeGuardError("U(n,q) too large for centralizer filtering");
  std::uint64_t count = 0;
  for (std::uint64_t key = 0; key < u.size(); ++key) {
    const TriMatrix x = u.decode(key);
    if (mat_mul(d, x) == mat_mul(x, d)) ++count;
  }
  return count;
}

CentralizerCheck cent_structure_check(const FieldPtr& field, unsigned n, std::uint64_t max_work) {
  const unsigned q = field->order();
  const auto mul = field->mul_table();
  CentralizerCheck check;
  check.n = n;
  check.q = q;
  const MatrixSpace u = MatrixSpace::unitriangular(field, n);
  BigInt work = big_pow(q - 1, n) * u.size();
  if (work > max_work) throw SizeGuardError("centralizer check exceeds its work limit");

  std::vector<std::vector<std::uint8_t>> members;
  members.reserve(u.size());
  for (std::uint64_t key = 0; key < u.size(); ++key) {
    const TriMatrix x = u.decode(key);
    std::vector<std::uint8_t> dense(n * n, 0);
    for (unsigned i = 1; i <= n; ++i)
      for (unsigned j = 1; j <= i; ++j) dense[(i - 1) * n + (j - 1)] = x.at(i, j).index;
    members.push_back(std::move(dense));
  }

  std::map<Partition, std::uint64_t> seen;
  std::vector<unsigned> digit(n, 1);
  for (;;) {
    std::vector<FieldElement> diag(n);
    for (unsigned i = 0; i < n; ++i) diag[i] = field->element(digit[i]);
    // (d x)_ij = d_i x_ij and (x d)_ij = x_ij d_j, entry by entry.
    std::uint64_t order = 0;
    for (const auto& x : members) {
      bool commutes = true;
      for (unsigned i = 0; i < n && commutes; ++i)
        for (unsigned j = 0; j < i; ++j) {
          const std::uint8_t v = x[i * n + j];
          if (mul[diag[i].index * q + v] != mul[v * q + diag[j].index]) {
            commutes = false;
            break;
          }
        }
      if (commutes) ++order;
    }
    const Partition type = diagonal_type(diag);
    if (BigInt(order) != centralizer_order(type, q)) ++check.mismatches;
    auto [it, fresh] = seen.emplace(type, order);
    if (!fresh && it->second != order) check.types_consistent = false;
    ++check.diagonals;

    unsigned i = 0;
    for (; i < n; ++i) {
      if (++digit[i] < q) break;
      digit[i] = 1;
    }
    if (i == n) break;
  }
  return check;
}

std::uint64_t element_order(const TriMatrix& g) {
  if (!g.is_invertible()) throw std::invalid_argument("order of a singular matrix");
  const TriMatrix id = TriMatrix::identity(g.field_ptr(), g.dim());
  TriMatrix x = g;
  std::uint64_t order = 1;
  while (!(x == id)) {
    x = mat_mul(x, g);
    ++order;
  }
  return order;
}

PPartSplit p_part_decompose(const TriMatrix& g) {
  const unsigned p = g.field().characteristic();
  const std::uint64_t order = element_order(g);
  std::uint64_t p_power = 1;
  std::uint64_t rest = order;
  while (rest % p == 0) {
    rest /= p;
    p_power *= p;
  }
  long long alpha = 0;
  long long beta = 0;
  ext_gcd(static_cast<long long>(rest), static_cast<long long>(p_power), alpha, beta);
  const long long ord = static_cast<long long>(order);
  auto reduce = [ord](long long v) { return static_cast<std::uint64_t>(((v % ord) + ord) % ord); };
  const std::uint64_t to_p_part = reduce(alpha * static_cast<long long>(rest));
  const std::uint64_t to_p_prime = reduce(beta * static_cast<long long>(p_power));
  return {mat_pow_repeated(g, to_p_part), mat_pow_repeated(g, to_p_prime)};
}

TImageFormula t_image_by_formula(unsigned n, unsigned q, const CensusSource& source) {
  TImageFormula out;
  if (q == 2) {
    out.total = source(n);
    out.delegated = true;
    return out;
  }
  std::map<unsigned, BigInt> memo;
  auto census = [&](unsigned a) -> const BigInt& {
    auto it = memo.find(a);
    if (it == memo.end()) it = memo.emplace(a, source(a)).first;
    return it->second;
  };
  for (const Partition& delta : partitions_up_to_length(n, q - 1)) {
    TypeSummand s;
    s.delta = delta;
    s.d_count = d_delta_count(delta, q);
    s.class_index = centralizer_index(delta, q);
    s.cent_image = 1;
    for (unsigned a : delta.parts) s.cent_image *= census(a);
    s.product = s.d_count * s.class_index * s.cent_image;
    out.total += s.product;
    out.summands.push_back(std::move(s));
  }
  return out;
}

TImageBrute t_image_brute(const FieldPtr& field, unsigned n, const BruteOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const unsigned q = field->order();
  const unsigned p = field->characteristic();
  const MatrixSpace space = MatrixSpace::triangular(field, n);
  if (space.size() > options.max_elements)
    throw SizeGuardError("T(" + std::to_string(n) + "," + std::to_string(q) + ") exceeds the brute-force limit");
  if (n > 16) throw std::invalid_argument("dimension too large");

  const MatrixSpace unit = MatrixSpace::unitriangular(field, n);
  std::uint64_t diag_count = 1;
  for (unsigned i = 0; i < n; ++i) diag_count *= q - 1;
  const auto add = field->add_table();
  const auto mul = field->mul_table();

  std::vector<std::pair<unsigned, unsigned>> slots;
  for (std::size_t pos = 0; pos < strict_count(n); ++pos) {
    const IndexPair ij = pair_at(n, pos);
    slots.push_back({ij.r - 1, ij.s - 1});
  }

  using Dense = std::array<std::uint8_t, 256>;
  auto product = [&](const Dense& a, const Dense& b) {
    Dense c{};
    for (unsigned i = 0; i < n; ++i)
      for (unsigned j = 0; j <= i; ++j) {
        std::uint8_t acc = 0;
        for (unsigned k = j; k <= i; ++k) acc = add[acc * q + mul[a[i * 16 + k] * q + b[k * 16 + j]]];
        c[i * 16 + j] = acc;
      }
    return c;
  };

  Bitmap merged(space.size());
  const unsigned shards = std::max(1U, options.shards);
#pragma omp parallel
  {
    Bitmap local(space.size());
#pragma omp for schedule(dynamic, 1)
    for (unsigned shard = 0; shard < shards; ++shard) {
      for (std::uint64_t dkey = diag_count * shard / shards; dkey < diag_count * (shard + 1) / shards; ++dkey) {
        Dense base{};
        std::uint64_t rest = dkey;
        for (unsigned i = 0; i < n; ++i) {
          base[i * 16 + i] = static_cast<std::uint8_t>(rest % (q - 1) + 1);
          rest /= q - 1;
        }
        for (std::uint64_t ukey = 0; ukey < unit.size(); ++ukey) {
          Dense g = base;
          std::uint64_t r = ukey;
          for (auto [i, j] : slots) {
            g[i * 16 + j] = static_cast<std::uint8_t>(r % q);
            r /= q;
          }
          Dense result{};
          for (unsigned i = 0; i < n; ++i) result[i * 16 + i] = 1;
          for (unsigned k = 0; k < p; ++k) result = product(result, g);

          std::uint64_t key = 0;
          std::uint64_t w = 1;
          for (unsigned i = 0; i < n; ++i) {
            key += w * (result[i * 16 + i] - 1U);
            w *= q - 1;
          }
          for (auto [i, j] : slots) {
            key += w * result[i * 16 + j];
            w *= q;
          }
          local.set(key);
        }
      }
    }
#pragma omp critical
    merged.merge(local);
  }

  TImageBrute out;
  out.elements = space.size();
  std::uint64_t total = 0;
  std::vector<FieldElement> diag(n);
  for (std::uint64_t key = 0; key < space.size(); ++key) {
    if (!merged.test(key)) continue;
    ++total;
    std::uint64_t rest = key;
    for (unsigned i = 0; i < n; ++i) {
      diag[i] = FieldElement{static_cast<std::uint8_t>(rest % (q - 1) + 1)};
      rest /= q - 1;
    }
    ++out.per_type[diagonal_type(diag)];
  }
  out.count = total;
  out.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

CorollaryCReport corollary_c_check(unsigned n, unsigned q, const BigInt& t_image_count) {
  unsigned p = 0;
  unsigned e = 0;
  if (!split_prime_power(q, p, e)) throw std::invalid_argument("q must be a prime power");
  CorollaryCReport r;
  r.n = n;
  r.q = q;
  r.p = p;
  const long long sn = n;
  const long long sp = p;
  r.hypothesis = static_cast<long long>(q) > sn - sp - 1;

  const BigInt order_t = big_pow(q - 1, n) * big_pow(q, static_cast<std::uint64_t>(n) * (n - 1) / 2);
  r.lhs = Ratio::reduced(t_image_count, order_t);

  BigInt num = 1;
  BigInt den = 9;
  scale(num, den, 2, sn - 2);
  scale(den, num, q - 1, sn - 2);
  scale(den, num, q, (sp - 1) * (sn - sp));
  r.rhs = Ratio::reduced(num, den);
  r.inequality = r.lhs >= r.rhs;
  r.slack = Ratio::reduced(r.lhs.num * r.rhs.den, r.lhs.den * r.rhs.num);
  return r;
}

}  // namespace ppower
