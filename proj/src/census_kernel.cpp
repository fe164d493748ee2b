#include "ppower/census_kernel.hpp"

#include <algorithm>
#include <array>

#include <omp.h>

namespace ppower {

namespace {

constexpr unsigned kMaxDim = 16;

using Block = std::array<std::uint8_t, kMaxDim * kMaxDim>;

struct Arith {
  unsigned q;
  const std::uint8_t* add;
  const std::uint8_t* mul;

  std::uint8_t plus(std::uint8_t x, std::uint8_t y) const { return add[x * q + y]; }
  std::uint8_t times(std::uint8_t x, std::uint8_t y) const { return mul[x * q + y]; }

  // c = a * b for lower-triangular d x d blocks (row stride kMaxDim).
  void product(const Block& a, const Block& b, Block& c, unsigned d) const {
    for (unsigned i = 0; i < d; ++i)
      for (unsigned j = 0; j <= i; ++j) {
        std::uint8_t acc = 0;
        for (unsigned k = j; k <= i; ++k) acc = plus(acc, times(a[i * kMaxDim + k], b[k * kMaxDim + j]));
        c[i * kMaxDim + j] = acc;
      }
  }

  void sum(const Block& a, const Block& b, Block& c, unsigned d) const {
    for (unsigned i = 0; i < d; ++i)
      for (unsigned j = 0; j <= i; ++j) c[i * kMaxDim + j] = plus(a[i * kMaxDim + j], b[i * kMaxDim + j]);
  }

  Block identity(unsigned d) const {
    Block b{};
    for (unsigned i = 0; i < d; ++i) b[i * kMaxDim + i] = 1;
    return b;
  }

  // power = a^m and geo = I + a + ... + a^(m-1), by binary splitting.
  void power_and_geometric(const Block& a, std::uint64_t m, Block& power, Block& geo, unsigned d) const {
    if (m == 0) {
      power = identity(d);
      geo = Block{};
      return;
    }
    if (m % 2 == 1) {
      Block p_prev{}, g_prev{};
      power_and_geometric(a, m - 1, p_prev, g_prev, d);
      sum(g_prev, p_prev, geo, d);
      product(p_prev, a, power, d);
      return;
    }
    Block p_half{}, g_half{}, tmp{};
    power_and_geometric(a, m / 2, p_half, g_half, d);
    product(p_half, g_half, tmp, d);
    sum(g_half, tmp, geo, d);
    product(p_half, p_half, power, d);
  }
};

}  // namespace

MatrixSpace power_domain(const FieldPtr& field, unsigned n, std::uint64_t m) {
  const unsigned p = field->characteristic();
  return MatrixSpace::unitriangular(field, n, m == p ? p - 1 : 0);
}

PowerImage power_image_parallel(const FieldPtr& field, unsigned n, std::uint64_t m, const CensusOptions& options) {
  if (n == 0 || n > kMaxDim) throw std::invalid_argument("census dimension must be in [1, 16]");
  const unsigned q = field->order();
  const unsigned p = field->characteristic();
  const unsigned e = field->degree();

  unsigned __int128 total = 1;
  for (std::size_t k = 0; k < strict_count(n); ++k) {
    total *= q;
    if (total > options.max_elements)
      throw SizeGuardError("U(" + std::to_string(n) + "," + std::to_string(q) + ") exceeds the census element limit");
  }

  PowerImage image{power_domain(field, n, m), m, Bitmap{}, static_cast<std::uint64_t>(total), 0};
  const MatrixSpace& domain = image.domain;
  image.members = Bitmap(domain.size());
  if (n == 1) {
    image.members.set(0);
    return image;
  }

  const Arith ar{q, field->add_table().data(), field->mul_table().data()};
  const unsigned d = n - 1;
  const unsigned band = domain.band();

  // Key weight of every output slot (i, j), 0 when the slot is banded out.
  std::array<std::uint64_t, kMaxDim * kMaxDim> out_weight{};
  {
    std::uint64_t w = 1;
    for (std::size_t pos : domain.free_positions()) {
      const IndexPair ij = pair_at(n, pos);
      out_weight[(ij.r - 1) * kMaxDim + (ij.s - 1)] = w;
      w *= q;
    }
  }

  // Slots of the top-left block in enumeration order.
  std::vector<IndexPair> block_slots;
  for (std::size_t pos = 0; pos < strict_count(d); ++pos) block_slots.push_back(pair_at(d, pos));
  std::uint64_t outer_count = 1;
  for (std::size_t k = 0; k < block_slots.size(); ++k) outer_count *= q;

  // Additive basis x^t of GF(q) over GF(p); index p^t.
  std::vector<std::uint8_t> basis;
  for (auto b : field->additive_basis()) basis.push_back(b.index);
  const unsigned digits = d * e;

  const unsigned shards = std::max(1U, options.shards);
  if (options.threads != 0) omp_set_num_threads(static_cast<int>(options.threads));

  std::uint64_t overflow = 0;
  Bitmap& merged = image.members;

#pragma omp parallel reduction(+ : overflow)
  {
    Bitmap local(domain.size());
    std::vector<std::uint8_t> row_add(static_cast<std::size_t>(digits) * d);
    std::vector<unsigned> odo(digits);

#pragma omp for schedule(dynamic, 1)
    for (unsigned shard = 0; shard < shards; ++shard) {
      const std::uint64_t begin = outer_count * shard / shards;
      const std::uint64_t end = outer_count * (shard + 1) / shards;
      for (std::uint64_t outer = begin; outer < end; ++outer) {
        Block a = ar.identity(d);
        std::uint64_t rest = outer;
        for (IndexPair ij : block_slots) {
          a[(ij.r - 1) * kMaxDim + (ij.s - 1)] = static_cast<std::uint8_t>(rest % q);
          rest /= q;
        }
        Block power{}, geo{};
        ar.power_and_geometric(a, m, power, geo, d);

        // Rows 1..n-1 of A^m are A'^m.
        std::uint64_t prefix_key = 0;
        for (unsigned i = 1; i < d; ++i)
          for (unsigned j = 0; j < i; ++j) {
            const std::uint8_t x = power[i * kMaxDim + j];
            if (x == 0) continue;
            const std::uint64_t w = out_weight[i * kMaxDim + j];
            if (w == 0 && i - j <= band)
              ++overflow;
            else
              prefix_key += w * x;
          }

        // Increment vectors: basis element t in slot j of v adds x^t * geo_row_j.
        std::fill(row_add.begin(), row_add.end(), std::uint8_t{0});
        for (unsigned j = 0; j < d; ++j)
          for (unsigned t = 0; t < e; ++t)
            for (unsigned c = 0; c <= j; ++c)
              row_add[(j * e + t) * d + c] = ar.times(basis[t], geo[j * kMaxDim + c]);

        std::array<std::uint8_t, kMaxDim> w{};
        std::fill(odo.begin(), odo.end(), 0U);
        const unsigned last = n - 1;  // 0-based row of the last row
        for (;;) {
          std::uint64_t key = prefix_key;
          for (unsigned c = 0; c < d; ++c) {
            const std::uint8_t x = w[c];
            if (x == 0) continue;
            const std::uint64_t wt = out_weight[last * kMaxDim + c];
            if (wt == 0 && last - c <= band)
              ++overflow;
            else
              key += wt * x;
          }
          local.set(key);

          // Base-p odometer over the coefficients of v; every touched digit
          // contributes one addition (a wrap p-1 -> 0 is also +1 mod p).
          unsigned digit = 0;
          for (; digit < digits; ++digit) {
            const std::uint8_t* inc = &row_add[static_cast<std::size_t>(digit) * d];
            for (unsigned c = 0; c < d; ++c) w[c] = ar.plus(w[c], inc[c]);
            if (++odo[digit] < p) break;
            odo[digit] = 0;
          }
          if (digit == digits) break;
        }
      }
    }

#pragma omp critical
    merged.merge(local);
  }

  image.overflow = overflow;
  return image;
}

}  // namespace ppower
