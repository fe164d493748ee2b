#include <doctest.h>

#include <random>

#include "ppower/trimat.hpp"

using namespace ppower;

namespace {

TriMatrix random_unitriangular(const FieldPtr& f, unsigned n, std::mt19937_64& rng) {
  TriMatrix a(f, n);
  std::uniform_int_distribution<unsigned> digit(0, f->order() - 1);
  for (unsigned i = 2; i <= n; ++i)
    for (unsigned j = 1; j < i; ++j) a.set(i, j, f->element(digit(rng)));
  return a;
}

}  // namespace

TEST_CASE("pair order and positions") {
  CHECK(pair_at(3, 0) == IndexPair{3, 2});
  CHECK(pair_at(3, 1) == IndexPair{2, 1});
  CHECK(pair_at(3, 2) == IndexPair{3, 1});
  for (unsigned n = 2; n <= 8; ++n)
    for (std::size_t k = 0; k < strict_count(n); ++k) {
      const IndexPair ij = pair_at(n, k);
      CHECK(pair_position(n, ij.r, ij.s) == k);
      if (k > 0) CHECK(pair_less(pair_at(n, k - 1), ij));
    }
}

TEST_CASE("products of elementary matrices") {
  auto f = FieldTable::of_order(2);
  const TriMatrix e21 = elementary(f, 3, 2, 1, f->one());
  const TriMatrix e32 = elementary(f, 3, 3, 2, f->one());
  TriMatrix expect(f, 3);
  expect.set(2, 1, f->one());
  expect.set(3, 2, f->one());
  CHECK(e21 * e32 == expect);
  expect.set(3, 1, f->one());
  CHECK(e32 * e21 == expect);
  CHECK(e21 * TriMatrix(f, 3) == e21);
}

TEST_CASE("mismatched operands are rejected") {
  auto f2 = FieldTable::of_order(2);
  auto f3 = FieldTable::of_order(3);
  CHECK_THROWS_AS(mat_mul(TriMatrix(f2, 3), TriMatrix(f2, 4)), std::invalid_argument);
  CHECK_THROWS_AS(mat_mul(TriMatrix(f2, 3), TriMatrix(f3, 3)), std::invalid_argument);
  TriMatrix a(f2, 3);
  CHECK_THROWS(a.set(1, 2, f2->one()));
  TriMatrix singular(f3, 2);
  singular.set(1, 1, f3->zero());
  CHECK_THROWS_AS(mat_inverse(singular), std::domain_error);
  CHECK_THROWS_AS(mth_power_closed_form(singular, 2), std::invalid_argument);
}

TEST_CASE("repeated powering basics") {
  auto f = FieldTable::of_order(5);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const TriMatrix a = random_unitriangular(f, 3, rng);
    CHECK(mat_pow_repeated(a, 0) == TriMatrix(f, 3));
    CHECK(mat_pow_repeated(a, 1) == a);
    CHECK(mat_pow_repeated(a, 5) == TriMatrix(f, 3));
  }
}

TEST_CASE("closed form for the square of a 3x3 matrix") {
  for (unsigned q : {2U, 3U, 5U}) {
    auto f = FieldTable::of_order(q);
    for (unsigned a = 0; a < q; ++a)
      for (unsigned b = 0; b < q; ++b)
        for (unsigned c = 0; c < q; ++c) {
          TriMatrix m(f, 3);
          m.set(2, 1, f->element(a));
          m.set(3, 2, f->element(c));
          m.set(3, 1, f->element(b));
          const TriMatrix sq = mth_power_closed_form(m, 2);
          const FieldElement expect =
              f->add(f->mul(f->from_int(2), f->element(b)), f->mul(f->element(a), f->element(c)));
          CHECK(sq.at(3, 1) == expect);
          CHECK(mth_power_closed_form(m, 1) == m);
        }
  }
  auto f2 = FieldTable::of_order(2);
  TriMatrix m(f2, 3);
  m.set(2, 1, f2->one());
  m.set(3, 2, f2->one());
  TriMatrix expect(f2, 3);
  expect.set(3, 1, f2->one());
  CHECK(pth_power_closed_form(m) == expect);
  CHECK(m * m == expect);
}

TEST_CASE("binomials modulo p") {
  CHECK(binomial_mod_p(4, 2, 2) == 0);
  CHECK(binomial_mod_p(6, 3, 5) == 0);
  CHECK(binomial_mod_p(7, 3, 5) == 0);
  CHECK(binomial_mod_p(5, 2, 3) == 1);
  CHECK(binomial_mod_p(10, 3, 7) == 1);
  CHECK(binomial_mod_p(3, 5, 7) == 0);
}

TEST_CASE("closed forms agree with repeated powering exhaustively") {
  struct Case {
    unsigned n, q;
  };
  for (Case c : {Case{4, 2}, Case{4, 3}, Case{3, 4}, Case{3, 5}}) {
    CAPTURE(c.n);
    CAPTURE(c.q);
    auto f = FieldTable::of_order(c.q);
    const MatrixSpace space = MatrixSpace::unitriangular(f, c.n);
    const MatrixSpace image_space = MatrixSpace::unitriangular(f, c.n, f->characteristic() - 1);
    std::uint64_t mismatches = 0;
    for (std::uint64_t key = 0; key < space.size(); ++key) {
      const TriMatrix a = space.decode(key);
      for (std::uint64_t m = 0; m <= 2 * c.q; ++m)
        if (!(mth_power_closed_form(a, m) == mat_pow_repeated(a, m))) ++mismatches;
      const TriMatrix ap = pth_power_closed_form(a);
      if (!(ap == mat_pow_repeated(a, f->characteristic())) || !image_space.contains(ap)) ++mismatches;
    }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("closed forms agree with repeated powering on random samples") {
  std::mt19937_64 rng(2024);
  for (unsigned q : {2U, 3U, 4U, 8U, 9U}) {
    auto f = FieldTable::of_order(q);
    for (unsigned n = 5; n <= 7; ++n) {
      std::uint64_t mismatches = 0;
      for (int t = 0; t < 200; ++t) {
        const TriMatrix a = random_unitriangular(f, n, rng);
        const std::uint64_t m = rng() % 40;
        if (!(mth_power_closed_form(a, m) == mat_pow_repeated(a, m))) ++mismatches;
      }
      CHECK(mismatches == 0);
    }
  }
}

TEST_CASE("encode and decode are inverse bijections") {
  auto f3 = FieldTable::of_order(3);
  CHECK(MatrixSpace::unitriangular(f3, 6, 1).size() == 59049);
  CHECK(MatrixSpace::unitriangular(FieldTable::of_order(2), 8, 1).size() == 2097152);
  CHECK(MatrixSpace::unitriangular(f3, 5).encode(TriMatrix(f3, 5)).value == 0);

  for (unsigned q : {2U, 3U, 4U}) {
    auto f = FieldTable::of_order(q);
    for (unsigned n = 1; n <= 4; ++n) {
      std::vector<MatrixSpace> spaces = {MatrixSpace::triangular(f, n)};
      for (unsigned band = 0; band < n; ++band) spaces.push_back(MatrixSpace::unitriangular(f, n, band));
      for (const MatrixSpace& space : spaces) {
        bool ok = true;
        for (std::uint64_t key = 0; key < space.size(); ++key) {
          const TriMatrix a = space.decode(key);
          ok = ok && space.contains(a) && space.encode(a).value == key;
        }
        CHECK(ok);
        CHECK_THROWS_AS(space.decode(space.size()), std::out_of_range);
      }
      if (n >= 2) {
        const std::uint64_t k = static_cast<std::uint64_t>(n) * (n - 1) / 2;
        std::uint64_t expect = 1;
        for (std::uint64_t t = 0; t < k; ++t) expect *= q;
        CHECK(MatrixSpace::unitriangular(f, n).size() == expect);
        for (std::uint64_t t = 0; t < n; ++t) expect *= q - 1;
        CHECK(MatrixSpace::triangular(f, n).size() == expect);
      }
    }
  }
}

TEST_CASE("encoding outside the declared set is an error") {
  auto f = FieldTable::of_order(3);
  const MatrixSpace band = MatrixSpace::unitriangular(f, 4, 1);
  CHECK_THROWS_AS(band.encode(elementary(f, 4, 2, 1, f->one())), std::invalid_argument);
  TriMatrix d(f, 4);
  d.set(2, 2, f->element(2));
  CHECK_THROWS_AS(MatrixSpace::unitriangular(f, 4).encode(d), std::invalid_argument);
  CHECK_NOTHROW(MatrixSpace::triangular(f, 4).encode(d));
}

TEST_CASE("inverse and conjugation") {
  auto f = FieldTable::of_order(5);
  const MatrixSpace t = MatrixSpace::triangular(f, 3);
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const TriMatrix a = t.decode(rng() % t.size());
    const TriMatrix b = t.decode(rng() % t.size());
    CHECK(a * mat_inverse(a) == TriMatrix(f, 3));
    CHECK(b * conjugate(a, b) == a * b);
  }
}
