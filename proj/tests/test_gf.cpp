#include <doctest.h>

#include "ppower/gf.hpp"

using namespace ppower;

namespace {

const unsigned kOrders[] = {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32, 37, 41, 43, 47, 49, 53, 59, 61, 64};

}  // namespace

TEST_CASE("small fields behave as expected") {
  auto f2 = FieldTable::make(2, 1);
  CHECK(f2->add(f2->one(), f2->one()) == f2->zero());

  auto f5 = FieldTable::make(5, 1);
  CHECK(f5->mul(f5->element(2), f5->element(3)) == f5->one());
  CHECK(f5->inv(f5->element(2)) == f5->element(3));
  CHECK(f5->pow(f5->element(2), 4) == f5->one());

  auto f3 = FieldTable::make(3, 1);
  CHECK(f3->inv(f3->element(2)) == f3->element(2));

  auto f4 = FieldTable::make(2, 2);
  const FieldElement w = f4->element(2);  // class of x
  CHECK(f4->mul(w, w) == f4->add(w, f4->one()));
  CHECK(f4->pow(w, 3) == f4->one());
  CHECK(f4->modulus_string() == "x^2 + x + 1");
}

TEST_CASE("construction rejects bad parameters") {
  CHECK_THROWS_AS(FieldTable(4, 1), std::invalid_argument);
  CHECK_THROWS_AS(FieldTable(2, 7), std::invalid_argument);
  CHECK_THROWS_AS(FieldTable(3, 0), std::invalid_argument);
  CHECK_THROWS_AS(FieldTable::of_order(6), std::invalid_argument);
  CHECK_THROWS_AS(FieldTable::of_order(81), std::invalid_argument);
  CHECK_THROWS(FieldTable::of_order(5)->element(5));
}

TEST_CASE("inverse of zero and mixed-field operands are errors") {
  auto f3 = FieldTable::make(3, 1);
  CHECK_THROWS_AS(f3->inv(f3->zero()), std::domain_error);
  auto f7 = FieldTable::make(7, 1);
  CHECK_THROWS_AS(f3->add(f3->one(), f7->element(5)), std::invalid_argument);
}

TEST_CASE("field axioms hold exhaustively for every supported order") {
  for (unsigned q : kOrders) {
    CAPTURE(q);
    auto f = FieldTable::of_order(q);
    REQUIRE(f->order() == q);
    bool ok = true;
    for (unsigned a = 0; a < q && ok; ++a) {
      const FieldElement x{static_cast<std::uint8_t>(a)};
      ok = ok && f->add(x, f->zero()) == x && f->mul(x, f->one()) == x && f->add(x, f->neg(x)) == f->zero();
      ok = ok && f->pow(x, q) == x;
      if (a != 0) ok = ok && f->mul(x, f->inv(x)) == f->one() && f->pow(x, q - 1) == f->one();
      for (unsigned b = 0; b < q && ok; ++b) {
        const FieldElement y{static_cast<std::uint8_t>(b)};
        ok = ok && f->add(x, y) == f->add(y, x) && f->mul(x, y) == f->mul(y, x);
        for (unsigned c = 0; c < q && ok; ++c) {
          const FieldElement z{static_cast<std::uint8_t>(c)};
          ok = ok && f->add(f->add(x, y), z) == f->add(x, f->add(y, z));
          ok = ok && f->mul(f->mul(x, y), z) == f->mul(x, f->mul(y, z));
          ok = ok && f->mul(x, f->add(y, z)) == f->add(f->mul(x, y), f->mul(x, z));
        }
      }
    }
    CHECK(ok);
  }
}

TEST_CASE("prime subfield is the image of the integers") {
  for (unsigned q : kOrders) {
    auto f = FieldTable::of_order(q);
    const unsigned p = f->characteristic();
    for (long long a = -7; a <= 7; ++a)
      for (long long b = -7; b <= 7; ++b) {
        CHECK(f->add(f->from_int(a), f->from_int(b)) == f->from_int(a + b));
        CHECK(f->mul(f->from_int(a), f->from_int(b)) == f->from_int(a * b));
      }
    for (unsigned i = 0; i < p; ++i) CHECK(f->from_int(i).index == i);
  }
}

TEST_CASE("primitive element generates the multiplicative group") {
  for (unsigned q : kOrders) {
    auto f = FieldTable::of_order(q);
    const FieldElement g = f->primitive_element();
    unsigned order = 1;
    for (FieldElement x = g; !(x == f->one()); x = f->mul(x, g)) ++order;
    CHECK(order == q - 1);
  }
}

TEST_CASE("index p^t is the class of x^t") {
  auto f = FieldTable::of_order(27);
  const FieldElement x = f->element(3);
  CHECK(f->mul(x, x) == f->element(9));
  const auto basis = f->additive_basis();
  REQUIRE(basis.size() == 3);
  CHECK(basis[0] == f->one());
  CHECK(basis[1] == f->element(3));
  CHECK(basis[2] == f->element(9));
}

TEST_CASE("prime power splitting") {
  unsigned p = 0;
  unsigned e = 0;
  CHECK(split_prime_power(64, p, e));
  CHECK(p == 2);
  CHECK(e == 6);
  CHECK(split_prime_power(49, p, e));
  CHECK(p == 7);
  CHECK_FALSE(split_prime_power(12, p, e));
  CHECK_FALSE(split_prime_power(1, p, e));
  CHECK(is_prime(61));
  CHECK_FALSE(is_prime(1));
}
