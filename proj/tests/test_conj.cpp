#include <doctest.h>

#include <algorithm>

#include "ppower/conj.hpp"
#include "ppower/uni_image.hpp"

using namespace ppower;

namespace {

TriMatrix with_entries(const FieldPtr& f, unsigned n, std::initializer_list<std::pair<IndexPair, unsigned>> entries) {
  TriMatrix a(f, n);
  for (const auto& [ij, v] : entries) a.set(ij.r, ij.s, f->element(v));
  return a;
}

}  // namespace

TEST_CASE("pair order") {
  const auto three = pair_order(3);
  REQUIRE(three.size() == 3);
  CHECK(three[0] == IndexPair{3, 2});
  CHECK(three[1] == IndexPair{2, 1});
  CHECK(three[2] == IndexPair{3, 1});
  const auto four = pair_order(4);
  CHECK(four.size() == 6);
  CHECK(four.front() == IndexPair{4, 3});
  CHECK(four.back() == IndexPair{4, 1});
}

TEST_CASE("weights") {
  auto f = FieldTable::of_order(3);
  const unsigned n = 5;
  const WeightVector w0 = weight(TriMatrix(f, n), {n, 1});
  CHECK(std::all_of(w0.bits.begin(), w0.bits.end(), [](auto b) { return b == 0; }));

  const WeightVector w1 = weight(elementary(f, n, n, 1, f->one()), {n, 1});
  CHECK(w1.bits.back() == 1);
  CHECK(std::count(w1.bits.begin(), w1.bits.end(), 1) == 1);

  const std::vector<FieldElement> values = {f->one(), f->element(2), f->one()};
  const TriMatrix a = canonical_element(f, n, 1, values);
  const WeightVector wa = weight(a, {n, 1});
  const auto pairs = pair_order(n);
  for (std::size_t k = 0; k < pairs.size(); ++k) CHECK(wa.bits[k] == (pairs[k].r - pairs[k].s == 2 ? 1 : 0));
  CHECK(w0 < wa);
}

TEST_CASE("quotient shapes") {
  CHECK(quotient_shape(4, 3, {4, 1}).order == 1);
  CHECK(quotient_shape(4, 3, {4, 3}).exponent == 5);
  CHECK(quotient_shape(5, 2, {5, 4}).order == 512);
  for (unsigned n = 2; n <= 7; ++n)
    for (IndexPair ij : pair_order(n)) {
      const QuotientShape shape = quotient_shape(n, 2, ij);
      CHECK(shape.free_positions.size() == shape.exponent);
      for (IndexPair free : shape.free_positions) CHECK(pair_less(ij, free));
    }
}

TEST_CASE("conjugacy classes in U") {
  auto f2 = FieldTable::of_order(2);
  CHECK(class_of(TriMatrix(f2, 4), Ambient::Unitriangular).size() == 1);

  const std::vector<FieldElement> ones = {f2->one(), f2->one(), f2->one()};
  CHECK(class_of(canonical_element(f2, 5, 1, ones), Ambient::Unitriangular).size() == 8);
  const std::vector<FieldElement> lead_zero = {f2->zero(), f2->one(), f2->one()};
  CHECK(class_of(canonical_element(f2, 5, 1, lead_zero), Ambient::Unitriangular).size() == 8);

  const TriMatrix a = with_entries(f2, 3, {{{2, 1}, 1}, {{3, 1}, 1}});
  const ConjugacyClass cls = class_of(a, Ambient::Unitriangular);
  CHECK(cls.contains(elementary(f2, 3, 2, 1, f2->one())));
  for (const TriMatrix& b : cls.members()) CHECK(cls.contains(b));
}

TEST_CASE("classes match brute-force conjugation") {
  for (unsigned q : {2U, 3U}) {
    auto f = FieldTable::of_order(q);
    const unsigned n = 4;
    const MatrixSpace u = MatrixSpace::unitriangular(f, n);
    const MatrixSpace t = MatrixSpace::triangular(f, n);
    for (std::uint64_t key = 0; key < u.size(); key += 37) {
      const TriMatrix a = u.decode(key);
      std::vector<std::uint64_t> brute_u;
      for (std::uint64_t g = 0; g < u.size(); ++g) brute_u.push_back(u.encode(conjugate(a, u.decode(g))).value);
      std::sort(brute_u.begin(), brute_u.end());
      brute_u.erase(std::unique(brute_u.begin(), brute_u.end()), brute_u.end());
      CHECK(class_of(a, Ambient::Unitriangular).keys() == brute_u);

      std::vector<std::uint64_t> brute_t;
      for (std::uint64_t g = 0; g < t.size(); ++g) brute_t.push_back(t.encode(conjugate(a, t.decode(g))).value);
      std::sort(brute_t.begin(), brute_t.end());
      brute_t.erase(std::unique(brute_t.begin(), brute_t.end()), brute_t.end());
      CHECK(class_of(a, Ambient::Triangular).keys() == brute_t);
    }
  }
}

TEST_CASE("orbit size guard") {
  auto f = FieldTable::of_order(3);
  CHECK_THROWS_AS(class_of(TriMatrix(f, 8), Ambient::Unitriangular), SizeGuardError);
  OrbitLimits tight;
  tight.max_ambient = 100;
  CHECK_THROWS_AS(class_of(TriMatrix(f, 4), Ambient::Unitriangular, tight), SizeGuardError);
  CHECK_THROWS_AS(is_canonical(TriMatrix(f, 4), tight), SizeGuardError);
}

TEST_CASE("canonical matrices") {
  auto f2 = FieldTable::of_order(2);
  CHECK(is_canonical(TriMatrix(f2, 4)));
  CHECK_FALSE(is_canonical(with_entries(f2, 3, {{{2, 1}, 1}, {{3, 1}, 1}})));
  CHECK(is_canonical(elementary(f2, 3, 2, 1, f2->one())));

  for (unsigned q : {2U, 3U}) {
    auto f = FieldTable::of_order(q);
    for (unsigned n = 3; n <= 4; ++n)
      for (unsigned l = 0; l + 2 <= n; ++l) {
        std::vector<FieldElement> values(n - l - 1, f->element(q - 1));
        const TriMatrix a = canonical_element(f, n, l, values);
        CHECK(is_canonical(a));
        CHECK(minimal_weight_unique(a));
      }
  }
}

TEST_CASE("inert points of the identity and of canonical elements") {
  auto f = FieldTable::of_order(3);
  // The identity is central: its class is a singleton, so it has no inert points.
  for (IndexPair ij : pair_order(4)) {
    CHECK_FALSE(inert_point_test(TriMatrix(f, 4), ij));
    CHECK(coset_class_count(TriMatrix(f, 4), ij) == 3);
  }

  const std::vector<FieldElement> values = {f->one(), f->zero(), f->element(2)};
  const TriMatrix a = canonical_element(f, 5, 1, values);
  const auto inert = inert_points(a);
  for (IndexPair ij : dual_lemma_predictions(a))
    CHECK(std::find(inert.begin(), inert.end(), ij) != inert.end());
  CHECK(class_of(a, Ambient::Unitriangular).size() == [&] {
    std::size_t s = 1;
    for (std::size_t k = 0; k < inert.size(); ++k) s *= 3;
    return s;
  }());
}

TEST_CASE("coset class counts are 1 or q for all of U(3,q)") {
  for (unsigned q : {2U, 3U, 4U}) {
    auto f = FieldTable::of_order(q);
    const MatrixSpace u = MatrixSpace::unitriangular(f, 3);
    for (std::uint64_t key = 0; key < u.size(); ++key)
      for (IndexPair ij : pair_order(3)) {
        const unsigned c = coset_class_count(u.decode(key), ij);
        CHECK((c == 1 || c == q));
      }
  }
}
