#include <doctest.h>

#include "ma/signs.hpp"

using namespace ma::signs;

TEST_CASE("relation_sign basics") {
  CHECK(relation_sign(0, 1, 0) == +1);
  CHECK(relation_sign(1, 2, 0) == -1);
  CHECK(relation_sign(1, 1, 1) == +1);
}

TEST_CASE("relation_entry_sign examples") {
  CHECK(relation_entry_sign(1, 2, 0, {1}) == -1);
  // j = 0 reduces to relation_sign for even k
  CHECK(relation_entry_sign(0, 2, 1, {1, 1, 1}) == relation_sign(0, 2, 1));
  CHECK(relation_entry_sign(1, 1, 1, {1}) == -1);
}

TEST_CASE("relation_entry_sign consistency property") {
  // relation_entry_sign = relation_sign * (-1)^{(2-k) sum_{i<=j} deg_i}
  for (int d = 1; d <= 5; ++d)
    for (int k = 1; k <= d; ++k)
      for (int j = 0; j + k <= d; ++j) {
        int l = d - j - k;
        DegreeVector degs;
        for (int i = 0; i < d; ++i) degs.push_back((7 * i + k + 3 * j) % 5 - 2);
        Deg s = 0;
        for (int i = 0; i < j; ++i) s += degs[static_cast<size_t>(i)];
        CHECK(relation_entry_sign(j, k, l, degs) ==
              relation_sign(j, k, l) * sign_pow((2 - k) * s));
      }
}

TEST_CASE("morphism_lhs_sign examples") {
  CHECK(morphism_lhs_sign(0, 1, 0) == +1);
  CHECK(morphism_lhs_sign(1, 1, 0) == -1);
  CHECK(morphism_lhs_sign(0, 2, 1) == -1);
}

TEST_CASE("morphism_rhs_sign examples") {
  CHECK(morphism_rhs_sign({1, 1}, Convention::Keller) == +1);
  CHECK(morphism_rhs_sign({2, 1}, Convention::Keller) == -1);
  CHECK(morphism_rhs_sign({1, 1}, Convention::LH) == +1);
}

TEST_CASE("convention_convert_sign") {
  CHECK(convention_convert_sign(1) == +1);
  CHECK(convention_convert_sign(2) == -1);
  CHECK(convention_convert_sign(4) == +1);
  // double conversion is the identity at the sign level
  for (int i = 1; i <= 9; ++i)
    CHECK(convention_convert_sign(i) * convention_convert_sign(i) == +1);
}

TEST_CASE("boundary_component_sign examples") {
  CHECK(boundary_component_sign(2, 1, {1}) == -1);
  CHECK(boundary_component_sign(2, 0, {}) == -1);
  CHECK(boundary_component_sign(2, 2, {1, 1}) == -1);
}

TEST_CASE("md_prefactor") {
  CHECK(md_prefactor({3}) == +1);  // d = 1: empty sum
  CHECK(md_prefactor({1, 1}) == -1);
  CHECK(md_prefactor({0, 0}) == +1);
  CHECK(md_prefactor({1, 1}, PrefactorStrategy::None) == +1);
}

TEST_CASE("koszul_swap_sign") {
  CHECK(koszul_swap_sign(1, 1) == -1);
  CHECK(koszul_swap_sign(0, 5) == +1);
  CHECK(koszul_swap_sign(2, 3) == +1);
}

TEST_CASE("exponent multiplicativity") {
  for (Deg a = -4; a <= 4; ++a)
    for (Deg b = -4; b <= 4; ++b) CHECK(sign_pow(a + b) == sign_pow(a) * sign_pow(b));
}
