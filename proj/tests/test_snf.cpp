#include <doctest.h>

#include "ma/snf.hpp"

using namespace ma;
using snf::Mat;

TEST_CASE("smith normal form invariants") {
  Mat a = {{2, 4, 4}, {-6, 6, 12}, {10, 4, 16}};
  auto s = snf::smith(a);
  REQUIRE(s.rank == 3);
  // d1 | d2 | d3 and u a v = diag
  for (int i = 1; i < s.rank; ++i) CHECK(s.diag[static_cast<size_t>(i)] % s.diag[static_cast<size_t>(i) - 1] == 0);
  auto uav = snf::mul(snf::mul(s.u, a), s.v);
  for (size_t i = 0; i < 3; ++i)
    for (size_t j = 0; j < 3; ++j) CHECK(uav[i][j] == (i == j ? s.diag[i] : Int(0)));
  // invariant factors: gcd of entries 2, gcd of 2x2 minors 4, |det| 624
  CHECK(s.diag[0] == 2);
  CHECK(s.diag[1] == 2);
  CHECK(s.diag[2] == 156);
}

TEST_CASE("integer solve") {
  Mat a = {{2, 0}, {0, 3}};
  auto x = snf::solve(a, {4, 9});
  REQUIRE(x.has_value());
  CHECK((*x)[0] == 2);
  CHECK((*x)[1] == 3);
  CHECK(!snf::solve(a, {1, 0}).has_value());
}

TEST_CASE("kernel basis") {
  Mat a = {{1, 1, 1}};
  auto k = snf::kernel(a);
  CHECK(k.size() == 2);
  for (const auto& v : k) {
    Int s = 0;
    for (const Int& x : v) s += x;
    CHECK(s == 0);
  }
}
