#pragma once

// Smith normal form over Z with tracked transforms, plus the little layer of
// integer linear algebra needed for homology, integer solves and kernels.

#include <optional>
#include <vector>

#include "ma/base.hpp"

namespace ma::snf {

using Mat = std::vector<std::vector<Int>>;  // row-major, possibly empty

struct Smith {
  std::vector<Int> diag;  // nonzero invariant factors d1 | d2 | ...
  int rank = 0;
  Mat u, v;  // u * a * v = d  (u: rows x rows, v: cols x cols)
};

Smith smith(const Mat& a);

// Rank over Q (via SNF).
int rank(const Mat& a);

// Solve a * x = b over Z; nullopt if no integer solution.
std::optional<std::vector<Int>> solve(const Mat& a, const std::vector<Int>& b);

// Basis of the integer kernel of a (as column vectors).
std::vector<std::vector<Int>> kernel(const Mat& a);

Mat mul(const Mat& a, const Mat& b);

}  // namespace ma::snf
