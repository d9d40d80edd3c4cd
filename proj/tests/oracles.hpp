#pragma once

// Test-side oracles, independent of the library implementations they check:
// - plane binary tree counter (recursive, no tree structures)
// - simplicial betti numbers over Q (rational Gaussian elimination)
// - simplicial cup product evaluation via Alexander-Whitney

#include <array>
#include <map>
#include <utility>
#include <vector>

#include "ma/base.hpp"

namespace oracle {

// Number of planar binary trees with d leaves, counted by direct recursion.
ma::Int count_binary_trees(int d);

// A triangulated complex given by triangles over integer vertex ids. Triangles
// are listed with a coherent (counterclockwise) orientation.
struct SimpComplex {
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::pair<int, int>> boundary_edges;  // unordered pairs
  std::vector<int> boundary_vertices;
};

// Betti numbers over Q in degrees 0..2; relative to the boundary when rel.
std::vector<long long> simplicial_betti(const SimpComplex& c, bool rel);

// 1-cochain as a map on ordered edges (a, b) with a < b.
using Cochain1 = std::map<std::pair<int, int>, ma::Int>;

bool is_cocycle(const SimpComplex& c, const Cochain1& f);

// <f U g, [M]> for a closed oriented surface, by Alexander-Whitney on the
// vertex-ordered triangulation.
ma::Int cup_eval(const SimpComplex& c, const Cochain1& f, const Cochain1& g);

}  // namespace oracle
