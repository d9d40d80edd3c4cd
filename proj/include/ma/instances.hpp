#pragma once

// Bundled exact instances: brick-lattice flat tori (generic, rich, symmetric-
// degenerate), a square annulus, and the 1-dimensional interval/circle data.
// Builders search deterministically over seeded value noise until the exact
// genericity checks pass, so reruns are bit-identical.

#include <vector>

#include "ma/base.hpp"
#include "ma/mesh.hpp"

namespace ma::instances {

struct Instance {
  mesh::Surface surface;
  std::vector<Rat> f;  // the Morse function
  std::string name;
};

// flat torus, brick lattice n x n, one min / two saddles / one max (for -f)
Instance torus(int n = 8);
// torus with a larger critical census so that m_1 != 0
Instance torus_rich(int n = 8);
// symmetric torus: exactly degenerate (tied values at mirror pairs); used by
// the degeneracy-reseed tests
Instance torus_symmetric(int n = 8);
// square annulus with Dirichlet rims: interior min+saddle, two criticals per rim
Instance annulus();

// 1-dimensional instances (vertex values along a path / cycle)
struct Instance1D {
  bool circle = false;
  std::vector<Rat> f;
  std::string name;
};
Instance1D interval();
Instance1D circle4();

}  // namespace ma::instances
