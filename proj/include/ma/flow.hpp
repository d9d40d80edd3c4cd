#pragma once

// Exact piecewise-constant pseudo-gradient dynamics on a Surface: critical
// vertex classification from link sign changes, the tilted-gradient field
// construction with its edge-transversality repair, the orbit tracer
// (including boundary sliding and spiral termination), separatrix germs and
// seeded function perturbations.

#include <map>
#include <optional>
#include <vector>

#include "ma/base.hpp"
#include "ma/mesh.hpp"

namespace ma::flow {

// ---------------------------------------------------------------------------
// Classification of vertices of a PL function (the function that the flow
// descends).

struct VertexClass {
  bool critical = false;
  bool boundary = false;
  // interior: 0 min, 1 saddle, 2 max (index w.r.t. the descended function);
  // boundary criticals: index of the restriction to the rim (0 rim-min, 1 rim-max)
  int index = -1;
  // for boundary criticals: sign of the outward derivative of the descended
  // function (+1: increases outward)
  int outward_sign = 0;
};

std::vector<VertexClass> classify_vertices(const mesh::Surface& s, const std::vector<Rat>& phi);

// dim W^s under the descending flow (boundary criticals per the sliding
// model: rim-min of phi attracts a 2-disc, rim-max carries a 1-dim stable
// curve).
int stable_dim(const VertexClass& c);

// ---------------------------------------------------------------------------

struct FlowField {
  const mesh::Surface* surf = nullptr;
  std::vector<Rat> phi;      // vertex values of the descended function
  std::vector<Vec2> vec;     // per-triangle field, strictly descending phi
  std::vector<Rat> tilt;     // per-triangle kappa (diagnostic)
  std::vector<VertexClass> cls;

  const Vec2& at(int tri) const { return vec[static_cast<size_t>(tri)]; }
  // > 0 iff the flow crosses edge k of t into t
  int inflow_sign(int t, int k) const;
};

// Builds the field X_t = (I + kappa_t J)(-grad phi_t) and repairs kappa until
// every interior edge is strictly transversal and boundary edges keep the raw
// gradient's normal sign. Throws DegenerateConfiguration when the repair or a
// classification sanity check fails.
FlowField build_field(const mesh::Surface& s, const std::vector<Rat>& phi);

// ---------------------------------------------------------------------------
// Tracing.

struct PointOnTri {
  int tri = -1;
  Vec2 p;
};

struct TraceSeg {
  int tri = -1;   // -1 for rim sliding segments
  Vec2 a, b;      // chart coordinates (of `tri`, or of rim_tri for slides)
  int rim_tri = -1;   // for slides: a triangle adjacent to the rim edge
  int rim_from = -1, rim_to = -1;  // rim vertices (slide direction a->b)
};

struct Trace {
  std::vector<TraceSeg> segs;
  int terminal_vertex = -1;  // critical vertex reached
  bool spiraled = false;
};

class Tracer {
 public:
  explicit Tracer(const FlowField& f) : f_(&f) {}

  // Forward (descending) orbit from p; backward = ascending. The point must
  // not be a critical vertex (those are stationary).
  Trace trace(PointOnTri start, bool backward, bool record = true) const;

  // Orbit from a vertex along the germ in star sector (tri); the sector must
  // contain the corresponding ray.
  Trace trace_from_vertex(int vertex, int tri, bool backward, bool record = true) const;

  // Germ sectors at a vertex: triangles t in star(v) whose sector strictly
  // contains v -+ s X_t (stable: forward entry; unstable: backward entry).
  std::vector<int> stable_germs(int v) const;
  std::vector<int> unstable_germs(int v) const;

 private:
  Trace run(int tri, Vec2 p, bool backward, bool record) const;
  const FlowField* f_;
};

// ---------------------------------------------------------------------------
// Seeded perturbation of the descended function. perturb(phi, seed, 0) is the
// identity; the result keeps the critical vertex set and the classification
// (checked; epsilon halved on failure, bounded retries).
std::vector<Rat> perturb(const mesh::Surface& s, const std::vector<Rat>& phi, std::uint64_t seed,
                         int j, const Rat& epsilon = Rat(0));

}  // namespace ma::flow
