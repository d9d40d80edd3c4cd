#pragma once

// Geometric 0/1/2-dimensional sets on a Surface with integer weights and the
// exact primitives the fiber-product recursion needs: transversal crossings,
// clipping against region oracles, backward sweeps, membership counts.

#include <memory>
#include <vector>

#include "ma/base.hpp"
#include "ma/flow.hpp"

namespace ma::sets {

struct SPoint {
  int tri = -1;
  Vec2 p;
  int vertex = -1;  // >= 0 when the point is a mesh vertex
};

struct Seg {
  int tri = -1;  // chart triangle; rim slides use the adjacent triangle's chart
  Vec2 a, b;
  bool rim = false;
};

struct Polyline {
  std::vector<Seg> segs;
  int start_vertex = -1;  // critical vertex at the start, if any
  int end_vertex = -1;    // critical vertex at the end, if any
};

struct CurvePart {
  Polyline line;
  Int coeff;
};
struct Curve {
  std::vector<CurvePart> parts;
  bool empty() const {
    for (const auto& p : parts)
      if (p.coeff != 0 && !p.line.segs.empty()) return false;
    return true;
  }
};

struct WeightedPoint {
  SPoint pt;
  Int coeff;
};
struct Points {
  std::vector<WeightedPoint> pts;
};

Polyline polyline_from_trace(const flow::Trace& t, int start_vertex);

// exact point-on-open-segment / equality tests (same chart triangle)
bool same_point(const SPoint& a, const SPoint& b);
bool point_on_part(const SPoint& p, const Curve& c);

struct FieldData;  // defined in plflow.hpp

// region factor: iterated-fiber-product 2-dimensional sets, kept as oracles
struct RegionFactor {
  enum class Kind { Basin, Swept };
  Kind kind = Kind::Basin;
  int vertex = -1;                    // Basin: the attracting critical vertex
  const FieldData* fd = nullptr;      // the field the factor lives over
  std::shared_ptr<const Curve> gen;   // Swept: generating curve
  std::shared_ptr<const Curve> endpoint_orbits;  // Swept: backward orbits of free ends
};

struct Region {
  std::vector<RegionFactor> factors;
  Int coeff = 1;
};

// signed sheet count of `p` in the factor (Basin: 0/1 membership)
Int region_multiplicity(const RegionFactor& f, const SPoint& p);
Int region_multiplicity(const Region& r, const SPoint& p);

// transversal crossings with the fiber-product orientation (A first):
// each crossing contributes -sign(cross(dirA, dirB)) * coeffA * coeffB.
// Positive-codimension touches at shared critical vertices are skipped
// ("puncture rule"); any other exact touch raises DegenerateConfiguration.
Points intersect_curves(const Curve& a, const Curve& b);

// sub-curve of c inside the region (cut at the region's boundary curves,
// piecewise multiplicity from samples); coefficients multiply.
Curve clip_curve(const Curve& c, const Region& r);

// membership filter for weighted points
Points filter_points(const Points& p, const Region& r);

}  // namespace ma::sets
