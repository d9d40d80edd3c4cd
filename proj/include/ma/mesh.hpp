#pragma once

// Triangulated oriented surfaces with exact rational chart coordinates.
// Every triangle carries its own lifted corner positions; positions of a
// shared edge agree up to a per-adjacency translation, which makes flat tori
// and cylinders (lattice identifications) exact while keeping all per-triangle
// geometry in one global vector space. Tangent vectors are globally
// comparable.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ma/base.hpp"

namespace ma::mesh {

struct Tri {
  std::array<int, 3> v;      // vertex ids, counterclockwise
  std::array<Vec2, 3> pos;   // chart positions of the corners
  // neighbor across edge k = (corner k, corner k+1); -1 on the boundary
  std::array<int, 3> nbr{-1, -1, -1};
  std::array<int, 3> nbr_edge{-1, -1, -1};
};

struct Surface {
  int nv = 0;
  std::vector<Tri> tris;
  // lattice periods for periodic (torus/cylinder) meshes; used to express
  // per-triangle chart lifts as integer shifts in the JSON form
  std::optional<Vec2> periods;

  struct StarEntry {
    int tri = -1;
    int corner = -1;
  };
  // star of each vertex, counterclockwise; for boundary vertices a fan path
  // starting at the clockwise-most sector
  std::vector<std::vector<StarEntry>> stars;
  std::vector<bool> vertex_on_boundary;

  bool has_boundary() const;
  // neighbor vertex ids in counterclockwise link order (first = along the
  // first star sector edge)
  std::vector<int> link(int v) const;

  const Vec2& corner_pos(int t, int c) const { return tris[static_cast<size_t>(t)].pos[static_cast<size_t>(c)]; }
  int corner_of(int t, int v) const;  // corner index of vertex v in triangle t, -1 if absent
  // translation carrying chart of t to chart of its neighbor across edge k
  Vec2 transition(int t, int k) const;
  // for boundary vertices: the two rim neighbors (prev, next) in rim order
  std::pair<int, int> rim_neighbors(int v) const;

  // Build adjacency from shared vertex pairs (each unordered pair in at most
  // two triangles) and validate: coherent orientation, translation-compatible
  // charts, link of every interior vertex a cycle.
  static Surface build(int nv, std::vector<Tri> tris);
};

// Barycentric subdivision; function values on new vertices are the linear
// interpolation, so the PL geometry (and every flow) is unchanged.
struct Subdivided {
  Surface surface;
  std::vector<Rat> values;
};
Subdivided subdivide_barycentric(const Surface& s, const std::vector<Rat>& values);

Surface surface_from_json(const nlohmann::json& j);
nlohmann::ordered_json surface_to_json(const Surface& s, const std::vector<Rat>* values);

}  // namespace ma::mesh
