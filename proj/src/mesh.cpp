#include "ma/mesh.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

namespace ma::mesh {

bool Surface::has_boundary() const {
  for (const auto& t : tris)
    for (int k = 0; k < 3; ++k)
      if (t.nbr[static_cast<size_t>(k)] < 0) return true;
  return false;
}

int Surface::corner_of(int t, int v) const {
  for (int c = 0; c < 3; ++c)
    if (tris[static_cast<size_t>(t)].v[static_cast<size_t>(c)] == v) return c;
  return -1;
}

Vec2 Surface::transition(int t, int k) const {
  const Tri& a = tris[static_cast<size_t>(t)];
  int tn = a.nbr[static_cast<size_t>(k)];
  int kn = a.nbr_edge[static_cast<size_t>(k)];
  const Tri& b = tris[static_cast<size_t>(tn)];
  // shared edge: in t it is (corner k -> k+1); in the neighbor (kn -> kn+1)
  // runs the opposite way, so corner kn of the neighbor matches corner k+1.
  return b.pos[static_cast<size_t>(kn)] - a.pos[static_cast<size_t>((k + 1) % 3)];
}

std::vector<int> Surface::link(int v) const {
  std::vector<int> out;
  const auto& st = stars[static_cast<size_t>(v)];
  if (st.empty()) return out;
  for (const auto& e : st) {
    const Tri& t = tris[static_cast<size_t>(e.tri)];
    out.push_back(t.v[static_cast<size_t>((e.corner + 1) % 3)]);
  }
  // close with the trailing vertex of the last sector (for boundary fans this
  // adds the final rim neighbor; for interior stars it would repeat the first)
  const auto& last = st.back();
  const Tri& t = tris[static_cast<size_t>(last.tri)];
  int tail = t.v[static_cast<size_t>((last.corner + 2) % 3)];
  if (vertex_on_boundary[static_cast<size_t>(v)]) {
    out.push_back(tail);
  }
  return out;
}

std::pair<int, int> Surface::rim_neighbors(int v) const {
  if (!vertex_on_boundary[static_cast<size_t>(v)]) fail(Err::Internal, "rim_neighbors on interior vertex");
  auto lk = link(v);
  return {lk.front(), lk.back()};
}

Surface Surface::build(int nv, std::vector<Tri> tris) {
  Surface s;
  s.nv = nv;
  s.tris = std::move(tris);

  // adjacency by shared unordered vertex pair
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> by_pair;
  for (size_t t = 0; t < s.tris.size(); ++t) {
    const auto& tri = s.tris[t];
    if (tri.v[0] == tri.v[1] || tri.v[1] == tri.v[2] || tri.v[0] == tri.v[2])
      fail(Err::ParseError, "degenerate triangle (repeated vertex)");
    if (cross(tri.pos[1] - tri.pos[0], tri.pos[2] - tri.pos[0]) <= 0)
      fail(Err::ParseError, "triangle not counterclockwise in its chart");
    for (int k = 0; k < 3; ++k) {
      int a = tri.v[static_cast<size_t>(k)], b = tri.v[static_cast<size_t>((k + 1) % 3)];
      by_pair[{std::min(a, b), std::max(a, b)}].push_back({static_cast<int>(t), k});
    }
  }
  for (auto& [pair, occ] : by_pair) {
    if (occ.size() > 2) fail(Err::ParseError, "edge in more than two triangles");
    if (occ.size() == 2) {
      auto [t1, k1] = occ[0];
      auto [t2, k2] = occ[1];
      auto& a = s.tris[static_cast<size_t>(t1)];
      auto& b = s.tris[static_cast<size_t>(t2)];
      // coherent orientation: the shared edge must run oppositely
      if (a.v[static_cast<size_t>(k1)] != b.v[static_cast<size_t>((k2 + 1) % 3)] ||
          a.v[static_cast<size_t>((k1 + 1) % 3)] != b.v[static_cast<size_t>(k2)])
        fail(Err::ParseError, "incoherent orientation across an edge");
      a.nbr[static_cast<size_t>(k1)] = t2;
      a.nbr_edge[static_cast<size_t>(k1)] = k2;
      b.nbr[static_cast<size_t>(k2)] = t1;
      b.nbr_edge[static_cast<size_t>(k2)] = k1;
      // translation compatibility
      Vec2 d1 = b.pos[static_cast<size_t>(k2)] - a.pos[static_cast<size_t>((k1 + 1) % 3)];
      Vec2 d2 = b.pos[static_cast<size_t>((k2 + 1) % 3)] - a.pos[static_cast<size_t>(k1)];
      if (!(d1 == d2)) fail(Err::ParseError, "charts not translation-compatible across an edge");
    }
  }

  // stars
  s.stars.assign(static_cast<size_t>(nv), {});
  s.vertex_on_boundary.assign(static_cast<size_t>(nv), false);
  std::vector<std::vector<StarEntry>> occ(static_cast<size_t>(nv));
  for (size_t t = 0; t < s.tris.size(); ++t)
    for (int c = 0; c < 3; ++c)
      occ[static_cast<size_t>(s.tris[t].v[static_cast<size_t>(c)])].push_back(
          {static_cast<int>(t), c});
  for (int v = 0; v < nv; ++v) {
    auto& sectors = occ[static_cast<size_t>(v)];
    if (sectors.empty()) fail(Err::ParseError, "isolated vertex " + std::to_string(v));
    // walk counterclockwise: next sector is across edge (corner+2)
    auto next_ccw = [&](StarEntry e) -> StarEntry {
      const Tri& t = s.tris[static_cast<size_t>(e.tri)];
      int k = (e.corner + 2) % 3;
      int tn = t.nbr[static_cast<size_t>(k)];
      if (tn < 0) return {-1, -1};
      int kn = t.nbr_edge[static_cast<size_t>(k)];
      // v sits at corner kn of the neighbor
      return {tn, kn};
    };
    auto prev_cw = [&](StarEntry e) -> StarEntry {
      const Tri& t = s.tris[static_cast<size_t>(e.tri)];
      int k = e.corner;
      int tn = t.nbr[static_cast<size_t>(k)];
      if (tn < 0) return {-1, -1};
      int kn = t.nbr_edge[static_cast<size_t>(k)];
      return {tn, (kn + 1) % 3};
    };
    // find the clockwise-most start (boundary) or any sector (interior)
    StarEntry start = sectors.front();
    bool boundary = false;
    {
      StarEntry e = start;
      for (size_t cnt = 0; cnt <= sectors.size(); ++cnt) {
        StarEntry p = prev_cw(e);
        if (p.tri < 0) {
          boundary = true;
          start = e;
          break;
        }
        e = p;
        if (e.tri == start.tri && e.corner == start.corner) break;  // full cycle
      }
    }
    std::vector<StarEntry> ordered;
    StarEntry e = start;
    for (size_t cnt = 0; cnt < sectors.size(); ++cnt) {
      ordered.push_back(e);
      StarEntry n = next_ccw(e);
      if (n.tri < 0) break;
      e = n;
    }
    if (ordered.size() != sectors.size())
      fail(Err::ParseError, "link of vertex " + std::to_string(v) + " is not a disc/fan");
    if (!boundary) {
      StarEntry n = next_ccw(ordered.back());
      if (n.tri != start.tri || n.corner != start.corner)
        fail(Err::ParseError, "link of vertex " + std::to_string(v) + " is not a single cycle");
    }
    s.stars[static_cast<size_t>(v)] = ordered;
    s.vertex_on_boundary[static_cast<size_t>(v)] = boundary;
  }
  return s;
}

Subdivided subdivide_barycentric(const Surface& s, const std::vector<Rat>& values) {
  // new vertices: one per edge (midpoint) and one per triangle (centroid)
  Subdivided out;
  std::vector<Rat> vals = values;
  int next = s.nv;
  std::map<std::pair<int, int>, int> edge_vertex;
  auto edge_id = [&](int t, int k) {
    const Tri& tri = s.tris[static_cast<size_t>(t)];
    int a = tri.v[static_cast<size_t>(k)], b = tri.v[static_cast<size_t>((k + 1) % 3)];
    auto key = std::make_pair(std::min(a, b), std::max(a, b));
    auto it = edge_vertex.find(key);
    if (it != edge_vertex.end()) return it->second;
    int id = next++;
    edge_vertex[key] = id;
    vals.push_back((values[static_cast<size_t>(a)] + values[static_cast<size_t>(b)]) / 2);
    return id;
  };
  std::vector<Tri> tris;
  for (size_t t = 0; t < s.tris.size(); ++t) {
    const Tri& tri = s.tris[t];
    int m01 = edge_id(static_cast<int>(t), 0);
    int m12 = edge_id(static_cast<int>(t), 1);
    int m20 = edge_id(static_cast<int>(t), 2);
    int c = next++;
    vals.push_back((values[static_cast<size_t>(tri.v[0])] + values[static_cast<size_t>(tri.v[1])] +
                    values[static_cast<size_t>(tri.v[2])]) /
                   3);
    Vec2 p01 = (tri.pos[0] + tri.pos[1]) * Rat(1, 2);
    Vec2 p12 = (tri.pos[1] + tri.pos[2]) * Rat(1, 2);
    Vec2 p20 = (tri.pos[2] + tri.pos[0]) * Rat(1, 2);
    Vec2 pc = (tri.pos[0] + tri.pos[1] + tri.pos[2]) * Rat(1, 3);
    auto add = [&](int a, int b, int cc, Vec2 pa, Vec2 pb, Vec2 pcc) {
      Tri nt;
      nt.v = {a, b, cc};
      nt.pos = {pa, pb, pcc};
      tris.push_back(nt);
    };
    add(tri.v[0], m01, c, tri.pos[0], p01, pc);
    add(m01, tri.v[1], c, p01, tri.pos[1], pc);
    add(tri.v[1], m12, c, tri.pos[1], p12, pc);
    add(m12, tri.v[2], c, p12, tri.pos[2], pc);
    add(tri.v[2], m20, c, tri.pos[2], p20, pc);
    add(m20, tri.v[0], c, p20, tri.pos[0], pc);
  }
  out.surface = Surface::build(next, std::move(tris));
  out.surface.periods = s.periods;
  out.values = std::move(vals);
  return out;
}

namespace {

// choose a base chart position per vertex (first star occurrence)
std::vector<Vec2> base_positions(const Surface& s) {
  std::vector<Vec2> out(static_cast<size_t>(s.nv));
  std::vector<bool> seen(static_cast<size_t>(s.nv), false);
  for (const auto& t : s.tris)
    for (int c = 0; c < 3; ++c) {
      int v = t.v[static_cast<size_t>(c)];
      if (!seen[static_cast<size_t>(v)]) {
        seen[static_cast<size_t>(v)] = true;
        out[static_cast<size_t>(v)] = t.pos[static_cast<size_t>(c)];
      }
    }
  return out;
}

}  // namespace

Surface surface_from_json(const nlohmann::json& j) {
  try {
    std::vector<Vec2> vp;
    std::map<long long, int> by_id;
    for (const auto& v : j.at("vertices")) {
      long long id = v.at("id").get<long long>();
      by_id[id] = static_cast<int>(vp.size());
      vp.push_back({rat_parse(v.at("x").is_string() ? v.at("x").get<std::string>()
                                                    : std::to_string(v.at("x").get<long long>())),
                    rat_parse(v.at("y").is_string() ? v.at("y").get<std::string>()
                                                    : std::to_string(v.at("y").get<long long>()))});
    }
    std::optional<Vec2> periods;
    if (j.contains("periods")) {
      const auto& p = j.at("periods");
      periods = Vec2{rat_parse(p.at(0).get<std::string>()), rat_parse(p.at(1).get<std::string>())};
    }
    std::vector<Tri> tris;
    const auto& jt = j.at("triangles");
    const nlohmann::json* shifts = j.contains("shifts") ? &j.at("shifts") : nullptr;
    for (size_t t = 0; t < jt.size(); ++t) {
      Tri tri;
      for (int c = 0; c < 3; ++c) {
        long long id = jt[t][static_cast<size_t>(c)].get<long long>();
        auto it = by_id.find(id);
        if (it == by_id.end()) fail(Err::ParseError, "triangle references unknown vertex");
        tri.v[static_cast<size_t>(c)] = it->second;
        Vec2 pos = vp[static_cast<size_t>(it->second)];
        if (shifts) {
          if (!periods) fail(Err::ParseError, "shifts need periods");
          long long sx = (*shifts)[t][static_cast<size_t>(c)][0].get<long long>();
          long long sy = (*shifts)[t][static_cast<size_t>(c)][1].get<long long>();
          pos.x += Rat(sx) * periods->x;
          pos.y += Rat(sy) * periods->y;
        }
        tri.pos[static_cast<size_t>(c)] = pos;
      }
      tris.push_back(tri);
    }
    Surface s = Surface::build(static_cast<int>(vp.size()), std::move(tris));
    s.periods = periods;
    return s;
  } catch (const nlohmann::json::exception& e) {
    fail(Err::ParseError, std::string("mesh json: ") + e.what());
  }
}

nlohmann::ordered_json surface_to_json(const Surface& s, const std::vector<Rat>* values) {
  nlohmann::ordered_json j;
  j["schema"] = "morse-ainfty/mesh/1";
  auto base = base_positions(s);
  auto verts = nlohmann::ordered_json::array();
  for (int v = 0; v < s.nv; ++v) {
    nlohmann::ordered_json e;
    e["id"] = v;
    e["x"] = rat_str(base[static_cast<size_t>(v)].x);
    e["y"] = rat_str(base[static_cast<size_t>(v)].y);
    if (values) e["value"] = rat_str((*values)[static_cast<size_t>(v)]);
    verts.push_back(e);
  }
  j["vertices"] = verts;
  auto tris = nlohmann::ordered_json::array();
  auto shifts = nlohmann::ordered_json::array();
  bool any_shift = false;
  for (const auto& t : s.tris) {
    tris.push_back({t.v[0], t.v[1], t.v[2]});
    auto srow = nlohmann::ordered_json::array();
    for (int c = 0; c < 3; ++c) {
      Vec2 diff = t.pos[static_cast<size_t>(c)] - base[static_cast<size_t>(t.v[static_cast<size_t>(c)])];
      long long sx = 0, sy = 0;
      if (!(diff.x == 0 && diff.y == 0)) {
        if (!s.periods) fail(Err::Internal, "non-trivial lift without periods");
        Rat qx = diff.x / s.periods->x;
        Rat qy = diff.y / s.periods->y;
        if (boost::multiprecision::denominator(qx) != 1 || boost::multiprecision::denominator(qy) != 1)
          fail(Err::Internal, "lift is not an integer multiple of the periods");
        sx = static_cast<long long>(boost::multiprecision::numerator(qx));
        sy = static_cast<long long>(boost::multiprecision::numerator(qy));
        any_shift = true;
      }
      srow.push_back({sx, sy});
    }
    shifts.push_back(srow);
  }
  j["triangles"] = tris;
  auto bd = nlohmann::ordered_json::array();
  for (const auto& t : s.tris)
    for (int k = 0; k < 3; ++k)
      if (t.nbr[static_cast<size_t>(k)] < 0)
        bd.push_back({t.v[static_cast<size_t>(k)], t.v[static_cast<size_t>((k + 1) % 3)]});
  j["boundary"] = bd;
  if (s.periods) j["periods"] = {rat_str(s.periods->x), rat_str(s.periods->y)};
  if (any_shift) j["shifts"] = shifts;
  return j;
}

}  // namespace ma::mesh
