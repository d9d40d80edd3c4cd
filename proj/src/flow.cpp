#include "ma/flow.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ma::flow {

namespace {

Vec2 tri_gradient(const mesh::Tri& t, const std::vector<Rat>& phi) {
  const Vec2& p0 = t.pos[0];
  const Vec2 a = t.pos[1] - p0, b = t.pos[2] - p0;
  const Rat det = cross(a, b);
  const Rat d1 = phi[static_cast<size_t>(t.v[1])] - phi[static_cast<size_t>(t.v[0])];
  const Rat d2 = phi[static_cast<size_t>(t.v[2])] - phi[static_cast<size_t>(t.v[0])];
  return {(d1 * b.y - d2 * a.y) / det, (a.x * d2 - b.x * d1) / det};
}

Vec2 edge_inward_normal(const mesh::Tri& t, int k) {
  return rot90(t.pos[static_cast<size_t>((k + 1) % 3)] - t.pos[static_cast<size_t>(k)]);
}

}  // namespace

std::vector<VertexClass> classify_vertices(const mesh::Surface& s, const std::vector<Rat>& phi) {
  if (phi.size() != static_cast<size_t>(s.nv)) fail(Err::DimensionMismatch, "phi size != vertex count");
  std::vector<VertexClass> out(static_cast<size_t>(s.nv));
  for (int v = 0; v < s.nv; ++v) {
    VertexClass c;
    c.boundary = s.vertex_on_boundary[static_cast<size_t>(v)];
    auto lk = s.link(v);
    std::vector<int> sg;
    for (int w : lk) {
      const Rat d = phi[static_cast<size_t>(w)] - phi[static_cast<size_t>(v)];
      if (d == 0) fail(Err::DegenerateConfiguration, "equal adjacent values at vertex " + std::to_string(v));
      sg.push_back(d > 0 ? 1 : -1);
    }
    if (!c.boundary) {
      int changes = 0;
      for (size_t i = 0; i < sg.size(); ++i)
        if (sg[i] != sg[(i + 1) % sg.size()]) ++changes;
      if (changes == 0) {
        c.critical = true;
        c.index = sg[0] > 0 ? 0 : 2;
      } else if (changes == 2) {
        c.critical = false;
      } else if (changes == 4) {
        c.critical = true;
        c.index = 1;
      } else {
        fail(Err::DegenerateConfiguration, "multi-saddle at vertex " + std::to_string(v));
      }
    } else {
      // rim restriction: the first and last link vertices are the rim
      // neighbors
      int s0 = sg.front(), s1 = sg.back();
      if (s0 > 0 && s1 > 0) {
        c.critical = true;
        c.index = 0;  // rim minimum of phi_boundary
      } else if (s0 < 0 && s1 < 0) {
        c.critical = true;
        c.index = 1;  // rim maximum
      } else {
        c.critical = false;
      }
      if (c.critical) {
        // outward derivative sign of phi, from the rim-adjacent triangle
        // gradients; both rim sides must agree
        const auto& st = s.stars[static_cast<size_t>(v)];
        const auto& first = st.front();
        const auto& last = st.back();
        const mesh::Tri& tf = s.tris[static_cast<size_t>(first.tri)];
        const mesh::Tri& tl = s.tris[static_cast<size_t>(last.tri)];
        // in the first sector the rim edge is (corner, corner+1); in the last
        // it is (corner+2, corner)
        Vec2 nf = edge_inward_normal(tf, first.corner);
        Vec2 nl = edge_inward_normal(tl, (last.corner + 2) % 3);
        int sf = sgn(dot(tri_gradient(tf, phi), -nf));
        int sl = sgn(dot(tri_gradient(tl, phi), -nl));
        if (sf == 0 || sl == 0 || sf != sl)
          fail(Err::DegenerateConfiguration, "ambiguous outward derivative at rim vertex " + std::to_string(v));
        c.outward_sign = sf;
      }
    }
    out[static_cast<size_t>(v)] = c;
  }
  return out;
}

int stable_dim(const VertexClass& c) {
  if (!c.critical) fail(Err::PreconditionFailed, "stable_dim of a regular vertex");
  if (!c.boundary) return 2 - c.index;
  // sliding model: on an outflow rim (phi decreasing outward) a rim minimum
  // attracts a 2-disc and a rim maximum carries a 1-dim stable curve; on an
  // inflow rim the stable sets are 0/1-dimensional.
  if (c.outward_sign < 0) return c.index == 0 ? 2 : 1;
  return c.index == 0 ? 1 : 0;
}

int FlowField::inflow_sign(int t, int k) const {
  const mesh::Tri& tri = surf->tris[static_cast<size_t>(t)];
  return sgn(dot(vec[static_cast<size_t>(t)], edge_inward_normal(tri, k)));
}

FlowField build_field(const mesh::Surface& s, const std::vector<Rat>& phi) {
  FlowField f;
  f.surf = &s;
  f.phi = phi;
  f.cls = classify_vertices(s, phi);
  const size_t nt = s.tris.size();
  std::vector<Vec2> base(nt), jbase(nt);
  for (size_t t = 0; t < nt; ++t) {
    Vec2 g = tri_gradient(s.tris[t], phi);
    if (g.is_zero()) fail(Err::DegenerateConfiguration, "flat triangle " + std::to_string(t));
    base[t] = -g;
    jbase[t] = rot90(base[t]);
  }
  f.tilt.assign(nt, Rat(0));

  auto dval = [&](int t, int k) -> Rat {
    const mesh::Tri& tri = s.tris[static_cast<size_t>(t)];
    Vec2 n = edge_inward_normal(tri, k);
    return dot(base[static_cast<size_t>(t)], n) + f.tilt[static_cast<size_t>(t)] * dot(jbase[static_cast<size_t>(t)], n);
  };
  // required sign on boundary edges: the raw gradient's
  std::map<std::pair<int, int>, int> rim_sign;
  for (size_t t = 0; t < nt; ++t)
    for (int k = 0; k < 3; ++k)
      if (s.tris[t].nbr[static_cast<size_t>(k)] < 0) {
        const mesh::Tri& tri = s.tris[t];
        int sg = sgn(dot(base[t], edge_inward_normal(tri, k)));
        if (sg == 0)
          fail(Err::DegenerateConfiguration, "gradient tangent to a boundary edge");
        rim_sign[{static_cast<int>(t), k}] = sg;
      }

  auto edge_bad = [&](int t, int k) -> bool {
    int tn = s.tris[static_cast<size_t>(t)].nbr[static_cast<size_t>(k)];
    if (tn < 0) {
      int want = rim_sign[{t, k}];
      int got = sgn(dval(t, k));
      return got != want;
    }
    int kn = s.tris[static_cast<size_t>(t)].nbr_edge[static_cast<size_t>(k)];
    Rat d1 = dval(t, k), d2 = dval(tn, kn);
    return !(d1 * d2 < 0);
  };
  auto bad_edges = [&]() {
    std::vector<std::pair<int, int>> out;
    for (size_t t = 0; t < nt; ++t)
      for (int k = 0; k < 3; ++k) {
        int tn = s.tris[t].nbr[static_cast<size_t>(k)];
        if (tn >= 0 && (tn < static_cast<int>(t) ||
                        (tn == static_cast<int>(t) && false)))
          continue;  // visit each interior edge once (from the lower tri id)
        if (edge_bad(static_cast<int>(t), k)) out.push_back({static_cast<int>(t), k});
      }
    return out;
  };

  // Try to satisfy all three edges of triangle t against the current
  // neighbors by choosing kappa_t inside the intersection of the affine
  // feasibility intervals. Returns false when empty.
  auto fix_triangle = [&](int t) -> bool {
    bool has_lo = false, has_hi = false;
    Rat lo = 0, hi = 0;
    for (int k = 0; k < 3; ++k) {
      const mesh::Tri& tri = s.tris[static_cast<size_t>(t)];
      Vec2 n = edge_inward_normal(tri, k);
      Rat a = dot(base[static_cast<size_t>(t)], n);
      Rat b = dot(jbase[static_cast<size_t>(t)], n);
      int want;
      int tn = tri.nbr[static_cast<size_t>(k)];
      if (tn < 0) {
        want = rim_sign[{t, k}];
      } else {
        int kn = tri.nbr_edge[static_cast<size_t>(k)];
        Rat dn = dval(tn, kn);
        if (dn == 0) return false;
        want = dn > 0 ? -1 : 1;
      }
      // want * (a + kappa b) > 0
      if (b == 0) {
        if (sgn(a) != want) return false;
        continue;
      }
      Rat bound = -a / b;
      if ((want > 0) == (b > 0)) {
        if (!has_lo || bound > lo) { lo = bound; has_lo = true; }
      } else {
        if (!has_hi || bound < hi) { hi = bound; has_hi = true; }
      }
    }
    if (has_lo && has_hi && lo >= hi) return false;
    Rat pick;
    if ((!has_lo || lo < 0) && (!has_hi || hi > 0)) pick = 0;
    else if (!has_lo) pick = hi - 1;
    else if (!has_hi) pick = lo + 1;
    else pick = (lo + hi) / 2;
    f.tilt[static_cast<size_t>(t)] = pick;
    return true;
  };

  const int kMaxSweeps = 96;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    auto bad = bad_edges();
    if (bad.empty()) break;
    bool progress = false;
    for (auto [t, k] : bad) {
      if (!edge_bad(t, k)) continue;  // fixed earlier this sweep
      int tn = s.tris[static_cast<size_t>(t)].nbr[static_cast<size_t>(k)];
      // prefer adjusting the side with the weaker normal component
      int first = t, second = tn;
      if (tn >= 0) {
        int kn = s.tris[static_cast<size_t>(t)].nbr_edge[static_cast<size_t>(k)];
        Rat d1 = dval(t, k), d2 = dval(tn, kn);
        if (d2 * d2 < d1 * d1) std::swap(first, second);
      }
      if (fix_triangle(first)) progress = true;
      else if (second >= 0 && fix_triangle(second)) progress = true;
    }
    if (!progress) {
      // deterministic jiggle of the first stuck triangle
      auto [t, k] = bad.front();
      f.tilt[static_cast<size_t>(t)] += seeded_unit(0xF1E1D0ULL, static_cast<std::uint64_t>(sweep),
                                                    static_cast<std::uint64_t>(t), 8) * 4;
    }
    if (sweep == kMaxSweeps - 1 && !bad_edges().empty())
      fail(Err::DegenerateConfiguration, "edge transversality repair did not converge");
  }

  f.vec.resize(nt);
  for (size_t t = 0; t < nt; ++t) f.vec[t] = base[t] + jbase[t] * f.tilt[t];

  // sanity: strict descent (guaranteed by construction, checked anyway)
  for (size_t t = 0; t < nt; ++t)
    if (!(dot(f.vec[t], tri_gradient(s.tris[t], phi)) < 0))
      fail(Err::Internal, "field does not descend phi");

  // structural validation at critical vertices
  Tracer tracer(f);
  for (int v = 0; v < s.nv; ++v) {
    const VertexClass& c = f.cls[static_cast<size_t>(v)];
    if (!c.critical) continue;
    if (!c.boundary) {
      if (c.index == 1) {
        if (tracer.stable_germs(v).size() != 2 || tracer.unstable_germs(v).size() != 2)
          fail(Err::DegenerateConfiguration, "saddle without a clean 2+2 germ structure at " + std::to_string(v));
      }
    } else {
      auto lk = s.link(v);
      bool all_higher = true, all_lower = true;
      for (int w : lk) {
        if (phi[static_cast<size_t>(w)] < phi[static_cast<size_t>(v)]) all_higher = false;
        if (phi[static_cast<size_t>(w)] > phi[static_cast<size_t>(v)]) all_lower = false;
      }
      if (c.outward_sign < 0) {  // outflow rim
        if (c.index == 0 && !all_higher)
          fail(Err::DegenerateConfiguration, "outflow rim minimum is not attracting at " + std::to_string(v));
        if (c.index == 1 && tracer.stable_germs(v).size() != 1)
          fail(Err::DegenerateConfiguration, "outflow rim maximum needs one interior stable germ at " + std::to_string(v));
      } else {  // inflow rim
        if (c.index == 1 && !all_lower)
          fail(Err::DegenerateConfiguration, "inflow rim maximum is not backward-attracting at " + std::to_string(v));
        if (c.index == 0 && tracer.unstable_germs(v).size() != 1)
          fail(Err::DegenerateConfiguration, "inflow rim minimum needs one interior unstable germ at " + std::to_string(v));
      }
    }
  }
  return f;
}

// ---------------------------------------------------------------------------

namespace {

struct Exit {
  int kind = 0;  // 0 none, 1 edge, 2 vertex
  int edge = -1;
  int vertex_corner = -1;
  Vec2 point;
};

Exit ray_exit(const mesh::Tri& tri, const Vec2& p, const Vec2& dir) {
  Exit best;
  Rat best_s = 0;
  for (int k = 0; k < 3; ++k) {
    const Vec2& a = tri.pos[static_cast<size_t>(k)];
    const Vec2& b = tri.pos[static_cast<size_t>((k + 1) % 3)];
    const Vec2 e = b - a;
    const Rat den = cross(dir, e);
    if (den == 0) continue;
    const Vec2 ap = a - p;
    const Rat ss = cross(ap, e) / den;
    if (!(ss > 0)) continue;
    const Rat u = cross(ap, dir) / den;
    if (u < 0 || u > 1) continue;
    if (best.kind == 0 || ss < best_s) {
      best_s = ss;
      best.point = p + dir * ss;
      if (u == 0) {
        best.kind = 2;
        best.vertex_corner = k;
      } else if (u == 1) {
        best.kind = 2;
        best.vertex_corner = (k + 1) % 3;
      } else {
        best.kind = 1;
        best.edge = k;
      }
    }
  }
  return best;
}

}  // namespace

std::vector<int> Tracer::stable_germs(int v) const {
  std::vector<int> out;
  const mesh::Surface& s = *f_->surf;
  for (const auto& e : s.stars[static_cast<size_t>(v)]) {
    const mesh::Tri& t = s.tris[static_cast<size_t>(e.tri)];
    Vec2 d = -f_->at(e.tri);
    Vec2 e1 = t.pos[static_cast<size_t>((e.corner + 1) % 3)] - t.pos[static_cast<size_t>(e.corner)];
    Vec2 e2 = t.pos[static_cast<size_t>((e.corner + 2) % 3)] - t.pos[static_cast<size_t>(e.corner)];
    if (cross(e1, d) > 0 && cross(d, e2) > 0) out.push_back(e.tri);
  }
  return out;
}

std::vector<int> Tracer::unstable_germs(int v) const {
  std::vector<int> out;
  const mesh::Surface& s = *f_->surf;
  for (const auto& e : s.stars[static_cast<size_t>(v)]) {
    const mesh::Tri& t = s.tris[static_cast<size_t>(e.tri)];
    Vec2 d = f_->at(e.tri);
    Vec2 e1 = t.pos[static_cast<size_t>((e.corner + 1) % 3)] - t.pos[static_cast<size_t>(e.corner)];
    Vec2 e2 = t.pos[static_cast<size_t>((e.corner + 2) % 3)] - t.pos[static_cast<size_t>(e.corner)];
    if (cross(e1, d) > 0 && cross(d, e2) > 0) out.push_back(e.tri);
  }
  return out;
}

Trace Tracer::trace(PointOnTri start, bool backward, bool record) const {
  return run(start.tri, start.p, backward, record);
}

Trace Tracer::trace_from_vertex(int vertex, int tri, bool backward, bool record) const {
  const mesh::Surface& s = *f_->surf;
  int c = s.corner_of(tri, vertex);
  if (c < 0) fail(Err::Internal, "vertex not on the germ triangle");
  return run(tri, s.tris[static_cast<size_t>(tri)].pos[static_cast<size_t>(c)], backward, record);
}

Trace Tracer::run(int tri, Vec2 p, bool backward, bool record) const {
  const mesh::Surface& s = *f_->surf;
  Trace out;
  std::map<std::pair<int, int>, size_t> last_cross;
  std::vector<std::pair<int, int>> crossings;  // geometric edge endpoints (vertex ids)

  auto slide = [&](int t, int k, Vec2 at) {
    // slide along the rim; forward descends phi along the rim, backward
    // ascends.
    int a = s.tris[static_cast<size_t>(t)].v[static_cast<size_t>(k)];
    int b = s.tris[static_cast<size_t>(t)].v[static_cast<size_t>((k + 1) % 3)];
    Vec2 pa = s.tris[static_cast<size_t>(t)].pos[static_cast<size_t>(k)];
    Vec2 pb = s.tris[static_cast<size_t>(t)].pos[static_cast<size_t>((k + 1) % 3)];
    const int dirsign = backward ? 1 : -1;  // move toward higher phi when backward
    // choose the endpoint in the slide direction
    int to_v;
    Vec2 to_p;
    if (sgn(f_->phi[static_cast<size_t>(b)] - f_->phi[static_cast<size_t>(a)]) == dirsign) {
      to_v = b; to_p = pb;
    } else {
      to_v = a; to_p = pa;
    }
    if (record) out.segs.push_back({-1, at, to_p, t, to_v == b ? a : b, to_v});
    // walk the rim through regular vertices
    int guard = 4 * s.nv + 8;
    int cur = to_v;
    while (guard-- > 0) {
      const VertexClass& c = f_->cls[static_cast<size_t>(cur)];
      if (c.critical) {
        out.terminal_vertex = cur;
        return;
      }
      auto [r0, r1] = s.rim_neighbors(cur);
      int nxt = -1;
      for (int w : {r0, r1}) {
        if (sgn(f_->phi[static_cast<size_t>(w)] - f_->phi[static_cast<size_t>(cur)]) == dirsign) {
          if (nxt >= 0) fail(Err::DegenerateConfiguration, "ambiguous rim slide at vertex " + std::to_string(cur));
          nxt = w;
        }
      }
      if (nxt < 0) fail(Err::DegenerateConfiguration, "rim slide stuck at a regular rim vertex");
      if (record) {
        // rim edge between cur and nxt: locate an adjacent triangle for the chart
        const auto& st = s.stars[static_cast<size_t>(cur)];
        for (const auto& se : st) {
          const mesh::Tri& t2 = s.tris[static_cast<size_t>(se.tri)];
          for (int kk = 0; kk < 3; ++kk) {
            if (t2.nbr[static_cast<size_t>(kk)] >= 0) continue;
            int aa = t2.v[static_cast<size_t>(kk)], bb = t2.v[static_cast<size_t>((kk + 1) % 3)];
            if ((aa == cur && bb == nxt) || (aa == nxt && bb == cur)) {
              Vec2 qa = t2.pos[static_cast<size_t>(kk)], qb = t2.pos[static_cast<size_t>((kk + 1) % 3)];
              if (aa != cur) std::swap(qa, qb);
              out.segs.push_back({-1, qa, qb, se.tri, cur, nxt});
            }
          }
        }
      }
      cur = nxt;
    }
    fail(Err::Internal, "rim slide did not terminate");
  };

  const long kStepCap = 2000000;
  for (long step = 0; step < kStepCap; ++step) {
    const mesh::Tri& t = s.tris[static_cast<size_t>(tri)];
    Vec2 dir = backward ? -f_->at(tri) : f_->at(tri);
    Exit ex = ray_exit(t, p, dir);
    if (ex.kind == 0) fail(Err::Internal, "orbit failed to exit a triangle");
    if (record) out.segs.push_back({tri, p, ex.point, -1, -1, -1});
    if (ex.kind == 2) {
      int v = t.v[static_cast<size_t>(ex.vertex_corner)];
      if (f_->cls[static_cast<size_t>(v)].critical) {
        out.terminal_vertex = v;
        return out;
      }
      fail(Err::DegenerateConfiguration, "orbit hits non-critical vertex " + std::to_string(v));
    }
    int k = ex.edge;
    int tn = t.nbr[static_cast<size_t>(k)];
    if (tn < 0) {
      slide(tri, k, ex.point);
      return out;
    }
    // spiral detection on repeated geometric edges
    int a = t.v[static_cast<size_t>(k)], b = t.v[static_cast<size_t>((k + 1) % 3)];
    std::pair<int, int> ekey{std::min(a, b), std::max(a, b)};
    auto it = last_cross.find(ekey);
    if (it != last_cross.end()) {
      // all edges crossed since then must share a vertex with this edge
      std::set<int> common{ekey.first, ekey.second};
      for (size_t i = it->second + 1; i < crossings.size(); ++i) {
        std::set<int> next;
        if (common.count(crossings[i].first)) next.insert(crossings[i].first);
        if (common.count(crossings[i].second)) next.insert(crossings[i].second);
        common = next;
        if (common.empty()) break;
      }
      if (!common.empty()) {
        int center = *common.begin();
        if (common.size() == 2) {
          // both endpoints persist only if no other edge was crossed; pick
          // the one whose star contains the other crossing
          center = *common.begin();
        }
        if (f_->cls[static_cast<size_t>(center)].critical) {
          out.terminal_vertex = center;
          out.spiraled = true;
          return out;
        }
        fail(Err::DegenerateConfiguration, "orbit trapped around regular vertex " + std::to_string(center));
      }
    }
    crossings.push_back(ekey);
    last_cross[ekey] = crossings.size() - 1;
    p = ex.point + s.transition(tri, k);
    tri = tn;
  }
  fail(Err::Internal, "orbit exceeded the step cap");
}

std::vector<Rat> perturb(const mesh::Surface& s, const std::vector<Rat>& phi, std::uint64_t seed,
                         int j, const Rat& epsilon) {
  if (j == 0) return phi;
  auto base_cls = classify_vertices(s, phi);
  Rat gap;
  bool first = true;
  for (const auto& t : s.tris)
    for (int k = 0; k < 3; ++k) {
      Rat d = phi[static_cast<size_t>(t.v[static_cast<size_t>(k)])] -
              phi[static_cast<size_t>(t.v[static_cast<size_t>((k + 1) % 3)])];
      if (d < 0) d = -d;
      if (first || d < gap) { gap = d; first = false; }
    }
  Rat eps = epsilon > 0 ? epsilon : gap / 8;
  const int kRetries = 12;
  for (int attempt = 0; attempt < kRetries; ++attempt) {
    std::vector<Rat> out(phi);
    for (int v = 0; v < s.nv; ++v)
      out[static_cast<size_t>(v)] +=
          eps * seeded_unit(seed, static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(v));
    bool ok = true;
    try {
      auto cls = classify_vertices(s, out);
      for (int v = 0; v < s.nv && ok; ++v) {
        const auto& a = base_cls[static_cast<size_t>(v)];
        const auto& b = cls[static_cast<size_t>(v)];
        if (a.critical != b.critical || a.index != b.index || a.outward_sign != b.outward_sign) ok = false;
      }
    } catch (const Error&) {
      ok = false;
    }
    if (ok) return out;
    eps /= 2;
  }
  fail(Err::PerturbationFailed, "perturbation kept breaking the classification");
}

}  // namespace ma::flow
