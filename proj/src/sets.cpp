#include "ma/sets.hpp"

#include <algorithm>

#include "ma/plflow.hpp"

namespace ma::sets {

Polyline polyline_from_trace(const flow::Trace& t, int start_vertex) {
  Polyline out;
  out.start_vertex = start_vertex;
  for (const auto& s : t.segs) {
    Seg seg;
    if (s.tri >= 0) {
      seg.tri = s.tri;
      seg.a = s.a;
      seg.b = s.b;
    } else {
      seg.tri = s.rim_tri;
      seg.a = s.a;
      seg.b = s.b;
      seg.rim = true;
    }
    if (seg.a == seg.b) continue;
    out.segs.push_back(seg);
  }
  out.end_vertex = t.terminal_vertex;
  return out;
}

bool same_point(const SPoint& a, const SPoint& b) {
  if (a.vertex >= 0 || b.vertex >= 0) return a.vertex == b.vertex;
  return a.tri == b.tri && a.p == b.p;
}

namespace {

bool on_open_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  if (cross(b - a, p - a) != 0) return false;
  Rat primary = (b.x != a.x) ? (p.x - a.x) / (b.x - a.x) : (p.y - a.y) / (b.y - a.y);
  return primary > 0 && primary < 1;
}

}  // namespace

bool point_on_part(const SPoint& p, const Curve& c) {
  for (const auto& part : c.parts)
    for (const auto& s : part.line.segs) {
      if (s.tri != p.tri) continue;
      if (p.p == s.a || p.p == s.b) return true;
      if (on_open_segment(p.p, s.a, s.b)) return true;
    }
  return false;
}

Int region_multiplicity(const RegionFactor& f, const SPoint& p) {
  const flow::FlowField& field = f.fd->f();
  flow::Tracer tracer(field);
  if (f.kind == RegionFactor::Kind::Basin) {
    if (p.vertex >= 0) return p.vertex == f.vertex ? 1 : 0;
    flow::Trace tr = tracer.trace({p.tri, p.p}, /*backward=*/false, /*record=*/false);
    const auto& cls = field.cls[static_cast<size_t>(tr.terminal_vertex)];
    if (flow::stable_dim(cls) == 1)
      fail(Err::DegenerateConfiguration, "membership sample lies on a separatrix");
    return tr.terminal_vertex == f.vertex ? 1 : 0;
  }
  // Swept: signed crossings of the forward orbit against the generating curve
  if (p.vertex >= 0) {
    // orbit of a critical vertex is stationary; a generator through it would
    // have been rejected earlier
    return 0;
  }
  flow::Trace tr = tracer.trace({p.tri, p.p}, /*backward=*/false, /*record=*/true);
  Int total = 0;
  for (const auto& ts : tr.segs) {
    if (ts.tri < 0) continue;  // rim slides never meet interior generators
    for (const auto& part : f.gen->parts) {
      for (const auto& gs : part.line.segs) {
        if (gs.tri != ts.tri || gs.rim) continue;
        const Vec2 d1 = ts.b - ts.a;
        const Vec2 d2 = gs.b - gs.a;
        const Rat den = cross(d1, d2);
        if (den == 0) {
          if (on_open_segment(gs.a, ts.a, ts.b) || on_open_segment(ts.a, gs.a, gs.b))
            fail(Err::DegenerateConfiguration, "orbit runs along a swept generator");
          continue;
        }
        const Vec2 w = gs.a - ts.a;
        const Rat t = cross(w, d2) / den;
        const Rat u = cross(w, d1) / den;
        if (t <= 0 || t >= 1 || u < 0 || u > 1) {
          // endpoint of the orbit segment exactly on the generator, or miss
          if (t > 0 && t < 1 && (u == 0 || u == 1))
            fail(Err::DegenerateConfiguration, "orbit crosses a generator joint");
          continue;
        }
        if (u == 0 || u == 1)
          fail(Err::DegenerateConfiguration, "orbit crosses a generator joint");
        // crossing sign: sheet orientation sign det(-X, gen direction)
        SPoint q{ts.tri, ts.a + d1 * t, -1};
        const Vec2 x = field.at(ts.tri);
        int sheet = sgn(cross(-x, d2));
        if (sheet == 0) fail(Err::DegenerateConfiguration, "generator tangent to the flow");
        total += part.coeff * sheet;
        (void)q;
      }
    }
  }
  return total;
}

Int region_multiplicity(const Region& r, const SPoint& p) {
  Int total = r.coeff;
  for (const auto& f : r.factors) {
    if (total == 0) return 0;
    total *= region_multiplicity(f, p);
  }
  return total;
}

namespace {

// Is the exact touch point a shared critical vertex of both curves' world?
// (Both polylines start/end at critical vertices; any touch at such a vertex
// is excluded by the puncture rule.)
bool touch_at_critical_vertex(const Polyline& pl, bool at_start, const Seg& s, const Vec2& q) {
  if (at_start) {
    return pl.start_vertex >= 0 && !pl.segs.empty() && pl.segs.front().a == q && &pl.segs.front() == &s;
  }
  return pl.end_vertex >= 0 && !pl.segs.empty() && pl.segs.back().b == q && &pl.segs.back() == &s;
}

}  // namespace

Points intersect_curves(const Curve& a, const Curve& b) {
  Points out;
  for (const auto& pa : a.parts) {
    for (const auto& pb : b.parts) {
      for (const auto& sa : pa.line.segs) {
        for (const auto& sb : pb.line.segs) {
          if (sa.tri != sb.tri) continue;
          if (sa.rim || sb.rim) {
            // interior curves cannot cross rim arcs transversally; exact
            // overlap would be degenerate
            if (sa.rim && sb.rim && (on_open_segment(sa.a, sb.a, sb.b) || on_open_segment(sb.a, sa.a, sa.b) || sa.a == sb.a || sa.b == sb.b))
              fail(Err::DegenerateConfiguration, "overlapping rim arcs");
            continue;
          }
          const Vec2 d1 = sa.b - sa.a;
          const Vec2 d2 = sb.b - sb.a;
          const Rat den = cross(d1, d2);
          const Vec2 w = sb.a - sa.a;
          if (den == 0) {
            if (cross(d1, w) == 0 &&
                (on_open_segment(sb.a, sa.a, sa.b) || on_open_segment(sb.b, sa.a, sa.b) ||
                 on_open_segment(sa.a, sb.a, sb.b) || (sa.a == sb.a && sa.b == sb.b) ||
                 (sa.a == sb.b && sa.b == sb.a)))
              fail(Err::DegenerateConfiguration, "collinear overlapping curve segments");
            continue;
          }
          const Rat t = cross(w, d2) / den;
          const Rat u = cross(w, d1) / den;
          if (t < 0 || t > 1 || u < 0 || u > 1) continue;
          const bool t_end = (t == 0 || t == 1);
          const bool u_end = (u == 0 || u == 1);
          if (t_end || u_end) {
            const Vec2 q = sa.a + d1 * t;
            // touches at a shared critical vertex are punctured away;
            // everything else is a non-transverse incidence
            bool punctured = false;
            if (t == 0 && touch_at_critical_vertex(pa.line, true, sa, q)) punctured = true;
            if (t == 1 && touch_at_critical_vertex(pa.line, false, sa, q)) punctured = true;
            if (u == 0 && touch_at_critical_vertex(pb.line, true, sb, q)) punctured = true;
            if (u == 1 && touch_at_critical_vertex(pb.line, false, sb, q)) punctured = true;
            if (punctured) continue;
            fail(Err::DegenerateConfiguration, "curves touch at a segment endpoint");
          }
          Int coeff = pa.coeff * pb.coeff * Int(-sgn(den));
          out.pts.push_back({{sa.tri, sa.a + d1 * t, -1}, coeff});
        }
      }
    }
  }
  return out;
}

namespace {

struct CutPos {
  size_t seg;
  Rat t;
  bool operator<(const CutPos& o) const { return seg != o.seg ? seg < o.seg : t < o.t; }
  bool operator==(const CutPos& o) const { return seg == o.seg && t == o.t; }
};

std::vector<CutPos> curve_cuts(const Polyline& pl, const Curve& cuts) {
  std::vector<CutPos> out;
  for (size_t i = 0; i < pl.segs.size(); ++i) {
    const Seg& sa = pl.segs[i];
    if (sa.rim) continue;
    const Vec2 d1 = sa.b - sa.a;
    for (const auto& pc : cuts.parts) {
      for (const auto& sb : pc.line.segs) {
        if (sb.tri != sa.tri || sb.rim) continue;
        const Vec2 d2 = sb.b - sb.a;
        const Rat den = cross(d1, d2);
        const Vec2 w = sb.a - sa.a;
        if (den == 0) {
          if (cross(d1, w) == 0 &&
              (on_open_segment(sb.a, sa.a, sa.b) || on_open_segment(sa.a, sb.a, sb.b)))
            fail(Err::DegenerateConfiguration, "curve runs along a cut locus");
          continue;
        }
        const Rat t = cross(w, d2) / den;
        const Rat u = cross(w, d1) / den;
        if (t <= 0 || t >= 1 || u < 0 || u > 1) continue;
        out.push_back({i, t});
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

Curve clip_curve(const Curve& c, const Region& r) {
  // cut loci: every factor's boundary curves
  Curve cuts;
  for (const auto& f : r.factors) {
    for (const auto& p : f.fd->cut_locus.parts) cuts.parts.push_back(p);
    if (f.kind == RegionFactor::Kind::Swept) {
      for (const auto& p : f.gen->parts) cuts.parts.push_back(p);
      if (f.endpoint_orbits)
        for (const auto& p : f.endpoint_orbits->parts) cuts.parts.push_back(p);
    }
  }
  Curve out;
  for (const auto& part : c.parts) {
    const Polyline& pl = part.line;
    auto cutpos = curve_cuts(pl, cuts);
    // piece boundaries: start, cuts..., end
    struct Piece {
      CutPos from, to;
    };
    std::vector<Piece> pieces;
    CutPos cur{0, Rat(0)};
    for (const auto& cp : cutpos) {
      pieces.push_back({cur, cp});
      cur = cp;
    }
    pieces.push_back({cur, {pl.segs.size() - 1, Rat(1)}});
    for (const auto& piece : pieces) {
      // sample strictly inside the piece: middle of its first partial segment
      Rat t0 = piece.from.t, t1 = (piece.from.seg == piece.to.seg) ? piece.to.t : Rat(1);
      size_t si = piece.from.seg;
      if (t0 == t1) continue;  // empty piece
      const Seg& s = pl.segs[si];
      if (s.rim) continue;  // rim pieces cannot lie inside interior regions
      Rat tm = (t0 + t1) / 2;
      SPoint sample{s.tri, s.a + (s.b - s.a) * tm, -1};
      Int mult = region_multiplicity(r, sample);
      if (mult == 0) continue;
      // assemble the sub-polyline
      Polyline sub;
      sub.start_vertex = (piece.from.seg == 0 && piece.from.t == 0) ? pl.start_vertex : -1;
      sub.end_vertex =
          (piece.to.seg == pl.segs.size() - 1 && piece.to.t == 1) ? pl.end_vertex : -1;
      for (size_t i = piece.from.seg; i <= piece.to.seg; ++i) {
        Seg seg = pl.segs[i];
        if (i == piece.from.seg) seg.a = seg.a + (seg.b - seg.a) * piece.from.t;
        if (i == piece.to.seg) {
          const Seg& orig = pl.segs[i];
          seg.b = orig.a + (orig.b - orig.a) * piece.to.t;
        }
        if (seg.a == seg.b) continue;
        sub.segs.push_back(seg);
      }
      if (sub.segs.empty()) continue;
      out.parts.push_back({sub, part.coeff * mult});
    }
  }
  return out;
}

Points filter_points(const Points& p, const Region& r) {
  Points out;
  for (const auto& wp : p.pts) {
    Int mult = region_multiplicity(r, wp.pt);
    if (mult == 0) continue;
    out.pts.push_back({wp.pt, wp.coeff * mult});
  }
  return out;
}

}  // namespace ma::sets
