#include "ma/plflow.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <future>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ma::plflow {

using flow::FlowField;
using flow::Tracer;
using flow::VertexClass;
using sets::CurvePart;
using sets::Polyline;
using sets::RegionFactor;
using sets::Seg;
using sets::SPoint;

namespace {

int unstable_dim(const VertexClass& c) { return 2 - flow::stable_dim(c); }

// canonical order on directions: upper half-plane first, then by angle
bool dir_less(const Vec2& a, const Vec2& b) {
  auto half = [](const Vec2& v) { return (v.y > 0 || (v.y == 0 && v.x > 0)) ? 0 : 1; };
  if (half(a) != half(b)) return half(a) < half(b);
  return cross(a, b) > 0;
}

Curve rim_arcs(const mesh::Surface& s, const FlowField& f, int v, int coeff_first);

}  // namespace

std::shared_ptr<FieldData> make_field_data(const mesh::Surface& s, const std::vector<Rat>& phi) {
  auto fd = std::make_shared<FieldData>();
  fd->field = flow::build_field(s, phi);
  Tracer tracer(fd->field);
  for (int v = 0; v < s.nv; ++v) {
    const VertexClass& c = fd->field.cls[static_cast<size_t>(v)];
    if (!c.critical) continue;
    const int sd = flow::stable_dim(c);
    const int ud = unstable_dim(c);

    if (sd == 1) {
      // 1-dimensional stable set: saddle separatrices or the interior stable
      // curve of an outflow rim maximum
      if (!c.boundary) {
        auto germs = tracer.stable_germs(v);
        if (germs.size() != 2) fail(Err::DegenerateConfiguration, "saddle germ count");
        Vec2 d0 = -fd->field.at(germs[0]);
        Vec2 d1 = -fd->field.at(germs[1]);
        if (!dir_less(d0, d1)) std::swap(germs[0], germs[1]);
        Curve cset;
        for (int b = 0; b < 2; ++b) {
          flow::Trace tr = tracer.trace_from_vertex(v, germs[static_cast<size_t>(b)], /*backward=*/true);
          const VertexClass& tc = fd->field.cls[static_cast<size_t>(tr.terminal_vertex)];
          if (flow::stable_dim(tc) != 0)
            fail(Err::DegenerateConfiguration,
                 "stable separatrix of " + std::to_string(v) + " breaks at " + std::to_string(tr.terminal_vertex));
          Polyline pl = sets::polyline_from_trace(tr, v);
          cset.parts.push_back({pl, Int(b == 0 ? -1 : 1)});
        }
        fd->stable[v] = cset;
      } else if (c.outward_sign < 0) {
        auto germs = tracer.stable_germs(v);
        if (germs.size() != 1) fail(Err::DegenerateConfiguration, "rim maximum stable germ count");
        flow::Trace tr = tracer.trace_from_vertex(v, germs[0], /*backward=*/true);
        const VertexClass& tc = fd->field.cls[static_cast<size_t>(tr.terminal_vertex)];
        if (flow::stable_dim(tc) != 0)
          fail(Err::DegenerateConfiguration, "rim stable curve breaks");
        Curve cset;
        cset.parts.push_back({sets::polyline_from_trace(tr, v), Int(-1)});
        fd->stable[v] = cset;
      }
      // inflow rim minima (cylinder outputs) need no stable curve
    }
    if (ud == 1) {
      if (!c.boundary) {
        auto germs = tracer.unstable_germs(v);
        if (germs.size() != 2) fail(Err::DegenerateConfiguration, "saddle unstable germ count");
        // orient: positive branch u* has det(stable_positive_dir, u*) > 0
        auto sgerms = tracer.stable_germs(v);
        Vec2 s0 = -fd->field.at(sgerms[0]);
        Vec2 s1 = -fd->field.at(sgerms[1]);
        Vec2 spos = dir_less(s0, s1) ? s1 : s0;  // exit direction of or(W^s)
        Vec2 u0 = fd->field.at(germs[0]);
        int pos_idx = cross(spos, u0) > 0 ? 0 : 1;
        Curve cset;
        for (int b = 0; b < 2; ++b) {
          flow::Trace tr = tracer.trace_from_vertex(v, germs[static_cast<size_t>(b)], /*backward=*/false);
          const VertexClass& tc = fd->field.cls[static_cast<size_t>(tr.terminal_vertex)];
          if (flow::stable_dim(tc) != 2)
            fail(Err::DegenerateConfiguration,
                 "unstable separatrix of " + std::to_string(v) + " breaks at " + std::to_string(tr.terminal_vertex));
          Polyline pl = sets::polyline_from_trace(tr, v);
          cset.parts.push_back({pl, Int(b == pos_idx ? 1 : -1)});
        }
        fd->unstable[v] = cset;
      } else if (c.outward_sign < 0) {
        // outflow rim maximum: unstable = the two rim arcs
        fd->unstable[v] = rim_arcs(s, fd->field, v, -1);
      } else {
        // inflow rim minimum: single interior unstable germ
        auto germs = tracer.unstable_germs(v);
        if (germs.size() != 1) fail(Err::DegenerateConfiguration, "inflow rim minimum germ count");
        flow::Trace tr = tracer.trace_from_vertex(v, germs[0], /*backward=*/false);
        const VertexClass& tc = fd->field.cls[static_cast<size_t>(tr.terminal_vertex)];
        if (flow::stable_dim(tc) != 2)
          fail(Err::DegenerateConfiguration, "inflow rim unstable curve breaks");
        Curve cset;
        cset.parts.push_back({sets::polyline_from_trace(tr, v), Int(1)});
        fd->unstable[v] = cset;
      }
    }
  }
  for (const auto& [v, c] : fd->stable)
    for (const auto& p : c.parts) fd->cut_locus.parts.push_back(p);
  return fd;
}

namespace {

Curve rim_arcs(const mesh::Surface& s, const FlowField& f, int v, int coeff_first) {
  // the two slide arcs leaving an outflow rim maximum, each walked until the
  // next rim critical vertex
  Curve out;
  auto [r0, r1] = s.rim_neighbors(v);
  int idx = 0;
  for (int first : {r0, r1}) {
    Polyline pl;
    pl.start_vertex = v;
    int prev = v, cur = first;
    int guard = 4 * s.nv + 8;
    while (guard-- > 0) {
      // chart segment on a rim-adjacent triangle
      bool placed = false;
      for (const auto& se : s.stars[static_cast<size_t>(prev)]) {
        const mesh::Tri& t = s.tris[static_cast<size_t>(se.tri)];
        for (int k = 0; k < 3 && !placed; ++k) {
          if (t.nbr[static_cast<size_t>(k)] >= 0) continue;
          int a = t.v[static_cast<size_t>(k)], b = t.v[static_cast<size_t>((k + 1) % 3)];
          if ((a == prev && b == cur) || (a == cur && b == prev)) {
            Vec2 pa = t.pos[static_cast<size_t>(k)], pb = t.pos[static_cast<size_t>((k + 1) % 3)];
            if (a != prev) std::swap(pa, pb);
            Seg seg;
            seg.tri = se.tri;
            seg.a = pa;
            seg.b = pb;
            seg.rim = true;
            pl.segs.push_back(seg);
            placed = true;
          }
        }
        if (placed) break;
      }
      if (!placed) fail(Err::Internal, "rim edge without a rim triangle");
      const VertexClass& c = f.cls[static_cast<size_t>(cur)];
      if (c.critical) {
        pl.end_vertex = cur;
        break;
      }
      auto [n0, n1] = s.rim_neighbors(cur);
      int nxt = (n0 == prev) ? n1 : n0;
      prev = cur;
      cur = nxt;
    }
    if (pl.end_vertex < 0) fail(Err::Internal, "rim arc did not terminate");
    out.parts.push_back({pl, Int(idx == 0 ? coeff_first : -coeff_first)});
    ++idx;
  }
  return out;
}

}  // namespace

std::string critical_name(const mesh::Surface& s, int vertex) {
  return (s.vertex_on_boundary[static_cast<size_t>(vertex)] ? "b" : "i") + std::to_string(vertex);
}

std::vector<morse::CriticalPoint> classify_critical_vertices(const mesh::Surface& s,
                                                             const std::vector<Rat>& f) {
  auto cls = flow::classify_vertices(s, f);
  std::vector<morse::CriticalPoint> out;
  for (int v = 0; v < s.nv; ++v) {
    const auto& c = cls[static_cast<size_t>(v)];
    if (!c.critical) continue;
    morse::CriticalPoint p;
    p.name = critical_name(s, v);
    p.index = c.index;
    if (c.boundary) {
      p.locus = morse::Locus::Boundary;
      p.flavor = c.outward_sign > 0 ? morse::Flavor::Dirichlet : morse::Flavor::Neumann;
    } else {
      p.locus = morse::Locus::Interior;
      p.flavor = morse::Flavor::None;
    }
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Recursion node sets.

namespace {

struct NodeSet {
  enum class Kind { Pts, Crv, Reg } kind = Kind::Pts;
  Points pts;
  Curve curve;
  Region region;
  int fiber = 0;
  int abstract_dim = 0;

  bool support_empty() const {
    switch (kind) {
      case Kind::Pts: {
        for (const auto& p : pts.pts)
          if (p.coeff != 0) return false;
        return true;
      }
      case Kind::Crv:
        return curve.empty();
      case Kind::Reg:
        return false;
    }
    return true;
  }
  int support_dim() const {
    return kind == Kind::Pts ? 0 : (kind == Kind::Crv ? 1 : 2);
  }
};

struct Engine {
  const mesh::Surface* s;
  const trees::FukayaTree* tree;
  const Decoration* dec;
  const std::vector<int>* entries;
  bool record = false;
  std::vector<TraceNode>* trace = nullptr;

  const FieldData& field_of_edge(int e) const {
    auto it = dec->edge_field.find(e);
    if (it == dec->edge_field.end()) fail(Err::Internal, "edge without decoration");
    return *dec->fields[static_cast<size_t>(it->second)];
  }

  int entry_of_leaf(int node) const {
    int li = tree->leaf_index(node);
    return (*entries)[static_cast<size_t>(li - 1)];
  }

  NodeSet leaf_set(int node) const {
    const FieldData& fd = field_of_edge(node);
    int x = entry_of_leaf(node);
    const VertexClass& c = fd.field.cls[static_cast<size_t>(x)];
    if (!c.critical) fail(Err::PreconditionFailed, "entry is not critical");
    NodeSet out;
    const int sd = flow::stable_dim(c);
    out.abstract_dim = sd;
    if (sd == 0) {
      out.kind = NodeSet::Kind::Pts;
      // the critical vertex as a point (chart of its first star sector)
      const auto& se = s->stars[static_cast<size_t>(x)].front();
      const mesh::Tri& t = s->tris[static_cast<size_t>(se.tri)];
      out.pts.pts.push_back({{se.tri, t.pos[static_cast<size_t>(se.corner)], x}, Int(1)});
    } else if (sd == 1) {
      out.kind = NodeSet::Kind::Crv;
      auto it = fd.stable.find(x);
      if (it == fd.stable.end()) fail(Err::Internal, "missing stable curve");
      out.curve = it->second;
    } else {
      out.kind = NodeSet::Kind::Reg;
      RegionFactor f;
      f.kind = RegionFactor::Kind::Basin;
      f.vertex = x;
      f.fd = &fd;
      out.region.factors.push_back(f);
      out.region.coeff = 1;
    }
    return out;
  }

  NodeSet sweep(NodeSet in, const FieldData& fd) const {
    NodeSet out;
    out.fiber = in.fiber;
    out.abstract_dim = in.abstract_dim + 1;
    switch (in.kind) {
      case NodeSet::Kind::Pts: {
        out.kind = NodeSet::Kind::Crv;
        Tracer tracer(fd.field);
        for (const auto& wp : in.pts.pts) {
          if (wp.coeff == 0) continue;
          if (wp.pt.vertex >= 0) {
            // zero of the decorating field on the intersection: excluded by
            // the puncture rule (the perturbed critical points separate)
            continue;
          }
          flow::Trace tr = tracer.trace({wp.pt.tri, wp.pt.p}, /*backward=*/true);
          const VertexClass& tc = fd.field.cls[static_cast<size_t>(tr.terminal_vertex)];
          if (flow::stable_dim(tc) != 0)
            fail(Err::DegenerateConfiguration, "sweep source lies on a separatrix");
          Polyline pl = sets::polyline_from_trace(tr, -1);
          out.curve.parts.push_back({pl, wp.coeff});
        }
        return out;
      }
      case NodeSet::Kind::Crv: {
        out.kind = NodeSet::Kind::Reg;
        RegionFactor f;
        f.kind = RegionFactor::Kind::Swept;
        f.fd = &fd;
        auto gen = std::make_shared<Curve>(in.curve);
        f.gen = gen;
        // backward orbits from free endpoints, as part of the cut locus
        auto eo = std::make_shared<Curve>();
        Tracer tracer(fd.field);
        for (const auto& part : gen->parts) {
          if (part.line.segs.empty()) continue;
          auto handle = [&](const Vec2& q, int tri, int vert) {
            if (vert >= 0) return;  // critical endpoint: no free boundary
            flow::Trace tr = tracer.trace({tri, q}, /*backward=*/true);
            eo->parts.push_back({sets::polyline_from_trace(tr, -1), Int(1)});
          };
          handle(part.line.segs.front().a, part.line.segs.front().tri, part.line.start_vertex);
          handle(part.line.segs.back().b, part.line.segs.back().tri, part.line.end_vertex);
        }
        f.endpoint_orbits = eo;
        out.region.factors.push_back(f);
        out.region.coeff = 1;
        return out;
      }
      case NodeSet::Kind::Reg: {
        out = in;
        out.fiber = in.fiber + 1;
        out.abstract_dim = in.abstract_dim + 1;
        return out;
      }
    }
    fail(Err::Internal, "unreachable");
  }

  NodeSet join(NodeSet a, NodeSet b) const {
    NodeSet out;
    out.fiber = a.fiber + b.fiber;
    out.abstract_dim = a.abstract_dim + b.abstract_dim - 2;
    using K = NodeSet::Kind;
    if (a.kind == K::Pts && b.kind == K::Pts) {
      out.kind = K::Pts;
      for (const auto& pa : a.pts.pts)
        for (const auto& pb : b.pts.pts) {
          if (sets::same_point(pa.pt, pb.pt)) {
            if (pa.pt.vertex >= 0) continue;  // puncture at the shared critical
            fail(Err::DegenerateConfiguration, "coincident intersection points");
          }
        }
      return out;  // generically empty
    }
    if ((a.kind == K::Pts && b.kind == K::Crv) || (a.kind == K::Crv && b.kind == K::Pts)) {
      out.kind = K::Pts;
      const Points& pp = a.kind == K::Pts ? a.pts : b.pts;
      const Curve& cc = a.kind == K::Crv ? a.curve : b.curve;
      for (const auto& wp : pp.pts) {
        if (wp.pt.vertex >= 0) continue;  // curve endpoints at shared criticals: punctured
        if (sets::point_on_part(wp.pt, cc))
          fail(Err::DegenerateConfiguration, "point lies exactly on a curve");
      }
      return out;  // generically empty
    }
    if (a.kind == K::Pts && b.kind == K::Reg) {
      out.kind = K::Pts;
      out.pts = sets::filter_points(a.pts, b.region);
      return out;
    }
    if (a.kind == K::Reg && b.kind == K::Pts) {
      out.kind = K::Pts;
      out.pts = sets::filter_points(b.pts, a.region);
      return out;
    }
    if (a.kind == K::Crv && b.kind == K::Crv) {
      out.kind = K::Pts;
      out.pts = sets::intersect_curves(a.curve, b.curve);
      return out;
    }
    if (a.kind == K::Crv && b.kind == K::Reg) {
      out.kind = K::Crv;
      out.curve = sets::clip_curve(a.curve, b.region);
      return out;
    }
    if (a.kind == K::Reg && b.kind == K::Crv) {
      out.kind = K::Crv;
      out.curve = sets::clip_curve(b.curve, a.region);
      return out;
    }
    // Reg x Reg
    out.kind = K::Reg;
    out.region.coeff = a.region.coeff * b.region.coeff;
    out.region.factors = a.region.factors;
    for (const auto& f : b.region.factors) out.region.factors.push_back(f);
    return out;
  }

  int subtree_delta(int node) const {
    // dimension formula for the subtree at `node`
    int d = 0, sum = 0;
    std::function<void(int)> rec = [&](int v) {
      if (tree->is_leaf(v)) {
        ++d;
        const FieldData& fd = field_of_edge(v);
        sum += flow::stable_dim(fd.field.cls[static_cast<size_t>(entry_of_leaf(v))]) - 2;
      } else {
        for (int c : tree->children(v)) rec(c);
      }
    };
    rec(node);
    return sum + d - 2 + 2;
  }

  void note(int node, const NodeSet& ns) const {
    if (!record || !trace) return;
    TraceNode tn;
    tn.node = node;
    tn.kind = ns.kind == NodeSet::Kind::Pts ? "points" : ns.kind == NodeSet::Kind::Crv ? "curve" : "region";
    tn.abstract_dim = ns.abstract_dim;
    tn.fiber_dim = ns.fiber;
    if (ns.kind == NodeSet::Kind::Pts)
      for (const auto& wp : ns.pts.pts) {
        std::ostringstream os;
        os << "tri " << wp.pt.tri << " (" << rat_str(wp.pt.p.x) << ", " << rat_str(wp.pt.p.y) << ")";
        tn.points.push_back({os.str(), wp.coeff.str()});
      }
    trace->push_back(tn);
  }

  NodeSet wset(int child) const {
    if (tree->is_leaf(child)) return leaf_set(child);
    NodeSet inner = eval(child);
    NodeSet swept = sweep(std::move(inner), field_of_edge(child));
    if (!swept.support_empty() && swept.fiber == 0 &&
        swept.support_dim() + swept.fiber != swept.abstract_dim && swept.support_dim() <= 2) {
      // support can only be smaller than the abstract dimension when fibers
      // appeared; larger is an internal error
      if (swept.support_dim() > swept.abstract_dim)
        fail(Err::DimensionMismatch, "sweep dimension bookkeeping");
    }
    return swept;
  }

  NodeSet eval(int node) const {
    if (tree->is_leaf(node)) fail(Err::Internal, "eval on a leaf");
    const auto& ch = tree->children(node);
    if (ch.size() != 2)
      fail(Err::PreconditionFailed, "multi-intersections are evaluated on generic trees only");
    NodeSet a = wset(ch[0]);
    NodeSet b = wset(ch[1]);
    NodeSet out = join(std::move(a), std::move(b));
    const int want = subtree_delta(node);
    if (out.abstract_dim != want) fail(Err::DimensionMismatch, "dimension formula violated");
    if (!out.support_empty() && out.fiber == 0 && out.support_dim() != out.abstract_dim) {
      if (out.support_dim() > out.abstract_dim)
        fail(Err::DimensionMismatch, "support exceeds abstract dimension");
    }
    note(node, out);
    return out;
  }
};

}  // namespace

MultiIntersectionResult multi_intersection(const mesh::Surface& s, const trees::FukayaTree& t,
                                           const Decoration& d, const std::vector<int>& entries,
                                           int output, bool record_trace) {
  MultiIntersectionResult res;
  res.tree = t;
  res.entries = entries;
  res.output = output;
  if (!t.is_generic()) fail(Err::PreconditionFailed, "multi_intersection needs a generic tree");
  if (static_cast<int>(entries.size()) != t.d()) fail(Err::InvalidArity, "entry count != leaves");

  const FieldData& fd0 = *d.fields[0];
  auto deg = [&](int v) {
    const VertexClass& c = fd0.field.cls[static_cast<size_t>(v)];
    if (!c.critical) fail(Err::PreconditionFailed, "non-critical vertex in entries/output");
    return 2 - flow::stable_dim(c);
  };
  long long total = 0;
  for (int x : entries) total += deg(x);
  const long long want_out = total + 2 - t.d();
  if (deg(output) != want_out) {
    res.count = 0;  // forced by the dimension filter
    return res;
  }

  Engine eng{&s, &t, &d, &entries, record_trace, &res.trace};
  NodeSet root = eng.eval(0);

  // evaluation against W^u(output) under the root field (index 0)
  const VertexClass& oc = fd0.field.cls[static_cast<size_t>(output)];
  const int ud = unstable_dim(oc);
  if (root.abstract_dim + ud - 2 != 0) fail(Err::DimensionMismatch, "evaluation dimension");

  Int count = 0;
  if (root.fiber > 0) {
    // positive-dimensional fibers: the evaluation is generically empty; any
    // exact incidence is degenerate
    if (!root.support_empty()) {
      if (root.kind == NodeSet::Kind::Pts && ud == 1) {
        auto it = fd0.unstable.find(output);
        if (it != fd0.unstable.end())
          for (const auto& wp : root.pts.pts)
            if (wp.pt.vertex < 0 && sets::point_on_part(wp.pt, it->second))
              fail(Err::DegenerateConfiguration, "slack set touches the unstable curve");
      }
    }
    res.count = 0;
    return res;
  }
  if (ud == 2) {
    // membership in the backward basin of the output
    if (root.kind != NodeSet::Kind::Pts) fail(Err::DimensionMismatch, "expected points at the root");
    Tracer tracer(fd0.field);
    for (const auto& wp : root.pts.pts) {
      if (wp.coeff == 0) continue;
      if (wp.pt.vertex >= 0) {
        if (wp.pt.vertex == output) count += wp.coeff;
        continue;
      }
      flow::Trace tr = tracer.trace({wp.pt.tri, wp.pt.p}, /*backward=*/true, /*record=*/false);
      const VertexClass& tc = fd0.field.cls[static_cast<size_t>(tr.terminal_vertex)];
      if (flow::stable_dim(tc) == 1)
        fail(Err::DegenerateConfiguration, "evaluation point on an unstable separatrix");
      if (tr.terminal_vertex == output) count += wp.coeff;
    }
  } else if (ud == 1) {
    if (root.kind != NodeSet::Kind::Crv) fail(Err::DimensionMismatch, "expected a curve at the root");
    auto it = fd0.unstable.find(output);
    if (it == fd0.unstable.end()) fail(Err::Internal, "missing unstable curve");
    Points hits = sets::intersect_curves(root.curve, it->second);
    for (const auto& wp : hits.pts) count += wp.coeff;
  } else {
    if (root.kind != NodeSet::Kind::Reg) fail(Err::DimensionMismatch, "expected a region at the root");
    const auto& se = s.stars[static_cast<size_t>(output)].front();
    const mesh::Tri& tt = s.tris[static_cast<size_t>(se.tri)];
    SPoint q{se.tri, tt.pos[static_cast<size_t>(se.corner)], output};
    count = sets::region_multiplicity(root.region, q);
  }
  res.count = count;
  return res;
}

// ---------------------------------------------------------------------------

std::map<std::pair<std::string, std::string>, Int> connection_counts(const mesh::Surface& s,
                                                                     const FieldData& fd) {
  std::map<std::pair<std::string, std::string>, Int> out;
  for (int v = 0; v < s.nv; ++v) {
    const VertexClass& c = fd.field.cls[static_cast<size_t>(v)];
    if (!c.critical) continue;
    const int sdv = flow::stable_dim(c);
    // orbits out of a 1-dim unstable set (into attractors)
    if (unstable_dim(c) == 1) {
      auto it = fd.unstable.find(v);
      if (it == fd.unstable.end()) fail(Err::Internal, "missing unstable curve");
      for (const auto& part : it->second.parts) {
        int x = part.line.end_vertex;
        if (x < 0) fail(Err::Internal, "unstable branch without terminal");
        const VertexClass& xc = fd.field.cls[static_cast<size_t>(x)];
        if (flow::stable_dim(xc) != sdv + 1)
          fail(Err::DegenerateConfiguration, "broken unstable branch stratum");
        out[{critical_name(s, v), critical_name(s, x)}] += part.coeff;
      }
    }
    // orbits into a 1-dim stable set (from repellers)
    if (sdv == 1) {
      auto it = fd.stable.find(v);
      if (it != fd.stable.end()) {
        for (const auto& part : it->second.parts) {
          int y = part.line.end_vertex;
          if (y < 0) fail(Err::Internal, "stable branch without terminal");
          const VertexClass& yc = fd.field.cls[static_cast<size_t>(y)];
          if (flow::stable_dim(yc) != 0)
            fail(Err::DegenerateConfiguration, "broken stable branch stratum");
          out[{critical_name(s, y), critical_name(s, v)}] += part.coeff;
        }
      }
    }
  }
  return out;
}

morse::MorseComplexData complex_data(const mesh::Surface& s, const std::vector<Rat>& f,
                                     morse::Variant v, std::uint64_t seed, int max_reseeds) {
  std::vector<Rat> phi = f;
  if (v == morse::Variant::D)
    for (auto& x : phi) x = -x;
  for (int attempt = 0;; ++attempt) {
    try {
      std::vector<Rat> phi_a = attempt == 0 ? phi : flow::perturb(s, phi, mix(seed, 0xBA5E + static_cast<std::uint64_t>(attempt)), 1);
      auto fd = make_field_data(s, phi_a);
      morse::MorseComplexData data;
      data.n = 2;
      data.points = classify_critical_vertices(s, f);
      data.connections = connection_counts(s, *fd);
      return data;
    } catch (const Error& e) {
      if (e.code() != Err::DegenerateConfiguration || attempt >= max_reseeds) throw;
    }
  }
}

// ---------------------------------------------------------------------------

AssembleResult assemble_structure(const mesh::Surface& s, const std::vector<Rat>& f,
                                  const AssembleOptions& opt) {
  std::vector<Rat> phi(f);
  for (auto& x : phi) x = -x;  // Dirichlet variant descends -f

  for (int attempt = 0;; ++attempt) {
    try {
      AssembleResult res;
      res.reseeds = attempt;
      res.seed_used = attempt == 0 ? opt.seed : mix(opt.seed, 0xBA5E + static_cast<std::uint64_t>(attempt));
      std::vector<Rat> phi_a =
          attempt == 0 ? phi : flow::perturb(s, phi, res.seed_used, 1);

      // decoration family: field j descends perturb(phi_a, seed, j)
      std::vector<std::shared_ptr<FieldData>> fields;
      const int nfields = std::max(opt.maxd, 1);
      for (int j = 0; j < nfields; ++j)
        fields.push_back(make_field_data(s, flow::perturb(s, phi_a, res.seed_used, j)));

      // generators
      const auto& cls0 = fields[0]->field.cls;
      ainfty::AInftyStructure st;
      st.maxd = opt.maxd;
      std::map<int, ainfty::GenId> gid;
      std::vector<int> critvs;
      for (int v = 0; v < s.nv; ++v) {
        if (!cls0[static_cast<size_t>(v)].critical) continue;
        gid[v] = st.basis.add(critical_name(s, v), 2 - flow::stable_dim(cls0[static_cast<size_t>(v)]));
        critvs.push_back(v);
      }

      // m_1 from connection counts of the unperturbed field
      res.m1_data.n = 2;
      res.m1_data.points = classify_critical_vertices(s, f);
      res.m1_data.connections = connection_counts(s, *fields[0]);
      for (int x : critvs) {
        ainfty::ZChain dx;
        for (int y : critvs) {
          auto it = res.m1_data.connections.find({critical_name(s, y), critical_name(s, x)});
          if (it == res.m1_data.connections.end()) continue;
          const long long degy = 2 - flow::stable_dim(cls0[static_cast<size_t>(y)]);
          const long long degx = 2 - flow::stable_dim(cls0[static_cast<size_t>(x)]);
          if (degy != degx + 1) continue;
          ainfty::chain_add(dx, gid[y], it->second);
        }
        if (!dx.empty()) st.set_op(1, {gid[x]}, std::move(dx));
      }

      // m_d, 2 <= d <= maxd
      for (int d = 2; d <= opt.maxd; ++d) {
        auto all_trees = trees::enumerate_generic(d);
        // tuple enumeration (deterministic), optional thread pool
        std::vector<std::vector<int>> tuples;
        {
          std::vector<int> w(static_cast<size_t>(d), 0);
          std::function<void(int)> rec = [&](int i) {
            if (i == d) {
              tuples.push_back(w);
              return;
            }
            for (int x : critvs) {
              w[static_cast<size_t>(i)] = x;
              rec(i + 1);
            }
          };
          rec(0);
        }
        struct Contribution {
          std::vector<int> tuple;
          int y;
          Int value;
          MultiIntersectionResult trace;
        };
        auto run_tuple = [&](const std::vector<int>& tuple) {
          std::vector<Contribution> out;
          long long degsum = 0;
          signs::DegreeVector degs;
          for (int x : tuple) {
            long long dx = 2 - flow::stable_dim(cls0[static_cast<size_t>(x)]);
            degs.push_back(dx);
            degsum += dx;
          }
          const long long want = degsum + 2 - d;
          if (want < 0 || want > 2) return out;
          std::vector<int> outs;
          for (int y : critvs)
            if (2 - flow::stable_dim(cls0[static_cast<size_t>(y)]) == want) outs.push_back(y);
          if (outs.empty()) return out;
          const int sgn_pref = signs::md_prefactor(degs, opt.prefactor);
          for (const auto& t : all_trees) {
            Decoration dcor;
            dcor.fields = fields;
            dcor.seed = res.seed_used;
            auto labels = trees::standard_labels(t);
            for (const auto& [e, lab] : labels) dcor.edge_field[e] = lab.j - 1;
            for (int y : outs) {
              auto r = multi_intersection(s, t, dcor, tuple, y, opt.record_traces);
              if (r.count != 0 || opt.record_traces) {
                Contribution c{tuple, y, Int(sgn_pref) * r.count, std::move(r)};
                out.push_back(std::move(c));
              }
            }
          }
          return out;
        };

        const int threads = env_thread_cap();
        std::vector<std::vector<Contribution>> slots(tuples.size());
        if (threads <= 1) {
          for (size_t i = 0; i < tuples.size(); ++i) slots[i] = run_tuple(tuples[i]);
        } else {
          std::vector<std::future<void>> futs;
          std::atomic<size_t> next{0};
          for (int tix = 0; tix < threads; ++tix) {
            futs.push_back(std::async(std::launch::async, [&]() {
              while (true) {
                size_t i = next.fetch_add(1);
                if (i >= tuples.size()) break;
                slots[i] = run_tuple(tuples[i]);
              }
            }));
          }
          for (auto& f2 : futs) f2.get();  // exceptions propagate
        }
        for (size_t i = 0; i < tuples.size(); ++i) {
          for (auto& c : slots[i]) {
            if (c.value != 0) {
              ainfty::Word w;
              for (int x : c.tuple) w.push_back(gid[x]);
              st.add_op(d, w, gid[c.y], c.value);
            }
            if (opt.record_traces) res.traces.push_back(std::move(c.trace));
          }
        }
      }
      res.structure = std::move(st);
      return res;
    } catch (const Error& e) {
      if (e.code() != Err::DegenerateConfiguration || attempt >= opt.max_reseeds) throw;
    }
  }
}

nlohmann::ordered_json result_to_json(const mesh::Surface& s, const MultiIntersectionResult& r) {
  nlohmann::ordered_json j;
  j["tree"] = r.tree.canonical();
  auto in = nlohmann::ordered_json::array();
  for (int x : r.entries) in.push_back(critical_name(s, x));
  j["entries"] = in;
  j["output"] = critical_name(s, r.output);
  j["count"] = r.count.str();
  auto tr = nlohmann::ordered_json::array();
  for (const auto& tn : r.trace) {
    nlohmann::ordered_json e;
    e["node"] = tn.node;
    e["kind"] = tn.kind;
    e["dim"] = tn.abstract_dim;
    e["fiber"] = tn.fiber_dim;
    auto pts = nlohmann::ordered_json::array();
    for (const auto& [w, c] : tn.points) pts.push_back({{"at", w}, {"coeff", c}});
    e["points"] = pts;
    tr.push_back(e);
  }
  j["trace"] = tr;
  return j;
}

std::vector<Rat> values_from_json(const nlohmann::json& j, int nv) {
  std::vector<Rat> out(static_cast<size_t>(nv));
  std::vector<bool> seen(static_cast<size_t>(nv), false);
  try {
    const auto& vals = j.contains("values") ? j.at("values") : j;
    for (const auto& [key, val] : vals.items()) {
      int id = std::stoi(key);
      if (id < 0 || id >= nv) fail(Err::ParseError, "function value for unknown vertex " + key);
      out[static_cast<size_t>(id)] = val.is_string() ? rat_parse(val.get<std::string>())
                                                     : Rat(val.get<long long>());
      seen[static_cast<size_t>(id)] = true;
    }
  } catch (const nlohmann::json::exception& e) {
    fail(Err::ParseError, std::string("function json: ") + e.what());
  }
  for (int v = 0; v < nv; ++v)
    if (!seen[static_cast<size_t>(v)]) fail(Err::ParseError, "missing function value for vertex " + std::to_string(v));
  return out;
}

}  // namespace ma::plflow
