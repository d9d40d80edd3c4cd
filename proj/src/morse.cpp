#include "ma/morse.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ma/snf.hpp"

namespace ma::morse {

int variant_degree(const CriticalPoint& p, Variant v) {
  if (p.locus == Locus::Interior) return p.index;
  if (v == Variant::N) return p.flavor == Flavor::Neumann ? p.index : -1;
  return p.flavor == Flavor::Dirichlet ? p.index + 1 : -1;
}

namespace {

void validate(const MorseComplexData& data) {
  for (const auto& p : data.points) {
    if ((p.flavor == Flavor::None) != (p.locus == Locus::Interior))
      fail(Err::PreconditionFailed, "flavor None iff interior: " + p.name);
    if (p.locus == Locus::Interior && p.index > data.n)
      fail(Err::GradingViolation, "interior index > n at " + p.name);
    if (p.locus == Locus::Boundary && p.index > data.n - 1)
      fail(Err::GradingViolation, "boundary index > n-1 at " + p.name);
  }
}

}  // namespace

MorseComplex build_complex(const MorseComplexData& data, Variant v) {
  validate(data);
  MorseComplex c;
  c.variant = v;
  c.n = data.n;
  c.gens.assign(static_cast<size_t>(data.n) + 1, {});

  std::vector<const CriticalPoint*> members;
  for (const auto& p : data.points)
    if (variant_degree(p, v) >= 0) members.push_back(&p);
  std::sort(members.begin(), members.end(), [](const CriticalPoint* a, const CriticalPoint* b) {
    if ((a->locus == Locus::Interior) != (b->locus == Locus::Interior))
      return a->locus == Locus::Interior;
    if (a->index != b->index) return a->index < b->index;
    return a->name < b->name;
  });
  std::map<std::string, int> degree_of;
  std::map<std::string, size_t> pos_of;
  for (const CriticalPoint* p : members) {
    int k = variant_degree(*p, v);
    if (k > data.n) fail(Err::GradingViolation, "degree above n at " + p->name);
    degree_of[p->name] = k;
    pos_of[p->name] = c.gens[static_cast<size_t>(k)].size();
    c.gens[static_cast<size_t>(k)].push_back(p->name);
  }

  c.boundary.assign(static_cast<size_t>(data.n) + 1, {});
  for (int k = 0; k <= data.n; ++k) {
    size_t rows = k > 0 ? c.gens[static_cast<size_t>(k - 1)].size() : 0;
    c.boundary[static_cast<size_t>(k)].assign(rows,
        std::vector<Int>(c.gens[static_cast<size_t>(k)].size(), 0));
  }

  for (const auto& [key, count] : data.connections) {
    const auto& [from, to] = key;
    auto itf = degree_of.find(from);
    auto itt = degree_of.find(to);
    if (itf == degree_of.end() || itt == degree_of.end()) continue;  // other variant
    int df = itf->second, dt = itt->second;
    // orbit runs from `from` to `to`; N counts outgoing orbits on the higher
    // generator, D counts incoming ones.
    std::string hi_name, lo_name;
    if (v == Variant::N) {
      if (df != dt + 1)
        fail(Err::GradingViolation, "connection " + from + "->" + to + " not degree-adjacent (N)");
      hi_name = from; lo_name = to;
    } else {
      if (dt != df + 1)
        fail(Err::GradingViolation, "connection " + from + "->" + to + " not degree-adjacent (D)");
      hi_name = to; lo_name = from;
    }
    int k = degree_of[hi_name];
    c.boundary[static_cast<size_t>(k)][pos_of[lo_name]][pos_of[hi_name]] += count;
  }
  return c;
}

bool check_d_squared(const MorseComplex& c) {
  for (int k = 2; k <= c.n; ++k) {
    const auto& a = c.boundary[static_cast<size_t>(k - 1)];
    const auto& b = c.boundary[static_cast<size_t>(k)];
    if (a.empty() || b.empty()) continue;
    auto prod = snf::mul(a, b);
    for (const auto& row : prod)
      for (const Int& x : row)
        if (x != 0) return false;
  }
  return true;
}

HomologySummary complex_homology(const MorseComplex& c) {
  HomologySummary h;
  std::vector<int> rk(static_cast<size_t>(c.n) + 2, 0);
  std::vector<std::vector<Int>> diag(static_cast<size_t>(c.n) + 2);
  for (int k = 1; k <= c.n; ++k) {
    auto s = snf::smith(c.boundary[static_cast<size_t>(k)]);
    rk[static_cast<size_t>(k)] = s.rank;
    diag[static_cast<size_t>(k)] = s.diag;
  }
  for (int k = 0; k <= c.n; ++k) {
    long long betti = c.rank(k) - rk[static_cast<size_t>(k)] -
                      (k + 1 <= c.n ? rk[static_cast<size_t>(k + 1)] : 0);
    h.betti.push_back(betti);
    std::vector<Int> tor;
    if (k + 1 <= c.n)
      for (const Int& d : diag[static_cast<size_t>(k + 1)])
        if (d != 1 && d != -1) tor.push_back(d);
    h.torsion.push_back(tor);
  }
  return h;
}

DualityReport duality_check(const MorseComplexData& data_f, const MorseComplexData& data_minus_f) {
  DualityReport rep;
  MorseComplex cd, cn;
  try {
    cd = build_complex(data_f, Variant::D);
    cn = build_complex(data_minus_f, Variant::N);
  } catch (const Error& e) {
    rep.ok = false;
    rep.mismatches.push_back(e.what());
    return rep;
  }
  const int n = cd.n;
  if (cn.n != n) {
    rep.ok = false;
    rep.mismatches.push_back("ambient dimensions differ");
    return rep;
  }
  for (int k = 0; k <= n; ++k) {
    auto a = cd.gens[static_cast<size_t>(k)];
    auto b = cn.gens[static_cast<size_t>(n - k)];
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) {
      std::ostringstream os;
      os << "generator mismatch: C_" << k << "^D(f) vs C_" << (n - k) << "^N(-f)";
      rep.ok = false;
      rep.mismatches.push_back(os.str());
    }
  }
  if (!rep.ok) return rep;

  // transposed-differential match up to per-generator signs: 2-color the
  // generators so that sign(u) sign(w) relates the corresponding entries
  std::map<std::string, int> color;  // 0 unknown else +-1
  auto entry = [&](const MorseComplex& c, int k, const std::string& row, const std::string& col) -> Int {
    const auto& gens_hi = c.gens[static_cast<size_t>(k)];
    const auto& gens_lo = c.gens[static_cast<size_t>(k - 1)];
    auto ri = std::find(gens_lo.begin(), gens_lo.end(), row) - gens_lo.begin();
    auto ci = std::find(gens_hi.begin(), gens_hi.end(), col) - gens_hi.begin();
    return c.boundary[static_cast<size_t>(k)][static_cast<size_t>(ri)][static_cast<size_t>(ci)];
  };
  // d^D_k : C_k -> C_{k-1}  matches  (d^N_{n-k+1} : C^N_{n-k+1} -> C^N_{n-k})^T
  // i.e. <d^D x, y> = +- <d^N y', x'> entrywise under per-generator signs.
  struct Rel { std::string u, w; int sgn; };
  std::vector<Rel> rels;
  for (int k = 1; k <= n; ++k) {
    for (const auto& x : cd.gens[static_cast<size_t>(k)]) {
      for (const auto& y : cd.gens[static_cast<size_t>(k - 1)]) {
        Int a = entry(cd, k, y, x);
        Int b = entry(cn, n - k + 1, x, y);
        if ((a == 0) != (b == 0) || (a != 0 && a != b && a != -b)) {
          std::ostringstream os;
          os << "entry mismatch <d " << x << ", " << y << ">: " << a.str() << " vs " << b.str();
          rep.ok = false;
          rep.mismatches.push_back(os.str());
          continue;
        }
        if (a != 0) rels.push_back({x, y, a == b ? +1 : -1});
      }
    }
  }
  if (!rep.ok) return rep;
  // check 2-colorability: sign(u)*sign(w) = rel.sgn
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& r : rels) {
      int cu = color.count(r.u) ? color[r.u] : 0;
      int cw = color.count(r.w) ? color[r.w] : 0;
      if (cu == 0 && cw == 0) {
        color[r.u] = 1;
        color[r.w] = r.sgn;
        changed = true;
      } else if (cu != 0 && cw == 0) {
        color[r.w] = cu * r.sgn;
        changed = true;
      } else if (cu == 0 && cw != 0) {
        color[r.u] = cw * r.sgn;
        changed = true;
      } else if (cu * cw != r.sgn) {
        rep.ok = false;
        rep.mismatches.push_back("sign system inconsistent at " + r.u + "," + r.w);
        return rep;
      }
    }
  }
  return rep;
}

ainfty::AInftyStructure as_ainfty(const MorseComplex& c) {
  ainfty::AInftyStructure s;
  s.maxd = 1;
  std::map<std::string, ainfty::GenId> id;
  for (int k = 0; k <= c.n; ++k)
    for (const auto& name : c.gens[static_cast<size_t>(k)])
      id[name] = s.basis.add(name, c.n - k);
  for (int k = 1; k <= c.n; ++k) {
    const auto& lo = c.gens[static_cast<size_t>(k - 1)];
    const auto& hi = c.gens[static_cast<size_t>(k)];
    for (size_t j = 0; j < hi.size(); ++j) {
      ainfty::ZChain out;
      for (size_t i = 0; i < lo.size(); ++i)
        ainfty::chain_add(out, id[lo[i]], c.boundary[static_cast<size_t>(k)][i][j]);
      if (!out.empty()) s.set_op(1, {id[hi[j]]}, std::move(out));
    }
  }
  return s;
}

MorseComplexData data_from_json(const nlohmann::json& j) {
  MorseComplexData d;
  try {
    d.n = j.at("n").get<int>();
    for (const auto& p : j.at("points")) {
      CriticalPoint cp;
      cp.name = p.at("name").get<std::string>();
      std::string locus = p.at("locus").get<std::string>();
      cp.locus = locus == "interior" ? Locus::Interior : Locus::Boundary;
      std::string flavor = p.value("flavor", locus == "interior" ? "none" : "");
      cp.flavor = flavor == "neumann"    ? Flavor::Neumann
                  : flavor == "dirichlet" ? Flavor::Dirichlet
                                          : Flavor::None;
      cp.index = p.at("index").get<int>();
      d.points.push_back(cp);
    }
    if (j.contains("connections")) {
      for (const auto& c : j.at("connections")) {
        Int count;
        if (c.at("count").is_string()) count = Int(c.at("count").get<std::string>());
        else count = Int(c.at("count").get<long long>());
        d.connections[{c.at("from").get<std::string>(), c.at("to").get<std::string>()}] += count;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    fail(Err::ParseError, std::string("morse data json: ") + e.what());
  }
  return d;
}

nlohmann::ordered_json data_to_json(const MorseComplexData& d) {
  nlohmann::ordered_json j;
  j["n"] = d.n;
  auto pts = nlohmann::ordered_json::array();
  for (const auto& p : d.points) {
    nlohmann::ordered_json e;
    e["name"] = p.name;
    e["locus"] = p.locus == Locus::Interior ? "interior" : "boundary";
    e["flavor"] = p.flavor == Flavor::None      ? "none"
                  : p.flavor == Flavor::Neumann ? "neumann"
                                                : "dirichlet";
    e["index"] = p.index;
    pts.push_back(e);
  }
  j["points"] = pts;
  auto conns = nlohmann::ordered_json::array();
  for (const auto& [key, count] : d.connections) {
    nlohmann::ordered_json e;
    e["from"] = key.first;
    e["to"] = key.second;
    e["count"] = count.str();
    conns.push_back(e);
  }
  j["connections"] = conns;
  return j;
}

}  // namespace ma::morse
