#include "ma/instances.hpp"

#include <map>

#include "ma/flow.hpp"
#include "ma/plflow.hpp"

namespace ma::instances {

namespace {

// brick lattice torus: rows j = 0..n-1 at height j, row vertices at
// x = i + (j%2)/2, periods (n, n)
mesh::Surface brick_torus(int n) {
  if (n < 4 || n % 2 != 0) fail(Err::PreconditionFailed, "brick torus needs even n >= 4");
  auto vid = [&](int i, int j) { return ((i % n + n) % n) * n + ((j % n + n) % n); };
  auto pos = [&](int i, int j) { return Vec2{Rat(i) + Rat(j % 2 == 0 ? 0 : 1, 2), Rat(j)}; };
  std::vector<mesh::Tri> tris;
  auto add = [&](std::array<std::pair<int, int>, 3> c) {
    mesh::Tri t;
    for (int k = 0; k < 3; ++k) {
      t.v[static_cast<size_t>(k)] = vid(c[static_cast<size_t>(k)].first, c[static_cast<size_t>(k)].second);
      t.pos[static_cast<size_t>(k)] = pos(c[static_cast<size_t>(k)].first, c[static_cast<size_t>(k)].second);
    }
    tris.push_back(t);
  };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (j % 2 == 0) {
        add({{{i, j}, {i + 1, j}, {i, j + 1}}});
        add({{{i + 1, j}, {i + 1, j + 1}, {i, j + 1}}});
      } else {
        add({{{i, j}, {i + 1, j + 1}, {i, j + 1}}});
        add({{{i, j}, {i + 1, j}, {i + 1, j + 1}}});
      }
    }
  }
  mesh::Surface s = mesh::Surface::build(n * n, std::move(tris));
  s.periods = Vec2{Rat(n), Rat(n)};
  return s;
}

// rationalized cos table with denominator 64 on n samples
Rat rcos(int k, int n) {
  static const int kTable8[8] = {64, 45, 0, -45, -64, -45, 0, 45};
  if (n == 8) return Rat(kTable8[((k % n) + n) % n], 64);
  // crude rational cosine for other n: quadratic bump approximation
  int m = ((k % n) + n) % n;
  Rat x = Rat(2 * m, n) - 1;  // in [-1, 1)
  Rat v = 1 - (x < 0 ? -x : x) * 2;
  return v;
}

std::vector<Rat> cos_values(const mesh::Surface& s, int n, std::uint64_t noise_key, const Rat& noise,
                            int harmonics) {
  std::vector<Rat> out(static_cast<size_t>(s.nv));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int v = i * n + j;
      // x-coordinate doubled to stay integral on odd rows
      int two_x = 2 * i + (j % 2);
      Rat val = rcos(two_x, 2 * n) + rcos(j, n) + rcos(two_x + 2 * j, 2 * n) / 2;
      if (harmonics > 1) val += rcos(2 * two_x + 2 * j, 2 * n) / 3 + rcos(2 * j + two_x, 2 * n) / 5;
      val += seeded_unit(noise_key, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j), 64) * noise;
      out[static_cast<size_t>(v)] = val;
    }
  return out;
}

std::map<int, int> census(const mesh::Surface& s, const std::vector<Rat>& phi) {
  std::map<int, int> out;
  auto cls = flow::classify_vertices(s, phi);
  for (const auto& c : cls)
    if (c.critical) out[c.index]++;
  return out;
}

bool fields_ok(const mesh::Surface& s, const std::vector<Rat>& f, std::uint64_t seed, int decorations) {
  std::vector<Rat> phi(f);
  for (auto& x : phi) x = -x;
  try {
    // both variants' fields and a few decoration perturbations must build
    (void)plflow::make_field_data(s, f);
    for (int j = 0; j < decorations; ++j)
      (void)plflow::make_field_data(s, flow::perturb(s, phi, seed, j));
  } catch (const Error&) {
    return false;
  }
  return true;
}

}  // namespace

Instance torus(int n) {
  mesh::Surface s = brick_torus(n);
  for (std::uint64_t attempt = 0; attempt < 400; ++attempt) {
    std::vector<Rat> phi = cos_values(s, n, mix(0x70F05ULL, attempt), Rat(1, 12), 1);
    try {
      auto c = census(s, phi);
      if (!(c[0] == 1 && c[1] == 2 && c[2] == 1)) continue;
      std::vector<Rat> f(phi);
      for (auto& x : f) x = -x;  // instance carries f with phi = -f
      if (!fields_ok(s, f, 0x5EEDULL, 4)) continue;
      Instance out{s, f, "torus"};
      return out;
    } catch (const Error&) {
      continue;
    }
  }
  fail(Err::Internal, "torus instance search failed");
}

Instance torus_rich(int n) {
  mesh::Surface s = brick_torus(n);
  for (std::uint64_t attempt = 0; attempt < 800; ++attempt) {
    std::vector<Rat> phi = cos_values(s, n, mix(0x41C4ULL, attempt), Rat(1, 6), 2);
    try {
      auto c = census(s, phi);
      int total = c[0] + c[1] + c[2];
      if (!(c[0] >= 2 && c[0] - c[1] + c[2] == 0 && total >= 6 && total <= 8)) continue;
      std::vector<Rat> f(phi);
      for (auto& x : f) x = -x;
      if (!fields_ok(s, f, 0x5EEDULL, 4)) continue;
      // m_1 must be nonzero: some saddle-to-sink orbit pair that does not
      // cancel
      auto fd = plflow::make_field_data(s, phi);
      auto conns = plflow::connection_counts(s, *fd);
      bool nonzero = false;
      for (const auto& [k, v] : conns)
        if (v != 0) nonzero = true;
      if (!nonzero) continue;
      Instance out{s, f, "torus-rich"};
      return out;
    } catch (const Error&) {
      continue;
    }
  }
  fail(Err::Internal, "torus_rich instance search failed");
}

Instance torus_symmetric(int n) {
  // mirror-symmetric values: v(i,j) = v(-i-(j%2), j). The odd-row mirror
  // pairs are adjacent and share their value, an exact genericity violation
  // that the classification detects and the reseed cures.
  mesh::Surface s = brick_torus(n);
  std::vector<Rat> phi(static_cast<size_t>(s.nv));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int two_x = 2 * i + (j % 2);
      // even in x -> symmetric under x -> -x
      Rat val = rcos(two_x, 2 * n) + rcos(j, n) + rcos(two_x, 2 * n) * rcos(j, n) / 2;
      phi[static_cast<size_t>(i * n + j)] = val;
    }
  std::vector<Rat> f(phi);
  for (auto& x : f) x = -x;
  return {s, f, "torus-symmetric"};
}

Instance annulus() {
  // three square rings, 8 vertices each: inner rim r=1, middle r=2, outer rim r=3
  auto ring_pos = [&](int k, int r) -> Vec2 {
    static const int ux[8] = {1, 1, 0, -1, -1, -1, 0, 1};
    static const int uy[8] = {0, 1, 1, 1, 0, -1, -1, -1};
    return {Rat(r * ux[k % 8]), Rat(r * uy[k % 8])};
  };
  const int rings[3] = {1, 2, 3};
  std::vector<mesh::Tri> tris;
  auto vid = [&](int ring, int k) { return ring * 8 + (k % 8 + 8) % 8; };
  for (int band = 0; band < 2; ++band) {
    for (int k = 0; k < 8; ++k) {
      // квад between ring band (radius rings[band]) and band+1, split
      mesh::Tri a, b;
      a.v = {vid(band, k), vid(band + 1, k + 1), vid(band + 1, k)};
      a.pos = {ring_pos(k, rings[band]), ring_pos(k + 1, rings[band + 1]), ring_pos(k, rings[band + 1])};
      b.v = {vid(band, k), vid(band, k + 1), vid(band + 1, k + 1)};
      b.pos = {ring_pos(k, rings[band]), ring_pos(k + 1, rings[band]), ring_pos(k + 1, rings[band + 1])};
      tris.push_back(a);
      tris.push_back(b);
    }
  }
  mesh::Surface s = mesh::Surface::build(24, std::move(tris));
  // f: low on the middle ring with one angular min and one angular max;
  // rims higher with one angular min/max each
  std::vector<Rat> f(24);
  auto set = [&](int ring, int k, int num, int den) { f[static_cast<size_t>(vid(ring, k))] = Rat(num, den); };
  static const int mid_profile[8] = {0, 2, 3, 4, 6, 4, 3, 2};   // min at k=0, max at k=4
  static const int rim_profile[8] = {1, 3, 4, 5, 7, 5, 4, 3};
  for (int k = 0; k < 8; ++k) {
    set(1, k, mid_profile[k] * 2 + 0, 16);             // middle ring in [0, 12/16]
    set(0, k, 32 + rim_profile[k] * 2 + 1, 16);        // inner rim ~ [33/16, ...]
    set(2, k, 40 + rim_profile[(k + 3) % 8] * 2 + 1, 16);  // outer rim offset profile
  }
  // small deterministic asymmetry
  for (int v = 0; v < 24; ++v) f[static_cast<size_t>(v)] += seeded_unit(0xA22A, 7, static_cast<std::uint64_t>(v), 64) / 64;
  return {s, f, "annulus"};
}

Instance1D interval() {
  // f on [0,1] with one interior minimum; both endpoints Dirichlet
  Instance1D out;
  out.circle = false;
  out.f = {Rat(2), Rat(1), Rat(1, 4), Rat(0), Rat(1, 2), Rat(3, 2), Rat(5, 2)};
  out.name = "interval";
  return out;
}

Instance1D circle4() {
  Instance1D out;
  out.circle = true;
  out.f = {Rat(0), Rat(1), Rat(3), Rat(2), Rat(1, 2), Rat(5, 2)};
  out.name = "circle4";
  return out;
}

}  // namespace ma::instances
