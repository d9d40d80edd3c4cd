#include "oracles.hpp"

#include <algorithm>
#include <set>

namespace oracle {

using ma::Int;
using ma::Rat;

Int count_binary_trees(int d) {
  std::vector<Int> memo(static_cast<size_t>(d) + 1, 0);
  memo[1] = 1;
  for (int n = 2; n <= d; ++n)
    for (int k = 1; k < n; ++k) memo[static_cast<size_t>(n)] += memo[static_cast<size_t>(k)] * memo[static_cast<size_t>(n - k)];
  return memo[static_cast<size_t>(d)];
}

namespace {

int rational_rank(std::vector<std::vector<Rat>> m) {
  size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c] / m[r][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return static_cast<int>(r);
}

struct Cells {
  std::vector<int> verts;
  std::vector<std::pair<int, int>> edges;  // a < b
};

Cells collect_cells(const SimpComplex& c, bool rel) {
  std::set<int> vs;
  std::set<std::pair<int, int>> es;
  for (const auto& t : c.triangles) {
    for (int k = 0; k < 3; ++k) {
      vs.insert(t[static_cast<size_t>(k)]);
      int a = t[static_cast<size_t>(k)], b = t[static_cast<size_t>((k + 1) % 3)];
      es.insert({std::min(a, b), std::max(a, b)});
    }
  }
  if (rel) {
    for (int v : c.boundary_vertices) vs.erase(v);
    for (auto [a, b] : c.boundary_edges) es.erase({std::min(a, b), std::max(a, b)});
  }
  Cells out;
  out.verts.assign(vs.begin(), vs.end());
  out.edges.assign(es.begin(), es.end());
  return out;
}

}  // namespace

std::vector<long long> simplicial_betti(const SimpComplex& c, bool rel) {
  Cells cells = collect_cells(c, rel);
  std::map<int, size_t> vidx;
  for (size_t i = 0; i < cells.verts.size(); ++i) vidx[cells.verts[i]] = i;
  std::map<std::pair<int, int>, size_t> eidx;
  for (size_t i = 0; i < cells.edges.size(); ++i) eidx[cells.edges[i]] = i;

  // d1 : C_1 -> C_0, d2 : C_2 -> C_1 (cells outside the relative complex are 0)
  std::vector<std::vector<Rat>> d1(cells.verts.size(), std::vector<Rat>(cells.edges.size(), 0));
  for (size_t j = 0; j < cells.edges.size(); ++j) {
    auto [a, b] = cells.edges[j];
    if (vidx.count(a)) d1[vidx[a]][j] -= 1;
    if (vidx.count(b)) d1[vidx[b]][j] += 1;
  }
  std::vector<std::vector<Rat>> d2(cells.edges.size(), std::vector<Rat>(c.triangles.size(), 0));
  for (size_t j = 0; j < c.triangles.size(); ++j) {
    const auto& t = c.triangles[j];
    for (int k = 0; k < 3; ++k) {
      int a = t[static_cast<size_t>(k)], b = t[static_cast<size_t>((k + 1) % 3)];
      std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto it = eidx.find(key);
      if (it == eidx.end()) continue;
      d2[it->second][j] += (a < b) ? 1 : -1;
    }
  }
  int r1 = rational_rank(d1), r2 = rational_rank(d2);
  long long n0 = static_cast<long long>(cells.verts.size());
  long long n1 = static_cast<long long>(cells.edges.size());
  long long n2 = static_cast<long long>(c.triangles.size());
  return {n0 - r1, n1 - r1 - r2, n2 - r2};
}

namespace {
Int edge_val(const Cochain1& f, int a, int b) {
  // value on the oriented edge a -> b
  auto key = std::make_pair(std::min(a, b), std::max(a, b));
  auto it = f.find(key);
  if (it == f.end()) return 0;
  return a < b ? it->second : Int(-it->second);
}
}  // namespace

bool is_cocycle(const SimpComplex& c, const Cochain1& f) {
  for (const auto& t : c.triangles) {
    // order the vertices; evaluate f on the two AW faces of the boundary
    std::array<int, 3> v = t;
    std::sort(v.begin(), v.end());
    Int delta = edge_val(f, v[1], v[2]) - edge_val(f, v[0], v[2]) + edge_val(f, v[0], v[1]);
    if (delta != 0) return false;
  }
  return true;
}

Int cup_eval(const SimpComplex& c, const Cochain1& f, const Cochain1& g) {
  Int total = 0;
  for (const auto& t : c.triangles) {
    std::array<int, 3> v = t;
    std::sort(v.begin(), v.end());
    // orientation of the listed triangle relative to the sorted order
    int sign = 1;
    std::array<int, 3> w = t;
    // parity of the permutation sorting w
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (std::find(w.begin(), w.end(), v[static_cast<size_t>(i)]) - w.begin() >
            std::find(w.begin(), w.end(), v[static_cast<size_t>(j)]) - w.begin())
          sign = -sign;
    total += Int(sign) * edge_val(f, v[0], v[1]) * edge_val(g, v[1], v[2]);
  }
  return total;
}

}  // namespace oracle
