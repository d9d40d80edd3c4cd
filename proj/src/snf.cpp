#include "ma/snf.hpp"

#include <algorithm>

namespace ma::snf {

namespace {

Mat identity(size_t n) {
  Mat m(n, std::vector<Int>(n, 0));
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Int iabs(const Int& x) { return x < 0 ? Int(-x) : x; }

}  // namespace

Mat mul(const Mat& a, const Mat& b) {
  if (a.empty() || b.empty()) return {};
  size_t n = a.size(), k = b.size(), m = b[0].size();
  Mat c(n, std::vector<Int>(m, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (size_t j = 0; j < m; ++j) c[i][j] += a[i][t] * b[t][j];
    }
  return c;
}

Smith smith(const Mat& a0) {
  Smith out;
  Mat a = a0;
  size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  out.u = identity(rows);
  out.v = identity(cols);
  if (rows == 0 || cols == 0) return out;

  size_t s = 0;
  while (s < rows && s < cols) {
    // find pivot: minimal |entry| in the lower-right block
    size_t pi = s, pj = s;
    bool found = false;
    Int best = 0;
    for (size_t i = s; i < rows; ++i)
      for (size_t j = s; j < cols; ++j)
        if (a[i][j] != 0 && (!found || iabs(a[i][j]) < best)) {
          best = iabs(a[i][j]);
          pi = i; pj = j; found = true;
        }
    if (!found) break;
    std::swap(a[s], a[pi]);
    std::swap(out.u[s], out.u[pi]);
    for (size_t i = 0; i < rows; ++i) std::swap(a[i][s], a[i][pj]);
    for (size_t i = 0; i < cols; ++i) std::swap(out.v[i][s], out.v[i][pj]);

    bool clean = true;
    for (size_t i = s + 1; i < rows; ++i) {
      if (a[i][s] == 0) continue;
      Int q = a[i][s] / a[s][s];
      for (size_t j = 0; j < cols; ++j) a[i][j] -= q * a[s][j];
      for (size_t j = 0; j < rows; ++j) out.u[i][j] -= q * out.u[s][j];
      if (a[i][s] != 0) clean = false;
    }
    for (size_t j = s + 1; j < cols; ++j) {
      if (a[s][j] == 0) continue;
      Int q = a[s][j] / a[s][s];
      for (size_t i = 0; i < rows; ++i) a[i][j] -= q * a[i][s];
      for (size_t i = 0; i < cols; ++i) out.v[i][j] -= q * out.v[i][s];
      if (a[s][j] != 0) clean = false;
    }
    if (!clean) continue;  // remainders left; repeat with smaller pivot

    // divisibility sweep: pivot must divide everything below-right
    bool redo = false;
    for (size_t i = s + 1; i < rows && !redo; ++i)
      for (size_t j = s + 1; j < cols && !redo; ++j)
        if (a[i][j] % a[s][s] != 0) {
          for (size_t t = 0; t < cols; ++t) a[s][t] += a[i][t];
          for (size_t t = 0; t < rows; ++t) out.u[s][t] += out.u[i][t];
          redo = true;
        }
    if (redo) continue;
    if (a[s][s] < 0) {
      for (size_t t = 0; t < cols; ++t) a[s][t] = -a[s][t];
      for (size_t t = 0; t < rows; ++t) out.u[s][t] = -out.u[s][t];
    }
    ++s;
  }
  out.rank = static_cast<int>(s);
  for (size_t i = 0; i < s; ++i) out.diag.push_back(a[i][i]);
  return out;
}

int rank(const Mat& a) { return smith(a).rank; }

std::optional<std::vector<Int>> solve(const Mat& a, const std::vector<Int>& b) {
  size_t rows = a.size();
  size_t cols = rows ? a[0].size() : 0;
  if (b.size() != rows) fail(Err::DimensionMismatch, "solve: rhs size");
  Smith s = smith(a);
  // u a v = d ; a x = b  =>  d (v^-1 x) = u b ; set y = v^-1 x.
  std::vector<Int> ub(rows, 0);
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < rows; ++j) ub[i] += s.u[i][j] * b[j];
  std::vector<Int> y(cols, 0);
  for (size_t i = 0; i < rows; ++i) {
    if (static_cast<int>(i) < s.rank) {
      if (ub[i] % s.diag[i] != 0) return std::nullopt;
      y[i] = ub[i] / s.diag[i];
    } else if (ub[i] != 0) {
      return std::nullopt;
    }
  }
  std::vector<Int> x(cols, 0);
  for (size_t i = 0; i < cols; ++i)
    for (size_t j = 0; j < cols; ++j) x[i] += s.v[i][j] * y[j];
  return x;
}

std::vector<std::vector<Int>> kernel(const Mat& a) {
  size_t rows = a.size();
  size_t cols = rows ? a[0].size() : 0;
  std::vector<std::vector<Int>> out;
  if (cols == 0) return out;
  if (rows == 0) {
    for (size_t j = 0; j < cols; ++j) {
      std::vector<Int> e(cols, 0);
      e[j] = 1;
      out.push_back(e);
    }
    return out;
  }
  Smith s = smith(a);
  for (size_t j = static_cast<size_t>(s.rank); j < cols; ++j) {
    std::vector<Int> col(cols);
    for (size_t i = 0; i < cols; ++i) col[i] = s.v[i][j];
    out.push_back(col);
  }
  return out;
}

}  // namespace ma::snf
