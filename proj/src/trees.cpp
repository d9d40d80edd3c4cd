#include "ma/trees.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace ma::trees {

namespace {

// Recursive construction shape.
struct Shape {
  int leaf = 0;  // >0: leaf with that placeholder index
  std::vector<Shape> kids;
};

void flatten(const Shape& s, int parent, std::vector<int>& par,
             std::vector<std::vector<int>>& ch, std::vector<int>& leafidx) {
  int id = static_cast<int>(par.size());
  par.push_back(parent);
  ch.emplace_back();
  leafidx.push_back(s.leaf);
  if (parent >= 0) ch[parent].push_back(id);
  for (const Shape& k : s.kids) flatten(k, id, par, ch, leafidx);
}

}  // namespace

class TreeBuilder {
 public:
  static FukayaTree build(const Shape& s) {
    FukayaTree t;
    flatten(s, -1, t.parent_, t.children_, t.leaf_index_);
    t.renumber_leaves();
    t.validate();
    return t;
  }
};

void FukayaTree::renumber_leaves() {
  leaves_.clear();
  // DFS order = planar order; nodes were appended in DFS order already,
  // but re-derive to stay correct after structural edits.
  std::function<void(int)> dfs = [&](int v) {
    if (children_[v].empty()) {
      leaves_.push_back(v);
      leaf_index_[v] = static_cast<int>(leaves_.size());
    } else {
      leaf_index_[v] = 0;
      for (int c : children_[v]) dfs(c);
    }
  };
  dfs(0);
  d_ = static_cast<int>(leaves_.size());
}

void FukayaTree::validate() const {
  for (int v = 0; v < node_count(); ++v) {
    if (!children_[v].empty() && children_[v].size() < 2)
      fail(Err::Internal, "interior vertex with a single child");
  }
  if (d_ < 1) fail(Err::InvalidArity, "tree without leaves");
}

FukayaTree FukayaTree::leaf() { return TreeBuilder::build(Shape{1, {}}); }

FukayaTree FukayaTree::corolla(int d) {
  if (d < 2) fail(Err::InvalidArity, "corolla needs d >= 2");
  Shape s;
  for (int i = 1; i <= d; ++i) s.kids.push_back(Shape{i, {}});
  return TreeBuilder::build(s);
}

FukayaTree FukayaTree::parse(const std::string& text) {
  size_t pos = 0;
  std::function<Shape()> rec = [&]() -> Shape {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos >= text.size()) fail(Err::ParseError, "truncated tree '" + text + "'");
    if (text[pos] == '(') {
      ++pos;
      Shape s;
      while (true) {
        while (pos < text.size() && text[pos] == ' ') ++pos;
        if (pos >= text.size()) fail(Err::ParseError, "unbalanced '(' in '" + text + "'");
        if (text[pos] == ')') { ++pos; break; }
        s.kids.push_back(rec());
      }
      if (s.kids.size() < 2) fail(Err::ParseError, "vertex with <2 children in '" + text + "'");
      return s;
    }
    if (!std::isdigit(static_cast<unsigned char>(text[pos])))
      fail(Err::ParseError, "unexpected char in '" + text + "'");
    int n = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      n = n * 10 + (text[pos++] - '0');
    return Shape{n, {}};
  };
  Shape s = rec();
  while (pos < text.size() && text[pos] == ' ') ++pos;
  if (pos != text.size()) fail(Err::ParseError, "trailing junk in '" + text + "'");
  return TreeBuilder::build(s);
}

std::vector<int> FukayaTree::interior_edges() const {
  std::vector<int> out;
  for (int v = 1; v < node_count(); ++v)
    if (!is_leaf(v)) out.push_back(v);
  return out;
}

bool FukayaTree::is_generic() const {
  for (int v = 0; v < node_count(); ++v)
    if (!is_leaf(v) && children_[v].size() != 2) return false;
  return true;
}

int FukayaTree::subtree_leaf_count(int v) const {
  if (is_leaf(v)) return 1;
  int n = 0;
  for (int c : children_[v]) n += subtree_leaf_count(c);
  return n;
}

int FukayaTree::leftmost_leaf(int v) const {
  while (!is_leaf(v)) v = children_[v].front();
  return leaf_index_[v];
}

std::string FukayaTree::canonical() const {
  std::function<std::string(int)> rec = [&](int v) -> std::string {
    if (is_leaf(v)) return std::to_string(leaf_index_[v]);
    std::string s = "(";
    bool first = true;
    for (int c : children_[v]) {
      if (!first) s += ' ';
      s += rec(c);
      first = false;
    }
    return s + ")";
  };
  return rec(0);
}

namespace {
Shape subshape(const FukayaTree& t, int v) {
  Shape s;
  if (t.is_leaf(v)) {
    s.leaf = t.leaf_index(v);
    return s;
  }
  for (int c : t.children(v)) s.kids.push_back(subshape(t, c));
  return s;
}
}  // namespace

FukayaTree FukayaTree::collapse_edge(int e) const {
  if (e < 0 || e >= node_count()) fail(Err::IndexOutOfRange, "edge id out of range");
  if (!is_interior_edge(e)) fail(Err::NotInteriorEdge, "collapse requires an interior edge");
  // Rebuild the shape with e's children spliced into e's parent in place.
  std::function<Shape(int)> rec = [&](int v) -> Shape {
    Shape s;
    if (is_leaf(v)) { s.leaf = leaf_index_[v]; return s; }
    for (int c : children_[v]) {
      if (c == e) {
        for (int g : children_[e]) s.kids.push_back(rec(g));
      } else {
        s.kids.push_back(rec(c));
      }
    }
    return s;
  };
  return TreeBuilder::build(rec(0));
}

int FukayaTree::codim1_vertex() const {
  int found = -1;
  for (int v = 0; v < node_count(); ++v) {
    if (is_leaf(v)) continue;
    if (children_[v].size() == 3) {
      if (found >= 0) return -1;
      found = v;
    } else if (children_[v].size() != 2) {
      return -1;
    }
  }
  return found;
}

std::pair<FukayaTree, FukayaTree> FukayaTree::expansions() const {
  int v4 = codim1_vertex();
  if (v4 < 0) fail(Err::NotCodimOne, "expansions need exactly one valency-4 vertex");
  auto expand = [&](bool group_left) -> FukayaTree {
    std::function<Shape(int)> rec = [&](int v) -> Shape {
      Shape s;
      if (is_leaf(v)) { s.leaf = leaf_index_[v]; return s; }
      std::vector<Shape> kids;
      for (int c : children_[v]) kids.push_back(rec(c));
      if (v == v4) {
        Shape inner;
        if (group_left) {
          inner.kids = {kids[0], kids[1]};
          s.kids = {inner, kids[2]};
        } else {
          inner.kids = {kids[1], kids[2]};
          s.kids = {kids[0], inner};
        }
      } else {
        s.kids = kids;
      }
      return s;
    };
    return TreeBuilder::build(rec(0));
  };
  return {expand(true), expand(false)};
}

FukayaTree connected_sum(const FukayaTree& ta, int j, const FukayaTree& tb) {
  if (j + 1 < 1 || j + 1 > tb.d()) fail(Err::IndexOutOfRange, "graft leaf j+1 out of range");
  std::function<Shape(int)> rec = [&](int v) -> Shape {
    Shape s;
    if (tb.is_leaf(v)) {
      if (tb.leaf_index(v) == j + 1) return subshape(ta, 0);
      s.leaf = tb.leaf_index(v);
      return s;
    }
    for (int c : tb.children(v)) s.kids.push_back(rec(c));
    return s;
  };
  return TreeBuilder::build(rec(0));
}

FukayaTree::Counters FukayaTree::counters() const {
  Counters c;
  c.nT = d_ - 1;
  // n(v) - 1 = number of interior edges strictly above v;
  // n(e(v)) = 1 for leaf edges, n(v) + 1 otherwise.
  std::function<int(int)> interior_above = [&](int v) -> int {
    int n = 0;
    for (int k : children_[v])
      if (!is_leaf(k)) n += 1 + interior_above(k);
    return n;
  };
  for (int v = 0; v < node_count(); ++v) {
    if (is_leaf(v)) {
      c.nE[v] = 1;
    } else {
      c.nV[v] = interior_above(v) + 1;
      c.nE[v] = c.nV[v] + 1;
    }
  }
  return c;
}

std::vector<std::map<int, int>> FukayaTree::embeddings_from(const FukayaTree& t0) const {
  std::vector<std::map<int, int>> out;
  // Enumerate recursively with explicit run choices.
  std::function<void(int, int, std::map<int, int>&, std::vector<std::map<int, int>>&)> rec =
      [&](int u, int w, std::map<int, int>& acc, std::vector<std::map<int, int>>& sink) {
        if (t0.is_leaf(u)) {
          if (!is_leaf(w)) return;
          acc[u] = w;
          sink.push_back(acc);
          acc.erase(u);
          return;
        }
        if (is_leaf(w)) return;
        const auto& cu = t0.children(u);
        const auto& cw = children(w);
        if (cu.size() > cw.size()) return;
        acc[u] = w;
        int slack = static_cast<int>(cw.size() - cu.size());
        for (int start = 0; start <= slack; ++start) {
          // match children cu[i] <-> cw[start+i], cartesian over sub-choices
          std::vector<std::map<int, int>> partial = {std::map<int, int>{}};
          for (size_t i = 0; i < cu.size() && !partial.empty(); ++i) {
            std::vector<std::map<int, int>> next;
            for (auto& base : partial) {
              std::vector<std::map<int, int>> subs;
              std::map<int, int> tmp;
              rec(cu[i], cw[start + i], tmp, subs);
              for (auto& s : subs) {
                auto m = base;
                m.insert(s.begin(), s.end());
                next.push_back(std::move(m));
              }
            }
            partial = std::move(next);
          }
          for (auto& p : partial) {
            auto m = acc;
            m.insert(p.begin(), p.end());
            sink.push_back(std::move(m));
          }
        }
        acc.erase(u);
      };

  for (int w = 0; w < node_count(); ++w) {
    std::map<int, int> acc;
    std::vector<std::map<int, int>> sink;
    rec(0, w, acc, sink);
    for (auto& m : sink) {
      // non-surjective: an injective simplicial map is onto iff it hits every
      // node of this tree.
      if (static_cast<int>(m.size()) == node_count()) continue;
      out.push_back(std::move(m));
    }
  }
  return out;
}

std::vector<FukayaTree> enumerate_generic(int d) {
  if (d < 2) fail(Err::InvalidArity, "enumerate_generic needs d >= 2");
  std::function<std::vector<Shape>(int)> gen = [&](int n) -> std::vector<Shape> {
    std::vector<Shape> out;
    if (n == 1) {
      out.push_back(Shape{1, {}});
      return out;
    }
    for (int k = 1; k < n; ++k) {
      auto ls = gen(k);
      auto rs = gen(n - k);
      for (const auto& l : ls)
        for (const auto& r : rs) {
          Shape s;
          s.kids = {l, r};
          out.push_back(s);
        }
    }
    return out;
  };
  std::vector<FukayaTree> out;
  for (const auto& s : gen(d)) out.push_back(TreeBuilder::build(s));
  return out;
}

Int catalan(int n) {
  std::vector<Int> c(static_cast<size_t>(n) + 1);
  c[0] = 1;
  for (int i = 1; i <= n; ++i) {
    Int s = 0;
    for (int k = 0; k < i; ++k) s += c[k] * c[i - 1 - k];
    c[static_cast<size_t>(i)] = s;
  }
  return c[static_cast<size_t>(n)];
}

int Forest::height() const {
  int h = 0;
  for (const auto& t : trees) {
    std::function<int(int)> gen = [&](int v) -> int {
      if (t.is_leaf(v)) return 1;
      int g = 0;
      for (int c : t.children(v)) g = std::max(g, gen(c));
      return g + 1;
    };
    h = std::max(h, gen(0));
  }
  return h;
}

int Forest::leaf_count() const {
  int n = 0;
  for (const auto& t : trees) n += t.d();
  return n;
}

std::map<std::pair<int, int>, EdgeLabel> standard_labels(const Forest& f) {
  std::map<std::pair<int, int>, EdgeLabel> out;
  int offset = 0;
  for (size_t ti = 0; ti < f.trees.size(); ++ti) {
    const auto& t = f.trees[ti];
    std::function<int(int)> gen = [&](int v) -> int {
      if (t.is_leaf(v)) return 1;
      int g = 0;
      for (int c : t.children(v)) g = std::max(g, gen(c));
      return g + 1;
    };
    for (int v = 0; v < t.node_count(); ++v) {
      EdgeLabel lab;
      lab.h = gen(v);
      lab.j = offset + t.leftmost_leaf(v);
      out[{static_cast<int>(ti), v}] = lab;
    }
    offset += t.d();
  }
  return out;
}

std::map<int, EdgeLabel> standard_labels(const FukayaTree& t) {
  Forest f;
  f.trees.push_back(t);
  auto all = standard_labels(f);
  std::map<int, EdgeLabel> out;
  for (auto& [k, v] : all) out[k.second] = v;
  return out;
}

}  // namespace ma::trees
