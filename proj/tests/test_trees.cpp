#include <doctest.h>

#include <set>

#include "ma/trees.hpp"
#include "oracles.hpp"

using namespace ma::trees;

TEST_CASE("enumerate_generic counts match the independent recursion") {
  CHECK(enumerate_generic(2).size() == 1);
  CHECK(enumerate_generic(3).size() == 2);
  CHECK(enumerate_generic(4).size() == 5);
  for (int d = 2; d <= 8; ++d) {
    auto trees = enumerate_generic(d);
    CHECK(ma::Int(trees.size()) == oracle::count_binary_trees(d));
    CHECK(ma::Int(trees.size()) == catalan(d - 1));
    std::set<std::string> canon;
    for (const auto& t : trees) {
      CHECK(t.d() == d);
      CHECK(t.is_generic());
      CHECK(t.interior_edge_count() == d - 2);
      canon.insert(t.canonical());
    }
    CHECK(canon.size() == trees.size());  // each exactly once
  }
  CHECK_THROWS_AS((void)enumerate_generic(1), ma::Error);
}

TEST_CASE("collapse of the unique interior edge of a 3-leaf tree is the corolla") {
  for (const auto& t : enumerate_generic(3)) {
    auto es = t.interior_edges();
    REQUIRE(es.size() == 1);
    CHECK(t.collapse_edge(es[0]).canonical() == FukayaTree::corolla(3).canonical());
  }
}

TEST_CASE("collapse of a comb's upper interior edge gives one valency-4 vertex") {
  FukayaTree comb = FukayaTree::parse("(((1 2) 3) 4)");
  auto es = comb.interior_edges();
  REQUIRE(es.size() == 2);
  // the upper interior edge is the one whose subtree has 2 leaves
  int upper = comb.subtree_leaf_count(es[0]) == 2 ? es[0] : es[1];
  auto tc = comb.collapse_edge(upper);
  CHECK(tc.codim1_vertex() >= 0);
  CHECK(tc.interior_edge_count() == 1);
}

TEST_CASE("collapse of a leaf edge fails") {
  FukayaTree t = FukayaTree::parse("(1 2)");
  CHECK_THROWS_AS((void)t.collapse_edge(t.leaves()[0]), ma::Error);
}

TEST_CASE("expansions of the 3-corolla are the two generic 3-trees") {
  auto [a, b] = FukayaTree::corolla(3).expansions();
  std::set<std::string> got{a.canonical(), b.canonical()};
  std::set<std::string> want;
  for (const auto& t : enumerate_generic(3)) want.insert(t.canonical());
  CHECK(got == want);
}

TEST_CASE("expand then collapse is the identity on every codim-1 stratum, d <= 6") {
  for (int d = 3; d <= 6; ++d) {
    for (const auto& t : enumerate_generic(d)) {
      for (int e : t.interior_edges()) {
        auto tc = t.collapse_edge(e);
        auto [x, y] = tc.expansions();
        auto collapses_back = [&](const FukayaTree& u) {
          for (int ue : u.interior_edges())
            if (u.collapse_edge(ue).canonical() == tc.canonical()) return true;
          return false;
        };
        CHECK(collapses_back(x));
        CHECK(collapses_back(y));
        // the pair contains t and exactly one other generic tree
        std::set<std::string> pair{x.canonical(), y.canonical()};
        CHECK(pair.count(t.canonical()) == 1);
        CHECK(pair.size() == 2);
      }
    }
  }
}

TEST_CASE("generic tree input to expansions fails") {
  CHECK_THROWS_AS((void)enumerate_generic(3)[0].expansions(), ma::Error);
}

TEST_CASE("connected_sum grafts and adds leaf counts") {
  FukayaTree c2 = FukayaTree::corolla(2);
  auto s = connected_sum(c2, 0, c2);
  CHECK(s.d() == 3);
  bool found = false;
  for (const auto& t : enumerate_generic(3))
    if (t.canonical() == s.canonical()) found = true;
  CHECK(found);
  CHECK(s.canonical() == "((1 2) 3)");
  // leaf counts add as k + (d-k+1) - 1
  for (int j = 0; j < 3; ++j) {
    auto g = connected_sum(FukayaTree::corolla(3), j, FukayaTree::corolla(3));
    CHECK(g.d() == 5);
  }
  CHECK_THROWS_AS((void)connected_sum(c2, 2, c2), ma::Error);
}

TEST_CASE("fukaya embeddings") {
  FukayaTree c2 = FukayaTree::corolla(2);
  // surjectivity excluded: no self-embeddings
  CHECK(c2.embeddings_from(c2).empty());
  // 2-corolla into each generic 3-leaf tree
  for (const auto& t : enumerate_generic(3)) {
    auto embs = t.embeddings_from(c2);
    CHECK(embs.size() == 1);
  }
  // 1-leaf tree into 2-corolla: either leaf edge path
  CHECK(c2.embeddings_from(FukayaTree::leaf()).size() == 2);
}

TEST_CASE("standard labels") {
  FukayaTree c2 = FukayaTree::corolla(2);
  auto labs = standard_labels(c2);
  // leaf edges (1,1), (1,2); trunk (2,1)
  CHECK(labs[c2.leaves()[0]] == EdgeLabel{1, 1});
  CHECK(labs[c2.leaves()[1]] == EdgeLabel{1, 2});
  CHECK(labs[0] == EdgeLabel{2, 1});

  auto single = standard_labels(FukayaTree::leaf());
  CHECK(single[0] == EdgeLabel{1, 1});
}

TEST_CASE("labels on a 6-leaf height-3 forest exist and are unique") {
  Forest f;
  f.trees.push_back(FukayaTree::parse("((1 2) 3)"));
  f.trees.push_back(FukayaTree::parse("(1 (2 3))"));
  CHECK(f.leaf_count() == 6);
  CHECK(f.height() == 3);
  auto labs = standard_labels(f);
  std::set<std::pair<int, int>> seen;
  for (auto& [edge, lab] : labs) {
    CHECK(seen.insert({lab.h, lab.j}).second);
    if (f.trees[static_cast<size_t>(edge.first)].is_leaf(edge.second)) CHECK(lab.h == 1);
  }
  // invariant under adding disjoint trees to the right
  Forest g = f;
  g.trees.push_back(FukayaTree::corolla(2));
  auto labs2 = standard_labels(g);
  for (auto& [edge, lab] : labs) CHECK(labs2.at(edge) == lab);
}

TEST_CASE("counters") {
  for (int d = 2; d <= 6; ++d)
    for (const auto& t : enumerate_generic(d)) CHECK(t.counters().nT == d - 1);

  FukayaTree c2 = FukayaTree::corolla(2);
  CHECK(c2.counters().nV.at(0) == 1);
  for (int v : c2.leaves()) CHECK(c2.counters().nE.at(v) == 1);

  FukayaTree comb = FukayaTree::parse("(((1 2) 3) 4)");
  auto ct = comb.counters();
  CHECK(ct.nE.at(0) == ct.nV.at(0) + 1);
  // n(v0) = n(e1) + n(e2) - 1 at every binary vertex
  for (const auto& [v, nv] : ct.nV) {
    const auto& ch = comb.children(v);
    REQUIRE(ch.size() == 2);
    CHECK(nv == ct.nE.at(ch[0]) + ct.nE.at(ch[1]) - 1);
  }
}
