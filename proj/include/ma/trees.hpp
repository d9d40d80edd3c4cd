#pragma once

// Fukaya trees: planar rooted trees with ordered leaves, their codimension-0/1
// strata, collapse/expansion transitions, connected sums, subtree embeddings
// and the generation/leftmost-path edge labels used to pick decorations.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ma/base.hpp"

namespace ma::trees {

// Node 0 is the upper endpoint of the root edge (an interior vertex, or the
// unique leaf when d = 1). Every node identifies the edge arriving at it from
// the root side, so edge ids coincide with node ids: edge 0 is the root edge,
// edges at leaves are leaf edges, all other edges are interior.
class FukayaTree {
 public:
  static FukayaTree leaf();                                // the 1-leaf tree
  static FukayaTree corolla(int d);                        // one vertex, d leaves
  static FukayaTree parse(const std::string& canonical);   // "((1 2) 3)"

  int d() const { return d_; }
  int node_count() const { return static_cast<int>(parent_.size()); }
  bool is_leaf(int v) const { return children_[v].empty(); }
  int leaf_index(int v) const { return leaf_index_[v]; }   // 1-based, 0 if interior
  int parent(int v) const { return parent_[v]; }
  const std::vector<int>& children(int v) const { return children_[v]; }
  const std::vector<int>& leaves() const { return leaves_; }  // node ids, planar order

  bool is_interior_edge(int e) const { return e != 0 && !is_leaf(e); }
  std::vector<int> interior_edges() const;
  int interior_edge_count() const { return static_cast<int>(interior_edges().size()); }
  bool is_generic() const;  // all interior vertices binary

  // Subtree data for the edge arriving at node v.
  int subtree_leaf_count(int v) const;
  int leftmost_leaf(int v) const;  // 1-based leaf index of the leftmost leaf below v

  std::string canonical() const;
  bool operator==(const FukayaTree& o) const { return canonical() == o.canonical(); }

  FukayaTree collapse_edge(int e) const;
  // The two generic trees collapsing onto a codimension-1 tree.
  std::pair<FukayaTree, FukayaTree> expansions() const;
  int codim1_vertex() const;  // the unique 3-child vertex, or -1

  friend FukayaTree connected_sum(const FukayaTree& ta, int j, const FukayaTree& tb);

  struct Counters {
    int nT = 0;
    std::map<int, int> nE;  // edge id -> n(e)
    std::map<int, int> nV;  // interior vertex id -> n(v)
  };
  Counters counters() const;

  // Simplicial injective non-surjective maps T0 -> this, leaves to consecutive
  // leaves increasingly. Each embedding is a map node-of-T0 -> node-of-this.
  std::vector<std::map<int, int>> embeddings_from(const FukayaTree& t0) const;

 private:
  void validate() const;
  void renumber_leaves();

  std::vector<int> parent_;
  std::vector<std::vector<int>> children_;
  std::vector<int> leaf_index_;
  std::vector<int> leaves_;
  int d_ = 0;

  friend class TreeBuilder;
};

std::vector<FukayaTree> enumerate_generic(int d);
FukayaTree connected_sum(const FukayaTree& ta, int j, const FukayaTree& tb);

// Catalan number C_n (test oracle uses its own independent counter).
Int catalan(int n);

// ---------------------------------------------------------------------------
// Forests and standard labels.

struct EdgeLabel {
  int h = 0;  // generation
  int j = 0;  // leftmost maximal monotone path index (global leaf index)
  bool operator==(const EdgeLabel& o) const { return h == o.h && j == o.j; }
  bool operator<(const EdgeLabel& o) const { return h != o.h ? h < o.h : j < o.j; }
};

struct Forest {
  std::vector<FukayaTree> trees;
  int height() const;
  int leaf_count() const;
};

// Key: (tree index in forest, edge id).
std::map<std::pair<int, int>, EdgeLabel> standard_labels(const Forest& f);
std::map<int, EdgeLabel> standard_labels(const FukayaTree& t);

}  // namespace ma::trees
