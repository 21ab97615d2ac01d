#pragma once

#include <cstdint>
#include <vector>

#include "causetlab/poset.hpp"
#include "causetlab/rational.hpp"

namespace causetlab {

// Rooted binary-tree subtree machinery backing the uniform-subtree kernel.
//
// Nodes of the infinite d-ary tree are heap ids: root 0, children of v are
// d*v+1 .. d*v+d.  A "subtree" here is a set of nodes containing the root
// and closed under parents; we enumerate all of them up to a size cap and
// link consecutive sizes by a coupling: a joint law on (T, T') with T an
// s-subtree, T' an (s+1)-superset of T, whose marginals are uniform on each
// side.  Such a coupling exists for every s (checked by exact max-flow) but
// is not unique in general; we fix the one produced by a deterministic
// max-flow computation so runs are reproducible.
struct SubtreeLayer {
  // Subtrees of one size, each a sorted vector of heap ids.
  std::vector<std::vector<int>> trees;
};

struct SubtreeTransition {
  // transition[i] lists (j, prob) with prob = P(T' = layer_{s+1}[j] | T = layer_s[i]);
  // probabilities are exact rationals summing to 1 per row.
  std::vector<std::vector<std::pair<int, Rational>>> rows;
};

class SubtreeTables {
 public:
  SubtreeTables(int d, int max_size);

  int d() const { return d_; }
  int max_size() const { return max_size_; }
  const SubtreeLayer& layer(int size) const;                // size in [1, max_size]
  const SubtreeTransition& transition(int size) const;      // size -> size+1, size in [1, max_size-1]
  std::int64_t layer_count(int size) const;

  // The order induced on a subtree's nodes (ancestor = below), with nodes
  // indexed by position in the sorted id vector.
  FinitePoset tree_order(int size, int index) const;

 private:
  int d_;
  int max_size_;
  std::vector<SubtreeLayer> layers_;           // layers_[s-1] = size-s subtrees
  std::vector<SubtreeTransition> transitions_;  // transitions_[s-1] = s -> s+1
};

// Exact max-flow on small integer-capacity networks (Dinic).  Used to build
// the couplings; exposed for tests.
class MaxFlow {
 public:
  explicit MaxFlow(int n);
  void add_edge(int from, int to, std::int64_t cap);
  std::int64_t run(int source, int sink);
  // Flow currently on the k-th added edge (in add_edge order).
  std::int64_t edge_flow(int k) const;

 private:
  struct Edge {
    int to;
    std::int64_t cap;
    int rev;
  };
  bool bfs(int s, int t);
  std::int64_t dfs(int v, int t, std::int64_t f);

  std::vector<std::vector<Edge>> graph_;
  std::vector<std::pair<int, int>> edge_refs_;  // (vertex, index) per added edge
  std::vector<int> level_, iter_;
};

}  // namespace causetlab
