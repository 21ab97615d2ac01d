#include "causetlab/lw_coupling.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>

namespace causetlab {

// ---------------------------------------------------------------------------
// MaxFlow (Dinic)

MaxFlow::MaxFlow(int n) : graph_(n), level_(n), iter_(n) {}

void MaxFlow::add_edge(int from, int to, std::int64_t cap) {
  edge_refs_.emplace_back(from, static_cast<int>(graph_[from].size()));
  graph_[from].push_back({to, cap, static_cast<int>(graph_[to].size())});
  graph_[to].push_back({from, 0, static_cast<int>(graph_[from].size()) - 1});
}

bool MaxFlow::bfs(int s, int t) {
  std::fill(level_.begin(), level_.end(), -1);
  std::queue<int> q;
  level_[s] = 0;
  q.push(s);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (const Edge& e : graph_[v]) {
      if (e.cap > 0 && level_[e.to] < 0) {
        level_[e.to] = level_[v] + 1;
        q.push(e.to);
      }
    }
  }
  return level_[t] >= 0;
}

std::int64_t MaxFlow::dfs(int v, int t, std::int64_t f) {
  if (v == t) return f;
  for (int& i = iter_[v]; i < static_cast<int>(graph_[v].size()); ++i) {
    Edge& e = graph_[v][i];
    if (e.cap > 0 && level_[v] < level_[e.to]) {
      std::int64_t d = dfs(e.to, t, std::min(f, e.cap));
      if (d > 0) {
        e.cap -= d;
        graph_[e.to][e.rev].cap += d;
        return d;
      }
    }
  }
  return 0;
}

std::int64_t MaxFlow::run(int source, int sink) {
  std::int64_t flow = 0;
  while (bfs(source, sink)) {
    std::fill(iter_.begin(), iter_.end(), 0);
    std::int64_t f;
    while ((f = dfs(source, sink, INT64_MAX)) > 0) flow += f;
  }
  return flow;
}

std::int64_t MaxFlow::edge_flow(int k) const {
  auto [v, idx] = edge_refs_.at(k);
  const Edge& e = graph_[v][idx];
  // Residual on the reverse edge equals the flow pushed forward.
  return graph_[e.to][e.rev].cap - 0;
}

// ---------------------------------------------------------------------------
// SubtreeTables

namespace {

int parent_of(int v, int d) { return (v - 1) / d; }

bool is_ancestor(int a, int b, int d) {
  // a strict ancestor of b in the infinite d-ary heap
  while (b > a) b = parent_of(b, d);
  return b == a;
}

}  // namespace

SubtreeTables::SubtreeTables(int d, int max_size) : d_(d), max_size_(max_size) {
  if (d < 1) throw std::invalid_argument("subtree tables: branching degree must be >= 1");
  if (max_size < 1 || max_size > 12)
    throw std::invalid_argument("subtree tables: size cap must be in [1, 12]");

  layers_.resize(max_size_);
  layers_[0].trees = {{0}};
  for (int s = 1; s < max_size_; ++s) {
    std::vector<std::vector<int>> next;
    for (const auto& tree : layers_[s - 1].trees) {
      for (int v : tree) {
        for (int c = d_ * v + 1; c <= d_ * v + d_; ++c) {
          if (std::binary_search(tree.begin(), tree.end(), c)) continue;
          std::vector<int> grown = tree;
          grown.insert(std::upper_bound(grown.begin(), grown.end(), c), c);
          next.push_back(std::move(grown));
        }
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    layers_[s].trees = std::move(next);
  }

  // Couple consecutive layers by exact max-flow.  Scaled units: each size-s
  // tree ships N_{s+1} units, each size-(s+1) tree absorbs N_s units; an
  // integral flow saturating everything exists iff a coupling with uniform
  // marginals does, and P(T' | T) = flow(T -> T') / N_{s+1}.
  transitions_.resize(max_size_ > 0 ? max_size_ - 1 : 0);
  for (int s = 1; s < max_size_; ++s) {
    const auto& lo = layers_[s - 1].trees;
    const auto& hi = layers_[s].trees;
    const auto ns = static_cast<std::int64_t>(lo.size());
    const auto ns1 = static_cast<std::int64_t>(hi.size());
    const int source = 0;
    const int sink = static_cast<int>(ns + ns1) + 1;
    MaxFlow net(sink + 1);
    std::vector<std::tuple<int, int, int>> mid_edges;  // (edge index, i, j)
    for (int i = 0; i < static_cast<int>(ns); ++i)
      net.add_edge(source, 1 + i, ns1);
    for (int j = 0; j < static_cast<int>(ns1); ++j)
      net.add_edge(1 + static_cast<int>(ns) + j, sink, ns);
    int edge_k = static_cast<int>(ns + ns1);
    for (int i = 0; i < static_cast<int>(ns); ++i) {
      for (int j = 0; j < static_cast<int>(ns1); ++j) {
        if (!std::includes(hi[j].begin(), hi[j].end(), lo[i].begin(), lo[i].end())) continue;
        net.add_edge(1 + i, 1 + static_cast<int>(ns) + j, ns * ns1);
        mid_edges.emplace_back(edge_k++, i, j);
      }
    }
    std::int64_t flow = net.run(source, sink);
    if (flow != ns * ns1)
      throw std::logic_error("subtree tables: no uniform coupling at size " + std::to_string(s));
    SubtreeTransition tr;
    tr.rows.resize(lo.size());
    for (auto [k, i, j] : mid_edges) {
      std::int64_t f = net.edge_flow(k);
      if (f > 0) {
        Rational w(static_cast<long>(f), static_cast<long>(ns1));
        w.canonicalize();
        tr.rows[i].emplace_back(j, w);
      }
    }
    transitions_[s - 1] = std::move(tr);
  }
}

const SubtreeLayer& SubtreeTables::layer(int size) const {
  if (size < 1 || size > max_size_) throw std::out_of_range("subtree layer out of range");
  return layers_[size - 1];
}

const SubtreeTransition& SubtreeTables::transition(int size) const {
  if (size < 1 || size >= max_size_) throw std::out_of_range("subtree transition out of range");
  return transitions_[size - 1];
}

std::int64_t SubtreeTables::layer_count(int size) const {
  return static_cast<std::int64_t>(layer(size).trees.size());
}

FinitePoset SubtreeTables::tree_order(int size, int index) const {
  const auto& tree = layer(size).trees.at(index);
  int n = static_cast<int>(tree.size());
  std::vector<std::pair<int, int>> rels;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (tree[i] < tree[j] && is_ancestor(tree[i], tree[j], d_)) rels.emplace_back(i, j);
  return FinitePoset::from_relations(n, rels);
}

}  // namespace causetlab
