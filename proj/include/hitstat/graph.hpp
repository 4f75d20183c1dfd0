#pragma once

#include <vector>

namespace hitstat {

/// Simple undirected graph as sorted adjacency lists. Parallel edges are
/// never stored; self-loops only if explicitly added.
struct Graph {
  int n = 0;
  std::vector<std::vector<int>> adj;

  explicit Graph(int n_ = 0) : n(n_), adj(static_cast<std::size_t>(n_)) {}

  void add_edge(int u, int v);
  bool has_edge(int u, int v) const;
  int degree(int v) const { return static_cast<int>(adj[static_cast<std::size_t>(v)].size()); }
  long edge_count() const;
  bool connected() const;
  bool bipartite() const;
  bool has_self_loop() const;
};

}  // namespace hitstat
