#include "hitstat/graph.hpp"

#include <algorithm>
#include <queue>

namespace hitstat {

void Graph::add_edge(int u, int v) {
  if (has_edge(u, v)) return;
  auto& au = adj[static_cast<std::size_t>(u)];
  au.insert(std::lower_bound(au.begin(), au.end(), v), v);
  if (u != v) {
    auto& av = adj[static_cast<std::size_t>(v)];
    av.insert(std::lower_bound(av.begin(), av.end(), u), u);
  }
}

bool Graph::has_edge(int u, int v) const {
  const auto& au = adj[static_cast<std::size_t>(u)];
  return std::binary_search(au.begin(), au.end(), v);
}

long Graph::edge_count() const {
  long twice = 0;
  long loops = 0;
  for (int v = 0; v < n; ++v) {
    twice += degree(v);
    if (has_edge(v, v)) ++loops;
  }
  return (twice - loops) / 2 + loops;
}

bool Graph::connected() const {
  if (n == 0) return true;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int count = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++count;
        q.push(v);
      }
    }
  }
  return count == n;
}

bool Graph::bipartite() const {
  std::vector<int> color(static_cast<std::size_t>(n), -1);
  for (int s = 0; s < n; ++s) {
    if (color[static_cast<std::size_t>(s)] != -1) continue;
    color[static_cast<std::size_t>(s)] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj[static_cast<std::size_t>(u)]) {
        if (color[static_cast<std::size_t>(v)] == -1) {
          color[static_cast<std::size_t>(v)] = 1 - color[static_cast<std::size_t>(u)];
          q.push(v);
        } else if (color[static_cast<std::size_t>(v)] == color[static_cast<std::size_t>(u)]) {
          return false;
        }
      }
    }
  }
  return true;
}

bool Graph::has_self_loop() const {
  for (int v = 0; v < n; ++v)
    if (has_edge(v, v)) return true;
  return false;
}

}  // namespace hitstat
