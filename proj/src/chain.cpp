#include "hitstat/chain.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stack>

namespace hitstat {

double ChainSpec::prob(int i, int j) const {
  const auto& row = rows[static_cast<std::size_t>(i)];
  auto it = std::lower_bound(row.begin(), row.end(), j,
                             [](const Entry& e, int k) { return e.j < k; });
  return (it != row.end() && it->j == j) ? it->p : 0.0;
}

ChainSpec validate(ChainSpec raw) {
  if (raw.n <= 0) throw BadParams("state count must be positive");
  if (static_cast<int>(raw.states.size()) != raw.n)
    throw BadParams("label count does not match n");
  if (static_cast<int>(raw.rows.size()) != raw.n)
    throw BadParams("row count does not match n");

  std::set<std::string> labels(raw.states.begin(), raw.states.end());
  if (static_cast<int>(labels.size()) != raw.n)
    throw DuplicateLabel("state labels are not unique");

  for (int i = 0; i < raw.n; ++i) {
    auto& row = raw.rows[static_cast<std::size_t>(i)];
    std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) { return a.j < b.j; });
    double sum = 0.0;
    int prev = -1;
    for (const Entry& e : row) {
      if (e.j < 0 || e.j >= raw.n)
        throw BadIndex("row " + std::to_string(i) + " targets state " + std::to_string(e.j));
      if (e.j == prev)
        throw BadIndex("row " + std::to_string(i) + " has a duplicate target " + std::to_string(e.j));
      prev = e.j;
      if (e.p < 0.0)
        throw NegativeEntry("row " + std::to_string(i) + " entry " + std::to_string(e.j));
      sum += e.p;
    }
    if (std::abs(sum - 1.0) > kRowSumTol)
      throw RowSumError("row " + std::to_string(i) + " sums to " + std::to_string(sum));
  }
  return raw;
}

std::vector<double> step_dist(const ChainSpec& chain, const std::vector<double>& dist) {
  std::vector<double> out(static_cast<std::size_t>(chain.n), 0.0);
  for (int i = 0; i < chain.n; ++i) {
    const double m = dist[static_cast<std::size_t>(i)];
    if (m == 0.0) continue;
    for (const Entry& e : chain.rows[static_cast<std::size_t>(i)])
      out[static_cast<std::size_t>(e.j)] += m * e.p;
  }
  return out;
}

std::vector<double> evolve(const ChainSpec& chain, std::vector<double> dist, long t) {
  if (static_cast<int>(dist.size()) != chain.n) throw BadParams("distribution size mismatch");
  double sum = std::accumulate(dist.begin(), dist.end(), 0.0);
  if (std::abs(sum - 1.0) > kRowSumTol) throw BadParams("input distribution does not sum to 1");
  for (long s = 0; s < t; ++s) dist = step_dist(chain, dist);
  return dist;
}

namespace {

// Tarjan SCCs, iterative. Returns component index per state; components are
// numbered in reverse topological order.
std::vector<int> scc_components(const ChainSpec& chain, int& count) {
  const int n = chain.n;
  std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0),
      comp(static_cast<std::size_t>(n), -1);
  std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
  std::vector<int> stack;
  int next_index = 0;
  count = 0;

  struct Frame {
    int v;
    std::size_t child;
  };
  for (int root = 0; root < n; ++root) {
    if (index[static_cast<std::size_t>(root)] != -1) continue;
    std::stack<Frame> frames;
    frames.push({root, 0});
    while (!frames.empty()) {
      Frame& f = frames.top();
      int v = f.v;
      if (f.child == 0) {
        index[static_cast<std::size_t>(v)] = low[static_cast<std::size_t>(v)] = next_index++;
        stack.push_back(v);
        on_stack[static_cast<std::size_t>(v)] = 1;
      }
      const auto& row = chain.rows[static_cast<std::size_t>(v)];
      bool descended = false;
      while (f.child < row.size()) {
        const Entry& e = row[f.child];
        ++f.child;
        if (e.p == 0.0) continue;
        int w = e.j;
        if (index[static_cast<std::size_t>(w)] == -1) {
          frames.push({w, 0});
          descended = true;
          break;
        }
        if (on_stack[static_cast<std::size_t>(w)])
          low[static_cast<std::size_t>(v)] =
              std::min(low[static_cast<std::size_t>(v)], index[static_cast<std::size_t>(w)]);
      }
      if (descended) continue;
      if (low[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
        while (true) {
          int w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = 0;
          comp[static_cast<std::size_t>(w)] = count;
          if (w == v) break;
        }
        ++count;
      }
      frames.pop();
      if (!frames.empty()) {
        int p = frames.top().v;
        low[static_cast<std::size_t>(p)] =
            std::min(low[static_cast<std::size_t>(p)], low[static_cast<std::size_t>(v)]);
      }
    }
  }
  return comp;
}

// pi candidate from detailed balance along a spanning tree of the support
// graph; valid for any reversible chain and costs O(nnz).
bool reversible_candidate(const ChainSpec& chain, std::vector<double>& pi) {
  const int n = chain.n;
  pi.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  pi[0] = 1.0;
  order.push_back(0);
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  seen[0] = 1;
  for (std::size_t head = 0; head < order.size(); ++head) {
    int u = order[head];
    for (const Entry& e : chain.rows[static_cast<std::size_t>(u)]) {
      if (e.p == 0.0 || seen[static_cast<std::size_t>(e.j)]) continue;
      double back = chain.prob(e.j, u);
      if (back <= 0.0) return false;  // support not symmetric: not reversible
      pi[static_cast<std::size_t>(e.j)] = pi[static_cast<std::size_t>(u)] * e.p / back;
      seen[static_cast<std::size_t>(e.j)] = 1;
      order.push_back(e.j);
    }
  }
  if (static_cast<int>(order.size()) != n) return false;  // not irreducible
  double sum = std::accumulate(pi.begin(), pi.end(), 0.0);
  for (double& v : pi) v /= sum;
  return true;
}

double stationary_residual(const ChainSpec& chain, const std::vector<double>& pi) {
  std::vector<double> next = step_dist(chain, pi);
  double r = 0.0;
  for (int i = 0; i < chain.n; ++i)
    r = std::max(r, std::abs(next[static_cast<std::size_t>(i)] - pi[static_cast<std::size_t>(i)]));
  return r;
}

}  // namespace

int terminal_class_count(const ChainSpec& chain) {
  int count = 0;
  std::vector<int> comp = scc_components(chain, count);
  std::vector<char> closed(static_cast<std::size_t>(count), 1);
  for (int v = 0; v < chain.n; ++v)
    for (const Entry& e : chain.rows[static_cast<std::size_t>(v)])
      if (e.p > 0.0 && comp[static_cast<std::size_t>(e.j)] != comp[static_cast<std::size_t>(v)])
        closed[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])] = 0;
  int terminals = 0;
  for (char c : closed) terminals += c;
  return terminals;
}

std::vector<int> closed_class_of(const ChainSpec& chain, int x) {
  int count = 0;
  std::vector<int> comp = scc_components(chain, count);
  int cx = comp[static_cast<std::size_t>(x)];
  std::vector<int> members;
  for (int v = 0; v < chain.n; ++v)
    if (comp[static_cast<std::size_t>(v)] == cx) members.push_back(v);
  for (int v : members)
    for (const Entry& e : chain.rows[static_cast<std::size_t>(v)])
      if (e.p > 0.0 && comp[static_cast<std::size_t>(e.j)] != cx)
        throw NotIrreducible("communicating class of state " + std::to_string(x) +
                             " is not closed");
  return members;
}

StationaryDist stationary(const ChainSpec& chain) {
  if (terminal_class_count(chain) != 1)
    throw NotUnique("chain has more than one closed communicating class");

  StationaryDist out;
  // Reversible chains (graph walks, symmetric-weight corpora, cycles) admit
  // an O(nnz) detailed-balance solution; try that first.
  if (reversible_candidate(chain, out.pi)) {
    out.residual = stationary_residual(chain, out.pi);
    if (out.residual <= kStationaryResidualTol) return out;
  }

  if (chain.n <= 2000) {
    // Solve pi (P - I) = 0 with the normalization sum(pi) = 1 replacing one
    // equation.
    const int n = chain.n;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (const Entry& e : chain.rows[static_cast<std::size_t>(i)]) a(e.j, i) += e.p;
      a(i, i) -= 1.0;
    }
    a.row(n - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;
    Eigen::VectorXd pi = a.partialPivLu().solve(b);
    out.pi.assign(pi.data(), pi.data() + n);
    for (double& v : out.pi) v = std::max(v, 0.0);
    double sum = std::accumulate(out.pi.begin(), out.pi.end(), 0.0);
    for (double& v : out.pi) v /= sum;
    out.residual = stationary_residual(chain, out.pi);
    if (out.residual > kStationaryResidualTol)
      throw NotUnique("linear solve did not reach residual tolerance");
    return out;
  }

  // Large chains: power iteration on the lazy chain (I+P)/2, which kills
  // periodicity and has the same fixed point.
  std::vector<double> pi(static_cast<std::size_t>(chain.n), 1.0 / chain.n);
  const long max_iter = 2000000;
  for (long it = 0; it < max_iter; ++it) {
    std::vector<double> next = step_dist(chain, pi);
    double diff = 0.0;
    for (int i = 0; i < chain.n; ++i) {
      next[static_cast<std::size_t>(i)] =
          0.5 * (next[static_cast<std::size_t>(i)] + pi[static_cast<std::size_t>(i)]);
      diff = std::max(diff,
                      std::abs(next[static_cast<std::size_t>(i)] - pi[static_cast<std::size_t>(i)]));
    }
    pi.swap(next);
    if (diff <= kStationaryResidualTol / 4 && it % 16 == 0) {
      out.pi = pi;
      out.residual = stationary_residual(chain, pi);
      if (out.residual <= kStationaryResidualTol) return out;
    }
  }
  out.pi = pi;
  out.residual = stationary_residual(chain, pi);
  if (out.residual > kStationaryResidualTol)
    throw NotUnique("power iteration did not converge");
  return out;
}

bool is_reversible(const ChainSpec& chain, const StationaryDist& pi, double tol) {
  for (int x = 0; x < chain.n; ++x) {
    for (const Entry& e : chain.rows[static_cast<std::size_t>(x)]) {
      if (e.j < x) continue;  // each unordered pair once
      double forward = pi.pi[static_cast<std::size_t>(x)] * e.p;
      double backward = pi.pi[static_cast<std::size_t>(e.j)] * chain.prob(e.j, x);
      if (std::abs(forward - backward) > tol) return false;
    }
    // pairs where only the reverse entry exists
    for (int y = 0; y < x; ++y) {
      if (chain.prob(x, y) == 0.0 && chain.prob(y, x) != 0.0) {
        double backward = pi.pi[static_cast<std::size_t>(y)] * chain.prob(y, x);
        if (std::abs(backward) > tol) return false;
      }
    }
  }
  return true;
}

namespace {

double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

}  // namespace

MixingProfile mixing_profile(const ChainSpec& chain, int x, int T) {
  StationaryDist sd = stationary(chain);
  MixingProfile mp;
  mp.x = x;
  mp.horizon = T;
  mp.d.reserve(static_cast<std::size_t>(T) + 1);
  std::vector<double> dist(static_cast<std::size_t>(chain.n), 0.0);
  dist[static_cast<std::size_t>(x)] = 1.0;
  for (int t = 0; t <= T; ++t) {
    mp.d.push_back(tv_distance(dist, sd.pi));
    if (t < T) dist = step_dist(chain, dist);
  }
  return mp;
}

int mixing_time_from(const ChainSpec& chain, int x, double eps, int t_max) {
  StationaryDist sd = stationary(chain);
  std::vector<double> dist(static_cast<std::size_t>(chain.n), 0.0);
  dist[static_cast<std::size_t>(x)] = 1.0;
  for (int t = 0; t <= t_max; ++t) {
    if (tv_distance(dist, sd.pi) <= eps) return t;
    dist = step_dist(chain, dist);
  }
  throw HorizonTooSmall("d_x(t) stays above eps up to t_max");
}

int mixing_time(const ChainSpec& chain, double eps, int t_max) {
  StationaryDist sd = stationary(chain);
  // Evolve all point starts simultaneously.
  std::vector<std::vector<double>> dists(static_cast<std::size_t>(chain.n));
  for (int x = 0; x < chain.n; ++x) {
    dists[static_cast<std::size_t>(x)].assign(static_cast<std::size_t>(chain.n), 0.0);
    dists[static_cast<std::size_t>(x)][static_cast<std::size_t>(x)] = 1.0;
  }
  for (int t = 0; t <= t_max; ++t) {
    double worst = 0.0;
    for (int x = 0; x < chain.n; ++x)
      worst = std::max(worst, tv_distance(dists[static_cast<std::size_t>(x)], sd.pi));
    if (worst <= eps) return t;
    if (t < t_max)
      for (int x = 0; x < chain.n; ++x)
        dists[static_cast<std::size_t>(x)] = step_dist(chain, dists[static_cast<std::size_t>(x)]);
  }
  throw HorizonTooSmall("max_x d_x(t) stays above eps up to t_max");
}

}  // namespace hitstat
