#include "hitstat/hitting.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "hitstat/rng.hpp"

namespace hitstat {

namespace {

// Core DP: start from `dist` (already zeroed at y unless x == y), push mass
// through the chain killed at y, recording the mass that enters y each step.
HittingPmf killed_dp(const ChainSpec& chain, std::vector<double> dist, int x, int y, long T,
                     double mass_at_y_at_t0) {
  HittingPmf out;
  out.x = x;
  out.y = y;
  out.horizon = T;
  out.pmf.assign(static_cast<std::size_t>(T) + 1, 0.0);
  out.pmf[0] = mass_at_y_at_t0;

  std::vector<double> next(static_cast<std::size_t>(chain.n));
  for (long t = 1; t <= T; ++t) {
    std::fill(next.begin(), next.end(), 0.0);
    double entering = 0.0;
    for (int i = 0; i < chain.n; ++i) {
      const double m = dist[static_cast<std::size_t>(i)];
      if (m == 0.0) continue;
      for (const Entry& e : chain.rows[static_cast<std::size_t>(i)]) {
        if (e.j == y)
          entering += m * e.p;
        else
          next[static_cast<std::size_t>(e.j)] += m * e.p;
      }
    }
    out.pmf[static_cast<std::size_t>(t)] = entering;
    dist.swap(next);
  }
  out.tail = std::accumulate(dist.begin(), dist.end(), 0.0);
  return out;
}

}  // namespace

HittingPmf hitting_pmf(const ChainSpec& chain, int x, int y, long T) {
  if (T < 0) throw BadParams("horizon must be nonnegative");
  if (x < 0 || x >= chain.n || y < 0 || y >= chain.n) throw BadIndex("state out of range");
  std::vector<double> dist(static_cast<std::size_t>(chain.n), 0.0);
  if (x == y) {
    // tau(y) = 0 by convention; nothing to propagate.
    HittingPmf out;
    out.x = x;
    out.y = y;
    out.horizon = T;
    out.pmf.assign(static_cast<std::size_t>(T) + 1, 0.0);
    out.pmf[0] = 1.0;
    out.tail = 0.0;
    return out;
  }
  dist[static_cast<std::size_t>(x)] = 1.0;
  return killed_dp(chain, std::move(dist), x, y, T, 0.0);
}

SurprisePmf surprise_pmf(const ChainSpec& chain, int x, long T) {
  if (T < 1) throw BadParams("horizon must be >= 1");
  SurprisePmf out;
  out.x = x;
  out.horizon = T;
  out.s.assign(static_cast<std::size_t>(T) + 1, 0.0);
  for (int y = 0; y < chain.n; ++y) {
    if (y == x) continue;  // tau(x) = 0 from x, so x never contributes at t >= 1
    HittingPmf h = hitting_pmf(chain, x, y, T);
    for (long t = 1; t <= T; ++t)
      out.s[static_cast<std::size_t>(t)] += h.pmf[static_cast<std::size_t>(t)];
  }
  return out;
}

HittingPmf stationary_hitting_pmf(const ChainSpec& chain, int y, long T) {
  StationaryDist sd = stationary(chain);
  std::vector<double> dist = sd.pi;
  double at_y = dist[static_cast<std::size_t>(y)];
  dist[static_cast<std::size_t>(y)] = 0.0;
  HittingPmf out = killed_dp(chain, std::move(dist), -1, y, T, at_y);
  return out;
}

double expected_hitting(const ChainSpec& chain, int x, int y) {
  if (x == y) return 0.0;
  // States reachable from x.
  std::vector<char> reach(static_cast<std::size_t>(chain.n), 0);
  std::queue<int> q;
  q.push(x);
  reach[static_cast<std::size_t>(x)] = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    if (u == y) continue;  // the walk stops at y
    for (const Entry& e : chain.rows[static_cast<std::size_t>(u)]) {
      if (e.p > 0.0 && !reach[static_cast<std::size_t>(e.j)]) {
        reach[static_cast<std::size_t>(e.j)] = 1;
        q.push(e.j);
      }
    }
  }
  if (!reach[static_cast<std::size_t>(y)]) throw Unreachable("target not reachable from start");

  // Every reachable state must itself reach y, otherwise tau(y) = inf with
  // positive probability.
  {
    std::vector<char> back(static_cast<std::size_t>(chain.n), 0);
    back[static_cast<std::size_t>(y)] = 1;
    std::queue<int> bq;
    bq.push(y);
    while (!bq.empty()) {
      int v = bq.front();
      bq.pop();
      for (int u = 0; u < chain.n; ++u) {
        if (back[static_cast<std::size_t>(u)] || u == y) continue;
        if (chain.prob(u, v) > 0.0) {
          back[static_cast<std::size_t>(u)] = 1;
          bq.push(u);
        }
      }
    }
    for (int u = 0; u < chain.n; ++u)
      if (reach[static_cast<std::size_t>(u)] && !back[static_cast<std::size_t>(u)])
        throw Unreachable("an absorbing set avoiding the target is reachable");
  }

  // Solve (I - Q) h = 1 on reachable states minus y.
  std::vector<int> idx(static_cast<std::size_t>(chain.n), -1);
  std::vector<int> members;
  for (int u = 0; u < chain.n; ++u) {
    if (reach[static_cast<std::size_t>(u)] && u != y) {
      idx[static_cast<std::size_t>(u)] = static_cast<int>(members.size());
      members.push_back(u);
    }
  }
  const int m = static_cast<int>(members.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m);
  for (int r = 0; r < m; ++r) {
    for (const Entry& e : chain.rows[static_cast<std::size_t>(members[static_cast<std::size_t>(r)])]) {
      int c = idx[static_cast<std::size_t>(e.j)];
      if (c >= 0) a(r, c) -= e.p;
    }
  }
  Eigen::VectorXd h = a.partialPivLu().solve(Eigen::VectorXd::Ones(m));
  return h(idx[static_cast<std::size_t>(x)]);
}

namespace {

int sample_step(const ChainSpec& chain, int state, SplitMix64& rng) {
  const auto& row = chain.rows[static_cast<std::size_t>(state)];
  double u = rng.next_double();
  double acc = 0.0;
  for (const Entry& e : row) {
    acc += e.p;
    if (u < acc) return e.j;
  }
  return row.back().j;  // float dust
}

}  // namespace

SamplePath sample_path(const ChainSpec& chain, int x, int y, std::uint64_t seed, long cap) {
  if (cap < 1) throw BadParams("cap must be >= 1");
  SamplePath out;
  out.states.push_back(x);
  if (x == y) {
    out.hit = true;
    return out;
  }
  SplitMix64 rng(seed);
  int cur = x;
  for (long step = 0; step < cap; ++step) {
    cur = sample_step(chain, cur, rng);
    out.states.push_back(cur);
    if (cur == y) {
      out.hit = true;
      return out;
    }
  }
  out.hit = false;
  return out;
}

std::vector<int> loop_erase(const std::vector<int>& path) {
  if (path.empty()) throw BadParams("path is empty");
  // Last occurrence of each state; k_i is then a running maximum over the
  // states kept so far.
  std::unordered_map<int, std::size_t> last;
  for (std::size_t i = 0; i < path.size(); ++i) last[path[i]] = i;

  std::vector<int> w;
  w.push_back(path.front());
  std::size_t k = last[path.front()];
  const std::size_t end = path.size() - 1;
  while (k < end) {
    int next = path[k + 1];
    w.push_back(next);
    k = std::max(k, last[next]);
  }
  return w;
}

MomentEstimate mc_hitting_moments(const ChainSpec& chain, int x, int y, long samples,
                                  std::uint64_t seed, long cap) {
  if (samples < 2) throw BadParams("need at least 2 samples");
  double sum = 0.0;
  double sumsq = 0.0;
  for (long i = 0; i < samples; ++i) {
    SplitMix64 rng = SplitMix64::substream(seed, static_cast<std::uint64_t>(i));
    long steps = 0;
    int cur = x;
    while (cur != y) {
      if (steps >= cap)
        throw CapExceeded("sample " + std::to_string(i) + " exceeded the step cap");
      cur = sample_step(chain, cur, rng);
      ++steps;
    }
    const double tau = static_cast<double>(steps);
    sum += tau;
    sumsq += tau * tau;
  }
  MomentEstimate est;
  est.samples = samples;
  est.seed = seed;
  est.mean = sum / static_cast<double>(samples);
  const double ns = static_cast<double>(samples);
  est.variance = std::max(0.0, (sumsq - ns * est.mean * est.mean) / (ns - 1.0));
  est.ci95_mean = 1.96 * std::sqrt(est.variance / ns);
  return est;
}

}  // namespace hitstat
