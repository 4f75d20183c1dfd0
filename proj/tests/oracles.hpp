#pragma once

// Brute-force oracles for the test suites. Everything here is deliberately
// independent of the library's DP implementations: path enumeration instead
// of killed propagation, lgamma instead of the saddle-point pmf, explicit
// composition sums instead of the convolution recursion.

#include <cmath>
#include <cstdint>
#include <vector>

#include "hitstat/chain.hpp"

namespace oracle {

// P_x(tau(y) = t) by full path enumeration; cost O(n^t).
inline double hitting_prob(const hitstat::ChainSpec& c, int x, int y, int t) {
  if (x == y) return t == 0 ? 1.0 : 0.0;
  if (t == 0) return 0.0;
  double total = 0.0;
  struct Frame {
    int state;
    int time;
    double prob;
  };
  std::vector<Frame> stack{{x, 0, 1.0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    for (const hitstat::Entry& e : c.rows[static_cast<std::size_t>(f.state)]) {
      if (e.p == 0.0) continue;
      const double p = f.prob * e.p;
      if (e.j == y) {
        if (f.time + 1 == t) total += p;
        continue;  // first visit happened; path is done
      }
      if (f.time + 1 < t) stack.push_back({e.j, f.time + 1, p});
    }
  }
  return total;
}

// P_x(S_t): probability the state at time t was never visited before,
// tracked with an explicit visited bitmask (needs n <= 32).
inline double surprise_prob(const hitstat::ChainSpec& c, int x, int t) {
  struct Frame {
    int state;
    int time;
    std::uint64_t visited;
    double prob;
  };
  double total = 0.0;
  std::vector<Frame> stack{{x, 0, 1ULL << x, 1.0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    for (const hitstat::Entry& e : c.rows[static_cast<std::size_t>(f.state)]) {
      if (e.p == 0.0) continue;
      const double p = f.prob * e.p;
      const bool fresh = !(f.visited >> e.j & 1);
      if (f.time + 1 == t) {
        if (fresh) total += p;
      } else {
        stack.push_back({e.j, f.time + 1, f.visited | (1ULL << e.j), p});
      }
    }
  }
  return total;
}

// log C(a, b) via lgamma.
inline double log_binom(double a, double b) {
  return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
}

// Negative-binomial pmf via lgamma, accurate to ~1e-11 relative for
// moderate sizes; used to cross-check the saddle-point evaluation.
inline double neg_binomial_lgamma(long n, long m, double p) {
  if (m == 0) return std::pow(p, static_cast<double>(n));
  const double lc = log_binom(static_cast<double>(m + n - 1), static_cast<double>(n - 1));
  return std::exp(lc + static_cast<double>(n) * std::log(p) +
                  static_cast<double>(m) * std::log1p(-p));
}

// P(sum of geometrics = t) by explicit recursion over compositions.
inline double geom_sum_enum(const std::vector<double>& q, std::size_t i, long t) {
  if (i == q.size()) return t == 0 ? 1.0 : 0.0;
  double total = 0.0;
  double geom = 1.0 - q[i];
  for (long k = 0; k <= t; ++k) {
    total += geom * geom_sum_enum(q, i + 1, t - k);
    geom *= q[i];
  }
  return total;
}

// log(N!) by compensated summation of logs; independent of lgamma.
inline double log_factorial_sum(long n) {
  double sum = 0.0, comp = 0.0;
  for (long k = 2; k <= n; ++k) {
    const double term = std::log(static_cast<double>(k));
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace oracle
