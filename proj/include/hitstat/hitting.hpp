#pragma once

#include <cstdint>
#include <vector>

#include "hitstat/chain.hpp"

namespace hitstat {

/// Exact distribution of the hitting time tau(y) from x, up to a horizon.
/// Convention: tau(y) = min{ t >= 0 : X_t = y }, so pmf[0] = 1 when x = y.
struct HittingPmf {
  int x = 0;
  int y = 0;
  long horizon = 0;
  std::vector<double> pmf;  // pmf[t] = P_x(tau(y) = t), t = 0..horizon
  double tail = 0.0;        // P_x(tau(y) > horizon)
};

/// P_x(S_t) for t = 1..horizon, where S_t is the event that the state
/// visited at time t was not visited at any earlier time. s[0] is always 0.
struct SurprisePmf {
  int x = 0;
  long horizon = 0;
  std::vector<double> s;
};

struct MomentEstimate {
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  long samples = 0;
  double ci95_mean = 0.0;  // 1.96 * sqrt(variance / samples)
  std::uint64_t seed = 0;
};

struct SamplePath {
  std::vector<int> states;  // full path including both endpoints
  bool hit = false;         // false means the cap truncated the path
};

/// Exact hitting pmf by dynamic programming on the chain killed at y.
HittingPmf hitting_pmf(const ChainSpec& chain, int x, int y, long T);

/// s[t] = sum_y P_x(tau(y) = t); n hitting DPs, cost O(n * T * nnz).
SurprisePmf surprise_pmf(const ChainSpec& chain, int x, long T);

/// q[t] = P_pi(tau(y) = t) from the stationary start; x is recorded as -1.
HittingPmf stationary_hitting_pmf(const ChainSpec& chain, int y, long T);

/// E_x tau(y), by solving the linear system h(y) = 0,
/// h(z) = 1 + sum p(z,.) h(.) over states reachable from x. Throws
/// Unreachable when y cannot be hit with probability 1.
double expected_hitting(const ChainSpec& chain, int x, int y);

/// Simulates until y is hit or cap steps elapse; deterministic given seed.
SamplePath sample_path(const ChainSpec& chain, int x, int y, std::uint64_t seed, long cap);

/// Loop erasure: w_0 = start; k_i = largest index with z_{k_i} in
/// {w_0..w_i}; w_{i+1} = z_{k_i + 1}. Output states are pairwise distinct.
std::vector<int> loop_erase(const std::vector<int>& path);

/// Sample mean / variance of tau(y) over independent substreams of `seed`.
/// Throws CapExceeded if any sample truncates (a truncated sample would bias
/// the variance, so the whole estimate is rejected).
MomentEstimate mc_hitting_moments(const ChainSpec& chain, int x, int y, long samples,
                                  std::uint64_t seed, long cap);

inline constexpr long kDefaultSampleCap = 100000000;  // 1e8 steps

}  // namespace hitstat
