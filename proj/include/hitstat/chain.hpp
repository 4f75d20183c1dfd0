#pragma once

#include <map>
#include <string>
#include <vector>

#include "hitstat/errors.hpp"

namespace hitstat {

/// One sparse transition entry: probability `p` of moving to state `j`.
struct Entry {
  int j;
  double p;
};

/// Row-stochastic transition structure over n named states. Rows are sparse
/// (index, probability) lists kept sorted by target index. Instances are
/// immutable after validate(); every operation below is a pure function.
struct ChainSpec {
  int n = 0;
  std::vector<std::string> states;
  std::vector<std::vector<Entry>> rows;
  std::map<std::string, std::string> metadata;

  /// p(i, j), zero if the entry is absent.
  double prob(int i, int j) const;
};

/// Tolerances used throughout: row sums must hold to 1e-12 on input and are
/// allowed to drift to 1e-9 after 1e6 sparse applications.
inline constexpr double kRowSumTol = 1e-12;
inline constexpr double kStationaryResidualTol = 1e-10;

/// Checks all ChainSpec invariants and returns the chain with rows sorted.
/// Throws RowSumError, NegativeEntry, BadIndex or DuplicateLabel.
ChainSpec validate(ChainSpec raw);

/// dist * P, one sparse application.
std::vector<double> step_dist(const ChainSpec& chain, const std::vector<double>& dist);

/// dist * P^t by t sparse row applications. Requires dist to sum to 1
/// within 1e-12.
std::vector<double> evolve(const ChainSpec& chain, std::vector<double> dist, long t);

struct StationaryDist {
  std::vector<double> pi;
  double residual = 0.0;  // max-norm of pi*P - pi
};

/// Stationary distribution. Direct linear solve for n <= 2000, power
/// iteration on the lazy chain (I+P)/2 above that. Throws NotUnique when the
/// chain has more than one closed communicating class.
StationaryDist stationary(const ChainSpec& chain);

/// Detailed-balance test: true iff max over pairs of
/// |pi(x)p(x,y) - pi(y)p(y,x)| <= tol.
bool is_reversible(const ChainSpec& chain, const StationaryDist& pi, double tol);

struct MixingProfile {
  int x = 0;
  int horizon = 0;
  std::vector<double> d;  // d[t] = TV(p^t(x,.), pi), t = 0..horizon
};

/// Total-variation distance to stationarity from the point start x,
/// for t = 0..T.
MixingProfile mixing_profile(const ChainSpec& chain, int x, int T);

/// t_mix(eps) = min { t : max_x d_x(t) <= eps }, the max taken over all
/// starting states. Throws HorizonTooSmall if not reached by t_max.
int mixing_time(const ChainSpec& chain, double eps, int t_max);

/// Per-start variant: min { t <= t_max : d_x(t) <= eps }.
int mixing_time_from(const ChainSpec& chain, int x, double eps, int t_max);

/// Number of closed (terminal) strongly connected classes. Exactly one iff
/// the stationary distribution is unique.
int terminal_class_count(const ChainSpec& chain);

/// States of the communicating class containing x (sorted). Throws
/// NotIrreducible when the class is not closed.
std::vector<int> closed_class_of(const ChainSpec& chain, int x);

}  // namespace hitstat
