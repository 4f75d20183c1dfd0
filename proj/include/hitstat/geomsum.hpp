#pragma once

#include <utility>
#include <vector>

#include "hitstat/errors.hpp"

namespace hitstat {

/// Parameters of independent geometric variables, stored as failure
/// probabilities q_i = 1 - p_i, so P(X_i = k) = (1 - q_i) q_i^k for k >= 0.
struct GeomParams {
  std::vector<double> q;
};

struct Bracket {
  double lower = 0.0;
  double upper = 0.0;
};

/// Bracket that may exceed double range; log values are always finite.
struct LogBracket {
  double lower = 0.0;
  double upper = 0.0;
  double log_lower = 0.0;
  double log_upper = 0.0;
};

/// P(X_1 + ... + X_n = m) for n i.i.d. geometrics with success parameter p:
/// C(m+n-1, n-1) p^n (1-p)^m, evaluated by a saddle-point form of Stirling's
/// series so the result keeps ~1e-14 relative accuracy even at m+n ~ 1e6.
double neg_binomial_pmf(long n, long m, double p);

/// The bracket (1/3) sqrt(n/(m(m+n))) <= P(sum = m) <= (1/2) sqrt(...) that
/// holds at the equalizing parameter p = n/(m+n). Requires m >= 1.
Bracket basic_geom_bounds(long n, long m);

/// Stirling bracket of C(M+N, M):
/// [1/3, 1/2] * sqrt((M+N)/(MN)) * (M+N)^(M+N) / (M^M N^N).
LogBracket binom_bounds(long M, long N);

/// Exact pmf of a sum of independent (not necessarily identical) geometrics
/// at t, by the O(n t) recursion f_i(s) = q_i f_i(s-1) + (1-q_i) f_{i-1}(s).
double geom_sum_pmf(const GeomParams& params, long t);

/// (1/2) sqrt(n / (t (t+n))): the uniform upper bound on geom_sum_pmf.
double geom_sum_bound(long n, long t);

struct MaxSearchResult {
  GeomParams argmax;
  double value = 0.0;
};

/// Grid search of geom_sum_pmf over [0,1)^n at the given resolution. The
/// maximizer should sit near the equal-parameter point q_i = t/(t+n).
MaxSearchResult geom_sum_max_search(int n, int t, double resolution);

/// One mixture component: a geometric with failure probability q, weight w.
struct GeomMixture {
  struct Component {
    double weight = 0.0;
    double q = 0.0;
  };
  std::vector<Component> components;
};

/// P(X_1 + ... + X_n = t) when each X_i is an independent mixture of
/// geometrics. Throws BadWeights unless each component list sums to 1.
double geom_mixture_pmf(const std::vector<GeomMixture>& mixtures, long t);

}  // namespace hitstat
