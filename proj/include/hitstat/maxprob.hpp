#pragma once

#include <vector>

#include "hitstat/chain.hpp"

namespace hitstat {

/// p*(x, y) = sup_t p^t(x, y) for all y, truncated at a horizon T, with a
/// spectral certificate when the chain is reversible and aperiodic.
/// When certified, the true supremum exceeds pstar[y] by at most tail_eps.
struct MaximalRow {
  int x = 0;
  long horizon = 0;
  std::vector<double> pstar;
  std::vector<long> argmax_t;
  std::vector<double> even;  // sup over even t <= T (t = 0 included)
  std::vector<double> odd;   // sup over odd t <= T
  bool certified = false;
  double tail_eps = 0.0;  // NaN when uncertified
  double lambda_star = 1.0;  // largest nontrivial eigenvalue modulus (NaN if unknown)
};

MaximalRow maximal_row(const ChainSpec& chain, int x, long T);

/// sum_y pstar[y]; a lower bound on the true row sum, within n*tail_eps of
/// it when certified.
double maximal_row_sum(const ChainSpec& chain, int x, long T);

/// Largest nontrivial eigenvalue modulus of a reversible chain, from the
/// dense symmetric eigensolve of D^(1/2) P D^(-1/2) (n <= 2000). Throws
/// NotReversible.
double lambda_star(const ChainSpec& chain, const StationaryDist& pi);

/// Smallest T such that max_y sqrt(pi(y)/pi(x)) * lambda*^T <= eps for every
/// x, or -1 when the chain cannot be certified (lambda* too close to 1 or
/// the horizon would exceed `cap`).
long certification_horizon(const ChainSpec& chain, double eps = 1e-12, long cap = 2000000);

/// Starr maximal-function check with f = indicator of x and even times only:
/// returns (E_pi g^p)^(1/p) / (E_pi f^p)^(1/p) where
/// g(y) = max(pi(x), max_{0<=k<=T} (P^{2k} f)(y)). The theorem promises
/// ratio <= p/(p-1). Throws Uncertifiable when lambda* = 1 within 1e-12.
double starr_ratio(const ChainSpec& chain, int x, double p_exp, long T);

}  // namespace hitstat
