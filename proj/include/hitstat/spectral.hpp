#pragma once

#include <utility>
#include <vector>

#include "hitstat/chain.hpp"

namespace hitstat {

/// Representation of P_x(X_t = x, tau(U) > t) as sum_i a_i lambda_i^t with
/// a_i >= 0 and lambda_i in [-1, 1]. The a_i come out of the eigendecomposition
/// as squared eigenvector coordinates, so nonnegativity is structural; it is
/// still asserted downstream because that assertion is the point.
struct KilledSpectrum {
  int x = 0;
  std::vector<int> U;
  std::vector<std::pair<double, double>> terms;  // (a_i, lambda_i)
  bool nonneg_eigen = false;  // all eigenvalues of the (class-restricted) chain >= -1e-12
};

/// Builds the chain killed upon hitting U, restricted to the communicating
/// class of x, symmetrizes with pi-weights and eigendecomposes (n <= 2000).
/// Throws StateInU, NotIrreducible, NotReversible.
KilledSpectrum killed_spectrum(const ChainSpec& chain, int x, const std::vector<int>& U);

/// Independent DP oracle for the same quantity; needs no reversibility.
double killed_return_prob(const ChainSpec& chain, int x, const std::vector<int>& U, long t);

/// sum_i a_i lambda_i^t.
double reconstruct(const KilledSpectrum& spectrum, long t);

}  // namespace hitstat
