#include "hitstat/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

namespace hitstat {

namespace {

ChainSpec restrict_to(const ChainSpec& chain, const std::vector<int>& members) {
  std::vector<int> idx(static_cast<std::size_t>(chain.n), -1);
  for (std::size_t k = 0; k < members.size(); ++k)
    idx[static_cast<std::size_t>(members[k])] = static_cast<int>(k);
  ChainSpec out;
  out.n = static_cast<int>(members.size());
  for (int m : members) {
    out.states.push_back(chain.states[static_cast<std::size_t>(m)]);
    std::vector<Entry> row;
    for (const Entry& e : chain.rows[static_cast<std::size_t>(m)]) {
      int j = idx[static_cast<std::size_t>(e.j)];
      if (j < 0) throw NotIrreducible("restriction leaks probability mass");
      row.push_back({j, e.p});
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace

KilledSpectrum killed_spectrum(const ChainSpec& chain, int x, const std::vector<int>& U) {
  std::set<int> uset(U.begin(), U.end());
  if (uset.count(x)) throw StateInU("x must not belong to U");

  // Work on the communicating class of x; closed_class_of throws
  // NotIrreducible when the class leaks.
  std::vector<int> members = closed_class_of(chain, x);
  ChainSpec cls = restrict_to(chain, members);
  std::vector<int> to_local(static_cast<std::size_t>(chain.n), -1);
  for (std::size_t k = 0; k < members.size(); ++k)
    to_local[static_cast<std::size_t>(members[k])] = static_cast<int>(k);
  const int lx = to_local[static_cast<std::size_t>(x)];

  StationaryDist sd = stationary(cls);
  if (!is_reversible(cls, sd, 1e-10)) throw NotReversible("detailed balance fails at 1e-10");

  const int n = cls.n;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (const Entry& e : cls.rows[static_cast<std::size_t>(i)]) p(i, e.j) += e.p;

  Eigen::VectorXd sqrt_pi(n);
  for (int i = 0; i < n; ++i) sqrt_pi(i) = std::sqrt(sd.pi[static_cast<std::size_t>(i)]);

  // Full-chain spectrum decides the nonneg_eigen flag.
  Eigen::MatrixXd sym_full(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sym_full(i, j) = sqrt_pi(i) * p(i, j) / sqrt_pi(j);
  sym_full = 0.5 * (sym_full + sym_full.transpose().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> full_solver(sym_full,
                                                             Eigen::EigenvaluesOnly);
  const bool nonneg = full_solver.eigenvalues().minCoeff() >= -1e-12;

  // Killed matrix on the class minus U, symmetrized the same way.
  std::vector<int> kept;
  for (int i = 0; i < n; ++i)
    if (!uset.count(members[static_cast<std::size_t>(i)])) kept.push_back(i);
  const int m = static_cast<int>(kept.size());
  Eigen::MatrixXd sym(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      sym(a, b) = sqrt_pi(kept[static_cast<std::size_t>(a)]) *
                  p(kept[static_cast<std::size_t>(a)], kept[static_cast<std::size_t>(b)]) /
                  sqrt_pi(kept[static_cast<std::size_t>(b)]);
  sym = 0.5 * (sym + sym.transpose().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);

  int kx = -1;
  for (int a = 0; a < m; ++a)
    if (kept[static_cast<std::size_t>(a)] == lx) kx = a;

  KilledSpectrum out;
  out.x = x;
  out.U = U;
  out.nonneg_eigen = nonneg;
  out.terms.reserve(static_cast<std::size_t>(m));
  // a_i = u_i(x)^2 for the orthonormal eigenvectors of the symmetrized
  // killed matrix; see the pi-inner-product computation in the docs.
  for (int i = 0; i < m; ++i) {
    const double coord = solver.eigenvectors()(kx, i);
    out.terms.emplace_back(coord * coord, solver.eigenvalues()(i));
  }
  return out;
}

double killed_return_prob(const ChainSpec& chain, int x, const std::vector<int>& U, long t) {
  std::set<int> uset(U.begin(), U.end());
  if (uset.count(x)) throw StateInU("x must not belong to U");
  std::vector<double> dist(static_cast<std::size_t>(chain.n), 0.0);
  dist[static_cast<std::size_t>(x)] = 1.0;
  std::vector<double> next(static_cast<std::size_t>(chain.n));
  for (long s = 0; s < t; ++s) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i < chain.n; ++i) {
      const double mass = dist[static_cast<std::size_t>(i)];
      if (mass == 0.0) continue;
      for (const Entry& e : chain.rows[static_cast<std::size_t>(i)])
        if (!uset.count(e.j)) next[static_cast<std::size_t>(e.j)] += mass * e.p;
    }
    dist.swap(next);
  }
  return dist[static_cast<std::size_t>(x)];
}

double reconstruct(const KilledSpectrum& spectrum, long t) {
  if (t < 0) throw BadParams("t must be >= 0");
  double sum = 0.0;
  for (const auto& [a, lambda] : spectrum.terms) sum += a * std::pow(lambda, static_cast<double>(t));
  return sum;
}

}  // namespace hitstat
