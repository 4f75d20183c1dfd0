#include "hitstat/maxprob.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hitstat {

double lambda_star(const ChainSpec& chain, const StationaryDist& pi) {
  if (!is_reversible(chain, pi, 1e-10)) throw NotReversible("lambda* needs detailed balance");
  if (chain.n > 2000) throw BadParams("dense eigensolve limited to n <= 2000");
  const int n = chain.n;
  if (n == 1) return 0.0;
  Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double spi = std::sqrt(pi.pi[static_cast<std::size_t>(i)]);
    for (const Entry& e : chain.rows[static_cast<std::size_t>(i)])
      sym(i, e.j) += spi * e.p / std::sqrt(pi.pi[static_cast<std::size_t>(e.j)]);
  }
  sym = 0.5 * (sym + sym.transpose().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  // Eigenvalues are ascending; the top one is 1 (up to noise).
  const double low = std::abs(solver.eigenvalues()(0));
  const double second = std::abs(solver.eigenvalues()(n - 2));
  return std::max(low, second);
}

namespace {

struct Certificate {
  bool have = false;     // reversible with lambda* computable
  double lambda = 1.0;
  double ratio_max = 1.0;  // max_y sqrt(pi(y)/pi(x))
  std::vector<double> pi;
};

// Reversible chains are periodic iff they have no self-loop and their
// support graph is bipartite; lambda* = 1 then, so certification is
// impossible and the eigensolve can be skipped.
bool support_bipartite_no_loops(const ChainSpec& chain) {
  std::vector<int> color(static_cast<std::size_t>(chain.n), -1);
  std::vector<int> queue;
  color[0] = 0;
  queue.push_back(0);
  while (!queue.empty()) {
    int u = queue.back();
    queue.pop_back();
    for (const Entry& e : chain.rows[static_cast<std::size_t>(u)]) {
      if (e.p <= 0.0) continue;
      if (e.j == u) return false;
      if (color[static_cast<std::size_t>(e.j)] == -1) {
        color[static_cast<std::size_t>(e.j)] = 1 - color[static_cast<std::size_t>(u)];
        queue.push_back(e.j);
      } else if (color[static_cast<std::size_t>(e.j)] == color[static_cast<std::size_t>(u)]) {
        return false;
      }
    }
  }
  return true;
}

Certificate try_certificate(const ChainSpec& chain, int x) {
  Certificate cert;
  if (chain.n > 2000) return cert;
  StationaryDist sd;
  try {
    sd = stationary(chain);
  } catch (const NotUnique&) {
    return cert;
  }
  if (!is_reversible(chain, sd, 1e-10)) return cert;
  if (chain.n > 1 && support_bipartite_no_loops(chain)) {
    cert.have = true;
    cert.lambda = 1.0;
    cert.pi = sd.pi;
    return cert;
  }
  cert.lambda = lambda_star(chain, sd);
  cert.pi = sd.pi;
  double worst = 0.0;
  for (int y = 0; y < chain.n; ++y)
    worst = std::max(worst, sd.pi[static_cast<std::size_t>(y)]);
  cert.ratio_max = std::sqrt(worst / sd.pi[static_cast<std::size_t>(x)]);
  cert.have = true;
  return cert;
}

}  // namespace

MaximalRow maximal_row(const ChainSpec& chain, int x, long T) {
  if (T < 1) throw BadParams("horizon must be >= 1");
  MaximalRow out;
  out.x = x;
  out.horizon = T;
  const std::size_t n = static_cast<std::size_t>(chain.n);
  out.pstar.assign(n, 0.0);
  out.argmax_t.assign(n, 0);
  out.even.assign(n, 0.0);
  out.odd.assign(n, 0.0);

  std::vector<double> dist(n, 0.0);
  dist[static_cast<std::size_t>(x)] = 1.0;
  out.pstar[static_cast<std::size_t>(x)] = 1.0;  // t = 0
  out.even[static_cast<std::size_t>(x)] = 1.0;
  for (long t = 1; t <= T; ++t) {
    dist = step_dist(chain, dist);
    auto& parity = (t % 2 == 0) ? out.even : out.odd;
    for (std::size_t y = 0; y < n; ++y) {
      parity[y] = std::max(parity[y], dist[y]);
      if (dist[y] > out.pstar[y]) {
        out.pstar[y] = dist[y];
        out.argmax_t[y] = t;
      }
    }
  }

  Certificate cert = try_certificate(chain, x);
  if (cert.have) {
    out.lambda_star = cert.lambda;
    const double tail =
        cert.ratio_max * std::pow(cert.lambda, static_cast<double>(T));
    if (cert.lambda < 1.0 && tail <= 1e-12) {
      out.certified = true;
      out.tail_eps = tail;
      // sup over t > T approaches pi(y); fold the limit into the running max.
      for (std::size_t y = 0; y < n; ++y)
        out.pstar[y] = std::max(out.pstar[y], cert.pi[y]);
      return out;
    }
  } else {
    out.lambda_star = std::numeric_limits<double>::quiet_NaN();
  }
  out.certified = false;
  out.tail_eps = std::numeric_limits<double>::quiet_NaN();
  return out;
}

double maximal_row_sum(const ChainSpec& chain, int x, long T) {
  MaximalRow row = maximal_row(chain, x, T);
  double sum = 0.0;
  for (double v : row.pstar) sum += v;
  return sum;
}

long certification_horizon(const ChainSpec& chain, double eps, long cap) {
  StationaryDist sd;
  try {
    sd = stationary(chain);
  } catch (const NotUnique&) {
    return -1;
  }
  if (!is_reversible(chain, sd, 1e-10)) return -1;
  double lam = lambda_star(chain, sd);
  if (lam >= 1.0 - 1e-12) return -1;
  double lo = *std::min_element(sd.pi.begin(), sd.pi.end());
  double hi = *std::max_element(sd.pi.begin(), sd.pi.end());
  const double ratio = std::sqrt(hi / lo);
  // ratio * lam^T <= eps
  const double t = (std::log(eps) - std::log(ratio)) / std::log(lam);
  long horizon = static_cast<long>(std::ceil(t)) + 1;
  horizon = std::max(horizon, 1L);
  return horizon <= cap ? horizon : -1;
}

double starr_ratio(const ChainSpec& chain, int x, double p_exp, long T) {
  if (!(p_exp > 1.0)) throw BadParams("p must exceed 1");
  if (T < 1) throw BadParams("horizon must be >= 1");
  StationaryDist sd = stationary(chain);
  if (!is_reversible(chain, sd, 1e-10)) throw NotReversible("Starr needs detailed balance");
  const double lam = lambda_star(chain, sd);
  if (lam >= 1.0 - 1e-12) throw Uncertifiable("lambda* = 1 within 1e-12");

  const std::size_t n = static_cast<std::size_t>(chain.n);
  const double pix = sd.pi[static_cast<std::size_t>(x)];

  // w_k = P^{2k} f as a function on states; f = indicator of x.
  std::vector<double> w(n, 0.0);
  w[static_cast<std::size_t>(x)] = 1.0;
  std::vector<double> g(n, pix);  // the t -> infinity limit of P^{2k} f
  for (std::size_t y = 0; y < n; ++y) g[y] = std::max(g[y], w[y]);
  std::vector<double> next(n);
  for (long k = 1; k <= T; ++k) {
    for (int rep = 0; rep < 2; ++rep) {
      std::fill(next.begin(), next.end(), 0.0);
      for (int i = 0; i < chain.n; ++i) {
        double acc = 0.0;
        for (const Entry& e : chain.rows[static_cast<std::size_t>(i)])
          acc += e.p * w[static_cast<std::size_t>(e.j)];
        next[static_cast<std::size_t>(i)] = acc;
      }
      w.swap(next);
    }
    for (std::size_t y = 0; y < n; ++y) g[y] = std::max(g[y], w[y]);
  }

  double num = 0.0;
  for (std::size_t y = 0; y < n; ++y) num += sd.pi[y] * std::pow(g[y], p_exp);
  const double den = pix;  // E_pi |f|^p = pi(x)
  return std::pow(num, 1.0 / p_exp) / std::pow(den, 1.0 / p_exp);
}

}  // namespace hitstat
