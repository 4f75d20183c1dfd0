#include "hitstat/geomsum.hpp"

#include <algorithm>
#include <cmath>

namespace hitstat {

namespace {

constexpr double kLn2Pi = 1.8378770664093454836;  // log(2*pi)

// stirlerr(n) = log(n!) - log( sqrt(2 pi n) (n/e)^n ).
// Small n directly from the exact factorial; larger n from the asymptotic
// series 1/(12n) - 1/(360n^3) + 1/(1260n^5) - ... with the usual cutoffs.
double stirlerr(double n) {
  if (n <= 15.5) {
    double fact = 1.0;
    for (long k = 2; k <= static_cast<long>(n); ++k) fact *= static_cast<double>(k);
    return std::log(fact) - (n + 0.5) * std::log(n) + n - 0.5 * kLn2Pi;
  }
  constexpr double s0 = 1.0 / 12.0;
  constexpr double s1 = 1.0 / 360.0;
  constexpr double s2 = 1.0 / 1260.0;
  constexpr double s3 = 1.0 / 1680.0;
  constexpr double s4 = 1.0 / 1188.0;
  const double nn = n * n;
  if (n > 500.0) return (s0 - s1 / nn) / n;
  if (n > 80.0) return (s0 - (s1 - s2 / nn) / nn) / n;
  if (n > 35.0) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
  return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

// bd0(x, np) = x log(x / np) + np - x, evaluated by a series when x ~ np so
// no accuracy is lost to cancellation.
double bd0(double x, double np) {
  if (std::abs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    const double v2 = v * v;
    for (int j = 1;; ++j) {
      ej *= v2;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
  }
  return x * std::log(x / np) + np - x;
}

// P(Bin(n, p) = x), saddle-point evaluation (Loader's method).
double binom_pmf_raw(double x, double n, double p, double q) {
  if (p == 0.0) return (x == 0.0) ? 1.0 : 0.0;
  if (q == 0.0) return (x == n) ? 1.0 : 0.0;
  if (x == 0.0) {
    if (n == 0.0) return 1.0;
    const double lc = (p < 0.1) ? -bd0(n, n * q) - n * p : n * std::log(q);
    return std::exp(lc);
  }
  if (x == n) {
    const double lc = (q < 0.1) ? -bd0(n, n * p) - n * q : n * std::log(p);
    return std::exp(lc);
  }
  const double lc =
      stirlerr(n) - stirlerr(x) - stirlerr(n - x) - bd0(x, n * p) - bd0(n - x, n * q);
  const double lf = kLn2Pi + std::log(x) + std::log1p(-x / n);
  return std::exp(lc - 0.5 * lf);
}

}  // namespace

double neg_binomial_pmf(long n, long m, double p) {
  if (n < 1 || m < 0) throw BadParams("need n >= 1, m >= 0");
  if (!(p > 0.0) || p > 1.0) throw BadParams("need p in (0, 1]");
  if (p == 1.0) return (m == 0) ? 1.0 : 0.0;
  // C(m+n-1, n-1) p^n q^m = (n / (n+m)) * P(Bin(n+m, p) = n)
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  return nd / (nd + md) * binom_pmf_raw(nd, nd + md, p, 1.0 - p);
}

Bracket basic_geom_bounds(long n, long m) {
  if (n < 1 || m < 1) throw BadParams("need n >= 1, m >= 1");
  const double root =
      std::sqrt(static_cast<double>(n) / (static_cast<double>(m) * static_cast<double>(m + n)));
  return {root / 3.0, root / 2.0};
}

LogBracket binom_bounds(long M, long N) {
  if (M < 1 || N < 1) throw BadParams("need M, N >= 1");
  const double md = static_cast<double>(M);
  const double nd = static_cast<double>(N);
  const double log_central = (md + nd) * std::log(md + nd) - md * std::log(md) - nd * std::log(nd);
  const double log_root = 0.5 * (std::log(md + nd) - std::log(md) - std::log(nd));
  LogBracket out;
  out.log_lower = log_central + log_root - std::log(3.0);
  out.log_upper = log_central + log_root - std::log(2.0);
  out.lower = std::exp(out.log_lower);
  out.upper = std::exp(out.log_upper);
  return out;
}

double geom_sum_pmf(const GeomParams& params, long t) {
  if (t < 0) throw BadParams("t must be >= 0");
  for (double q : params.q)
    if (!(q >= 0.0) || q >= 1.0) throw BadParams("each q must lie in [0, 1)");
  std::vector<double> f(static_cast<std::size_t>(t) + 1, 0.0);
  f[0] = 1.0;  // empty sum
  for (double q : params.q) {
    const double p = 1.0 - q;
    double prev = 0.0;
    for (long s = 0; s <= t; ++s) {
      prev = q * prev + p * f[static_cast<std::size_t>(s)];
      f[static_cast<std::size_t>(s)] = prev;
    }
  }
  return f[static_cast<std::size_t>(t)];
}

double geom_sum_bound(long n, long t) {
  if (n < 1 || t < 1) throw BadParams("need n >= 1, t >= 1");
  return 0.5 * std::sqrt(static_cast<double>(n) /
                         (static_cast<double>(t) * static_cast<double>(t + n)));
}

MaxSearchResult geom_sum_max_search(int n, int t, double resolution) {
  if (n < 1 || n > 4) throw BadParams("grid search is desk scale: n in 1..4");
  if (t < 0 || t > 64) throw BadParams("grid search is desk scale: t <= 64");
  if (!(resolution > 0.0) || resolution > 1e-2 + 1e-15)
    throw BadParams("resolution must be in (0, 1e-2]");

  const long cells = static_cast<long>(std::floor((1.0 - 1e-12) / resolution)) + 1;
  MaxSearchResult best;
  best.argmax.q.assign(static_cast<std::size_t>(n), 0.0);
  best.value = -1.0;

  // geom_sum_pmf is symmetric in q, so scan ordered tuples only.
  GeomParams probe;
  probe.q.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<long> k(static_cast<std::size_t>(n), 0);
  while (true) {
    for (int i = 0; i < n; ++i) probe.q[static_cast<std::size_t>(i)] = k[static_cast<std::size_t>(i)] * resolution;
    const double v = geom_sum_pmf(probe, t);
    if (v > best.value) {
      best.value = v;
      best.argmax = probe;
    }
    int pos = n - 1;
    while (pos >= 0 && k[static_cast<std::size_t>(pos)] == cells - 1) --pos;
    if (pos < 0) break;
    const long next = k[static_cast<std::size_t>(pos)] + 1;
    for (int i = pos; i < n; ++i) k[static_cast<std::size_t>(i)] = next;  // keep tuples ordered
  }
  return best;
}

double geom_mixture_pmf(const std::vector<GeomMixture>& mixtures, long t) {
  if (t < 0) throw BadParams("t must be >= 0");
  std::vector<double> f(static_cast<std::size_t>(t) + 1, 0.0);
  f[0] = 1.0;
  std::vector<double> pv(static_cast<std::size_t>(t) + 1);
  std::vector<double> g(static_cast<std::size_t>(t) + 1);
  for (const GeomMixture& mix : mixtures) {
    double wsum = 0.0;
    std::fill(pv.begin(), pv.end(), 0.0);
    for (const auto& c : mix.components) {
      if (c.weight < 0.0) throw BadWeights("negative mixture weight");
      if (!(c.q >= 0.0) || c.q >= 1.0) throw BadParams("each q must lie in [0, 1)");
      wsum += c.weight;
      double term = c.weight * (1.0 - c.q);
      for (long s = 0; s <= t; ++s) {
        pv[static_cast<std::size_t>(s)] += term;
        term *= c.q;
      }
    }
    if (std::abs(wsum - 1.0) > 1e-12) throw BadWeights("mixture weights must sum to 1");
    std::fill(g.begin(), g.end(), 0.0);
    for (long s = 0; s <= t; ++s) {
      const double base = f[static_cast<std::size_t>(s)];
      if (base == 0.0) continue;
      for (long k = 0; s + k <= t; ++k)
        g[static_cast<std::size_t>(s + k)] += base * pv[static_cast<std::size_t>(k)];
    }
    f = g;
  }
  return f[static_cast<std::size_t>(t)];
}

}  // namespace hitstat
