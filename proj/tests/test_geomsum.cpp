#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hitstat/geomsum.hpp"
#include "hitstat/rng.hpp"
#include "oracles.hpp"

using namespace hitstat;

TEST_CASE("negative binomial pmf: small closed forms") {
  CHECK(neg_binomial_pmf(1, 0, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(neg_binomial_pmf(2, 2, 0.5) - 0.1875) <= 1e-14 * 0.1875);
  CHECK(neg_binomial_pmf(3, 0, 0.25) == doctest::Approx(std::pow(0.25, 3)).epsilon(1e-14));
  CHECK(neg_binomial_pmf(1, 4, 0.3) == doctest::Approx(0.3 * std::pow(0.7, 4)).epsilon(1e-14));
  CHECK(neg_binomial_pmf(2, 0, 1.0) == 1.0);
  CHECK(neg_binomial_pmf(2, 3, 1.0) == 0.0);
}

TEST_CASE("negative binomial pmf agrees with the lgamma oracle") {
  SplitMix64 rng(404);
  for (int i = 0; i < 500; ++i) {
    const long n = 1 + static_cast<long>(rng.next() % 200);
    const long m = static_cast<long>(rng.next() % 400);
    const double p = 0.02 + 0.96 * rng.next_double();
    const double got = neg_binomial_pmf(n, m, p);
    const double want = oracle::neg_binomial_lgamma(n, m, p);
    if (want > 1e-280) CHECK(got == doctest::Approx(want).epsilon(1e-11));
  }
}

TEST_CASE("negative binomial pmf stays normalized at the 1e6 scale") {
  // Large-argument absolute scale check: summing the pmf over a window that
  // carries all but ~1e-13 of the mass must give 1.
  const long n = 1000000 - 500000;
  const double p = 0.5;
  // mean of the sum is n (1-p)/p = n, sd = sqrt(n (1-p))/p ~ 1414
  double mass = 0.0;
  for (long m = n - 12000; m <= n + 12000; ++m) mass += neg_binomial_pmf(n, m, p);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("basic geometric bounds bracket the equal-parameter pmf") {
  Bracket b22 = basic_geom_bounds(2, 2);
  CHECK(b22.lower == doctest::Approx(1.0 / 6).epsilon(1e-14));
  CHECK(b22.upper == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(b22.lower <= 0.1875);
  CHECK(0.1875 <= b22.upper);

  Bracket b11 = basic_geom_bounds(1, 1);
  CHECK(b11.lower == doctest::Approx(std::sqrt(0.5) / 3).epsilon(1e-14));
  CHECK(b11.upper == doctest::Approx(std::sqrt(0.5) / 2).epsilon(1e-14));
  CHECK(b11.lower <= 0.25);
  CHECK(0.25 <= b11.upper);

  CHECK(b11.upper / b11.lower == doctest::Approx(1.5).epsilon(1e-14));

  for (long n = 1; n <= 40; ++n)
    for (long m = 1; m <= 40; ++m) {
      const double p = static_cast<double>(n) / static_cast<double>(m + n);
      const double val = neg_binomial_pmf(n, m, p);
      Bracket b = basic_geom_bounds(n, m);
      CHECK(b.lower <= val + 1e-15);
      CHECK(val <= b.upper + 1e-15);
    }
}

TEST_CASE("binomial bounds bracket exact coefficients") {
  LogBracket b11 = binom_bounds(1, 1);
  CHECK(b11.lower == doctest::Approx(4.0 * std::sqrt(2.0) / 3).epsilon(1e-14));
  CHECK(b11.upper == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(b11.lower <= 2.0);
  CHECK(2.0 <= b11.upper);

  LogBracket b55 = binom_bounds(5, 5);
  CHECK(b55.lower <= 252.0);
  CHECK(252.0 <= b55.upper);

  for (long M = 1; M <= 60; ++M)
    for (long N = 1; N <= 60; ++N) {
      LogBracket b = binom_bounds(M, N);
      const double log_exact = oracle::log_binom(static_cast<double>(M + N), static_cast<double>(M));
      CHECK(b.log_lower <= log_exact + 1e-12);
      CHECK(log_exact <= b.log_upper + 1e-12);
    }
}

TEST_CASE("Stirling sandwich for N = 1..100") {
  const double lo = 0.5 * std::log(2.0 * M_PI);
  const double hi = lo + 1.0 / 12.0;
  for (long n = 1; n <= 100; ++n) {
    const double nd = static_cast<double>(n);
    const double log_ratio =
        oracle::log_factorial_sum(n) - (nd + 0.5) * std::log(nd) + nd;
    CHECK(log_ratio >= lo - 1e-12);
    CHECK(log_ratio <= hi + 1e-12);
  }
}

TEST_CASE("geometric sum pmf: closed forms and the oracle") {
  GeomParams single{{0.5}};
  CHECK(geom_sum_pmf(single, 2) == doctest::Approx(0.125).epsilon(1e-14));

  GeomParams pair{{0.5, 0.5}};
  CHECK(geom_sum_pmf(pair, 2) == doctest::Approx(0.1875).epsilon(1e-14));
  CHECK(geom_sum_pmf(pair, 2) == doctest::Approx(neg_binomial_pmf(2, 2, 0.5)).epsilon(1e-14));

  SplitMix64 rng(2121);
  for (int rep = 0; rep < 60; ++rep) {
    const int n = 1 + static_cast<int>(rng.next() % 4);
    const long t = static_cast<long>(rng.next() % 12);
    GeomParams gp;
    for (int i = 0; i < n; ++i) gp.q.push_back(0.98 * rng.next_double());
    CHECK(geom_sum_pmf(gp, t) ==
          doctest::Approx(oracle::geom_sum_enum(gp.q, 0, t)).epsilon(1e-12));
  }
}

TEST_CASE("geometric sum pmf matches the equal-parameter negative binomial") {
  SplitMix64 rng(777);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 1 + static_cast<int>(rng.next() % 6);
    const long t = static_cast<long>(rng.next() % 50);
    const double q = 0.97 * rng.next_double();
    GeomParams gp;
    gp.q.assign(static_cast<std::size_t>(n), q);
    CHECK(geom_sum_pmf(gp, t) ==
          doctest::Approx(neg_binomial_pmf(n, t, 1.0 - q)).epsilon(1e-12));
  }
}

TEST_CASE("geometric sum pmf is a sub-probability and permutation symmetric") {
  GeomParams gp{{0.3, 0.8, 0.55}};
  double mass = 0.0;
  for (long t = 0; t <= 400; ++t) mass += geom_sum_pmf(gp, t);
  CHECK(mass <= 1.0 + 1e-12);
  CHECK(1.0 - mass >= -1e-12);

  GeomParams perm{{0.55, 0.3, 0.8}};
  for (long t : {0L, 3L, 7L, 19L})
    CHECK(geom_sum_pmf(gp, t) == doctest::Approx(geom_sum_pmf(perm, t)).epsilon(1e-15));
}

TEST_CASE("the uniform bound dominates the pmf on random sweeps") {
  CHECK(geom_sum_bound(2, 2) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(geom_sum_bound(1, 1) == doctest::Approx(0.5 * std::sqrt(0.5)).epsilon(1e-14));

  SplitMix64 rng(31337);
  for (int rep = 0; rep < 2000; ++rep) {
    const int n = 1 + static_cast<int>(rng.next() % 6);
    const long t = 1 + static_cast<long>(rng.next() % 50);
    GeomParams gp;
    for (int i = 0; i < n; ++i) gp.q.push_back(rng.next_double() * 0.999);
    CHECK(geom_sum_pmf(gp, t) <= geom_sum_bound(n, t) + 1e-12);
  }
}

TEST_CASE("grid search lands on the equal-parameter maximizer") {
  MaxSearchResult r = geom_sum_max_search(2, 4, 1e-3);
  const double qstar = 4.0 / 6.0;
  GeomParams equal{{qstar, qstar}};
  const double equal_value = geom_sum_pmf(equal, 4);
  CHECK(std::abs(r.value - equal_value) <= 10.0 * 1e-3);
  CHECK(std::abs(r.argmax.q[0] - r.argmax.q[1]) <= 2.0 * 1e-3);
  CHECK(std::abs(r.argmax.q[0] - qstar) <= 0.05);

  MaxSearchResult r22 = geom_sum_max_search(2, 2, 1e-3);
  CHECK(r22.value == doctest::Approx(0.1875).epsilon(1e-3));

  MaxSearchResult r33 = geom_sum_max_search(3, 3, 1e-2);
  CHECK(std::abs(r33.argmax.q[0] - r33.argmax.q[2]) <= 2.0 * 1e-2);
  CHECK(std::abs(r33.argmax.q[0] - 0.5) <= 0.06);
}

TEST_CASE("mixtures: degenerate reduction, bound, and weight validation") {
  GeomParams gp{{0.4, 0.7}};
  std::vector<GeomMixture> degenerate = {{{{1.0, 0.4}}}, {{{1.0, 0.7}}}};
  for (long t : {0L, 2L, 5L, 9L})
    CHECK(geom_mixture_pmf(degenerate, t) == doctest::Approx(geom_sum_pmf(gp, t)).epsilon(1e-13));

  std::vector<GeomMixture> sym = {{{{0.5, 0.2}, {0.5, 0.8}}}, {{{0.5, 0.2}, {0.5, 0.8}}}};
  const double v = geom_mixture_pmf(sym, 3);
  // enumeration over the four component pairs
  double expect = 0.0;
  for (double qa : {0.2, 0.8})
    for (double qb : {0.2, 0.8}) expect += 0.25 * oracle::geom_sum_enum({qa, qb}, 0, 3);
  CHECK(v == doctest::Approx(expect).epsilon(1e-13));
  CHECK(v <= geom_sum_bound(2, 3) + 1e-12);
  CHECK(geom_sum_bound(2, 3) == doctest::Approx(0.5 * std::sqrt(2.0 / 15.0)).epsilon(1e-14));

  std::vector<GeomMixture> bad = {{{{0.5, 0.2}, {0.4, 0.8}}}};
  CHECK_THROWS_AS(geom_mixture_pmf(bad, 3), BadWeights);
}

TEST_CASE("mixture bound survives random mixtures") {
  SplitMix64 rng(5150);
  for (int rep = 0; rep < 300; ++rep) {
    const int n = 1 + static_cast<int>(rng.next() % 3);
    const long t = 1 + static_cast<long>(rng.next() % 25);
    std::vector<GeomMixture> mixtures;
    for (int i = 0; i < n; ++i) {
      GeomMixture mix;
      const int parts = 1 + static_cast<int>(rng.next() % 3);
      std::vector<double> raw;
      double tot = 0.0;
      for (int c = 0; c < parts; ++c) {
        raw.push_back(rng.next_double() + 0.05);
        tot += raw.back();
      }
      double acc = 0.0;
      for (int c = 0; c + 1 < parts; ++c) {
        const double w = raw[static_cast<std::size_t>(c)] / tot;
        mix.components.push_back({w, 0.99 * rng.next_double()});
        acc += w;
      }
      mix.components.push_back({1.0 - acc, 0.99 * rng.next_double()});
      mixtures.push_back(mix);
    }
    CHECK(geom_mixture_pmf(mixtures, t) <= geom_sum_bound(n, t) + 1e-12);
  }
}
