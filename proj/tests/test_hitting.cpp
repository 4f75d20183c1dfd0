#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "hitstat/constructions.hpp"
#include "hitstat/hitting.hpp"
#include "hitstat/rng.hpp"
#include "oracles.hpp"

using namespace hitstat;

namespace {

ChainSpec stay_or_go(double go) {
  ChainSpec c;
  c.n = 2;
  c.states = {"1", "2"};
  c.rows = {{{0, 1.0 - go}, {1, go}}, {{1, 1.0}}};
  return validate(std::move(c));
}

}  // namespace

TEST_CASE("tau(y) = 0 when the chain starts at y") {
  ChainSpec c = stay_or_go(0.3);
  HittingPmf h = hitting_pmf(c, 1, 1, 5);
  CHECK(h.pmf[0] == 1.0);
  for (int t = 1; t <= 5; ++t) CHECK(h.pmf[static_cast<std::size_t>(t)] == 0.0);
  CHECK(h.tail == 0.0);
}

TEST_CASE("geometric exit: P_1(tau(2) = 3) = 0.7^2 * 0.3") {
  ChainSpec c = stay_or_go(0.3);
  HittingPmf h = hitting_pmf(c, 0, 1, 10);
  CHECK(h.pmf[3] == doctest::Approx(0.147).epsilon(1e-14));
}

TEST_CASE("cycle trap DP matches the scheduled closed form") {
  FamilyInstance inst = cycle_trap(5, 9);
  CHECK(inst.params.at("r") == 2);
  CHECK(inst.params.at("k") == 1);
  HittingPmf h = hitting_pmf(inst.chain, static_cast<int>(inst.designated.at("x")),
                             static_cast<int>(inst.designated.at("y")), 9);
  CHECK(std::abs(h.pmf[9] - 0.125) <= 1e-12);
  CHECK(std::abs(h.pmf[9] - inst.closed_forms.at("hit_prob")) <= 1e-12);
}

TEST_CASE("hitting DP agrees with brute-force path enumeration") {
  for (std::uint64_t seed : {11ULL, 12ULL, 13ULL}) {
    FamilyInstance inst = random_chain(4, seed);
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y) {
        HittingPmf h = hitting_pmf(inst.chain, x, y, 8);
        for (int t = 0; t <= 8; ++t)
          CHECK(h.pmf[static_cast<std::size_t>(t)] ==
                doctest::Approx(oracle::hitting_prob(inst.chain, x, y, t)).epsilon(1e-12));
      }
  }
}

TEST_CASE("hitting mass is conserved") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    FamilyInstance inst = random_chain(2 + static_cast<int>(seed % 7), seed * 31 + 1);
    HittingPmf h = hitting_pmf(inst.chain, 0, inst.chain.n - 1, 60);
    const double mass = std::accumulate(h.pmf.begin(), h.pmf.end(), 0.0) + h.tail;
    CHECK(std::abs(mass - 1.0) <= 1e-10);
    for (double v : h.pmf) CHECK(v >= 0.0);
  }
}

TEST_CASE("surprise pmf: one-step value and one-state chain") {
  FamilyInstance inst = random_chain(5, 44);
  SurprisePmf sp = surprise_pmf(inst.chain, 2, 6);
  CHECK(sp.s[1] == doctest::Approx(1.0 - inst.chain.prob(2, 2)).epsilon(1e-14));

  ChainSpec one;
  one.n = 1;
  one.states = {"o"};
  one.rows = {{{0, 1.0}}};
  one = validate(std::move(one));
  SurprisePmf so = surprise_pmf(one, 0, 5);
  for (int t = 1; t <= 5; ++t) CHECK(so.s[static_cast<std::size_t>(t)] == 0.0);
}

TEST_CASE("surprise pmf equals the visited-set enumeration") {
  for (std::uint64_t seed : {3ULL, 4ULL}) {
    FamilyInstance inst = random_chain(4, seed);
    SurprisePmf sp = surprise_pmf(inst.chain, 1, 7);
    for (int t = 1; t <= 7; ++t)
      CHECK(sp.s[static_cast<std::size_t>(t)] ==
            doctest::Approx(oracle::surprise_prob(inst.chain, 1, t)).epsilon(1e-10));
  }
}

TEST_CASE("surprise equals the sum of hitting pmfs across targets") {
  FamilyInstance inst = random_reversible(6, 77);
  SurprisePmf sp = surprise_pmf(inst.chain, 0, 40);
  for (int t = 1; t <= 40; ++t) {
    double sum = 0.0;
    for (int y = 0; y < 6; ++y) {
      if (y == 0) continue;
      sum += hitting_pmf(inst.chain, 0, y, 40).pmf[static_cast<std::size_t>(t)];
    }
    CHECK(std::abs(sp.s[static_cast<std::size_t>(t)] - sum) <= 1e-10);
  }
}

TEST_CASE("stationary-start hitting: q[0] = pi(y), cycle case, 1/t bound") {
  ChainSpec cyc;
  cyc.n = 2;
  cyc.states = {"a", "b"};
  cyc.rows = {{{1, 1.0}}, {{0, 1.0}}};
  cyc = validate(std::move(cyc));
  HittingPmf q = stationary_hitting_pmf(cyc, 0, 6);
  CHECK(q.pmf[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(q.pmf[1] == doctest::Approx(0.5).epsilon(1e-12));

  for (std::uint64_t seed : {5ULL, 6ULL}) {
    FamilyInstance inst = random_chain(7, seed);
    StationaryDist sd = stationary(inst.chain);
    for (int y = 0; y < 7; ++y) {
      HittingPmf qq = stationary_hitting_pmf(inst.chain, y, 50);
      CHECK(qq.pmf[0] == doctest::Approx(sd.pi[static_cast<std::size_t>(y)]).epsilon(1e-10));
      for (int t = 1; t <= 50; ++t) {
        CHECK(qq.pmf[static_cast<std::size_t>(t)] <= 1.0 / t + 1e-12);
        if (t >= 2)
          CHECK(qq.pmf[static_cast<std::size_t>(t)] <=
                qq.pmf[static_cast<std::size_t>(t - 1)] + 1e-12);
      }
    }
  }
}

TEST_CASE("expected hitting: identities and the gambler's ruin square") {
  FamilyInstance inst = random_chain(5, 8);
  CHECK(expected_hitting(inst.chain, 3, 3) == 0.0);

  for (int m = 2; m <= 6; ++m) {
    const int n = 1 << m;
    ChainSpec walk = graph_walk_chain(path_graph(n));
    const double expect = static_cast<double>(n - 1) * static_cast<double>(n - 1);
    CHECK(expected_hitting(walk, 0, n - 1) == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("expected hitting of a pure-birth chain is (n-1)/p") {
  FamilyInstance pb = pure_birth(9, 27);
  const double p = pb.params.at("p");
  CHECK(expected_hitting(pb.chain, 0, 8) ==
        doctest::Approx(8.0 * (1.0 + (1.0 - p) / p)).epsilon(1e-10));
  CHECK(expected_hitting(pb.chain, 0, 8) ==
        doctest::Approx(pb.closed_forms.at("expected_hitting")).epsilon(1e-10));
}

TEST_CASE("expected hitting detects unreachable targets") {
  ChainSpec c;
  c.n = 3;
  c.states = {"s", "a", "y"};
  c.rows = {{{1, 0.5}, {2, 0.5}}, {{1, 1.0}}, {{2, 1.0}}};
  c = validate(std::move(c));
  CHECK_THROWS_AS(expected_hitting(c, 0, 2), Unreachable);
}

TEST_CASE("sample_path basics") {
  ChainSpec cyc;
  cyc.n = 2;
  cyc.states = {"a", "b"};
  cyc.rows = {{{1, 1.0}}, {{0, 1.0}}};
  cyc = validate(std::move(cyc));
  SamplePath sp = sample_path(cyc, 0, 1, 123, 100);
  CHECK(sp.hit);
  CHECK(sp.states == std::vector<int>{0, 1});

  SamplePath same = sample_path(cyc, 0, 0, 5, 100);
  CHECK(same.states == std::vector<int>{0});

  FamilyInstance inst = random_chain(6, 9);
  SamplePath a = sample_path(inst.chain, 0, 5, 42, 100000);
  SamplePath b = sample_path(inst.chain, 0, 5, 42, 100000);
  CHECK(a.states == b.states);
}

TEST_CASE("10^5 sampled paths match the exact pmf within 3-sigma bands") {
  FamilyInstance inst = random_chain(6, 1234);
  const int x = 0, y = 4;
  const long N = 100000;
  HittingPmf h = hitting_pmf(inst.chain, x, y, 60);
  std::vector<long> counts(61, 0);
  long tail_count = 0;
  for (long i = 0; i < N; ++i) {
    SplitMix64 rng = SplitMix64::substream(2024, static_cast<std::uint64_t>(i));
    int cur = x;
    long steps = 0;
    while (cur != y && steps <= 60) {
      const auto& row = inst.chain.rows[static_cast<std::size_t>(cur)];
      double u = rng.next_double();
      double acc = 0.0;
      int nxt = row.back().j;
      for (const Entry& e : row) {
        acc += e.p;
        if (u < acc) {
          nxt = e.j;
          break;
        }
      }
      cur = nxt;
      ++steps;
    }
    if (cur == y && steps <= 60)
      ++counts[static_cast<std::size_t>(steps)];
    else
      ++tail_count;
  }
  for (int t = 0; t <= 60; ++t) {
    const double p = h.pmf[static_cast<std::size_t>(t)];
    const double freq = static_cast<double>(counts[static_cast<std::size_t>(t)]) / N;
    const double band = 3.0 * std::sqrt(p * (1.0 - p) / N) + 1.0 / N;
    CHECK(std::abs(freq - p) <= band);
  }
  const double tail_freq = static_cast<double>(tail_count) / N;
  const double band = 3.0 * std::sqrt(h.tail * (1.0 - h.tail) / N) + 1.0 / N;
  CHECK(std::abs(tail_freq - h.tail) <= band);
}

TEST_CASE("loop erasure follows the index recursion") {
  CHECK(loop_erase({7}) == std::vector<int>{7});
  CHECK(loop_erase({1, 2, 3}) == std::vector<int>{1, 2, 3});
  CHECK(loop_erase({0, 1, 0, 2}) == std::vector<int>{0, 2});
  CHECK(loop_erase({0, 1, 2, 1, 3, 0, 4}) == std::vector<int>{0, 4});
}

TEST_CASE("loop erasure output is simple, idempotent, and endpoint-preserving") {
  FamilyInstance inst = random_chain(8, 3131);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    SamplePath sp = sample_path(inst.chain, 1, 6, seed, 100000);
    REQUIRE(sp.hit);
    std::vector<int> w = loop_erase(sp.states);
    std::set<int> uniq(w.begin(), w.end());
    CHECK(uniq.size() == w.size());
    CHECK(w.size() <= 8);
    CHECK(w.front() == sp.states.front());
    CHECK(w.back() == sp.states.back());
    CHECK(loop_erase(w) == w);
  }
}

TEST_CASE("Monte Carlo moments: exact cases and CI behavior") {
  ChainSpec cyc;
  cyc.n = 2;
  cyc.states = {"a", "b"};
  cyc.rows = {{{1, 1.0}}, {{0, 1.0}}};
  cyc = validate(std::move(cyc));
  MomentEstimate det = mc_hitting_moments(cyc, 0, 1, 100, 7, 1000);
  CHECK(det.mean == 1.0);
  CHECK(det.variance == 0.0);

  ChainSpec g = stay_or_go(0.5);
  MomentEstimate est = mc_hitting_moments(g, 0, 1, 20000, 99, 1000000);
  CHECK(std::abs(est.mean - 2.0) <= est.ci95_mean);

  // reproducibility is bit-exact in (seed, samples, cap)
  MomentEstimate again = mc_hitting_moments(g, 0, 1, 20000, 99, 1000000);
  CHECK(again.mean == est.mean);
  CHECK(again.variance == est.variance);
}

TEST_CASE("a truncating sample poisons the whole estimate") {
  ChainSpec c;
  c.n = 2;
  c.states = {"a", "b"};
  c.rows = {{{0, 1.0}}, {{1, 1.0}}};  // y unreachable
  c = validate(std::move(c));
  CHECK_THROWS_AS(mc_hitting_moments(c, 0, 1, 10, 3, 50), CapExceeded);
}
