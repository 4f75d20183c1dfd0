#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hitstat/harness.hpp"
#include "hitstat/hitting.hpp"

using namespace hitstat;

namespace {

std::vector<long> range_grid(long from, long to) {
  std::vector<long> g;
  for (long t = from; t <= to; ++t) g.push_back(t);
  return g;
}

}  // namespace

TEST_CASE("bound values and applicability predicates") {
  BoundCtx ctx;
  ctx.n = 10;
  ctx.t = 100;
  CHECK(bound_value(BoundKind::General, ctx) == doctest::Approx(0.1).epsilon(1e-15));

  ctx.t = 10;
  CHECK_THROWS_AS(bound_value(BoundKind::General, ctx), NotApplicable);

  ctx.t = 44;
  CHECK(bound_value(BoundKind::ExtremalReversible, ctx) ==
        doctest::Approx(std::sqrt(20.0) / 44.0).epsilon(1e-14));
  ctx.t = 43;
  CHECK_THROWS_AS(bound_value(BoundKind::ExtremalReversible, ctx), NotApplicable);

  BoundCtx g;
  g.n = 2;
  g.t = 1;
  CHECK(bound_value(BoundKind::GraphLogN, g) ==
        doctest::Approx(4.0 * std::exp(1.0) * std::log(2.0)).epsilon(1e-14));

  BoundCtx pe;
  pe.n = 10;
  pe.t = 44;
  CHECK(bound_value(BoundKind::PositiveEigen, pe) ==
        doctest::Approx(0.5 * std::sqrt(10.0 / (44.0 * 34.0))).epsilon(1e-14));

  BoundCtx st;
  st.n = 5;
  st.t = 10;
  st.pi_x = 0.25;
  CHECK(bound_value(BoundKind::Stationary, st) == doctest::Approx(0.4).epsilon(1e-14));

  BoundCtx co;
  co.n = 5;
  co.t = 10;
  co.s = 5;
  co.d_x_s = 0.5;
  CHECK(bound_value(BoundKind::Composite, co) == doctest::Approx(0.7).epsilon(1e-14));

  BoundCtx gs;
  gs.n = 2;
  gs.t = 2;
  CHECK(bound_value(BoundKind::GeomSum, gs) == doctest::Approx(0.25).epsilon(1e-14));

  BoundCtx mp;
  mp.pi_x = 0.1;
  CHECK(bound_value(BoundKind::MaxProbSum, mp) ==
        doctest::Approx(2.0 * std::exp(1.0) * std::log(10.0)).epsilon(1e-12));
}

TEST_CASE("general bound campaign on a small random corpus") {
  auto corpus = build_corpus(CorpusKind::Random, 20, 6, 7);
  VerifyOptions opt;
  opt.kinds = {BoundKind::General};
  opt.t_grid = range_grid(3, 60);
  VerificationReport report = verify_family(corpus, opt);
  CHECK(report.all_pass());
  CHECK(report.checks > 1000);
}

TEST_CASE("reversible bounds on a lazy corpus") {
  auto corpus = build_corpus(CorpusKind::LazyReversible, 10, 8, 21);
  VerifyOptions opt;
  opt.kinds = {BoundKind::ExtremalReversible, BoundKind::PositiveEigen};
  opt.t_grid = range_grid(12, 90);
  VerificationReport report = verify_family(corpus, opt);
  CHECK(report.all_pass());
  // at least one real positive-eigen row must have been checked
  bool saw = false;
  for (const auto& row : report.rows)
    if (row.kind == "positive_eigen" && row.pass == 1) saw = true;
  CHECK(saw);
}

TEST_CASE("graph bounds, certified row sums, and the pointwise consequence") {
  auto corpus = build_corpus(CorpusKind::Graphs, 6, 12, 99);
  VerifyOptions opt;
  opt.kinds = {BoundKind::GraphLogN, BoundKind::MaxProbSum};
  opt.t_grid = range_grid(4, 80);
  VerificationReport report = verify_family(corpus, opt);
  CHECK(report.all_pass());
  bool pointwise = false;
  for (const auto& row : report.rows)
    if (row.kind == "maxprob_pointwise" && row.pass == 1) pointwise = true;
  CHECK(pointwise);
}

TEST_CASE("stationary and composite rows on mixed corpora") {
  auto corpus = build_corpus(CorpusKind::Random, 10, 6, 17);
  VerifyOptions opt;
  opt.kinds = {BoundKind::Stationary, BoundKind::Composite};
  opt.t_grid = range_grid(1, 60);
  VerificationReport report = verify_family(corpus, opt);
  CHECK(report.all_pass());
  bool pi_row = false, mono = false, mix4 = false;
  for (const auto& row : report.rows) {
    if (row.kind == "stationary_pi_start") pi_row = true;
    if (row.kind == "stationary_monotone") mono = true;
    if (row.kind == "composite_mix4") mix4 = true;
  }
  CHECK(pi_row);
  CHECK(mono);
  CHECK(mix4);
}

TEST_CASE("inapplicable kinds are recorded, not failed") {
  auto corpus = build_corpus(CorpusKind::Random, 3, 5, 31);
  VerifyOptions opt;
  opt.kinds = {BoundKind::GraphLogN};  // random chains are not graph walks
  opt.t_grid = range_grid(3, 20);
  VerificationReport report = verify_family(corpus, opt);
  CHECK(report.all_pass());
  int na = 0;
  for (const auto& row : report.rows)
    if (row.pass == -1) ++na;
  CHECK(na == 3);
}

TEST_CASE("reports are byte-identical across reruns") {
  auto corpus = build_corpus(CorpusKind::Reversible, 6, 7, 55);
  VerifyOptions opt;
  opt.kinds = {BoundKind::General, BoundKind::ExtremalReversible};
  opt.t_grid = range_grid(8, 70);
  const std::string a = report_to_csv(verify_family(corpus, opt));
  const std::string b =
      report_to_csv(verify_family(build_corpus(CorpusKind::Reversible, 6, 7, 55), opt));
  CHECK(a == b);
  CHECK(a.find("FAIL") == std::string::npos);
}

TEST_CASE("locator on the deterministic-tail pure-birth chain") {
  FamilyInstance inst = pure_birth_tail(16, 256);
  const int x = static_cast<int>(inst.designated.at("x"));
  const int y = static_cast<int>(inst.designated.at("y"));
  const long N = inst.designated.at("N");
  const double expectation = expected_hitting(inst.chain, x, y);
  const long t = std::max(1L, static_cast<long>(std::llround(expectation)) - N / 2);
  LocatorResult res = surprise_lower_locator(inst.chain, x, y, inst.designated_set, N, t);
  CHECK(res.ez_exact);
  CHECK(res.ez == 16.0);
  CHECK(res.rhs > 0.0);
  CHECK(res.lhs >= res.rhs);
  CHECK(res.s >= t);
  CHECK(res.s < t + 2 * N);
}

TEST_CASE("locator precondition failure is structural") {
  // U reachable around y: x -> a -> u with y off to the side
  ChainSpec c;
  c.n = 4;
  c.states = {"x", "a", "u", "y"};
  c.rows = {{{1, 1.0}}, {{2, 0.5}, {3, 0.5}}, {{2, 1.0}}, {{3, 1.0}}};
  c = validate(std::move(c));
  CHECK_THROWS_AS(surprise_lower_locator(c, 0, 3, {2}, 4, 2), PreconditionFailed);
}

TEST_CASE("locator is vacuous when the window has no hitting mass") {
  FamilyInstance inst = pure_birth_tail(9, 30);
  const int x = static_cast<int>(inst.designated.at("x"));
  const int y = static_cast<int>(inst.designated.at("y"));
  // t = 1: tau(y) >= n-1 = 8 > 1 + N - 1 with N = 2
  LocatorResult res = surprise_lower_locator(inst.chain, x, y, inst.designated_set, 2, 1);
  CHECK(res.window_prob == 0.0);
  CHECK(res.rhs == 0.0);
  CHECK(res.lhs >= 0.0);
}

TEST_CASE("experiment smoke runs at desk scale") {
  CyclePstarReport cp = experiment_cycle_pstar({8, 16});
  CHECK(cp.pass);
  CHECK(cp.entries.size() == 2);
  CHECK(cp.entries[0].sum > 1.0);

  GmScalingReport gs = experiment_gm_scaling({3}, 300, 11);
  CHECK(gs.pass);
  REQUIRE(gs.entries.size() == 1);
  CHECK(gs.entries[0].has_exact);
  CHECK(gs.entries[0].mc_mean > 0.0);

  GmPeakReport gp = experiment_gm_peak({3});
  CHECK(gp.pass);
  REQUIRE(gp.entries.size() == 1);
  CHECK(gp.entries[0].peak > 0.0);
  CHECK(gp.entries[0].tail <= 1e-6);
}
