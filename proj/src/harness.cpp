#include "hitstat/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <Eigen/Dense>

#include "hitstat/hitting.hpp"
#include "hitstat/io.hpp"
#include "hitstat/maxprob.hpp"
#include "hitstat/rng.hpp"

namespace hitstat {

namespace {
constexpr double kTwoE = 2.0 * 2.718281828459045235;
constexpr double kFourE = 4.0 * 2.718281828459045235;
}  // namespace

std::string bound_kind_name(BoundKind k) {
  switch (k) {
    case BoundKind::General: return "general";
    case BoundKind::ReversibleLogPi: return "reversible_log_pi";
    case BoundKind::GraphLogN: return "graph_log_n";
    case BoundKind::ExtremalReversible: return "extremal_reversible";
    case BoundKind::PositiveEigen: return "positive_eigen";
    case BoundKind::Stationary: return "stationary";
    case BoundKind::Composite: return "composite";
    case BoundKind::MaxProbSum: return "maxprob_sum";
    case BoundKind::GeomSum: return "geom_sum";
  }
  return "unknown";
}

double bound_value(BoundKind kind, const BoundCtx& ctx) {
  const double n = static_cast<double>(ctx.n);
  const double t = static_cast<double>(ctx.t);
  switch (kind) {
    case BoundKind::General:
      if (ctx.t <= ctx.n) throw NotApplicable("general bound needs t > n");
      return n / t;
    case BoundKind::ReversibleLogPi:
      if (ctx.t < 1) throw NotApplicable("needs t >= 1");
      if (!(ctx.pi_x > 0.0)) throw NotApplicable("needs pi(x) > 0");
      return kTwoE * std::max(1.0, std::log(1.0 / ctx.pi_x)) / t;
    case BoundKind::GraphLogN:
      if (ctx.n < 2) throw NotApplicable("needs n >= 2");
      if (ctx.t < 1) throw NotApplicable("needs t >= 1");
      return kFourE * std::log(n) / t;
    case BoundKind::ExtremalReversible:
      if (ctx.t < 4 * ctx.n + 4) throw NotApplicable("needs t >= 4n+4");
      return std::sqrt(2.0 * n) / t;
    case BoundKind::PositiveEigen:
      if (ctx.t <= ctx.n) throw NotApplicable("needs t > n");
      return 0.5 * std::sqrt(n / (t * (t - n)));
    case BoundKind::Stationary:
      if (ctx.t < 1) throw NotApplicable("needs t >= 1");
      if (!(ctx.pi_x > 0.0)) throw NotApplicable("needs pi(x) > 0");
      return 1.0 / (t * ctx.pi_x);
    case BoundKind::Composite: {
      if (!(ctx.t > ctx.s) || ctx.s <= 0) throw NotApplicable("needs t > s > 0");
      // psi(u) = n/u holds for every u >= 1 (sup-probability argument), so
      // no extra predicate on t - s.
      const double u = static_cast<double>(ctx.t - ctx.s);
      return ctx.d_x_s * n / u + 1.0 / u;
    }
    case BoundKind::MaxProbSum:
      if (!(ctx.pi_x > 0.0)) throw NotApplicable("needs pi(x) > 0");
      return kTwoE * std::max(1.0, std::log(1.0 / ctx.pi_x));
    case BoundKind::GeomSum:
      if (ctx.t < 1) throw NotApplicable("needs t >= 1");
      return 0.5 * std::sqrt(n / (t * (t + n)));
  }
  throw NotApplicable("unknown bound kind");
}

int worker_count() {
  if (const char* env = std::getenv("HITSTAT_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace {

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int used = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  pool.reserve(static_cast<std::size_t>(used));
  for (int w = 0; w < used; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) break;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

std::string params_string(const FamilyInstance& inst) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : inst.params) {
    if (!first) os << ';';
    first = false;
    os << k << '=';
    if (v == std::floor(v) && std::abs(v) < 1e15)
      os << static_cast<long long>(v);
    else
      os << fmt17(v);
  }
  return os.str();
}

bool is_graph_family(Family f) {
  switch (f) {
    case Family::Gm:
    case Family::GmTorus:
    case Family::CycleGraph:
    case Family::PathGraph:
    case Family::BinaryTree:
    case Family::Torus3:
    case Family::RandomGraph:
      return true;
    default:
      return false;
  }
}

struct ChainAnalysis {
  bool has_pi = false;
  StationaryDist pi;
  bool reversible = false;
  bool nonneg_eigen = false;
  bool graph_walk = false;
  long cert_T = -1;      // certification horizon for p*, -1 if unavailable
  int tmix_quarter = -1; // t_mix(1/4), -1 if not reached within the cap
};

ChainAnalysis analyze(const FamilyInstance& inst, bool want_eigen, bool want_cert,
                      bool want_tmix) {
  ChainAnalysis a;
  const ChainSpec& chain = inst.chain;
  a.graph_walk = is_graph_family(inst.family) ||
                 (chain.metadata.count("family") && chain.metadata.at("family") == "graph_walk");
  try {
    a.pi = stationary(chain);
    a.has_pi = true;
  } catch (const NotUnique&) {
    return a;
  }
  a.reversible = is_reversible(chain, a.pi, 1e-10);
  if (want_eigen && a.reversible && chain.n <= 2000) {
    const int n = chain.n;
    Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      const double spi = std::sqrt(a.pi.pi[static_cast<std::size_t>(i)]);
      for (const Entry& e : chain.rows[static_cast<std::size_t>(i)])
        sym(i, e.j) += spi * e.p / std::sqrt(a.pi.pi[static_cast<std::size_t>(e.j)]);
    }
    sym = 0.5 * (sym + sym.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    a.nonneg_eigen = solver.eigenvalues().minCoeff() >= -1e-12;
  }
  if (want_cert && a.reversible) a.cert_T = certification_horizon(chain);
  if (want_tmix) {
    try {
      a.tmix_quarter = mixing_time(chain, 0.25, 4096);
    } catch (const HorizonTooSmall&) {
      a.tmix_quarter = -1;
    }
  }
  return a;
}

struct RowCollector {
  // one aggregate per kind: the row with the smallest slack seen so far
  std::map<std::string, ReportRow> worst;
  std::vector<ReportRow> full;
  bool keep_full = false;
  long checks = 0;
  long failures = 0;

  void add(const ReportRow& row) {
    ++checks;
    if (row.pass == 0) ++failures;
    if (keep_full) {
      full.push_back(row);
      return;
    }
    auto it = worst.find(row.kind);
    if (it == worst.end() || row.slack < it->second.slack) worst[row.kind] = row;
  }

  void add_na(const ReportRow& row) {
    if (keep_full)
      full.push_back(row);
    else if (!worst.count(row.kind))
      worst[row.kind] = row;
  }

  std::vector<ReportRow> rows() const {
    if (keep_full) return full;
    std::vector<ReportRow> out;
    out.reserve(worst.size());
    for (const auto& [k, r] : worst) out.push_back(r);
    return out;
  }
};

ReportRow make_row(const FamilyInstance& inst, const std::string& params, int x, int y, long t,
                   double exact, const std::string& kind, double bound) {
  ReportRow row;
  row.family = family_name(inst.family);
  row.params = params;
  row.x = x;
  row.y = y;
  row.t = t;
  row.exact = exact;
  row.kind = kind;
  row.bound = bound;
  row.slack = bound - exact;
  row.pass = (exact <= bound + kSlackTol) ? 1 : 0;
  return row;
}

ReportRow make_na_row(const FamilyInstance& inst, const std::string& params,
                      const std::string& kind) {
  ReportRow row;
  row.family = family_name(inst.family);
  row.params = params;
  row.kind = kind;
  row.t = 0;
  row.exact = std::numeric_limits<double>::quiet_NaN();
  row.bound = std::numeric_limits<double>::quiet_NaN();
  row.slack = std::numeric_limits<double>::quiet_NaN();
  row.pass = -1;
  return row;
}

}  // namespace

VerificationReport verify_family(const std::vector<FamilyInstance>& corpus,
                                 const VerifyOptions& options) {
  const bool want_positive_eigen =
      std::count(options.kinds.begin(), options.kinds.end(), BoundKind::PositiveEigen) > 0;
  const bool want_cert =
      std::count(options.kinds.begin(), options.kinds.end(), BoundKind::MaxProbSum) > 0;
  const bool want_composite =
      std::count(options.kinds.begin(), options.kinds.end(), BoundKind::Composite) > 0;
  const bool want_stationary =
      std::count(options.kinds.begin(), options.kinds.end(), BoundKind::Stationary) > 0;

  const long t_max = options.t_grid.empty() ? 0 : options.t_grid.back();
  std::vector<RowCollector> collectors(corpus.size());

  parallel_for(corpus.size(), worker_count(), [&](std::size_t ci) {
    const FamilyInstance& inst = corpus[ci];
    const ChainSpec& chain = inst.chain;
    const std::string params = params_string(inst);
    RowCollector& col = collectors[ci];
    col.keep_full = options.full_rows;
    const long n = chain.n;

    ChainAnalysis an = analyze(inst, want_positive_eigen, want_cert, want_composite);

    auto applicable = [&](BoundKind k) -> bool {
      switch (k) {
        case BoundKind::General: return true;
        case BoundKind::ReversibleLogPi: return an.has_pi && an.reversible;
        case BoundKind::GraphLogN: return an.graph_walk && n >= 2;
        case BoundKind::ExtremalReversible: return an.has_pi && an.reversible;
        case BoundKind::PositiveEigen: return an.has_pi && an.reversible && an.nonneg_eigen;
        case BoundKind::Stationary: return an.has_pi;
        case BoundKind::Composite: return an.has_pi;
        case BoundKind::MaxProbSum: return an.cert_T > 0;
        case BoundKind::GeomSum: return false;  // not a chain-level bound
      }
      return false;
    };

    std::vector<BoundKind> active;
    for (BoundKind k : options.kinds) {
      if (applicable(k))
        active.push_back(k);
      else
        col.add_na(make_na_row(inst, params, bound_kind_name(k)));
    }
    if (active.empty() && !want_stationary) return;

    std::vector<int> xs;
    if (options.policy == XyPolicy::AllPairs) {
      for (int x = 0; x < chain.n; ++x) xs.push_back(x);
    } else {
      xs.push_back(static_cast<int>(inst.designated.at("x")));
    }

    for (int x : xs) {
      const double pi_x = an.has_pi ? an.pi.pi[static_cast<std::size_t>(x)] : 0.0;

      // d_x(s) profile for the composite bound, s <= t_max/2.
      std::vector<double> dprof;
      if (want_composite && an.has_pi) {
        const long smax = t_max / 2;
        dprof.resize(static_cast<std::size_t>(smax) + 1);
        std::vector<double> dist(static_cast<std::size_t>(chain.n), 0.0);
        dist[static_cast<std::size_t>(x)] = 1.0;
        for (long s = 0; s <= smax; ++s) {
          double tv = 0.0;
          for (int i = 0; i < chain.n; ++i)
            tv += std::abs(dist[static_cast<std::size_t>(i)] -
                           an.pi.pi[static_cast<std::size_t>(i)]);
          dprof[static_cast<std::size_t>(s)] = 0.5 * tv;
          if (s < smax) dist = step_dist(chain, dist);
        }
      }

      // Certified p* row for Prop 1.4 and the pointwise Lemma-2.1 bound.
      double pstar_sum_bound = 0.0;
      bool have_pstar = false;
      if (want_cert && an.cert_T > 0) {
        MaximalRow mr = maximal_row(chain, x, an.cert_T);
        if (mr.certified) {
          double sum = 0.0;
          for (double v : mr.pstar) sum += v;
          const double n_tail = static_cast<double>(n) * mr.tail_eps;
          have_pstar = true;
          pstar_sum_bound = sum + n_tail;
          BoundCtx ctx;
          ctx.n = n;
          ctx.pi_x = pi_x;
          const double bound = bound_value(BoundKind::MaxProbSum, ctx) + n_tail;
          col.add(make_row(inst, params, x, -1, mr.horizon, sum, "maxprob_sum", bound));
          // Even/odd split consequence: sum over odd suprema is at most the
          // even-supremum sum. Truncation can undercut each even supremum by
          // up to 2 tail_eps (sup past T, plus pi(z) vs the largest even
          // power), hence the 2n allowance.
          double even_sum = 0.0, odd_sum = 0.0;
          for (double v : mr.even) even_sum += v;
          for (double v : mr.odd) odd_sum += v;
          col.add(make_row(inst, params, x, -1, mr.horizon, odd_sum, "maxprob_odd_le_even",
                           even_sum + 2.0 * n_tail));
        }
      }

      std::vector<double> surprise(static_cast<std::size_t>(t_max) + 1, 0.0);
      std::vector<double> max_over_y(static_cast<std::size_t>(t_max) + 1, 0.0);

      std::vector<int> ys;
      if (options.policy == XyPolicy::AllPairs) {
        for (int y = 0; y < chain.n; ++y)
          if (y != x) ys.push_back(y);
      } else {
        ys.push_back(static_cast<int>(inst.designated.at("y")));
      }

      for (int y : ys) {
        HittingPmf h = hitting_pmf(chain, x, y, t_max);
        for (long t = 1; t <= t_max; ++t) {
          surprise[static_cast<std::size_t>(t)] += h.pmf[static_cast<std::size_t>(t)];
          max_over_y[static_cast<std::size_t>(t)] =
              std::max(max_over_y[static_cast<std::size_t>(t)], h.pmf[static_cast<std::size_t>(t)]);
        }
        for (long t : options.t_grid) {
          const double exact = h.pmf[static_cast<std::size_t>(t)];
          for (BoundKind k : active) {
            if (k == BoundKind::MaxProbSum) continue;
            BoundCtx ctx;
            ctx.n = n;
            ctx.t = t;
            ctx.pi_x = pi_x;
            if (k == BoundKind::Composite) {
              ctx.s = t / 2;
              if (ctx.s < 1) continue;
              ctx.d_x_s = dprof[static_cast<std::size_t>(ctx.s)];
            }
            double bound;
            try {
              bound = bound_value(k, ctx);
            } catch (const NotApplicable&) {
              continue;  // outside the kind's t-predicate at this grid point
            }
            col.add(make_row(inst, params, x, y, t, exact, bound_kind_name(k), bound));
          }
          // Prop 1.6 consequence: t beyond the mixing threshold forces 4/t.
          if (want_composite && an.tmix_quarter >= 0) {
            const long threshold =
                2L * an.tmix_quarter *
                static_cast<long>(std::ceil(std::log2(std::max<double>(2.0, static_cast<double>(n)))));
            if (t > threshold)
              col.add(make_row(inst, params, x, y, t, exact, "composite_mix4",
                               4.0 / static_cast<double>(t)));
          }
        }
      }

      if (options.policy == XyPolicy::AllPairs) {
        for (long t : options.t_grid) {
          const double s_exact = surprise[static_cast<std::size_t>(t)];
          for (BoundKind k : active) {
            if (k != BoundKind::General && k != BoundKind::ExtremalReversible &&
                k != BoundKind::GraphLogN)
              continue;
            if (!options.surprise_corollaries) continue;
            BoundCtx ctx;
            ctx.n = n;
            ctx.t = t;
            ctx.pi_x = pi_x;
            double bound;
            try {
              bound = static_cast<double>(n) * bound_value(k, ctx);
            } catch (const NotApplicable&) {
              continue;
            }
            col.add(make_row(inst, params, x, -1, t, s_exact,
                             "surprise_" + bound_kind_name(k), bound));
          }
          if (have_pstar && t >= 1)
            col.add(make_row(inst, params, x, -1, t, max_over_y[static_cast<std::size_t>(t)],
                             "maxprob_pointwise", pstar_sum_bound / static_cast<double>(t)));
        }
      }
    }

    // Stationary-start rows: q[t] = P_pi(tau(y) = t) <= 1/t and non-increasing.
    if (want_stationary && an.has_pi) {
      for (int y = 0; y < chain.n; ++y) {
        HittingPmf q = stationary_hitting_pmf(chain, y, t_max);
        for (long t : options.t_grid) {
          const double exact = q.pmf[static_cast<std::size_t>(t)];
          if (t >= 1) {
            col.add(make_row(inst, params, -1, y, t, exact, "stationary_pi_start",
                             1.0 / static_cast<double>(t)));
            if (t >= 2)
              col.add(make_row(inst, params, -1, y, t, exact, "stationary_monotone",
                               q.pmf[static_cast<std::size_t>(t - 1)]));
          }
        }
      }
    }
  });

  VerificationReport report;
  std::ostringstream grid;
  if (!options.t_grid.empty())
    grid << "t=" << options.t_grid.front() << ".." << options.t_grid.back() << " ("
         << options.t_grid.size() << " points)";
  report.grid = grid.str();
  for (auto& col : collectors) {
    report.checks += col.checks;
    report.failures += col.failures;
    for (ReportRow& row : col.rows()) report.rows.push_back(std::move(row));
  }
  return report;
}

std::string report_to_csv(const VerificationReport& report) {
  std::ostringstream os;
  os << "family,params,x,y,t,exact,kind,bound,slack,pass\n";
  for (const ReportRow& row : report.rows) {
    os << row.family << ',' << row.params << ',' << row.x << ',' << row.y << ',' << row.t << ','
       << fmt17(row.exact) << ',' << row.kind << ',' << fmt17(row.bound) << ','
       << fmt17(row.slack) << ','
       << (row.pass == 1 ? "pass" : (row.pass == 0 ? "FAIL" : "na")) << '\n';
  }
  return os.str();
}

LocatorResult surprise_lower_locator(const ChainSpec& chain, int x, int y,
                                     const std::vector<int>& U, long N, long t,
                                     long mc_samples, std::uint64_t seed) {
  if (N < 1 || t < 1) throw BadParams("need N >= 1 and t >= 1");
  std::set<int> uset(U.begin(), U.end());

  // Structural precondition: with y removed, U must be unreachable from x.
  {
    std::vector<char> seen(static_cast<std::size_t>(chain.n), 0);
    std::vector<int> queue{x};
    seen[static_cast<std::size_t>(x)] = 1;
    if (uset.count(x)) throw PreconditionFailed("x already lies in U");
    while (!queue.empty()) {
      const int u = queue.back();
      queue.pop_back();
      for (const Entry& e : chain.rows[static_cast<std::size_t>(u)]) {
        if (e.p <= 0.0 || e.j == y || seen[static_cast<std::size_t>(e.j)]) continue;
        if (uset.count(e.j)) throw PreconditionFailed("U reachable without passing y");
        seen[static_cast<std::size_t>(e.j)] = 1;
        queue.push_back(e.j);
      }
    }
  }

  LocatorResult res;
  res.t = t;
  res.N = N;

  // E_y[Z_N]: distinct states of U \ {y} first visited during steps 1..N
  // from y. Exact when the walk from y is deterministic over the window.
  {
    bool deterministic = true;
    int cur = y;
    std::set<int> visited;
    for (long s = 1; s <= N && deterministic; ++s) {
      const auto& row = chain.rows[static_cast<std::size_t>(cur)];
      if (row.size() == 1 && row[0].p == 1.0) {
        cur = row[0].j;
        if (uset.count(cur) && cur != y) visited.insert(cur);
      } else {
        deterministic = false;
      }
    }
    if (deterministic) {
      res.ez = static_cast<double>(visited.size());
      res.ez_low = res.ez;
      res.ez_exact = true;
    } else {
      double sum = 0.0, sumsq = 0.0;
      std::vector<char> mark(static_cast<std::size_t>(chain.n), 0);
      for (long i = 0; i < mc_samples; ++i) {
        SplitMix64 rng = SplitMix64::substream(seed, static_cast<std::uint64_t>(i));
        std::fill(mark.begin(), mark.end(), 0);
        int state = y;
        long count = 0;
        for (long s = 1; s <= N; ++s) {
          const auto& row = chain.rows[static_cast<std::size_t>(state)];
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
          state = nxt;
          if (state != y && uset.count(state) && !mark[static_cast<std::size_t>(state)]) {
            mark[static_cast<std::size_t>(state)] = 1;
            ++count;
          }
        }
        sum += static_cast<double>(count);
        sumsq += static_cast<double>(count) * static_cast<double>(count);
      }
      const double ns = static_cast<double>(mc_samples);
      res.ez = sum / ns;
      const double var = std::max(0.0, (sumsq - ns * res.ez * res.ez) / (ns - 1.0));
      res.ez_low = std::max(0.0, res.ez - 2.576 * std::sqrt(var / ns));
      res.ez_exact = false;
    }
  }

  HittingPmf h = hitting_pmf(chain, x, y, t + N - 1);
  double window = 0.0;
  for (long s = t; s <= t + N - 1; ++s) window += h.pmf[static_cast<std::size_t>(s)];
  res.window_prob = window;
  res.rhs = window * res.ez_low / (2.0 * static_cast<double>(N));

  SurprisePmf sp = surprise_pmf(chain, x, t + 2 * N - 1);
  res.s = t;
  res.lhs = sp.s[static_cast<std::size_t>(t)];
  for (long s = t; s <= t + 2 * N - 1; ++s) {
    if (sp.s[static_cast<std::size_t>(s)] > res.lhs) {
      res.lhs = sp.s[static_cast<std::size_t>(s)];
      res.s = s;
    }
  }
  return res;
}

CyclePstarReport experiment_cycle_pstar(const std::vector<int>& n_list) {
  CyclePstarReport report;
  for (int n : n_list) {
    if (n % 2 != 0 || n < 4 || n > 2048) throw BadParams("cycle sweep needs even n in [4, 2048]");
    const ChainSpec chain = graph_walk_chain(cycle_graph(n));
    const long T = 4L * n * n;
    CyclePstarEntry entry;
    entry.n = n;
    entry.T = T;
    entry.sum = maximal_row_sum(chain, 0, T);
    entry.sum_double_T = maximal_row_sum(chain, 0, 2 * T);
    entry.ratio = entry.sum / std::log(static_cast<double>(n));
    report.entries.push_back(entry);

    if (std::abs(entry.sum_double_T - entry.sum) >= 1e-6) {
      report.pass = false;
      report.failure = "horizon not saturated at n=" + std::to_string(n);
    }
    if ((n == 256 || n == 512 || n == 1024) && (entry.ratio < 0.8 || entry.ratio > kTwoE)) {
      report.pass = false;
      report.failure = "ratio outside [0.8, 2e] at n=" + std::to_string(n);
    }
  }
  return report;
}

GmScalingReport experiment_gm_scaling(const std::vector<int>& m_list, long samples,
                                      std::uint64_t seed) {
  if (samples < 200) throw BadParams("need samples >= 200");
  GmScalingReport report;
  report.var_ratio_ceiling = 12.0;  // generous fence around the observed ~0.5..2
  for (int m : m_list) {
    if (m < 2 || m > 8) throw BadParams("gm scaling is desk scale: 2 <= m <= 8");
    FamilyInstance inst = g_m(m);
    const int x = static_cast<int>(inst.designated.at("x"));
    const int y = static_cast<int>(inst.designated.at("y"));
    const std::uint64_t m_seed = SplitMix64::substream(seed, static_cast<std::uint64_t>(m)).next();
    MomentEstimate est =
        mc_hitting_moments(inst.chain, x, y, samples, m_seed, kDefaultSampleCap);

    GmScalingEntry entry;
    entry.m = m;
    entry.n = inst.chain.n;
    entry.mc_mean = est.mean;
    entry.mc_var = est.variance;
    entry.ci95 = est.ci95_mean;
    const double scale_mean = static_cast<double>(m) * std::pow(2.0, 2 * m);
    const double scale_var = static_cast<double>(m) * std::pow(2.0, 4 * m);
    entry.mean_ratio = est.mean / scale_mean;
    entry.var_ratio = est.variance / scale_var;
    if (m == 3) {
      entry.exact_mean = expected_hitting(inst.chain, x, y);
      entry.has_exact = true;
      if (std::abs(est.mean - entry.exact_mean) > est.ci95_mean) {
        report.pass = false;
        report.failure = "m=3 Monte Carlo mean disagrees with the linear solve";
      }
    }
    if (entry.var_ratio > report.var_ratio_ceiling) {
      report.pass = false;
      report.failure = "variance ratio above ceiling at m=" + std::to_string(m);
    }
    report.entries.push_back(entry);
  }
  for (std::size_t i = 1; i < report.entries.size(); ++i) {
    const double a = report.entries[i - 1].mean_ratio;
    const double b = report.entries[i].mean_ratio;
    const double factor = std::max(a, b) / std::min(a, b);
    if (factor > 2.0) {
      report.pass = false;
      report.failure = "mean ratio drifts by more than a factor 2 between m=" +
                       std::to_string(report.entries[i - 1].m) + " and m=" +
                       std::to_string(report.entries[i].m);
    }
  }
  return report;
}

GmPeakReport experiment_gm_peak(const std::vector<int>& m_list) {
  GmPeakReport report;
  double base_norm = 0.0;
  bool have_base = false;
  for (int m : m_list) {
    if (m < 3 || m > 5) throw BadParams("gm peak runs at m in {3, 4, 5}");
    FamilyInstance inst = g_m(m);
    const int x = static_cast<int>(inst.designated.at("x"));
    const int y = static_cast<int>(inst.designated.at("y"));
    const long T = 40L * m * (1L << (2 * m));
    HittingPmf h = hitting_pmf(inst.chain, x, y, T);
    if (h.tail > 1e-6)
      throw HorizonTooSmall("tail mass " + fmt17(h.tail) + " above 1e-6 at m=" +
                            std::to_string(m));
    GmPeakEntry entry;
    entry.m = m;
    entry.n = inst.chain.n;
    entry.T = T;
    for (long t = 1; t <= T; ++t)
      entry.peak = std::max(entry.peak, static_cast<double>(t) * h.pmf[static_cast<std::size_t>(t)]);
    entry.peak_norm = entry.peak / std::sqrt(std::log(static_cast<double>(entry.n)));
    entry.tail = h.tail;
    if (m == 3) {
      base_norm = entry.peak_norm;
      have_base = true;
      if (!(entry.peak > 0.0)) {
        report.pass = false;
        report.failure = "peak vanished at m=3";
      }
    } else if (have_base && entry.peak_norm < 0.5 * base_norm) {
      report.pass = false;
      report.failure = "normalized peak at m=" + std::to_string(m) +
                       " fell below half the m=3 value";
    }
    report.entries.push_back(entry);
  }
  return report;
}

}  // namespace hitstat
