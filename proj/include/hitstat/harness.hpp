#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hitstat/chain.hpp"
#include "hitstat/constructions.hpp"

namespace hitstat {

/// The bound families checked by the verification campaigns. Each kind has
/// an applicability predicate; bound_value throws NotApplicable instead of
/// silently computing outside it.
enum class BoundKind {
  General,             // n/t,                     t > n
  ReversibleLogPi,     // 2e max(1, log 1/pi(x))/t, reversible
  GraphLogN,           // 4e log(n)/t,             simple-graph walk, n >= 2
  ExtremalReversible,  // sqrt(2n)/t,              reversible, t >= 4n+4
  PositiveEigen,       // (1/2) sqrt(n/(t(t-n))),  reversible, eigenvalues >= 0, t > n
  Stationary,          // 1/(t pi(x)),             stationary distribution exists
  Composite,           // d_x(s) n/(t-s) + 1/(t-s), t > s > 0
  MaxProbSum,          // 2e max(1, log 1/pi(x)),  certified p* row sums
  GeomSum,             // (1/2) sqrt(n/(t(t+n))),  geometric sums
};

std::string bound_kind_name(BoundKind k);

struct BoundCtx {
  long n = 0;
  long t = 0;
  double pi_x = 0.0;
  long s = 0;
  double d_x_s = 0.0;
};

double bound_value(BoundKind kind, const BoundCtx& ctx);

struct ReportRow {
  std::string family;
  std::string params;
  int x = -1;  // -1 marks the stationary start or a row without an x
  int y = -1;
  long t = 0;
  double exact = 0.0;
  std::string kind;
  double bound = 0.0;
  double slack = 0.0;  // bound - exact
  int pass = 1;        // 1 pass, 0 fail, -1 not applicable
};

struct VerificationReport {
  std::vector<ReportRow> rows;
  std::string corpus;
  std::string grid;
  std::uint64_t seed = 0;
  long checks = 0;    // individual comparisons evaluated
  long failures = 0;  // comparisons with exact > bound + tolerance
  bool all_pass() const { return failures == 0; }
};

/// Bound comparisons forgive only float noise.
inline constexpr double kSlackTol = 1e-12;

enum class XyPolicy { AllPairs, Designated };

struct VerifyOptions {
  std::vector<BoundKind> kinds;
  std::vector<long> t_grid;  // sorted ascending
  XyPolicy policy = XyPolicy::AllPairs;
  bool full_rows = false;    // emit every (x,y,t,kind) row, not just the worst per kind
  bool surprise_corollaries = true;  // n * bound checks on P_x(S_t), all-pairs only
};

/// Runs every applicable (kind, x, y, t) comparison over the corpus. The
/// default report keeps, per instance and kind, the row with the smallest
/// slack; all comparisons still count toward checks/failures.
VerificationReport verify_family(const std::vector<FamilyInstance>& corpus,
                                 const VerifyOptions& options);

std::string report_to_csv(const VerificationReport& report);

struct LocatorResult {
  long s = 0;        // argmax of P_x(S_s) over [t, t+2N)
  double lhs = 0.0;  // P_x(S_s) at that s
  double rhs = 0.0;  // window_prob * ez_low / (2N)
  long t = 0;
  long N = 0;
  double window_prob = 0.0;  // P_x(t <= tau(y) < t+N)
  double ez = 0.0;           // E_y[Z_N]: new states of U visited in steps 1..N
  double ez_low = 0.0;       // 99% CI lower bound (equals ez when exact)
  bool ez_exact = false;
};

/// Lemma-5.1 check: find s in [t, t+2N) with P_x(S_s) >= rhs. The structural
/// precondition (every x -> U path passes y) is verified by BFS with y
/// removed; E_y[Z_N] is exact when the walk from y is deterministic for N
/// steps and Monte Carlo with a 99% CI otherwise.
LocatorResult surprise_lower_locator(const ChainSpec& chain, int x, int y,
                                     const std::vector<int>& U, long N, long t,
                                     long mc_samples = 4000, std::uint64_t seed = 1);

struct CyclePstarEntry {
  int n = 0;
  long T = 0;
  double sum = 0.0;
  double sum_double_T = 0.0;
  double ratio = 0.0;  // sum / log(n)
};

struct CyclePstarReport {
  std::vector<CyclePstarEntry> entries;
  bool pass = true;
  std::string failure;
};

/// Truncated sup-probability row sums on even cycles, T = 4n^2, ratio to
/// log n asserted within [0.8, 2e] for n in {256, 512, 1024}.
CyclePstarReport experiment_cycle_pstar(const std::vector<int>& n_list);

struct GmScalingEntry {
  int m = 0;
  long n = 0;
  double mc_mean = 0.0;
  double mc_var = 0.0;
  double ci95 = 0.0;
  double mean_ratio = 0.0;  // mean / (m 2^(2m))
  double var_ratio = 0.0;   // var / (m 2^(4m))
  double exact_mean = 0.0;  // linear-solve cross-check (m = 3 only)
  bool has_exact = false;
};

struct GmScalingReport {
  std::vector<GmScalingEntry> entries;
  double var_ratio_ceiling = 0.0;
  bool pass = true;
  std::string failure;
};

/// Monte Carlo hitting moments on G_m: the mean ratio must be stable within
/// a factor 2 across consecutive m, the variance ratio below the recorded
/// ceiling, and m = 3 must agree with the exact linear solve within its CI.
GmScalingReport experiment_gm_scaling(const std::vector<int>& m_list, long samples,
                                      std::uint64_t seed);

struct GmPeakEntry {
  int m = 0;
  long n = 0;
  long T = 0;
  double peak = 0.0;       // sup_t t * pmf[t]
  double peak_norm = 0.0;  // peak / sqrt(log n)
  double tail = 0.0;
};

struct GmPeakReport {
  std::vector<GmPeakEntry> entries;
  bool pass = true;
  std::string failure;
};

/// Exact hitting pmf peaks on G_m with T = 40 m 2^(2m); peak_norm at
/// m in {4, 5} must stay above half its m = 3 value.
GmPeakReport experiment_gm_peak(const std::vector<int>& m_list);

/// Worker count: HITSTAT_THREADS if set, hardware parallelism otherwise.
int worker_count();

}  // namespace hitstat
