// hitstat: exact hitting-time and surprise probabilities for finite Markov
// chains, extremal-family builders, and bound-verification campaigns.
//
// Exit codes: 0 all assertions passed, 1 an assertion failed, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

#include "hitstat/constructions.hpp"
#include "hitstat/geomsum.hpp"
#include "hitstat/harness.hpp"
#include "hitstat/hitting.hpp"
#include "hitstat/io.hpp"
#include "hitstat/maxprob.hpp"
#include "hitstat/spectral.hpp"

using namespace hitstat;

namespace {

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty())
    std::cout << content;
  else
    write_file(out_path, content);
}

std::vector<long> dense_grid(long from, long to) {
  std::vector<long> g;
  for (long t = from; t <= to; ++t) g.push_back(t);
  return g;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  return out;
}

int finish_report(const VerificationReport& report, const std::string& out_path) {
  emit(report_to_csv(report), out_path);
  if (!report.all_pass()) {
    for (const auto& row : report.rows)
      if (row.pass == 0)
        std::cerr << "FAIL " << row.family << " params=" << row.params << " x=" << row.x
                  << " y=" << row.y << " t=" << row.t << " kind=" << row.kind
                  << " exact=" << fmt17(row.exact) << " bound=" << fmt17(row.bound) << "\n";
    return 1;
  }
  std::cerr << "ok: " << report.checks << " comparisons, 0 failures\n";
  return 0;
}

FamilyInstance build_family(const std::string& family, int n, long t, int m, int h, int k,
                            double edge_prob, std::uint64_t seed) {
  if (family == "cycle-trap") return cycle_trap(n, t);
  if (family == "cycle-trap-multi") return cycle_trap_multi(n, t);
  if (family == "pure-birth") return pure_birth(n, t);
  if (family == "pure-birth-tail") return pure_birth_tail(n, t);
  if (family == "gm") return g_m(m);
  if (family == "gm-torus") return g_m_torus(m);
  if (family == "random-chain") return random_chain(n, seed);
  if (family == "random-reversible") return random_reversible(n, seed);
  if (family == "lazy-reversible") return random_reversible(n, seed, true);
  if (family == "random-graph") return random_graph(n, edge_prob, seed);
  FamilyInstance inst;
  if (family == "cycle-graph") {
    inst.chain = graph_walk_chain(cycle_graph(n));
    inst.family = Family::CycleGraph;
  } else if (family == "path-graph") {
    inst.chain = graph_walk_chain(path_graph(n));
    inst.family = Family::PathGraph;
  } else if (family == "binary-tree") {
    inst.chain = graph_walk_chain(binary_tree_graph(h));
    inst.family = Family::BinaryTree;
  } else if (family == "torus3") {
    inst.chain = graph_walk_chain(torus3(k));
    inst.family = Family::Torus3;
  } else {
    throw CLI::ValidationError("--family", "unknown family: " + family);
  }
  inst.params["n"] = inst.chain.n;
  return inst;
}

std::string instance_json(const FamilyInstance& inst) {
  // chain JSON with the designated roles and closed forms appended
  std::string base = chain_to_json(inst.chain);
  std::ostringstream os;
  os << "{\n\"family\": \"" << family_name(inst.family) << "\",\n\"chain\": " << base
     << ",\n\"params\": {";
  bool first = true;
  for (const auto& [key, v] : inst.params) {
    os << (first ? "" : ", ") << '"' << key << "\": " << fmt17(v);
    first = false;
  }
  os << "},\n\"designated\": {";
  first = true;
  for (const auto& [key, v] : inst.designated) {
    os << (first ? "" : ", ") << '"' << key << "\": " << v;
    first = false;
  }
  os << "},\n\"designated_set\": [";
  for (std::size_t i = 0; i < inst.designated_set.size(); ++i)
    os << (i ? ", " : "") << inst.designated_set[i];
  os << "],\n\"closed_forms\": {";
  first = true;
  for (const auto& [key, v] : inst.closed_forms) {
    os << (first ? "" : ", ") << '"' << key << "\": " << fmt17(v);
    first = false;
  }
  os << "}\n}\n";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hitting-time and surprise probability toolkit"};
  app.require_subcommand(1);

  std::string chain_path, out_path, format = "csv";

  // validate
  auto* cmd_validate = app.add_subcommand("validate", "check a chain JSON file");
  cmd_validate->add_option("--chain", chain_path)->required();

  // stationary
  auto* cmd_stationary = app.add_subcommand("stationary", "stationary distribution");
  cmd_stationary->add_option("--chain", chain_path)->required();
  cmd_stationary->add_option("--out", out_path);

  // hitting
  int arg_from = 0, arg_to = 0;
  long arg_T = 100;
  auto* cmd_hitting = app.add_subcommand("hitting", "exact hitting-time pmf");
  cmd_hitting->add_option("--chain", chain_path)->required();
  cmd_hitting->add_option("--from", arg_from)->required();
  cmd_hitting->add_option("--to", arg_to)->required();
  cmd_hitting->add_option("--horizon", arg_T);
  cmd_hitting->add_option("--out", out_path);
  cmd_hitting->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  bool from_stationary = false;
  cmd_hitting->add_flag("--stationary-start", from_stationary,
                        "start from pi instead of --from");

  // surprise
  auto* cmd_surprise = app.add_subcommand("surprise", "exact surprise pmf");
  cmd_surprise->add_option("--chain", chain_path)->required();
  cmd_surprise->add_option("--from", arg_from)->required();
  cmd_surprise->add_option("--horizon", arg_T);
  cmd_surprise->add_option("--out", out_path);
  cmd_surprise->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

  // maxprob
  auto* cmd_maxprob = app.add_subcommand("maxprob", "maximal transition probabilities");
  cmd_maxprob->add_option("--chain", chain_path)->required();
  cmd_maxprob->add_option("--from", arg_from)->required();
  cmd_maxprob->add_option("--horizon", arg_T);
  cmd_maxprob->add_option("--out", out_path);

  // starr
  double arg_pexp = 2.0;
  auto* cmd_starr = app.add_subcommand("starr", "Starr maximal-inequality ratio");
  cmd_starr->add_option("--chain", chain_path)->required();
  cmd_starr->add_option("--from", arg_from)->required();
  cmd_starr->add_option("--p-exp", arg_pexp);
  cmd_starr->add_option("--horizon", arg_T)->default_val(0);

  // geom pmf|bounds|maximize
  auto* cmd_geom = app.add_subcommand("geom", "geometric-sum arithmetic");
  cmd_geom->require_subcommand(1);
  long geom_n = 2, geom_m = 2;
  double geom_p = 0.5, geom_res = 1e-3;
  long geom_t = 2;
  auto* geom_pmf = cmd_geom->add_subcommand("pmf", "negative binomial pmf");
  geom_pmf->add_option("--n", geom_n);
  geom_pmf->add_option("--m", geom_m);
  geom_pmf->add_option("--p", geom_p);
  auto* geom_bounds = cmd_geom->add_subcommand("bounds", "Lemma brackets");
  geom_bounds->add_option("--n", geom_n);
  geom_bounds->add_option("--m", geom_m);
  auto* geom_max = cmd_geom->add_subcommand("maximize", "grid-search maximizer");
  geom_max->add_option("--n", geom_n);
  geom_max->add_option("--t", geom_t);
  geom_max->add_option("--resolution", geom_res);

  // mix
  std::string mix_path;
  auto* cmd_mix = app.add_subcommand("mix", "geometric-mixture pmf");
  cmd_mix->add_option("--input", mix_path, "JSON: [[ [w, q], ... ], ...]")->required();
  cmd_mix->add_option("--t", geom_t);

  // spectral
  std::string kill_csv;
  auto* cmd_spectral = app.add_subcommand("spectral", "killed-chain spectrum");
  cmd_spectral->add_option("--chain", chain_path)->required();
  cmd_spectral->add_option("--from", arg_from)->required();
  cmd_spectral->add_option("--kill", kill_csv, "comma-separated state indices")->required();
  cmd_spectral->add_option("--out", out_path);

  // construct
  std::string family;
  int arg_n = 8, arg_m = 3, arg_h = 3, arg_k = 3;
  double arg_edge_prob = 0.5;
  std::uint64_t arg_seed = 1;
  auto* cmd_construct = app.add_subcommand("construct", "build a chain family");
  cmd_construct->add_option("--family", family)->required();
  cmd_construct->add_option("--n", arg_n);
  cmd_construct->add_option("--t", arg_T);
  cmd_construct->add_option("--m", arg_m);
  cmd_construct->add_option("--height", arg_h);
  cmd_construct->add_option("--k", arg_k);
  cmd_construct->add_option("--edge-prob", arg_edge_prob);
  cmd_construct->add_option("--seed", arg_seed);
  cmd_construct->add_option("--out", out_path);

  // verify
  std::string corpus = "random", kinds_csv = "general";
  int arg_count = 100, arg_nmax = 10;
  long arg_tmin = 1, arg_tmax = 200;
  bool arg_full = false;
  auto* cmd_verify = app.add_subcommand("verify", "bound-verification campaign");
  cmd_verify->add_option("--corpus", corpus)
      ->check(CLI::IsMember({"random", "reversible", "lazy-reversible", "graphs"}));
  cmd_verify->add_option("--count", arg_count);
  cmd_verify->add_option("--n", arg_nmax, "maximum state count");
  cmd_verify->add_option("--tmin", arg_tmin);
  cmd_verify->add_option("--tmax", arg_tmax);
  cmd_verify->add_option("--kinds", kinds_csv,
                         "comma list: general,reversible-log-pi,graph-log-n,extremal,"
                         "positive-eigen,stationary,composite,maxprob-sum");
  cmd_verify->add_option("--seed", arg_seed);
  cmd_verify->add_flag("--full", arg_full, "emit every row, not just the worst per kind");
  cmd_verify->add_option("--out", out_path);

  // locate-surprise
  long arg_window_n = 0, arg_t_param = 0;
  long arg_samples = 4000;
  auto* cmd_locate = app.add_subcommand("locate-surprise", "Lemma 5.1 locator");
  cmd_locate->add_option("--family", family)
      ->check(CLI::IsMember({"pure-birth-tail", "gm-torus"}))
      ->required();
  cmd_locate->add_option("--n", arg_n);
  cmd_locate->add_option("--t", arg_T, "builder horizon (pure-birth-tail)");
  cmd_locate->add_option("--m", arg_m);
  cmd_locate->add_option("--t-start", arg_t_param, "window start; defaults near E[tau]");
  cmd_locate->add_option("--window", arg_window_n, "N; defaults to the designated N");
  cmd_locate->add_option("--samples", arg_samples);
  cmd_locate->add_option("--seed", arg_seed);
  cmd_locate->add_option("--out", out_path);

  // experiment
  auto* cmd_exp = app.add_subcommand("experiment", "paper-scale experiments");
  cmd_exp->require_subcommand(1);
  std::string nlist_csv = "256,512,1024", mlist_csv = "3,4,5";
  long exp_samples = 500;
  auto* exp_cycle = cmd_exp->add_subcommand("cycle-pstar", "cycle p* row sums vs log n");
  exp_cycle->add_option("--n-list", nlist_csv);
  exp_cycle->add_option("--out", out_path);
  auto* exp_scaling = cmd_exp->add_subcommand("gm-scaling", "G_m Monte Carlo moments");
  exp_scaling->add_option("--m-list", mlist_csv);
  exp_scaling->add_option("--samples", exp_samples);
  exp_scaling->add_option("--seed", arg_seed);
  exp_scaling->add_option("--out", out_path);
  auto* exp_peak = cmd_exp->add_subcommand("gm-peak", "G_m exact pmf peaks");
  exp_peak->add_option("--m-list", mlist_csv);
  exp_peak->add_option("--out", out_path);
  // exploratory only, nothing asserted: interval mass P_x(t <= tau <= t+n)
  auto* exp_interval =
      cmd_exp->add_subcommand("interval-mass", "interval hitting mass sweep (exploratory)");
  exp_interval->add_option("--chain", chain_path)->required();
  exp_interval->add_option("--from", arg_from)->required();
  exp_interval->add_option("--to", arg_to)->required();
  exp_interval->add_option("--tmax", arg_tmax);
  exp_interval->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*cmd_validate) {
      load_chain(chain_path);
      std::cout << "valid\n";
      return 0;
    }

    if (*cmd_stationary) {
      ChainSpec c = load_chain(chain_path);
      StationaryDist sd = stationary(c);
      std::ostringstream os;
      os << "{\"pi\": [";
      for (int i = 0; i < c.n; ++i) os << (i ? ", " : "") << fmt17(sd.pi[static_cast<std::size_t>(i)]);
      os << "], \"residual\": " << fmt17(sd.residual) << "}\n";
      emit(os.str(), out_path);
      return 0;
    }

    if (*cmd_hitting) {
      ChainSpec c = load_chain(chain_path);
      HittingPmf h = from_stationary ? stationary_hitting_pmf(c, arg_to, arg_T)
                                     : hitting_pmf(c, arg_from, arg_to, arg_T);
      emit(format == "json" ? pmf_to_json(h) : pmf_to_csv(h), out_path);
      return 0;
    }

    if (*cmd_surprise) {
      ChainSpec c = load_chain(chain_path);
      SurprisePmf sp = surprise_pmf(c, arg_from, arg_T);
      emit(format == "json" ? surprise_to_json(sp) : surprise_to_csv(sp), out_path);
      return 0;
    }

    if (*cmd_maxprob) {
      ChainSpec c = load_chain(chain_path);
      MaximalRow row = maximal_row(c, arg_from, arg_T);
      std::ostringstream os;
      os << "y,pstar,argmax_t,certified,tail_eps\n";
      for (int y = 0; y < c.n; ++y)
        os << y << ',' << fmt17(row.pstar[static_cast<std::size_t>(y)]) << ','
           << row.argmax_t[static_cast<std::size_t>(y)] << ',' << (row.certified ? 1 : 0) << ','
           << fmt17(row.tail_eps) << '\n';
      emit(os.str(), out_path);
      return 0;
    }

    if (*cmd_starr) {
      ChainSpec c = load_chain(chain_path);
      long T = arg_T;
      if (T <= 0) {
        StationaryDist sd = stationary(c);
        const double lam = lambda_star(c, sd);
        if (lam >= 1.0 - 1e-12) throw Uncertifiable("lambda* = 1 within 1e-12");
        T = lam <= 1e-8 ? 1 : static_cast<long>(std::ceil(std::log(1e-14) / (2.0 * std::log(lam)))) + 1;
      }
      const double ratio = starr_ratio(c, arg_from, arg_pexp, T);
      const double limit = arg_pexp / (arg_pexp - 1.0);
      std::cout << "{\"ratio\": " << fmt17(ratio) << ", \"limit\": " << fmt17(limit) << "}\n";
      return ratio <= limit + 1e-9 ? 0 : 1;
    }

    if (*cmd_geom) {
      if (*geom_pmf) {
        std::cout << "{\"pmf\": " << fmt17(neg_binomial_pmf(geom_n, geom_m, geom_p)) << "}\n";
        return 0;
      }
      if (*geom_bounds) {
        Bracket gb = basic_geom_bounds(geom_n, geom_m);
        LogBracket bb = binom_bounds(geom_m, geom_n);
        std::cout << "{\"geom_lower\": " << fmt17(gb.lower) << ", \"geom_upper\": "
                  << fmt17(gb.upper) << ", \"binom_log_lower\": " << fmt17(bb.log_lower)
                  << ", \"binom_log_upper\": " << fmt17(bb.log_upper) << "}\n";
        return 0;
      }
      MaxSearchResult r = geom_sum_max_search(static_cast<int>(geom_n),
                                              static_cast<int>(geom_t), geom_res);
      std::cout << "{\"argmax\": [";
      for (std::size_t i = 0; i < r.argmax.q.size(); ++i)
        std::cout << (i ? ", " : "") << fmt17(r.argmax.q[i]);
      const double predicted =
          static_cast<double>(geom_t) / static_cast<double>(geom_t + geom_n);
      std::cout << "], \"value\": " << fmt17(r.value)
                << ", \"predicted_q\": " << fmt17(predicted) << "}\n";
      return 0;
    }

    if (*cmd_mix) {
      nlohmann::json j = nlohmann::json::parse(read_file(mix_path));
      std::vector<GeomMixture> mixtures;
      for (const auto& var : j) {
        GeomMixture mix;
        for (const auto& comp : var)
          mix.components.push_back({comp.at(0).get<double>(), comp.at(1).get<double>()});
        mixtures.push_back(std::move(mix));
      }
      const double v = geom_mixture_pmf(mixtures, geom_t);
      std::cout << "{\"pmf\": " << fmt17(v) << ", \"bound\": "
                << fmt17(geom_sum_bound(static_cast<long>(mixtures.size()), std::max(1L, geom_t)))
                << "}\n";
      return 0;
    }

    if (*cmd_spectral) {
      ChainSpec c = load_chain(chain_path);
      std::vector<int> u;
      for (int v : parse_int_list(kill_csv)) u.push_back(v);
      KilledSpectrum ks = killed_spectrum(c, arg_from, u);
      emit(spectrum_to_json(ks), out_path);
      return 0;
    }

    if (*cmd_construct) {
      FamilyInstance inst =
          build_family(family, arg_n, arg_T, arg_m, arg_h, arg_k, arg_edge_prob, arg_seed);
      emit(instance_json(inst), out_path);
      return 0;
    }

    if (*cmd_verify) {
      CorpusKind kind = CorpusKind::Random;
      if (corpus == "reversible") kind = CorpusKind::Reversible;
      if (corpus == "lazy-reversible") kind = CorpusKind::LazyReversible;
      if (corpus == "graphs") kind = CorpusKind::Graphs;
      auto instances = build_corpus(kind, arg_count, arg_nmax, arg_seed);

      VerifyOptions opt;
      opt.full_rows = arg_full;
      opt.t_grid = dense_grid(arg_tmin, arg_tmax);
      std::stringstream ss(kinds_csv);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (item == "general") opt.kinds.push_back(BoundKind::General);
        else if (item == "reversible-log-pi") opt.kinds.push_back(BoundKind::ReversibleLogPi);
        else if (item == "graph-log-n") opt.kinds.push_back(BoundKind::GraphLogN);
        else if (item == "extremal") opt.kinds.push_back(BoundKind::ExtremalReversible);
        else if (item == "positive-eigen") opt.kinds.push_back(BoundKind::PositiveEigen);
        else if (item == "stationary") opt.kinds.push_back(BoundKind::Stationary);
        else if (item == "composite") opt.kinds.push_back(BoundKind::Composite);
        else if (item == "maxprob-sum") opt.kinds.push_back(BoundKind::MaxProbSum);
        else throw CLI::ValidationError("--kinds", "unknown kind: " + item);
      }
      VerificationReport report = verify_family(instances, opt);
      report.seed = arg_seed;
      report.corpus = corpus;
      return finish_report(report, out_path);
    }

    if (*cmd_locate) {
      FamilyInstance inst = family == "pure-birth-tail" ? pure_birth_tail(arg_n, arg_T)
                                                        : g_m_torus(arg_m);
      const int x = static_cast<int>(inst.designated.at("x"));
      const int y = static_cast<int>(inst.designated.at("y"));
      const long N = arg_window_n > 0 ? arg_window_n : inst.designated.at("N");
      long t = arg_t_param;
      if (t <= 0) {
        const double expectation = expected_hitting(inst.chain, x, y);
        t = std::max(1L, static_cast<long>(std::llround(expectation)) - N / 2);
      }
      LocatorResult res =
          surprise_lower_locator(inst.chain, x, y, inst.designated_set, N, t, arg_samples, arg_seed);
      std::ostringstream os;
      os << "{\"s\": " << res.s << ", \"lhs\": " << fmt17(res.lhs) << ", \"rhs\": "
         << fmt17(res.rhs) << ", \"t\": " << res.t << ", \"N\": " << res.N
         << ", \"window_prob\": " << fmt17(res.window_prob) << ", \"ez\": " << fmt17(res.ez)
         << ", \"ez_low\": " << fmt17(res.ez_low)
         << ", \"ez_exact\": " << (res.ez_exact ? "true" : "false") << "}\n";
      emit(os.str(), out_path);
      if (res.lhs < res.rhs) {
        std::cerr << "FAIL: located surprise " << fmt17(res.lhs) << " below rhs "
                  << fmt17(res.rhs) << "\n";
        return 1;
      }
      return 0;
    }

    if (*cmd_exp) {
      if (*exp_cycle) {
        CyclePstarReport rep = experiment_cycle_pstar(parse_int_list(nlist_csv));
        std::ostringstream os;
        os << "n,T,sum,sum_double_T,ratio\n";
        for (const auto& e : rep.entries)
          os << e.n << ',' << e.T << ',' << fmt17(e.sum) << ',' << fmt17(e.sum_double_T) << ','
             << fmt17(e.ratio) << '\n';
        emit(os.str(), out_path);
        if (!rep.pass) std::cerr << "FAIL: " << rep.failure << "\n";
        return rep.pass ? 0 : 1;
      }
      if (*exp_scaling) {
        GmScalingReport rep =
            experiment_gm_scaling(parse_int_list(mlist_csv), exp_samples, arg_seed);
        std::ostringstream os;
        os << "m,n,mc_mean,mc_var,ci95,mean_ratio,var_ratio,exact_mean\n";
        for (const auto& e : rep.entries)
          os << e.m << ',' << e.n << ',' << fmt17(e.mc_mean) << ',' << fmt17(e.mc_var) << ','
             << fmt17(e.ci95) << ',' << fmt17(e.mean_ratio) << ',' << fmt17(e.var_ratio) << ','
             << (e.has_exact ? fmt17(e.exact_mean) : "") << '\n';
        emit(os.str(), out_path);
        if (!rep.pass) std::cerr << "FAIL: " << rep.failure << "\n";
        return rep.pass ? 0 : 1;
      }
      if (*exp_peak) {
        GmPeakReport rep = experiment_gm_peak(parse_int_list(mlist_csv));
        std::ostringstream os;
        os << "m,n,T,peak,peak_norm,tail\n";
        for (const auto& e : rep.entries)
          os << e.m << ',' << e.n << ',' << e.T << ',' << fmt17(e.peak) << ','
             << fmt17(e.peak_norm) << ',' << fmt17(e.tail) << '\n';
        emit(os.str(), out_path);
        if (!rep.pass) std::cerr << "FAIL: " << rep.failure << "\n";
        return rep.pass ? 0 : 1;
      }
      // interval-mass: exploratory sweep of P_x(t <= tau(y) <= t+n), never
      // asserted
      ChainSpec c = load_chain(chain_path);
      HittingPmf h = hitting_pmf(c, arg_from, arg_to, arg_tmax + c.n);
      std::ostringstream os;
      os << "t,interval_mass,t_mass_over_n\n";
      for (long t = 1; t <= arg_tmax; ++t) {
        double mass = 0.0;
        for (long s = t; s <= t + c.n; ++s) mass += h.pmf[static_cast<std::size_t>(s)];
        os << t << ',' << fmt17(mass) << ','
           << fmt17(static_cast<double>(t) * mass / static_cast<double>(c.n)) << '\n';
      }
      emit(os.str(), out_path);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    // malformed input files, bad numeric literals in list options
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
