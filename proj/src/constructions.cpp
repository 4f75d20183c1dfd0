#include "hitstat/constructions.hpp"

#include <algorithm>
#include <cmath>

#include "hitstat/geomsum.hpp"
#include "hitstat/rng.hpp"

namespace hitstat {

std::string family_name(Family f) {
  switch (f) {
    case Family::CycleTrap: return "cycle_trap";
    case Family::CycleTrapMulti: return "cycle_trap_multi";
    case Family::PureBirth: return "pure_birth";
    case Family::PureBirthTail: return "pure_birth_tail";
    case Family::Gm: return "gm";
    case Family::GmTorus: return "gm_torus";
    case Family::CycleGraph: return "cycle_graph";
    case Family::PathGraph: return "path_graph";
    case Family::BinaryTree: return "binary_tree";
    case Family::Torus3: return "torus3";
    case Family::RandomChain: return "random_chain";
    case Family::RandomReversible: return "random_reversible";
    case Family::RandomGraph: return "random_graph";
  }
  return "unknown";
}

namespace {

std::vector<std::string> numbered_labels(const std::string& prefix, int n, int start = 1) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(start + i));
  return out;
}

// t = r(n-1) + k with 1 <= k <= n-1; the multi variant uses period n instead.
void split_schedule(long t, long period, long& r, long& k) {
  k = (t - 1) % period + 1;
  r = (t - k) / period;
}

}  // namespace

FamilyInstance cycle_trap(int n, long t) {
  if (n < 2) throw BadParams("cycle_trap needs n >= 2");
  long r = 0, k = 0;
  split_schedule(t, n - 1, r, k);
  // The schedule needs r >= 2 (t >= 2n is sufficient but not necessary:
  // t = 2n - 1 splits as r = 2, k = 1).
  if (r < 2) throw BadHorizon("cycle_trap schedule needs r >= 2");
  const double q = 1.0 / static_cast<double>(r);

  // states 0..n-2 = s_1..s_{n-1}, state n-1 = u
  ChainSpec c;
  c.n = n;
  c.states = numbered_labels("s", n - 1);
  c.states.push_back("u");
  c.rows.resize(static_cast<std::size_t>(n));
  for (int i = 0; i + 2 < n; ++i) c.rows[static_cast<std::size_t>(i)] = {{i + 1, 1.0}};
  c.rows[static_cast<std::size_t>(n - 2)] = {{0, 1.0 - q}, {n - 1, q}};  // s_{n-1}
  // u -> s_2; for n = 2 the cycle has a single state, so u returns to s_1.
  c.rows[static_cast<std::size_t>(n - 1)] = {{n >= 3 ? 1 : 0, 1.0}};
  c.metadata["family"] = "cycle_trap";

  FamilyInstance inst;
  inst.chain = validate(std::move(c));
  inst.family = Family::CycleTrap;
  inst.params = {{"n", static_cast<double>(n)},
                 {"t", static_cast<double>(t)},
                 {"r", static_cast<double>(r)},
                 {"k", static_cast<double>(k)},
                 {"q", q}};
  inst.designated = {{"x", n - 1 - k}, {"y", n - 1}, {"target_t", t}};
  inst.closed_forms["hit_prob"] = std::pow(1.0 - q, static_cast<double>(r)) * q;
  return inst;
}

FamilyInstance cycle_trap_multi(int n, long t) {
  if (n < 2) throw BadParams("cycle_trap_multi needs n >= 2");
  if (t < 2L * n) throw BadHorizon("cycle_trap_multi needs t >= 2n");
  long r = 0, k = 0;
  split_schedule(t, n, r, k);
  if (r < 2) throw BadParams("schedule split forces r < 2");
  const double q = 1.0 / static_cast<double>(r);
  if (n * q > 1.0) throw BadParams("n*q > 1: trap exits would not fit in a row");

  // states 0..n-1 = s_1..s_n, states n..2n-1 = u_1..u_n
  ChainSpec c;
  c.n = 2 * n;
  c.states = numbered_labels("s", n);
  for (const std::string& lbl : numbered_labels("u", n)) c.states.push_back(lbl);
  c.rows.resize(static_cast<std::size_t>(2 * n));
  for (int i = 0; i + 1 < n; ++i) c.rows[static_cast<std::size_t>(i)] = {{i + 1, 1.0}};
  std::vector<Entry> exit_row;
  if (1.0 - n * q > 0.0) exit_row.push_back({0, 1.0 - n * q});
  for (int j = 0; j < n; ++j) exit_row.push_back({n + j, q});
  c.rows[static_cast<std::size_t>(n - 1)] = std::move(exit_row);
  for (int j = 0; j < n; ++j) c.rows[static_cast<std::size_t>(n + j)] = {{1, 1.0}};
  c.metadata["family"] = "cycle_trap_multi";

  FamilyInstance inst;
  inst.chain = validate(std::move(c));
  inst.family = Family::CycleTrapMulti;
  inst.params = {{"n", static_cast<double>(n)},
                 {"t", static_cast<double>(t)},
                 {"r", static_cast<double>(r)},
                 {"k", static_cast<double>(k)},
                 {"q", q}};
  inst.designated = {{"x", n - k}, {"target_t", t}};  // x = s_{n-k+1}
  inst.closed_forms["surprise_lb"] =
      static_cast<double>(n) * static_cast<double>(n) / (56.0 * static_cast<double>(t));
  return inst;
}

FamilyInstance pure_birth(int n, long t) {
  if (n < 2) throw BadParams("pure_birth needs n >= 2");
  if (t < n) throw BadParams("pure_birth needs t >= n");
  const double p = static_cast<double>(n) / static_cast<double>(t);

  ChainSpec c;
  c.n = n;
  c.states = numbered_labels("b", n);
  c.rows.resize(static_cast<std::size_t>(n));
  for (int i = 0; i + 1 < n; ++i) c.rows[static_cast<std::size_t>(i)] = {{i, 1.0 - p}, {i + 1, p}};
  c.rows[static_cast<std::size_t>(n - 1)] = {{n - 1, 1.0}};
  c.metadata["family"] = "pure_birth";

  FamilyInstance inst;
  inst.chain = validate(std::move(c));
  inst.family = Family::PureBirth;
  inst.params = {{"n", static_cast<double>(n)}, {"t", static_cast<double>(t)}, {"p", p}};
  inst.designated = {{"x", 0}, {"y", n - 1}, {"target_t", t}};
  GeomParams gp;
  gp.q.assign(static_cast<std::size_t>(n - 1), 1.0 - p);
  inst.closed_forms["hit_pmf_at_t"] = geom_sum_pmf(gp, t - (n - 1));
  inst.closed_forms["expected_hitting"] =
      static_cast<double>(n - 1) * (1.0 + (1.0 - p) / p);
  return inst;
}

FamilyInstance pure_birth_tail(int n, long t) {
  if (n < 2) throw BadParams("pure_birth_tail needs n >= 2");
  const double min_t = static_cast<double>(n) * std::sqrt(static_cast<double>(n));
  if (static_cast<double>(t) < min_t) throw BadParams("pure_birth_tail needs t >= n*sqrt(n)");
  const double p = static_cast<double>(n) / static_cast<double>(t);

  ChainSpec c;
  c.n = 2 * n;
  c.states = numbered_labels("b", 2 * n);
  c.rows.resize(static_cast<std::size_t>(2 * n));
  for (int i = 0; i + 1 < n; ++i) c.rows[static_cast<std::size_t>(i)] = {{i, 1.0 - p}, {i + 1, p}};
  for (int i = n - 1; i + 1 < 2 * n; ++i) c.rows[static_cast<std::size_t>(i)] = {{i + 1, 1.0}};
  c.rows[static_cast<std::size_t>(2 * n - 1)] = {{2 * n - 1, 1.0}};
  c.metadata["family"] = "pure_birth_tail";

  FamilyInstance inst;
  inst.chain = validate(std::move(c));
  inst.family = Family::PureBirthTail;
  inst.params = {{"n", static_cast<double>(n)}, {"t", static_cast<double>(t)}, {"p", p}};
  inst.designated = {{"x", 0}, {"y", n - 1}, {"N", n}, {"target_t", t}};
  for (int i = n - 1; i < 2 * n; ++i) inst.designated_set.push_back(i);  // U = {n..2n}
  inst.closed_forms["ez_exact"] = static_cast<double>(n);  // Z_N = n deterministically from y
  return inst;
}

Graph binary_tree_graph(int h) {
  if (h < 1) throw BadParams("binary tree needs height >= 1");
  const int n = (1 << h) - 1;
  Graph g(n);
  for (int v = 1; v < n; ++v) g.add_edge(v, (v - 1) / 2);
  return g;
}

Graph torus3(int k) {
  if (k < 2) throw BadParams("torus needs k >= 2");
  Graph g(k * k * k);
  auto id = [k](int x, int y, int z) { return (x * k + y) * k + z; };
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y)
      for (int z = 0; z < k; ++z) {
        g.add_edge(id(x, y, z), id((x + 1) % k, y, z));
        g.add_edge(id(x, y, z), id(x, (y + 1) % k, z));
        g.add_edge(id(x, y, z), id(x, y, (z + 1) % k));
      }
  return g;
}

Graph cycle_graph(int n) {
  if (n < 3) throw BadParams("cycle needs n >= 3");
  Graph g(n);
  for (int v = 0; v < n; ++v) g.add_edge(v, (v + 1) % n);
  return g;
}

Graph path_graph(int n) {
  if (n < 2) throw BadParams("path needs n >= 2");
  Graph g(n);
  for (int v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

FamilyInstance g_m(int m) {
  if (m < 2 || m > 8) throw BadParams("g_m is desk scale: 2 <= m <= 8");
  const int path_len = 1 << m;  // vertices v_1..v_{2^m}, stored as 0..2^m-1
  int n = path_len;
  Graph g(path_len);
  for (int v = 0; v + 1 < path_len; ++v) g.add_edge(v, v + 1);

  std::map<std::string, long> designated;
  designated["x"] = path_len - 1;  // w_m = v_{2^m}
  designated["y"] = 0;             // w_0 = v_1

  // Attach a complete binary tree of height 2m-k at w_k = v_{2^k}; the tree
  // root is the path vertex itself.
  for (int k = 1; k <= m - 1; ++k) {
    const int height = 2 * m - k;
    const int tree_sz = (1 << height) - 1;
    const int root = (1 << k) - 1;  // v_{2^k}
    std::vector<int> ids(static_cast<std::size_t>(tree_sz));
    ids[0] = root;
    for (int v = 1; v < tree_sz; ++v) ids[static_cast<std::size_t>(v)] = n + v - 1;
    n += tree_sz - 1;
    g.adj.resize(static_cast<std::size_t>(n));
    g.n = n;
    for (int v = 1; v < tree_sz; ++v)
      g.add_edge(ids[static_cast<std::size_t>(v)], ids[static_cast<std::size_t>((v - 1) / 2)]);
    designated["w" + std::to_string(k)] = root;
  }

  FamilyInstance inst;
  inst.chain = graph_walk_chain(g);
  inst.chain.metadata["family"] = "gm";
  inst.family = Family::Gm;
  inst.params = {{"m", static_cast<double>(m)}, {"n", static_cast<double>(n)}};
  inst.designated = designated;
  inst.closed_forms["vertex_count"] =
      std::pow(2.0, 2 * m) - std::pow(2.0, m) - 2.0 * m + 2.0;
  return inst;
}

FamilyInstance g_m_torus(int m) {
  FamilyInstance base = g_m(m);
  const int n = base.chain.n;
  const int k = static_cast<int>(std::cbrt(static_cast<double>(n)) + 1e-9);
  Graph torus = torus3(k);

  // Rebuild as one graph: G_m vertices keep their ids, torus ids shifted.
  Graph g(n + torus.n);
  for (int u = 0; u < n; ++u)
    for (const Entry& e : base.chain.rows[static_cast<std::size_t>(u)])
      if (e.j > u) g.add_edge(u, e.j);
  for (int u = 0; u < torus.n; ++u)
    for (int v : torus.adj[static_cast<std::size_t>(u)])
      if (v > u) g.add_edge(n + u, n + v);
  g.add_edge(static_cast<int>(base.designated["y"]), n);  // w_0 -- torus origin

  FamilyInstance inst;
  inst.chain = graph_walk_chain(g);
  inst.chain.metadata["family"] = "gm_torus";
  inst.family = Family::GmTorus;
  inst.params = {{"m", static_cast<double>(m)},
                 {"n_gm", static_cast<double>(n)},
                 {"k", static_cast<double>(k)},
                 {"n", static_cast<double>(g.n)}};
  inst.designated = base.designated;
  inst.designated["N"] = n;
  for (int u = 0; u < torus.n; ++u) inst.designated_set.push_back(n + u);  // U = torus
  return inst;
}

ChainSpec graph_walk_chain(const Graph& graph, bool allow_self_loops) {
  if (!graph.connected()) throw Disconnected("graph walk needs a connected graph");
  if (!allow_self_loops && graph.has_self_loop())
    throw SelfLoopError("self-loops must be requested explicitly");
  ChainSpec c;
  c.n = graph.n;
  c.states = numbered_labels("v", graph.n, 0);
  c.rows.resize(static_cast<std::size_t>(graph.n));
  for (int u = 0; u < graph.n; ++u) {
    const auto& nbrs = graph.adj[static_cast<std::size_t>(u)];
    if (nbrs.empty()) throw Disconnected("isolated vertex");
    const double p = 1.0 / static_cast<double>(nbrs.size());
    for (int v : nbrs) c.rows[static_cast<std::size_t>(u)].push_back({v, p});
  }
  c.metadata["family"] = "graph_walk";
  return validate(std::move(c));
}

ChainSpec make_lazy(const ChainSpec& chain) {
  ChainSpec c = chain;
  for (int i = 0; i < c.n; ++i) {
    std::vector<Entry> row;
    bool has_diag = false;
    for (const Entry& e : c.rows[static_cast<std::size_t>(i)]) {
      if (e.j == i) {
        row.push_back({i, 0.5 + 0.5 * e.p});
        has_diag = true;
      } else {
        row.push_back({e.j, 0.5 * e.p});
      }
    }
    if (!has_diag) row.push_back({i, 0.5});
    c.rows[static_cast<std::size_t>(i)] = std::move(row);
  }
  return validate(std::move(c));
}

FamilyInstance random_chain(int n, std::uint64_t seed) {
  if (n < 1 || n > 64) throw BadParams("dense corpus is limited to n <= 64");
  SplitMix64 rng(seed);
  ChainSpec c;
  c.n = n;
  c.states = numbered_labels("r", n, 0);
  c.rows.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<double> w(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      w[static_cast<std::size_t>(j)] = rng.next_double() + 1e-6;
      sum += w[static_cast<std::size_t>(j)];
    }
    // Exact row normalization: write the last entry as 1 - partial sum.
    double acc = 0.0;
    for (int j = 0; j + 1 < n; ++j) {
      const double p = w[static_cast<std::size_t>(j)] / sum;
      c.rows[static_cast<std::size_t>(i)].push_back({j, p});
      acc += p;
    }
    c.rows[static_cast<std::size_t>(i)].push_back({n - 1, 1.0 - acc});
  }
  c.metadata["family"] = "random_chain";
  c.metadata["seed"] = std::to_string(seed);

  FamilyInstance inst;
  inst.chain = validate(std::move(c));
  inst.family = Family::RandomChain;
  inst.params = {{"n", static_cast<double>(n)}, {"seed", static_cast<double>(seed)}};
  return inst;
}

FamilyInstance random_reversible(int n, std::uint64_t seed, bool lazy) {
  if (n < 1 || n > 64) throw BadParams("dense corpus is limited to n <= 64");
  SplitMix64 rng(seed);
  std::vector<std::vector<double>> w(static_cast<std::size_t>(n),
                                     std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = rng.next_double() + 1e-6;
      w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
      w[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
    }
  ChainSpec c;
  c.n = n;
  c.states = numbered_labels("r", n, 0);
  c.rows.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    double acc = 0.0;
    for (int j = 0; j + 1 < n; ++j) {
      const double p = w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] / sum;
      c.rows[static_cast<std::size_t>(i)].push_back({j, p});
      acc += p;
    }
    c.rows[static_cast<std::size_t>(i)].push_back({n - 1, 1.0 - acc});
  }
  c.metadata["family"] = "random_reversible";
  c.metadata["seed"] = std::to_string(seed);

  FamilyInstance inst;
  inst.chain = validate(std::move(c));
  if (lazy) {
    inst.chain = make_lazy(inst.chain);
    inst.chain.metadata["lazy"] = "1";
  }
  inst.family = Family::RandomReversible;
  inst.params = {{"n", static_cast<double>(n)},
                 {"seed", static_cast<double>(seed)},
                 {"lazy", lazy ? 1.0 : 0.0}};
  return inst;
}

std::vector<FamilyInstance> build_corpus(CorpusKind kind, int count, int n_max,
                                         std::uint64_t seed) {
  std::vector<FamilyInstance> corpus;
  corpus.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    SplitMix64 rng = SplitMix64::substream(seed, static_cast<std::uint64_t>(i));
    const std::uint64_t inst_seed = rng.next();
    const auto tag = [&](FamilyInstance inst) {
      inst.params["i"] = static_cast<double>(i);
      inst.params.erase("seed");  // corpus seed + index pins the instance
      return inst;
    };
    switch (kind) {
      case CorpusKind::Random: {
        const int n = 2 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(n_max - 1));
        corpus.push_back(tag(random_chain(n, inst_seed)));
        break;
      }
      case CorpusKind::Reversible: {
        const int n = 2 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(n_max - 1));
        corpus.push_back(tag(random_reversible(n, inst_seed, false)));
        break;
      }
      case CorpusKind::LazyReversible: {
        const int n = 2 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(n_max - 1));
        corpus.push_back(tag(random_reversible(n, inst_seed, true)));
        break;
      }
      case CorpusKind::Graphs: {
        const int n = 3 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(n_max - 2));
        const double edge_prob = 0.35 + 0.4 * rng.next_double();
        corpus.push_back(tag(random_graph(n, edge_prob, inst_seed)));
        break;
      }
    }
  }
  return corpus;
}

FamilyInstance random_graph(int n, double edge_prob, std::uint64_t seed) {
  if (n < 2 || n > 2048) throw BadParams("random graph size out of range");
  if (!(edge_prob > 0.0) || edge_prob > 1.0) throw BadParams("edge_prob must be in (0, 1]");
  for (std::uint64_t attempt = 0;; ++attempt) {
    SplitMix64 rng = SplitMix64::substream(seed, attempt);
    Graph g(n);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng.next_double() < edge_prob) g.add_edge(u, v);
    if (!g.connected()) continue;

    FamilyInstance inst;
    inst.chain = graph_walk_chain(g);
    inst.chain.metadata["family"] = "random_graph";
    inst.chain.metadata["seed"] = std::to_string(seed);
    inst.family = Family::RandomGraph;
    inst.params = {{"n", static_cast<double>(n)},
                   {"edge_prob", edge_prob},
                   {"seed", static_cast<double>(seed)},
                   {"attempts", static_cast<double>(attempt + 1)}};
    return inst;
  }
}

}  // namespace hitstat
