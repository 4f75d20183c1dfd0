#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hitstat/chain.hpp"
#include "hitstat/graph.hpp"

namespace hitstat {

enum class Family {
  CycleTrap,
  CycleTrapMulti,
  PureBirth,
  PureBirthTail,
  Gm,
  GmTorus,
  CycleGraph,
  PathGraph,
  BinaryTree,
  Torus3,
  RandomChain,
  RandomReversible,
  RandomGraph,
};

std::string family_name(Family f);

/// A built chain together with the roles and closed forms the harness needs:
/// designated states ("x", "y", and similar), scalar parameters, and any
/// family-specific exact values.
struct FamilyInstance {
  ChainSpec chain;
  Family family = Family::RandomChain;
  std::map<std::string, double> params;
  std::map<std::string, long> designated;     // role -> state index (or target time)
  std::map<std::string, double> closed_forms;
  std::vector<int> designated_set;            // the set-valued role U, when present
};

/// Near-deterministic cycle with a trap exit; maximizes P(tau = t) at the
/// scheduled time t = r(n-1) + k. closed_forms["hit_prob"] = (1-1/r)^r / r.
FamilyInstance cycle_trap(int n, long t);

/// The 2n-state variant with n trap states; its surprise probability at the
/// designated t is at least n^2 / (56 t).
FamilyInstance cycle_trap_multi(int n, long t);

/// Pure-birth chain: p(i,i) = 1-p, p(i,i+1) = p, p = n/t, state n absorbing.
FamilyInstance pure_birth(int n, long t);

/// Pure-birth chain extended by a deterministic tail n -> n+1 -> ... -> 2n.
FamilyInstance pure_birth_tail(int n, long t);

/// Complete binary tree with 2^h - 1 vertices (root has two children).
Graph binary_tree_graph(int h);

/// Three-dimensional discrete torus on (Z/kZ)^3; 6-regular for k >= 3,
/// parallel edges collapsed for k = 2.
Graph torus3(int k);

Graph cycle_graph(int n);
Graph path_graph(int n);

/// Path of 2^m vertices with complete binary trees of height 2m - k rooted
/// at the path positions 2^k, k = 1..m-1. Vertex count is
/// 2^(2m) - 2^m - 2m + 2 and the maximum degree is 4.
FamilyInstance g_m(int m);

/// G_m joined to a discrete torus of size floor(n^(1/3))^3 at w_0.
FamilyInstance g_m_torus(int m);

/// Simple random walk: p(u,v) = 1/deg(u) on edges.
ChainSpec graph_walk_chain(const Graph& graph, bool allow_self_loops = false);

/// (I + P) / 2; kills periodicity and makes all eigenvalues nonnegative for
/// reversible chains.
ChainSpec make_lazy(const ChainSpec& chain);

FamilyInstance random_chain(int n, std::uint64_t seed);
FamilyInstance random_reversible(int n, std::uint64_t seed, bool lazy = false);
FamilyInstance random_graph(int n, double edge_prob, std::uint64_t seed);

enum class CorpusKind { Random, Reversible, LazyReversible, Graphs };

/// Seeded test corpus: `count` instances with sizes drawn in [2, n_max]
/// (graphs in [3, n_max], conditioned connected). Deterministic in seed.
std::vector<FamilyInstance> build_corpus(CorpusKind kind, int count, int n_max,
                                         std::uint64_t seed);

}  // namespace hitstat
