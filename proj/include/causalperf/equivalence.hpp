#pragma once

#include <vector>

#include "causalperf/graph.hpp"
#include "causalperf/separation.hpp"

namespace causalperf {

/// CPDAG of a DAG: skeleton + v-structures, completed by Meek-rule closure.
MixedGraph cpdag_of(const MixedGraph& dag);

/// Meek rules R1-R4 applied to fixpoint on a tail/arrow-only partially
/// directed graph (in place).
void apply_meek_rules(MixedGraph& pdag);

/// MAG obtained from a DAG by marginalizing `latents` and conditioning on
/// `selection`. Adjacency via inducing-path connectivity (brute-force
/// separating-set search); marks from anteriority to the other endpoint or
/// the selection set.
MixedGraph mag_of(const MixedGraph& dag, const NodeSet& latents, const NodeSet& selection);

/// Chordality via maximum-cardinality search (restricted to a vertex subset
/// treated with only its internal undirected edges).
bool is_chordal_component(const MixedGraph& g, const std::vector<int>& component);

/// Connected components made solely of undirected (tail-tail) edges that fail
/// chordality. Empty result: no selection bias detected.
std::vector<std::vector<int>> detect_selection_bias(const MixedGraph& pag);

}  // namespace causalperf
