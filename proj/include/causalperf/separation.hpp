#pragma once

#include <set>
#include <vector>

#include "causalperf/graph.hpp"

namespace causalperf {

using NodeSet = std::set<int>;

/// m-separation (d-separation on DAGs): true iff every path between x and y is
/// blocked given z. A collider (arrowheads at both incident ends) is open iff
/// it or one of its descendants is in z; a non-collider is blocked iff in z.
/// Implemented as reachability over (node, arriving-mark) walk states.
bool separated(const MixedGraph& g, const NodeSet& x, const NodeSet& y, const NodeSet& z);

/// Name-based convenience.
bool separated(const MixedGraph& g, const std::set<std::string>& x,
               const std::set<std::string>& y, const std::set<std::string>& z);

/// v plus every node with a path into v whose edges are directed toward v or
/// undirected. Equals ancestors-and-self when the graph has no undirected edges.
NodeSet anterior_set(const MixedGraph& g, int v);

/// Ancestors of every node in vs (directed edges only), including vs itself.
NodeSet ancestors_of(const MixedGraph& g, const NodeSet& vs);

/// Descendants of every node in vs (directed edges only), including vs itself.
NodeSet descendants_of(const MixedGraph& g, const NodeSet& vs);

/// Intervention surgery: drop every edge with an arrowhead at a cut_incoming
/// member, and every edge leaving a cut_outgoing member (tail at the member,
/// arrowhead away). Node set unchanged.
MixedGraph mutilate(const MixedGraph& g, const NodeSet& cut_incoming,
                    const NodeSet& cut_outgoing);

NodeSet to_node_set(const MixedGraph& g, const std::set<std::string>& names);

}  // namespace causalperf
