#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "causalperf/estimand.hpp"
#include "causalperf/graph.hpp"
#include "causalperf/identify.hpp"

namespace causalperf {

/// Shared causal graph augmented with S-nodes marking mechanisms suspected to
/// differ between the two environments.
struct SelectionDiagram {
    MixedGraph graph;  // kind SelectionDiagram; S-nodes carry NodeRole::SNode
    std::map<std::string, std::string> s_targets;  // S-node name -> pointed-at node

    std::set<std::string> s_node_names() const;
    void validate() const;
};

/// Adds one S-node per suspect (named S_<suspect>) with S -> suspect.
SelectionDiagram build_selection_diagram(const MixedGraph& shared,
                                         const std::set<std::string>& suspects);

struct TransportQuery {
    MixedGraph source_graph;
    MixedGraph target_graph;
    std::set<std::string> s_nodes;  // suspects (nodes the S-variables point at)
    CausalQuery query;
    bool source_experiments = false;
    bool source_observational = true;
    bool target_observational = true;

    void validate() const;
};

/// Identification from target observations alone; every term retagged to the
/// target world P*. Absent when the target graph does not identify the query.
std::optional<EstimandPtr> trivially_transportable(const TransportQuery& tq);

/// Smallest S-admissible adjustment set Z with the transport formula
/// sum_z P(y|do(x),z) P*(z); absent when no set separates the S-nodes from Y.
std::optional<std::pair<std::set<std::string>, EstimandPtr>> s_admissible_adjustment(
    const TransportQuery& tq);

/// Retags every observational term of an estimand to the given world.
EstimandPtr retag_world(const EstimandPtr& e, World world);

/// Selection-bias recoverability: P(y|x) = P(y|x,S=1) iff S is separated from
/// y given x in the selection-augmented graph. `selection` names the S node.
bool s_recoverable(const MixedGraph& gs, const std::string& selection,
                   const std::set<std::string>& x, const std::set<std::string>& y);

/// Per-(option, performance) recoverability table, conditioning on the full
/// option set.
std::map<std::pair<std::string, std::string>, bool> recoverability_report(
    const MixedGraph& gs, const std::string& selection, const std::set<std::string>& options,
    const std::set<std::string>& perf);

}  // namespace causalperf
