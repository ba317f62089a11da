#pragma once

#include <optional>
#include <set>
#include <string>

#include "causalperf/estimand.hpp"
#include "causalperf/graph.hpp"
#include "causalperf/separation.hpp"

namespace causalperf {

struct CausalQuery {
    std::set<std::string> treatment;     // X
    std::set<std::string> outcome;       // Y
    std::set<std::string> conditioning;  // optional context C

    void validate() const;
};

struct IdentificationResult {
    bool identified = false;
    EstimandPtr estimand;            // set iff identified
    std::string hedge_witness;       // set iff not identified
};

/// Rule 2 of do-calculus: P(y|do(x),c) = P(y|x,c) iff X and Y are separated
/// given C in the graph with X's outgoing edges removed.
bool rule2_applies(const MixedGraph& g, const CausalQuery& q);

/// Smallest admissible backdoor set (cardinality, then lexicographic), or
/// absent when none exists. Candidates are non-descendants of X.
std::optional<std::set<std::string>> backdoor_set(const MixedGraph& g, const CausalQuery& q);

/// Complete identification of P(y|do(x)) on an ADMG via c-component
/// factorization; the Rule-2 shortcut keeps trivially identifiable queries as
/// plain conditional terms. Not-identified results carry a hedge description.
IdentificationResult id_effect(const MixedGraph& g, const CausalQuery& q);

/// Bidirected-connected components (districts) within a vertex subset.
std::vector<std::set<int>> c_components(const MixedGraph& g, const std::set<int>& subset);

}  // namespace causalperf
