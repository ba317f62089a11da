#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "causalperf/ci_tests.hpp"
#include "causalperf/graph.hpp"

namespace causalperf {

struct BackgroundKnowledge {
    std::set<std::pair<std::string, std::string>> forbidden;  // ordered: a cannot cause b
    std::set<std::pair<std::string, std::string>> required;   // ordered: a -> b required
    std::vector<std::vector<std::string>> tiers;              // earlier tiers cause later ones

    void validate() const;
    bool empty() const { return forbidden.empty() && required.empty() && tiers.empty(); }

    /// Tier index of a variable, or -1 when untiered.
    int tier_of(const std::string& name) const;
};

BackgroundKnowledge load_background_knowledge(const std::string& path);

/// Separating set recorded for each removed pair.
using SepSetMap = std::map<std::pair<int, int>, std::vector<int>>;

enum class Algorithm : uint8_t { PC, FCI };

struct DiscoveryParams {
    double alpha = 0.01;
    int max_cond_size = -1;  // -1: unlimited
    Algorithm algorithm = Algorithm::PC;
    bool stable = true;
};

struct SkeletonResult {
    MixedGraph graph;  // undirected skeleton
    SepSetMap sepsets;
};

struct DiscoveryResult {
    MixedGraph graph;
    SepSetMap sepsets;
    std::vector<std::string> diagnostics;  // collider conflicts, truncation warnings
};

/// PC-stable adjacency search. Adjacency sets are frozen per conditioning-set
/// level; required edges survive pruning.
SkeletonResult pc_skeleton(CITester& test, const BackgroundKnowledge& bk,
                           const DiscoveryParams& params);

/// Orients unshielded triples x - z - y with z outside sepset(x,y) as
/// x -> z <- y. Conflicts resolve first-writer-wins under lexicographic
/// triple order and are reported in `diagnostics`.
MixedGraph orient_colliders(const SkeletonResult& skel, std::vector<std::string>* diagnostics);

/// Meek closure with background knowledge; returns a CPDAG. Throws InputError
/// on a required edge contradicted by the closure.
MixedGraph meek_closure(MixedGraph pdag, const BackgroundKnowledge& bk);

DiscoveryResult pc(CITester& test, const BackgroundKnowledge& bk, const DiscoveryParams& params);

/// FCI with Possible-D-SEP pruning and the complete orientation rule set
/// (v-structures, R1-R4 with the discriminating-path rule, R5-R7, R8-R10).
DiscoveryResult fci(CITester& test, const BackgroundKnowledge& bk, const DiscoveryParams& params);

DiscoveryResult discover(CITester& test, const BackgroundKnowledge& bk,
                         const DiscoveryParams& params);

/// Possible-D-SEP set of v: nodes reachable by paths whose interior vertices
/// are colliders or lie in a triangle with their path neighbors.
std::set<int> possible_d_sep(const MixedGraph& g, int v);

}  // namespace causalperf
