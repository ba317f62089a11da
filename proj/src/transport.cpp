#include "causalperf/transport.hpp"

#include <algorithm>
#include <functional>

#include "causalperf/separation.hpp"

namespace causalperf {

std::set<std::string> SelectionDiagram::s_node_names() const {
    std::set<std::string> out;
    for (const auto& [s, target] : s_targets) out.insert(s);
    return out;
}

void SelectionDiagram::validate() const {
    if (graph.kind() != GraphKind::SelectionDiagram)
        throw InputError("selection diagram has wrong graph kind");
    for (const auto& [s, target] : s_targets) {
        int sv = graph.index_of(s);
        if (graph.role(sv) != NodeRole::SNode)
            throw InputError("'" + s + "' is not tagged as an S-node");
        // S-nodes are roots: every incident edge points away from S.
        for (const Edge& e : graph.edges()) {
            if (e.a != sv && e.b != sv) continue;
            if (e.mark_at(sv) != EdgeMark::Tail ||
                e.mark_at(e.other(sv)) != EdgeMark::Arrow)
                throw InputError("S-node '" + s + "' has a non-outgoing edge");
        }
    }
}

SelectionDiagram build_selection_diagram(const MixedGraph& shared,
                                         const std::set<std::string>& suspects) {
    SelectionDiagram d;
    d.graph = shared;
    d.graph.set_kind(GraphKind::SelectionDiagram);
    for (const auto& suspect : suspects) {
        int target = d.graph.index_of(suspect);
        std::string sname = "S_" + suspect;
        if (d.graph.has_node(sname))
            throw InputError("S-node name '" + sname + "' collides with an existing node");
        int sv = d.graph.add_node(sname, NodeRole::SNode);
        d.graph.add_directed(sv, target);
        d.s_targets[sname] = suspect;
    }
    d.validate();
    return d;
}

void TransportQuery::validate() const {
    for (const auto& s : s_nodes)
        if (!source_graph.has_node(s)) throw InputError("unknown suspect node '" + s + "'");
    for (const auto& n : query.treatment)
        if (!target_graph.has_node(n)) throw InputError("unknown treatment node '" + n + "'");
    for (const auto& n : query.outcome)
        if (!target_graph.has_node(n)) throw InputError("unknown outcome node '" + n + "'");
    for (const auto& n : query.conditioning)
        if (!target_graph.has_node(n)) throw InputError("unknown conditioning node '" + n + "'");
}

EstimandPtr retag_world(const EstimandPtr& e, World world) {
    auto out = std::make_shared<Estimand>(*e);
    if (out->kind == Estimand::Kind::Term) {
        if (out->world != World::SourceExperiment) out->world = world;
    } else {
        for (auto& c : out->children) c = retag_world(c, world);
    }
    return out;
}

std::optional<EstimandPtr> trivially_transportable(const TransportQuery& tq) {
    tq.validate();
    if (!tq.target_observational)
        throw InputError("trivial transport needs target observations");

    // Statistical relations (no do-operator) are always estimable from the
    // target's own observations.
    if (tq.query.treatment.empty()) {
        if (tq.query.outcome.empty()) throw InputError("query needs a nonempty outcome");
        std::vector<std::string> given(tq.query.conditioning.begin(),
                                       tq.query.conditioning.end());
        return Estimand::term({tq.query.outcome.begin(), tq.query.outcome.end()},
                              std::move(given), World::Target);
    }

    IdentificationResult r = id_effect(tq.target_graph, tq.query);
    if (!r.identified) return std::nullopt;
    return retag_world(r.estimand, World::Target);
}

std::optional<std::pair<std::set<std::string>, EstimandPtr>> s_admissible_adjustment(
    const TransportQuery& tq) {
    tq.validate();
    tq.query.validate();
    if (!tq.source_experiments)
        throw InputError("s-admissible adjustment needs source experiments");

    std::vector<std::string> xs(tq.query.treatment.begin(), tq.query.treatment.end());
    std::vector<std::string> ys(tq.query.outcome.begin(), tq.query.outcome.end());
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());

    if (tq.s_nodes.empty()) {
        // Identical environments: the experimental quantity transfers as-is.
        return std::make_pair(std::set<std::string>{},
                              Estimand::term(ys, {}, World::SourceExperiment, xs));
    }

    SelectionDiagram d = build_selection_diagram(tq.source_graph, tq.s_nodes);
    const MixedGraph& dg = d.graph;
    NodeSet x = to_node_set(dg, tq.query.treatment);
    NodeSet y = to_node_set(dg, tq.query.outcome);
    NodeSet s;
    for (const auto& n : d.s_node_names()) s.insert(dg.index_of(n));

    MixedGraph cut = mutilate(dg, x, {});

    std::vector<int> candidates;
    for (int v = 0; v < dg.node_count(); ++v) {
        if (x.count(v) || y.count(v) || s.count(v)) continue;
        if (dg.role(v) == NodeRole::Latent || dg.role(v) == NodeRole::SNode) continue;
        candidates.push_back(v);
    }
    std::sort(candidates.begin(), candidates.end(),
              [&](int a, int b) { return dg.name_of(a) < dg.name_of(b); });

    const int m = static_cast<int>(candidates.size());
    for (int k = 0; k <= m; ++k) {
        std::vector<int> pick(k);
        std::function<std::optional<NodeSet>(int, int)> rec =
            [&](int start, int depth) -> std::optional<NodeSet> {
            if (depth == k) {
                NodeSet z;
                for (int i = 0; i < k; ++i) z.insert(candidates[pick[i]]);
                NodeSet xz = x;
                xz.insert(z.begin(), z.end());
                if (separated(cut, s, y, xz)) return z;
                return std::nullopt;
            }
            for (int i = start; i <= m - (k - depth); ++i) {
                pick[depth] = i;
                if (auto r = rec(i + 1, depth + 1)) return r;
            }
            return std::nullopt;
        };
        if (auto z = rec(0, 0)) {
            std::set<std::string> znames;
            for (int v : *z) znames.insert(dg.name_of(v));
            std::vector<std::string> zvec(znames.begin(), znames.end());
            EstimandPtr do_term = Estimand::term(ys, zvec, World::SourceExperiment, xs);
            if (zvec.empty())
                return std::make_pair(znames, do_term);
            EstimandPtr weight = Estimand::term(zvec, {}, World::Target);
            EstimandPtr formula =
                Estimand::sum(zvec, Estimand::product({do_term, weight}));
            return std::make_pair(znames, formula);
        }
    }
    return std::nullopt;
}

bool s_recoverable(const MixedGraph& gs, const std::string& selection,
                   const std::set<std::string>& x, const std::set<std::string>& y) {
    auto sv = gs.find(selection);
    if (!sv) throw InputError("no selection node '" + selection + "' in graph");
    NodeSet xs = to_node_set(gs, x);
    NodeSet ys = to_node_set(gs, y);
    return separated(gs, NodeSet{*sv}, ys, xs);
}

std::map<std::pair<std::string, std::string>, bool> recoverability_report(
    const MixedGraph& gs, const std::string& selection, const std::set<std::string>& options,
    const std::set<std::string>& perf) {
    std::map<std::pair<std::string, std::string>, bool> out;
    for (const auto& o : options) {
        for (const auto& p : perf)
            out[{o, p}] = s_recoverable(gs, selection, options, {p});
    }
    return out;
}

}  // namespace causalperf
