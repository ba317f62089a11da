#include "causalperf/equivalence.hpp"

#include <algorithm>

namespace causalperf {

namespace {

bool is_undirected(const Edge& e) {
    return e.mark_at_a == EdgeMark::Tail && e.mark_at_b == EdgeMark::Tail;
}

bool directed_from(const MixedGraph& g, int from, int to) {
    const Edge* e = g.edge_between(from, to);
    return e && e->mark_at(from) == EdgeMark::Tail && e->mark_at(to) == EdgeMark::Arrow;
}

bool undirected_between(const MixedGraph& g, int x, int y) {
    const Edge* e = g.edge_between(x, y);
    return e && is_undirected(*e);
}

}  // namespace

void apply_meek_rules(MixedGraph& pdag) {
    const int n = pdag.node_count();
    bool changed = true;
    while (changed) {
        changed = false;
        for (int b = 0; b < n; ++b) {
            for (int c : pdag.adjacencies(b)) {
                if (!undirected_between(pdag, b, c)) continue;
                bool orient = false;
                // R1: a -> b - c with a,c nonadjacent.
                for (int a : pdag.parents(b)) {
                    if (a != c && !pdag.adjacent(a, c)) {
                        orient = true;
                        break;
                    }
                }
                // R2: b -> d -> c with b - c.
                if (!orient) {
                    for (int d : pdag.children(b)) {
                        if (d != c && directed_from(pdag, d, c)) {
                            orient = true;
                            break;
                        }
                    }
                }
                // R3: b - d1, b - d2, d1 -> c, d2 -> c, d1,d2 nonadjacent.
                if (!orient) {
                    std::vector<int> mids;
                    for (int d : pdag.adjacencies(b)) {
                        if (d != c && undirected_between(pdag, b, d) && directed_from(pdag, d, c))
                            mids.push_back(d);
                    }
                    for (size_t i = 0; i < mids.size() && !orient; ++i)
                        for (size_t j = i + 1; j < mids.size() && !orient; ++j)
                            if (!pdag.adjacent(mids[i], mids[j])) orient = true;
                }
                // R4: d -> e -> c with b - c? Pattern: b - c to orient b -> c when
                // there are d, e with e -> c, d -> e, c,d nonadjacent, b adjacent
                // to e, and b - d or b -> d.
                if (!orient) {
                    for (int e : pdag.parents(c)) {
                        if (e == b) continue;
                        if (!pdag.adjacent(b, e)) continue;
                        for (int d : pdag.parents(e)) {
                            if (d == b || d == c || pdag.adjacent(d, c)) continue;
                            if (undirected_between(pdag, b, d) || directed_from(pdag, b, d)) {
                                orient = true;
                                break;
                            }
                        }
                        if (orient) break;
                    }
                }
                if (orient) {
                    pdag.set_edge(b, c, EdgeMark::Tail, EdgeMark::Arrow);
                    changed = true;
                }
            }
        }
    }
}

MixedGraph cpdag_of(const MixedGraph& dag) {
    if (!dag.is_directed_acyclic()) throw InputError("cpdag_of: input graph is cyclic");
    for (const Edge& e : dag.edges())
        if (!(e.mark_at_a == EdgeMark::Tail && e.mark_at_b == EdgeMark::Arrow) &&
            !(e.mark_at_a == EdgeMark::Arrow && e.mark_at_b == EdgeMark::Tail))
            throw InputError("cpdag_of: input must be a DAG (tail/arrow edges only)");

    MixedGraph out(GraphKind::CPDAG, dag.node_names());
    for (int v = 0; v < dag.node_count(); ++v) out.set_role(v, dag.role(v));
    for (const Edge& e : dag.edges()) out.add_undirected(e.a, e.b);

    // v-structures of the DAG pin their edges.
    for (int v = 0; v < dag.node_count(); ++v) {
        auto ps = dag.parents(v);
        for (size_t i = 0; i < ps.size(); ++i)
            for (size_t j = i + 1; j < ps.size(); ++j)
                if (!dag.adjacent(ps[i], ps[j])) {
                    out.set_edge(ps[i], v, EdgeMark::Tail, EdgeMark::Arrow);
                    out.set_edge(ps[j], v, EdgeMark::Tail, EdgeMark::Arrow);
                }
    }
    apply_meek_rules(out);
    return out;
}

MixedGraph mag_of(const MixedGraph& dag, const NodeSet& latents, const NodeSet& selection) {
    if (!dag.is_directed_acyclic()) throw InputError("mag_of: input graph is cyclic");
    for (int v : latents)
        if (selection.count(v)) throw InputError("mag_of: latents and selection must be disjoint");

    std::vector<int> observed;
    for (int v = 0; v < dag.node_count(); ++v)
        if (!latents.count(v) && !selection.count(v)) observed.push_back(v);
    if (observed.empty()) throw InputError("mag_of: no observed nodes remain");

    MixedGraph out(GraphKind::MAG);
    std::vector<int> new_id(dag.node_count(), -1);
    for (int v : observed) {
        new_id[v] = out.add_node(dag.name_of(v), dag.role(v));
    }

    // a, b adjacent in the MAG iff no subset of the remaining observed nodes
    // (always together with the selection set) d-separates them in the DAG.
    auto inseparable = [&](int a, int b) {
        std::vector<int> rest;
        for (int v : observed)
            if (v != a && v != b) rest.push_back(v);
        const int m = static_cast<int>(rest.size());
        for (int mask = 0; mask < (1 << m); ++mask) {
            NodeSet z(selection.begin(), selection.end());
            for (int i = 0; i < m; ++i)
                if (mask & (1 << i)) z.insert(rest[i]);
            if (separated(dag, NodeSet{a}, NodeSet{b}, z)) return false;
        }
        return true;
    };

    // Tail at a iff a is an ancestor of b or of a selection node.
    auto tail_at = [&](int a, int b) {
        NodeSet targets(selection.begin(), selection.end());
        targets.insert(b);
        NodeSet anc = ancestors_of(dag, targets);
        return anc.count(a) > 0;
    };

    for (size_t i = 0; i < observed.size(); ++i) {
        for (size_t j = i + 1; j < observed.size(); ++j) {
            int a = observed[i], b = observed[j];
            if (!inseparable(a, b)) continue;
            EdgeMark at_a = tail_at(a, b) ? EdgeMark::Tail : EdgeMark::Arrow;
            EdgeMark at_b = tail_at(b, a) ? EdgeMark::Tail : EdgeMark::Arrow;
            out.set_edge(new_id[a], new_id[b], at_a, at_b);
        }
    }
    return out;
}

bool is_chordal_component(const MixedGraph& g, const std::vector<int>& component) {
    // Maximum-cardinality search over the undirected edges inside the component.
    const int m = static_cast<int>(component.size());
    std::map<int, int> local;
    for (int i = 0; i < m; ++i) local[component[i]] = i;

    std::vector<std::vector<bool>> adj(m, std::vector<bool>(m, false));
    for (const Edge& e : g.edges()) {
        if (!is_undirected(e)) continue;
        auto ia = local.find(e.a), ib = local.find(e.b);
        if (ia == local.end() || ib == local.end()) continue;
        adj[ia->second][ib->second] = adj[ib->second][ia->second] = true;
    }

    std::vector<int> weight(m, 0), order;
    std::vector<bool> picked(m, false);
    std::vector<int> pick_rank(m, -1);
    for (int step = 0; step < m; ++step) {
        int best = -1;
        for (int v = 0; v < m; ++v)
            if (!picked[v] && (best < 0 || weight[v] > weight[best])) best = v;
        picked[best] = true;
        pick_rank[best] = step;
        order.push_back(best);
        for (int u = 0; u < m; ++u)
            if (!picked[u] && adj[best][u]) weight[u]++;
    }

    // The MCS order is a perfect elimination ordering iff the graph is chordal:
    // earlier-picked neighbors of v, minus the latest of them, must all be
    // adjacent to that latest one.
    for (int v = 0; v < m; ++v) {
        std::vector<int> pred;
        for (int u = 0; u < m; ++u)
            if (adj[v][u] && pick_rank[u] < pick_rank[v]) pred.push_back(u);
        if (pred.size() < 2) continue;
        int latest = pred[0];
        for (int u : pred)
            if (pick_rank[u] > pick_rank[latest]) latest = u;
        for (int u : pred)
            if (u != latest && !adj[latest][u]) return false;
    }
    return true;
}

std::vector<std::vector<int>> detect_selection_bias(const MixedGraph& pag) {
    const int n = pag.node_count();
    // Union-find over undirected edges only.
    std::vector<int> root(n);
    for (int v = 0; v < n; ++v) root[v] = v;
    auto find = [&](int v) {
        while (root[v] != v) v = root[v] = root[root[v]];
        return v;
    };
    std::vector<bool> touched(n, false);
    for (const Edge& e : pag.edges()) {
        if (!is_undirected(e)) continue;
        touched[e.a] = touched[e.b] = true;
        root[find(e.a)] = find(e.b);
    }

    std::map<int, std::vector<int>> comps;
    for (int v = 0; v < n; ++v)
        if (touched[v]) comps[find(v)].push_back(v);

    std::vector<std::vector<int>> flagged;
    for (auto& [r, comp] : comps) {
        if (!is_chordal_component(pag, comp)) flagged.push_back(comp);
    }
    return flagged;
}

}  // namespace causalperf
