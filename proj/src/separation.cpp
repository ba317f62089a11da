#include "causalperf/separation.hpp"

#include <deque>

namespace causalperf {

NodeSet to_node_set(const MixedGraph& g, const std::set<std::string>& names) {
    NodeSet out;
    for (const auto& n : names) out.insert(g.index_of(n));
    return out;
}

NodeSet ancestors_of(const MixedGraph& g, const NodeSet& vs) {
    NodeSet out = vs;
    std::deque<int> frontier(vs.begin(), vs.end());
    while (!frontier.empty()) {
        int v = frontier.front();
        frontier.pop_front();
        for (int p : g.parents(v))
            if (out.insert(p).second) frontier.push_back(p);
    }
    return out;
}

NodeSet descendants_of(const MixedGraph& g, const NodeSet& vs) {
    NodeSet out = vs;
    std::deque<int> frontier(vs.begin(), vs.end());
    while (!frontier.empty()) {
        int v = frontier.front();
        frontier.pop_front();
        for (int c : g.children(v))
            if (out.insert(c).second) frontier.push_back(c);
    }
    return out;
}

NodeSet anterior_set(const MixedGraph& g, int v) {
    if (v < 0 || v >= g.node_count()) throw InputError("anterior_set: node out of range");
    NodeSet out{v};
    std::deque<int> frontier{v};
    while (!frontier.empty()) {
        int w = frontier.front();
        frontier.pop_front();
        for (const Edge& e : g.edges()) {
            if (e.a != w && e.b != w) continue;
            int u = e.other(w);
            // u qualifies when the u-w edge is u -> w or u - w.
            bool toward = e.mark_at(u) == EdgeMark::Tail &&
                          (e.mark_at(w) == EdgeMark::Arrow || e.mark_at(w) == EdgeMark::Tail);
            if (toward && out.insert(u).second) frontier.push_back(u);
        }
    }
    return out;
}

bool separated(const MixedGraph& g, const NodeSet& x, const NodeSet& y, const NodeSet& z) {
    for (int v : x)
        if (y.count(v) || z.count(v)) throw InputError("separated: x, y, z must be disjoint");
    for (int v : y)
        if (z.count(v)) throw InputError("separated: x, y, z must be disjoint");
    for (int v : x) {
        if (v < 0 || v >= g.node_count()) throw InputError("separated: node out of range");
    }

    // Colliders are open iff they are ancestors of z (self included).
    const NodeSet open_colliders = ancestors_of(g, z);

    // Walk states: (node, arrived-with-arrowhead-at-node). Reachability over
    // walk states decides the same relation as path enumeration.
    const int n = g.node_count();
    std::vector<std::array<bool, 2>> seen(n, {false, false});
    std::deque<std::pair<int, bool>> frontier;

    auto push = [&](int v, bool arrow_in) {
        if (!seen[v][arrow_in]) {
            seen[v][arrow_in] = true;
            frontier.emplace_back(v, arrow_in);
        }
    };

    for (int s : x) {
        for (const Edge& e : g.edges()) {
            if (e.a != s && e.b != s) continue;
            int w = e.other(s);
            if (y.count(w)) return false;  // single-edge path is never blocked
            push(w, e.mark_at(w) == EdgeMark::Arrow);
        }
    }

    while (!frontier.empty()) {
        auto [v, arrow_in] = frontier.front();
        frontier.pop_front();
        for (const Edge& f : g.edges()) {
            if (f.a != v && f.b != v) continue;
            bool arrow_out = f.mark_at(v) == EdgeMark::Arrow;
            bool collider = arrow_in && arrow_out;
            bool passable = collider ? open_colliders.count(v) > 0 : z.count(v) == 0;
            if (!passable) continue;
            int w = f.other(v);
            if (y.count(w)) return false;
            push(w, f.mark_at(w) == EdgeMark::Arrow);
        }
    }
    return true;
}

bool separated(const MixedGraph& g, const std::set<std::string>& x,
               const std::set<std::string>& y, const std::set<std::string>& z) {
    return separated(g, to_node_set(g, x), to_node_set(g, y), to_node_set(g, z));
}

MixedGraph mutilate(const MixedGraph& g, const NodeSet& cut_incoming,
                    const NodeSet& cut_outgoing) {
    for (int v : cut_incoming)
        if (v < 0 || v >= g.node_count()) throw InputError("mutilate: node out of range");
    for (int v : cut_outgoing)
        if (v < 0 || v >= g.node_count()) throw InputError("mutilate: node out of range");
    MixedGraph out = g;
    for (const Edge& e : g.edges()) {
        bool drop = false;
        if (e.mark_at_a == EdgeMark::Arrow && cut_incoming.count(e.a)) drop = true;
        if (e.mark_at_b == EdgeMark::Arrow && cut_incoming.count(e.b)) drop = true;
        if (e.mark_at_a == EdgeMark::Tail && e.mark_at_b == EdgeMark::Arrow &&
            cut_outgoing.count(e.a))
            drop = true;
        if (e.mark_at_b == EdgeMark::Tail && e.mark_at_a == EdgeMark::Arrow &&
            cut_outgoing.count(e.b))
            drop = true;
        if (drop) out.remove_edge(e.a, e.b);
    }
    return out;
}

}  // namespace causalperf
