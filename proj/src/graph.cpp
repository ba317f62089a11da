#include "causalperf/graph.hpp"

#include <algorithm>

namespace causalperf {

bool valid_node_name(const std::string& name) {
    if (name.empty()) return false;
    for (char c : name) {
        bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                  (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
        if (!ok) return false;
    }
    return true;
}

MixedGraph::MixedGraph(GraphKind kind, const std::vector<std::string>& node_names) : kind_(kind) {
    for (const auto& n : node_names) add_node(n);
}

int MixedGraph::add_node(const std::string& name, NodeRole role) {
    if (!valid_node_name(name)) throw InputError("invalid node name: '" + name + "'");
    if (index_.count(name)) throw InputError("duplicate node name: '" + name + "'");
    int id = static_cast<int>(names_.size());
    names_.push_back(name);
    roles_.push_back(role);
    index_[name] = id;
    return id;
}

int MixedGraph::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw InputError("unknown node: '" + name + "'");
    return it->second;
}

std::optional<int> MixedGraph::find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void MixedGraph::check_node(int v) const {
    if (v < 0 || v >= node_count()) throw InputError("node index out of range");
}

void MixedGraph::set_edge(int x, int y, EdgeMark mark_at_x, EdgeMark mark_at_y) {
    check_node(x);
    check_node(y);
    if (x == y) throw InputError("self-loop on node '" + names_[x] + "'");
    Edge e;
    if (x < y) {
        e = {x, y, mark_at_x, mark_at_y};
    } else {
        e = {y, x, mark_at_y, mark_at_x};
    }
    auto k = key(x, y);
    auto it = edge_pos_.find(k);
    if (it != edge_pos_.end()) {
        edges_[it->second] = e;
    } else {
        edge_pos_[k] = static_cast<int>(edges_.size());
        edges_.push_back(e);
    }
}

void MixedGraph::remove_edge(int x, int y) {
    auto k = key(x, y);
    auto it = edge_pos_.find(k);
    if (it == edge_pos_.end()) return;
    int pos = it->second;
    int last = static_cast<int>(edges_.size()) - 1;
    if (pos != last) {
        edges_[pos] = edges_[last];
        edge_pos_[key(edges_[pos].a, edges_[pos].b)] = pos;
    }
    edges_.pop_back();
    edge_pos_.erase(it);
}

bool MixedGraph::adjacent(int x, int y) const { return edge_pos_.count(key(x, y)) > 0; }

const Edge* MixedGraph::edge_between(int x, int y) const {
    auto it = edge_pos_.find(key(x, y));
    return it == edge_pos_.end() ? nullptr : &edges_[it->second];
}

void MixedGraph::set_mark(int x, int y, EdgeMark mark_at_y) {
    auto it = edge_pos_.find(key(x, y));
    if (it == edge_pos_.end()) throw InputError("set_mark: no edge between nodes");
    Edge& e = edges_[it->second];
    if (e.a == y) e.mark_at_a = mark_at_y;
    else e.mark_at_b = mark_at_y;
}

std::vector<int> MixedGraph::adjacencies(int v) const {
    check_node(v);
    std::vector<int> out;
    for (const Edge& e : edges_)
        if (e.a == v || e.b == v) out.push_back(e.other(v));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> MixedGraph::parents(int v) const {
    check_node(v);
    std::vector<int> out;
    for (const Edge& e : edges_) {
        if (e.a == v && e.mark_at_a == EdgeMark::Arrow && e.mark_at_b == EdgeMark::Tail)
            out.push_back(e.b);
        if (e.b == v && e.mark_at_b == EdgeMark::Arrow && e.mark_at_a == EdgeMark::Tail)
            out.push_back(e.a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> MixedGraph::children(int v) const {
    check_node(v);
    std::vector<int> out;
    for (const Edge& e : edges_) {
        if (e.a == v && e.mark_at_a == EdgeMark::Tail && e.mark_at_b == EdgeMark::Arrow)
            out.push_back(e.b);
        if (e.b == v && e.mark_at_b == EdgeMark::Tail && e.mark_at_a == EdgeMark::Arrow)
            out.push_back(e.a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool MixedGraph::is_directed_acyclic() const {
    // Kahn's algorithm on the directed part; undirected/bidirected edges ignored.
    int n = node_count();
    std::vector<int> indeg(n, 0);
    for (const Edge& e : edges_) {
        if (e.mark_at_a == EdgeMark::Tail && e.mark_at_b == EdgeMark::Arrow) indeg[e.b]++;
        if (e.mark_at_b == EdgeMark::Tail && e.mark_at_a == EdgeMark::Arrow) indeg[e.a]++;
    }
    std::vector<int> stack;
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) stack.push_back(v);
    int seen = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        ++seen;
        for (int c : children(v))
            if (--indeg[c] == 0) stack.push_back(c);
    }
    return seen == n;
}

}  // namespace causalperf
