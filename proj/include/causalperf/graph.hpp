#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace causalperf {

/// Error for malformed user input (unknown nodes, bad kinds, bad files).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Error for degenerate statistics (singular matrices, zero dof, empty strata).
struct DegenerateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parse error carrying a line/field position.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class EdgeMark : uint8_t { Tail, Arrow, Circle };

enum class GraphKind : uint8_t { DAG, CPDAG, ADMG, MAG, PAG, SelectionDiagram };

enum class NodeRole : uint8_t { None, Option, Performance, Latent, SNode, SelectionVar };

/// One edge between an unordered node pair, with a mark at each endpoint.
/// Node indices are into MixedGraph::nodes(); a < b always.
struct Edge {
    int a = -1;
    int b = -1;
    EdgeMark mark_at_a = EdgeMark::Tail;
    EdgeMark mark_at_b = EdgeMark::Tail;

    EdgeMark mark_at(int v) const {
        if (v == a) return mark_at_a;
        if (v == b) return mark_at_b;
        throw std::logic_error("mark_at: node not on edge");
    }
    int other(int v) const { return v == a ? b : a; }

    bool operator==(const Edge&) const = default;
};

/// Mixed graph over named nodes: covers DAGs, CPDAGs, ADMGs, MAGs, PAGs and
/// selection diagrams with a single edge algebra (unordered pair + two
/// endpoint marks). A directed edge x -> y is tail at x, arrow at y.
class MixedGraph {
public:
    MixedGraph() = default;
    explicit MixedGraph(GraphKind kind) : kind_(kind) {}
    MixedGraph(GraphKind kind, const std::vector<std::string>& node_names);

    GraphKind kind() const { return kind_; }
    void set_kind(GraphKind k) { kind_ = k; }

    int add_node(const std::string& name, NodeRole role = NodeRole::None);
    int node_count() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& node_names() const { return names_; }
    const std::string& name_of(int v) const { return names_.at(v); }
    int index_of(const std::string& name) const;  // throws InputError if unknown
    std::optional<int> find(const std::string& name) const;
    bool has_node(const std::string& name) const { return find(name).has_value(); }

    NodeRole role(int v) const { return roles_.at(v); }
    void set_role(int v, NodeRole r) { roles_.at(v) = r; }

    // Edge access. set_edge replaces any existing edge between the pair.
    void set_edge(int x, int y, EdgeMark mark_at_x, EdgeMark mark_at_y);
    void add_directed(int from, int to) { set_edge(from, to, EdgeMark::Tail, EdgeMark::Arrow); }
    void add_bidirected(int x, int y) { set_edge(x, y, EdgeMark::Arrow, EdgeMark::Arrow); }
    void add_undirected(int x, int y) { set_edge(x, y, EdgeMark::Tail, EdgeMark::Tail); }
    void remove_edge(int x, int y);
    bool adjacent(int x, int y) const;
    const Edge* edge_between(int x, int y) const;  // nullptr when non-adjacent
    void set_mark(int x, int y, EdgeMark mark_at_y);  // mark at the y end of edge x-y

    const std::vector<Edge>& edges() const { return edges_; }
    std::vector<int> adjacencies(int v) const;

    /// Neighbors reachable by x -> v (tail at x, arrow at v).
    std::vector<int> parents(int v) const;
    /// Neighbors w with v -> w.
    std::vector<int> children(int v) const;

    bool is_directed_acyclic() const;

    /// Name-based conveniences used by tests and the CLI.
    void add_directed(const std::string& from, const std::string& to) {
        add_directed(index_of(from), index_of(to));
    }
    void add_bidirected(const std::string& x, const std::string& y) {
        add_bidirected(index_of(x), index_of(y));
    }
    void add_undirected(const std::string& x, const std::string& y) {
        add_undirected(index_of(x), index_of(y));
    }

    bool operator==(const MixedGraph&) const = default;

private:
    GraphKind kind_ = GraphKind::DAG;
    std::vector<std::string> names_;
    std::vector<NodeRole> roles_;
    std::map<std::string, int> index_;
    std::vector<Edge> edges_;
    std::map<std::pair<int, int>, int> edge_pos_;  // (min,max) -> index into edges_

    static std::pair<int, int> key(int x, int y) {
        return x < y ? std::make_pair(x, y) : std::make_pair(y, x);
    }
    void check_node(int v) const;
};

/// Node names must match [A-Za-z0-9_.-]+ (case-sensitive).
bool valid_node_name(const std::string& name);

}  // namespace causalperf
