#include "causalperf/graph_io.hpp"

#include <fstream>
#include <sstream>

namespace causalperf {

namespace {

const char* kind_name(GraphKind k) {
    switch (k) {
        case GraphKind::DAG: return "DAG";
        case GraphKind::CPDAG: return "CPDAG";
        case GraphKind::ADMG: return "ADMG";
        case GraphKind::MAG: return "MAG";
        case GraphKind::PAG: return "PAG";
        case GraphKind::SelectionDiagram: return "SelectionDiagram";
    }
    return "DAG";
}

GraphKind parse_kind(const std::string& s, int line) {
    if (s == "DAG") return GraphKind::DAG;
    if (s == "CPDAG") return GraphKind::CPDAG;
    if (s == "ADMG") return GraphKind::ADMG;
    if (s == "MAG") return GraphKind::MAG;
    if (s == "PAG") return GraphKind::PAG;
    if (s == "SelectionDiagram") return GraphKind::SelectionDiagram;
    throw ParseError("line " + std::to_string(line) + ": unknown graph kind '" + s + "'");
}

const char* role_name(NodeRole r) {
    switch (r) {
        case NodeRole::Option: return "option";
        case NodeRole::Performance: return "performance";
        case NodeRole::Latent: return "latent";
        case NodeRole::SNode: return "s_node";
        case NodeRole::SelectionVar: return "selection_var";
        case NodeRole::None: return "";
    }
    return "";
}

NodeRole parse_role(const std::string& s, int line) {
    if (s == "option") return NodeRole::Option;
    if (s == "performance") return NodeRole::Performance;
    if (s == "latent") return NodeRole::Latent;
    if (s == "s_node") return NodeRole::SNode;
    if (s == "selection_var") return NodeRole::SelectionVar;
    throw ParseError("line " + std::to_string(line) + ": unknown role '" + s + "'");
}

char mark_char(EdgeMark m) {
    switch (m) {
        case EdgeMark::Tail: return 't';
        case EdgeMark::Arrow: return 'a';
        case EdgeMark::Circle: return 'c';
    }
    return 't';
}

EdgeMark parse_mark(char c, int line) {
    switch (c) {
        case 't': return EdgeMark::Tail;
        case 'a': return EdgeMark::Arrow;
        case 'c': return EdgeMark::Circle;
    }
    throw ParseError("line " + std::to_string(line) + ": unknown edge mark '" +
                     std::string(1, c) + "'");
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

}  // namespace

std::string to_text(const MixedGraph& g) {
    std::ostringstream out;
    out << "kind: " << kind_name(g.kind()) << "\n";
    out << "nodes: ";
    for (int v = 0; v < g.node_count(); ++v) {
        if (v) out << ",";
        out << g.name_of(v);
    }
    out << "\n";
    for (int v = 0; v < g.node_count(); ++v) {
        if (g.role(v) != NodeRole::None)
            out << "role: " << g.name_of(v) << "=" << role_name(g.role(v)) << "\n";
    }
    for (const Edge& e : g.edges()) {
        out << "edge: " << g.name_of(e.a) << " " << mark_char(e.mark_at_a) << "-"
            << mark_char(e.mark_at_b) << " " << g.name_of(e.b) << "\n";
    }
    return out.str();
}

MixedGraph from_text(const std::string& text) {
    MixedGraph g;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool nodes_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        size_t colon = line.find(':');
        if (colon == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected 'key: value'");
        std::string key = trim(line.substr(0, colon));
        std::string value = trim(line.substr(colon + 1));
        if (key == "kind") {
            g.set_kind(parse_kind(value, lineno));
        } else if (key == "nodes") {
            if (nodes_seen) throw ParseError("line " + std::to_string(lineno) +
                                             ": duplicate nodes header");
            nodes_seen = true;
            if (!value.empty())
                for (const auto& name : split(value, ',')) g.add_node(name);
        } else if (key == "role") {
            size_t eq = value.find('=');
            if (eq == std::string::npos)
                throw ParseError("line " + std::to_string(lineno) + ": role needs 'node=role'");
            std::string node = trim(value.substr(0, eq));
            if (!g.has_node(node))
                throw ParseError("line " + std::to_string(lineno) + ": unknown node '" + node +
                                 "' in role");
            g.set_role(g.index_of(node), parse_role(trim(value.substr(eq + 1)), lineno));
        } else if (key == "edge") {
            auto fields = split(value, ' ');
            std::vector<std::string> nonempty;
            for (auto& f : fields)
                if (!f.empty()) nonempty.push_back(f);
            if (nonempty.size() != 3)
                throw ParseError("line " + std::to_string(lineno) +
                                 ": edge needs 'a marks b' (3 fields)");
            const std::string& marks = nonempty[1];
            if (marks.size() != 3 || marks[1] != '-')
                throw ParseError("line " + std::to_string(lineno) + ": bad marks field '" +
                                 marks + "'");
            for (const auto& name : {nonempty[0], nonempty[2]})
                if (!g.has_node(name))
                    throw ParseError("line " + std::to_string(lineno) + ": unknown node '" +
                                     name + "' in edge");
            int a = g.index_of(nonempty[0]);
            int b = g.index_of(nonempty[2]);
            g.set_edge(a, b, parse_mark(marks[0], lineno), parse_mark(marks[2], lineno));
        } else {
            throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    if (!nodes_seen) throw ParseError("missing 'nodes:' header");
    return g;
}

MixedGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open graph file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str());
}

void save_graph(const MixedGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write graph file: " + path);
    out << to_text(g);
}

std::string to_dot(const MixedGraph& g) {
    auto head = [](EdgeMark m) {
        switch (m) {
            case EdgeMark::Arrow: return "normal";
            case EdgeMark::Tail: return "none";
            case EdgeMark::Circle: return "odot";
        }
        return "none";
    };
    std::ostringstream out;
    out << "digraph G {\n";
    for (int v = 0; v < g.node_count(); ++v) {
        out << "  \"" << g.name_of(v) << "\"";
        if (g.role(v) == NodeRole::SNode) out << " [shape=box]";
        out << ";\n";
    }
    for (const Edge& e : g.edges()) {
        out << "  \"" << g.name_of(e.a) << "\" -> \"" << g.name_of(e.b)
            << "\" [dir=both, arrowtail=" << head(e.mark_at_a)
            << ", arrowhead=" << head(e.mark_at_b) << "];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace causalperf
