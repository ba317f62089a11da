#pragma once

#include <iosfwd>
#include <string>

#include "causalperf/graph.hpp"

namespace causalperf {

/// Line-oriented text format:
///   kind: DAG
///   nodes: A,B,C
///   role: A=option
///   edge: A t-a B
/// Marks are t (tail), a (arrow), c (circle); `edge: X t-a Y` is X -> Y.
std::string to_text(const MixedGraph& g);
MixedGraph from_text(const std::string& text);
MixedGraph load_graph(const std::string& path);
void save_graph(const MixedGraph& g, const std::string& path);

/// DOT export: arrow -> normal head, tail -> none, circle -> odot.
std::string to_dot(const MixedGraph& g);

}  // namespace causalperf
