#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "causalperf/ci_tests.hpp"
#include "causalperf/discovery.hpp"
#include "causalperf/equivalence.hpp"
#include "causalperf/estimation.hpp"
#include "causalperf/graph_io.hpp"
#include "causalperf/identify.hpp"
#include "causalperf/synthlab.hpp"
#include "causalperf/transport.hpp"

namespace fs = std::filesystem;
using namespace causalperf;

namespace {

// All file outputs go through a temp file + rename so a failed run never
// leaves a half-written artifact behind.
void atomic_write(const std::string& path, const std::string& content) {
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw InputError("cannot open '" + tmp.string() + "' for writing");
        out << content;
        if (!out) throw InputError("write to '" + tmp.string() + "' failed");
    }
    fs::rename(tmp, target);
}

std::set<std::string> split_names(const std::string& csv) {
    std::set<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.insert(item);
    return out;
}

/// Parses `A=1,B=0` into an assignment; bare names get level 0 with a note.
std::map<std::string, int> split_assignments(const std::string& csv) {
    std::map<std::string, int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw InputError("assignment '" + item + "' needs the form name=level");
        out[item.substr(0, eq)] = std::stoi(item.substr(eq + 1));
    }
    return out;
}

/// Options adjacent to each performance node, mirroring the report style:
/// a count line first, then the names.
void report_influential_options(std::ostream& os, const MixedGraph& g) {
    for (int v = 0; v < g.node_count(); ++v) {
        if (g.role(v) != NodeRole::Performance) continue;
        std::vector<std::string> opts;
        for (int u : g.adjacencies(v))
            if (g.role(u) == NodeRole::Option) opts.push_back(g.name_of(u));
        std::sort(opts.begin(), opts.end());
        os << "influential options (" << g.name_of(v) << "): " << opts.size();
        if (!opts.empty()) {
            os << " [";
            for (size_t i = 0; i < opts.size(); ++i)
                os << (i ? "," : "") << opts[i];
            os << "]";
        }
        os << "\n";
    }
}

void print_summary(std::ostream& os, const std::string& label,
                   const ConditionalSummary& s) {
    os << std::setprecision(10);
    if (s.discrete) {
        os << label << " probs=[";
        for (size_t i = 0; i < s.probabilities.size(); ++i)
            os << (i ? "," : "") << s.probabilities[i];
        os << "] count=" << s.count << "\n";
    } else {
        os << label << " mean=" << s.mean << " variance=" << s.variance
           << " count=" << s.count << "\n";
    }
}

SelectionMechanism load_selection(const std::string& path) {
    SelectionMechanism sel;
    std::ifstream in(path);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected key: value");
        std::string key = line.substr(0, colon);
        std::string value = line.substr(colon + 1);
        auto b = value.find_first_not_of(" \t");
        value = b == std::string::npos ? "" : value.substr(b);
        if (key == "inputs") {
            for (const auto& n : split_names(value)) sel.inputs.push_back(n);
        } else if (key == "inclusion") {
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ','))
                sel.inclusion.push_back(std::stod(item));
        } else {
            throw ParseError(path + ":" + std::to_string(lineno) + ": unknown key '" +
                             key + "'");
        }
    }
    if (sel.inputs.empty() || sel.inclusion.empty())
        throw InputError("selection file needs both inputs: and inclusion: lines");
    return sel;
}

int run(int argc, char** argv) {
    CLI::App app{"causal analysis of configurable-system performance"};
    app.require_subcommand(1);

    // discover
    auto* discover_cmd = app.add_subcommand("discover", "learn a causal graph from data");
    std::string data_path, meta_path, algo = "pc", bk_path, out_path, dot_path;
    double alpha = 0.01;
    int max_cond = -1;
    discover_cmd->add_option("--data", data_path, "measurements CSV")->required();
    discover_cmd->add_option("--meta", meta_path, "variable metadata")->required();
    discover_cmd->add_option("--algo", algo, "pc or fci")
        ->check(CLI::IsMember({"pc", "fci"}));
    discover_cmd->add_option("--alpha", alpha, "test level in (0,1)");
    discover_cmd->add_option("--max-cond-size", max_cond, "conditioning-set cap");
    discover_cmd->add_option("--bk", bk_path, "background-knowledge file");
    discover_cmd->add_option("--out", out_path, "output graph file");
    discover_cmd->add_option("--dot", dot_path, "DOT export path");

    // identify
    auto* identify_cmd = app.add_subcommand("identify", "decide identifiability");
    std::string graph_path, treatment_csv, outcome_csv, given_csv;
    identify_cmd->add_option("--graph", graph_path, "causal graph file")->required();
    identify_cmd->add_option("--treatment", treatment_csv, "treatment nodes")->required();
    identify_cmd->add_option("--outcome", outcome_csv, "outcome nodes")->required();
    identify_cmd->add_option("--given", given_csv, "conditioning nodes");
    identify_cmd->add_option("--data", data_path, "observational CSV for evaluation");
    identify_cmd->add_option("--meta", meta_path, "metadata for --data");

    // transport
    auto* transport_cmd = app.add_subcommand("transport", "two-environment transport");
    std::string source_path, target_path, s_nodes_csv;
    std::string source_data, source_meta, target_data, target_meta;
    transport_cmd->add_option("--source", source_path, "source-environment graph")->required();
    transport_cmd->add_option("--target", target_path, "target-environment graph")->required();
    transport_cmd->add_option("--s-nodes", s_nodes_csv, "nodes whose mechanisms differ");
    transport_cmd->add_option("--treatment", treatment_csv, "treatment nodes")->required();
    transport_cmd->add_option("--outcome", outcome_csv, "outcome nodes")->required();
    transport_cmd->add_option("--source-data", source_data, "source observational CSV");
    transport_cmd->add_option("--source-meta", source_meta, "metadata for --source-data");
    transport_cmd->add_option("--target-data", target_data, "target observational CSV");
    transport_cmd->add_option("--target-meta", target_meta, "metadata for --target-data");

    // recover
    auto* recover_cmd = app.add_subcommand("recover", "selection-bias recoverability");
    std::string selection_node, x_csv, y_csv;
    recover_cmd->add_option("--graph", graph_path, "selection-augmented graph")->required();
    recover_cmd->add_option("--selection", selection_node, "selection node name")->required();
    recover_cmd->add_option("--x", x_csv, "conditioning variables")->required();
    recover_cmd->add_option("--y", y_csv, "query variables")->required();

    // simulate
    auto* simulate_cmd = app.add_subcommand("simulate", "sample a synthetic system");
    std::string spec_path, truth_path, sel_path, meta_out;
    long n_rows = 0;
    std::optional<uint64_t> seed;
    simulate_cmd->add_option("--spec", spec_path, "SCM spec file")->required();
    simulate_cmd->add_option("--n", n_rows, "number of rows")->required();
    simulate_cmd->add_option("--seed", seed, "sampling seed (required: no silent entropy)");
    simulate_cmd->add_option("--out", out_path, "output CSV")->required();
    simulate_cmd->add_option("--meta-out", meta_out, "metadata output (default <out>.meta)");
    simulate_cmd->add_option("--truth", truth_path, "ground-truth graph output");
    simulate_cmd->add_option("--selection", sel_path, "selection-mechanism file");

    // dsep
    auto* dsep_cmd = app.add_subcommand("dsep", "m-separation query");
    dsep_cmd->add_option("--graph", graph_path, "graph file")->required();
    dsep_cmd->add_option("--x", x_csv, "first node set")->required();
    dsep_cmd->add_option("--y", y_csv, "second node set")->required();
    dsep_cmd->add_option("--given", given_csv, "conditioning set");

    // estimate
    auto* estimate_cmd = app.add_subcommand("estimate", "empirical conditional summaries");
    std::string adjust_csv;
    double smoothing = 0.0;
    estimate_cmd->add_option("--data", data_path, "measurements CSV")->required();
    estimate_cmd->add_option("--meta", meta_path, "variable metadata")->required();
    estimate_cmd->add_option("--outcome", outcome_csv, "outcome variable")->required();
    estimate_cmd->add_option("--given", given_csv, "assignment list A=1,B=0");
    estimate_cmd->add_option("--treatment", treatment_csv, "treatment variables");
    estimate_cmd->add_option("--adjust", adjust_csv, "adjustment variables");
    estimate_cmd->add_option("--smoothing", smoothing, "additive smoothing mass");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);  // CLI11 prints the diagnostic; nonzero on error
    }

    if (discover_cmd->parsed()) {
        if (alpha <= 0 || alpha >= 1) throw InputError("alpha must lie in (0,1)");
        Dataset d = load_dataset(data_path, meta_path);
        BackgroundKnowledge bk;
        if (!bk_path.empty()) bk = load_background_knowledge(bk_path);
        DiscoveryParams params;
        params.alpha = alpha;
        params.max_cond_size = max_cond;
        params.algorithm = algo == "fci" ? Algorithm::FCI : Algorithm::PC;
        DataTester tester(d, alpha);
        DiscoveryResult r = discover(tester, bk, params);
        std::cout << "algorithm: " << algo << "  nodes: " << r.graph.node_count()
                  << "  edges: " << r.graph.edges().size() << "\n";
        report_influential_options(std::cout, r.graph);
        for (const auto& diag : r.diagnostics) std::cout << "note: " << diag << "\n";
        auto bias = detect_selection_bias(r.graph);
        if (!bias.empty())
            std::cout << "warning: " << bias.size()
                      << " non-chordal undirected component(s) - possible selection bias\n";
        if (!out_path.empty()) atomic_write(out_path, to_text(r.graph));
        if (!dot_path.empty()) atomic_write(dot_path, to_dot(r.graph));
        return 0;
    }

    if (identify_cmd->parsed()) {
        MixedGraph g = load_graph(graph_path);
        CausalQuery q;
        q.treatment = split_names(treatment_csv);
        q.outcome = split_names(outcome_csv);
        std::map<std::string, int> given_values;
        if (!given_csv.empty() && given_csv.find('=') != std::string::npos) {
            given_values = split_assignments(given_csv);
            for (const auto& [k, v] : given_values) q.conditioning.insert(k);
        } else {
            q.conditioning = split_names(given_csv);
        }
        report_influential_options(std::cout, g);
        IdentificationResult r = id_effect(g, q);
        if (!r.identified) {
            std::cout << "status: not identified\n" << r.hedge_witness << "\n";
            return 0;
        }
        std::cout << "status: identified\nestimand: " << to_text(*r.estimand) << "\n";
        std::cout << "expression: " << to_json(*r.estimand) << "\n";
        if (!data_path.empty()) {
            if (meta_path.empty()) throw InputError("--data requires --meta");
            Dataset d = load_dataset(data_path, meta_path);
            EstimationBindings b;
            b.source = &d;
            std::vector<std::string> x_sorted(q.treatment.begin(), q.treatment.end());
            std::vector<std::string> y_sorted(q.outcome.begin(), q.outcome.end());
            // One estimated outcome distribution per joint treatment level.
            std::vector<int> x_cards;
            for (const auto& xv : x_sorted) x_cards.push_back(d.level_count(d.index_of(xv)));
            std::vector<int> levels(x_sorted.size(), 0);
            while (true) {
                std::map<std::string, int> env = given_values;
                for (size_t i = 0; i < x_sorted.size(); ++i) env[x_sorted[i]] = levels[i];
                auto table = estimate(*r.estimand, b, y_sorted, env);
                std::cout << "do(";
                for (size_t i = 0; i < x_sorted.size(); ++i)
                    std::cout << (i ? "," : "") << x_sorted[i] << "=" << levels[i];
                std::cout << "):";
                std::cout << std::setprecision(10);
                for (const auto& [ylev, p] : table) {
                    std::cout << " P(";
                    for (size_t i = 0; i < y_sorted.size(); ++i)
                        std::cout << (i ? "," : "") << y_sorted[i] << "=" << ylev[i];
                    std::cout << ")=" << p;
                }
                std::cout << "\n";
                size_t pos = 0;
                for (; pos < levels.size(); ++pos) {
                    if (++levels[pos] < x_cards[pos]) break;
                    levels[pos] = 0;
                }
                if (pos == levels.size()) break;
            }
        }
        return 0;
    }

    if (transport_cmd->parsed()) {
        TransportQuery tq;
        tq.source_graph = load_graph(source_path);
        tq.target_graph = load_graph(target_path);
        tq.s_nodes = split_names(s_nodes_csv);
        tq.query.treatment = split_names(treatment_csv);
        tq.query.outcome = split_names(outcome_csv);
        tq.source_experiments = true;
        report_influential_options(std::cout, tq.target_graph);
        if (auto trivial = trivially_transportable(tq)) {
            std::cout << "status: trivially transportable\nestimand: "
                      << to_text(**trivial) << "\n";
            std::cout << "expression: " << to_json(**trivial) << "\n";
            if (!target_data.empty()) {
                if (target_meta.empty()) throw InputError("--target-data requires --target-meta");
                Dataset dt = load_dataset(target_data, target_meta);
                EstimationBindings b;
                b.target = &dt;
                std::vector<std::string> ys(tq.query.outcome.begin(), tq.query.outcome.end());
                std::vector<std::string> xs(tq.query.treatment.begin(), tq.query.treatment.end());
                std::vector<int> x_cards;
                for (const auto& xv : xs) x_cards.push_back(dt.level_count(dt.index_of(xv)));
                std::vector<int> levels(xs.size(), 0);
                std::cout << std::setprecision(10);
                while (true) {
                    std::map<std::string, int> env;
                    for (size_t i = 0; i < xs.size(); ++i) env[xs[i]] = levels[i];
                    auto table = estimate(**trivial, b, ys, env);
                    std::cout << "at(";
                    for (size_t i = 0; i < xs.size(); ++i)
                        std::cout << (i ? "," : "") << xs[i] << "=" << levels[i];
                    std::cout << "):";
                    for (const auto& [ylev, p] : table) {
                        std::cout << " P*(";
                        for (size_t i = 0; i < ys.size(); ++i)
                            std::cout << (i ? "," : "") << ys[i] << "=" << ylev[i];
                        std::cout << ")=" << p;
                    }
                    std::cout << "\n";
                    size_t pos = 0;
                    for (; pos < levels.size(); ++pos) {
                        if (++levels[pos] < x_cards[pos]) break;
                        levels[pos] = 0;
                    }
                    if (pos == levels.size()) break;
                }
            }
            return 0;
        }
        if (auto adj = s_admissible_adjustment(tq)) {
            std::cout << "status: transportable by s-admissible adjustment\nadjustment: {";
            bool first = true;
            for (const auto& z : adj->first) {
                std::cout << (first ? "" : ",") << z;
                first = false;
            }
            std::cout << "}\nestimand: " << to_text(*adj->second) << "\n";
            std::cout << "expression: " << to_json(*adj->second) << "\n";
            return 0;
        }
        std::cout << "status: not transportable by the supported criteria\n";
        return 0;
    }

    if (recover_cmd->parsed()) {
        MixedGraph g = load_graph(graph_path);
        auto xs = split_names(x_csv);
        for (const auto& y : split_names(y_csv)) {
            bool ok = s_recoverable(g, selection_node, xs, {y});
            std::cout << "s-recoverable P(" << y << "|" << x_csv << "): "
                      << (ok ? "true" : "false") << "\n";
        }
        return 0;
    }

    if (simulate_cmd->parsed()) {
        if (!seed) {
            std::cerr << "usage error: simulate requires --seed (no silent entropy)\n";
            return 1;
        }
        SCMSpec spec = load_scm_spec(spec_path);
        spec.seed = *seed;
        SCM m = sample_scm(spec);
        std::optional<SelectionMechanism> sel;
        if (!sel_path.empty()) sel = load_selection(sel_path);
        Dataset d = simulate(m, n_rows, sel, derive_stream(*seed, 1000));
        if (meta_out.empty()) meta_out = out_path + ".meta";
        save_dataset(d, out_path + ".tmp", meta_out + ".tmp");
        fs::rename(out_path + ".tmp", out_path);
        fs::rename(meta_out + ".tmp", meta_out);
        if (!truth_path.empty()) atomic_write(truth_path, to_text(m.graph));
        std::cout << "simulated " << d.row_count() << " rows over " << d.variable_count()
                  << " observed variables (seed " << *seed << ")\n";
        return 0;
    }

    if (dsep_cmd->parsed()) {
        MixedGraph g = load_graph(graph_path);
        bool sep = separated(g, split_names(x_csv), split_names(y_csv),
                             split_names(given_csv));
        std::cout << "separated: " << (sep ? "true" : "false") << "\n";
        return 0;
    }

    if (estimate_cmd->parsed()) {
        Dataset d = load_dataset(data_path, meta_path);
        auto given = split_assignments(given_csv);
        if (treatment_csv.empty()) {
            ConditionalSummary s = cond_summary(d, outcome_csv, given, smoothing);
            print_summary(std::cout, "P(" + outcome_csv + "|" + given_csv + "):", s);
        } else {
            auto table = adjustment_estimate(d, split_names(treatment_csv), outcome_csv,
                                             split_names(adjust_csv), smoothing);
            std::vector<std::string> xs;
            for (const auto& x : split_names(treatment_csv)) xs.push_back(x);
            for (const auto& [levels, s] : table) {
                std::ostringstream label;
                label << "do(";
                for (size_t i = 0; i < xs.size(); ++i)
                    label << (i ? "," : "") << xs[i] << "=" << levels[i];
                label << ") " << outcome_csv << ":";
                print_summary(std::cout, label.str(), s);
            }
        }
        return 0;
    }

    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const DegenerateError& e) {
        std::cerr << "degenerate statistics: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
