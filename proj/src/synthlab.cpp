#include "causalperf/synthlab.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "causalperf/graph_io.hpp"

namespace causalperf {

uint64_t derive_stream(uint64_t seed, uint64_t stream) {
    // splitmix64 over the combined state.
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Rng::Rng(uint64_t seed) : state_(derive_stream(seed, 0)) {
    if (state_ == 0) state_ = 0x853c49e6748fea9bULL;
}

uint64_t Rng::next_u64() {
    uint64_t x = state_;
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    state_ = x;
    return x * 0x2545f4914f6cdd1dULL;
}

double Rng::next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

double Rng::next_gaussian() {
    if (spare_) {
        double v = *spare_;
        spare_.reset();
        return v;
    }
    double u1 = next_double(), u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    return r * std::cos(2.0 * M_PI * u2);
}

int Rng::next_int(int n) { return static_cast<int>(next_double() * n); }

void SCMSpec::validate() const {
    if (n_options < 1 || n_perf < 1) throw InputError("spec needs n_options >= 1, n_perf >= 1");
    if (n_latent < 0) throw InputError("spec: n_latent must be nonnegative");
    if (edge_prob < 0.0 || edge_prob > 1.0) throw InputError("spec: edge_prob must be in [0,1]");
    if (mechanism == MechanismKind::Discrete && levels < 2)
        throw InputError("spec: discrete mechanisms need >= 2 levels");
}

void SCM::validate() const {
    if (!graph.is_directed_acyclic()) throw InputError("SCM graph must be acyclic");
    if (kind == MechanismKind::Discrete) {
        for (int v = 0; v < graph.node_count(); ++v) {
            long rows = 1;
            for (int p : graph.parents(v)) rows *= cards.at(p);
            if (static_cast<long>(mechanisms.at(v).cpt.size()) != rows)
                throw InputError("SCM: CPT row count mismatch at '" + graph.name_of(v) + "'");
            for (const auto& row : mechanisms[v].cpt) {
                double total = 0.0;
                for (double p : row) total += p;
                if (std::fabs(total - 1.0) > 1e-12)
                    throw InputError("SCM: CPT row does not sum to 1 at '" + graph.name_of(v) +
                                     "'");
            }
        }
    } else {
        for (int v = 0; v < graph.node_count(); ++v)
            if (mechanisms.at(v).weights.size() != graph.parents(v).size())
                throw InputError("SCM: weight count mismatch at '" + graph.name_of(v) + "'");
    }
}

std::vector<int> SCM::topo_order() const {
    std::vector<int> indeg(graph.node_count(), 0);
    for (int v = 0; v < graph.node_count(); ++v)
        indeg[v] = static_cast<int>(graph.parents(v).size());
    std::set<int> ready;
    for (int v = 0; v < graph.node_count(); ++v)
        if (indeg[v] == 0) ready.insert(v);
    std::vector<int> order;
    while (!ready.empty()) {
        int v = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(v);
        for (int c : graph.children(v))
            if (--indeg[c] == 0) ready.insert(c);
    }
    return order;
}

std::vector<int> SCM::observed_nodes() const {
    std::vector<int> out;
    for (int v = 0; v < graph.node_count(); ++v)
        if (graph.role(v) != NodeRole::Latent) out.push_back(v);
    return out;
}

MixedGraph sample_structure(const SCMSpec& spec) {
    spec.validate();
    Rng rng(derive_stream(spec.seed, 101));

    MixedGraph g(GraphKind::DAG);
    std::vector<int> options, latents, perfs;
    for (int i = 0; i < spec.n_options; ++i)
        options.push_back(g.add_node("O" + std::to_string(i + 1), NodeRole::Option));
    for (int i = 0; i < spec.n_latent; ++i)
        latents.push_back(g.add_node("L" + std::to_string(i + 1), NodeRole::Latent));
    for (int i = 0; i < spec.n_perf; ++i)
        perfs.push_back(g.add_node("P" + std::to_string(i + 1), NodeRole::Performance));

    // Options and latents are roots; performance nodes receive edges from
    // options, latents, and earlier performance nodes only.
    for (size_t pi = 0; pi < perfs.size(); ++pi) {
        for (int o : options)
            if (rng.next_double() < spec.edge_prob) g.add_directed(o, perfs[pi]);
        for (int l : latents)
            if (rng.next_double() < spec.edge_prob) g.add_directed(l, perfs[pi]);
        for (size_t pj = 0; pj < pi; ++pj)
            if (rng.next_double() < spec.edge_prob) g.add_directed(perfs[pj], perfs[pi]);
    }
    return g;
}

namespace {

std::vector<double> sample_cpt_row(Rng& rng, int levels) {
    // Symmetric Dirichlet(1) with a 0.02 minimum-cell floor, renormalized.
    std::vector<double> row(levels);
    double total = 0.0;
    for (int i = 0; i < levels; ++i) {
        double u = rng.next_double();
        while (u <= 0.0) u = rng.next_double();
        row[i] = -std::log(u);
        total += row[i];
    }
    for (double& p : row) p /= total;
    const double floor = 0.02;
    double excess = 0.0;
    for (double& p : row) {
        if (p < floor) {
            excess += floor - p;
            p = floor;
        }
    }
    if (excess > 0.0) {
        double above = 0.0;
        for (double p : row)
            if (p > floor) above += p - floor;
        for (double& p : row)
            if (p > floor) p -= excess * (p - floor) / above;
    }
    double check = 0.0;
    for (double p : row) check += p;
    for (double& p : row) p /= check;
    return row;
}

Mechanism sample_mechanism(const MixedGraph& g, const std::vector<int>& cards,
                           MechanismKind kind, int node, uint64_t seed) {
    Rng rng(derive_stream(seed, 1000 + static_cast<uint64_t>(node)));
    Mechanism m;
    auto parents = g.parents(node);
    if (kind == MechanismKind::Discrete) {
        long rows = 1;
        for (int p : parents) rows *= cards[p];
        for (long r = 0; r < rows; ++r) m.cpt.push_back(sample_cpt_row(rng, cards[node]));
    } else {
        for (size_t i = 0; i < parents.size(); ++i) {
            double w = rng.next_uniform(0.4, 1.2);
            if (rng.next_double() < 0.5) w = -w;
            m.weights.push_back(w);
        }
        m.intercept = 0.0;
        m.noise_scale = rng.next_uniform(0.5, 1.0);
    }
    return m;
}

}  // namespace

SCM mechanize(const MixedGraph& dag, MechanismKind kind, int levels, uint64_t seed) {
    SCM m;
    m.graph = dag;
    m.kind = kind;
    m.seed = seed;
    m.cards.assign(dag.node_count(), levels);
    for (int v = 0; v < dag.node_count(); ++v)
        m.mechanisms.push_back(sample_mechanism(dag, m.cards, kind, v, seed));
    m.validate();
    return m;
}

SCM sample_scm(const SCMSpec& spec) {
    return mechanize(sample_structure(spec), spec.mechanism, spec.levels, spec.seed);
}

namespace {

long cpt_row_of(const SCM& m, int node, const std::vector<double>& values) {
    long row = 0;
    for (int p : m.graph.parents(node)) row = row * m.cards[p] + static_cast<int>(values[p]);
    return row;
}

std::vector<double> draw_row(const SCM& m, const std::vector<int>& order, Rng& rng) {
    std::vector<double> values(m.graph.node_count(), 0.0);
    for (int v : order) {
        if (m.kind == MechanismKind::Discrete) {
            const auto& row = m.mechanisms[v].cpt[cpt_row_of(m, v, values)];
            double u = rng.next_double(), acc = 0.0;
            int lv = static_cast<int>(row.size()) - 1;
            for (size_t i = 0; i < row.size(); ++i) {
                acc += row[i];
                if (u < acc) {
                    lv = static_cast<int>(i);
                    break;
                }
            }
            values[v] = lv;
        } else {
            double x = m.mechanisms[v].intercept;
            auto parents = m.graph.parents(v);
            for (size_t i = 0; i < parents.size(); ++i)
                x += m.mechanisms[v].weights[i] * values[parents[i]];
            values[v] = x + m.mechanisms[v].noise_scale * rng.next_gaussian();
        }
    }
    return values;
}

double inclusion_prob(const SCM& m, const SelectionMechanism& sel,
                      const std::vector<double>& values) {
    long idx = 0;
    for (const auto& input : sel.inputs) {
        int v = m.graph.index_of(input);
        idx = idx * m.cards[v] + static_cast<int>(values[v]);
    }
    return sel.inclusion.at(idx);
}

}  // namespace

Dataset simulate(const SCM& m, long n, const std::optional<SelectionMechanism>& sel,
                 uint64_t seed) {
    if (n < 1) throw InputError("simulate: need n >= 1");
    m.validate();

    Dataset d;
    auto observed = m.observed_nodes();
    for (int v : observed) {
        VariableMeta meta;
        meta.name = m.graph.name_of(v);
        meta.role = m.graph.role(v);
        if (m.kind == MechanismKind::Discrete) {
            meta.dtype = VarType::Discrete;
            for (int l = 0; l < m.cards[v]; ++l) meta.levels.push_back(std::to_string(l));
        } else {
            meta.dtype = VarType::Continuous;
        }
        d.add_variable(meta);
    }

    auto order = m.topo_order();
    Rng rng(derive_stream(seed, 7));
    const long cap = 1000 * n;
    long draws = 0, kept = 0;
    while (kept < n) {
        if (draws >= cap)
            throw DegenerateError("selection rejection cap exceeded: inclusion probability "
                                  "too small");
        ++draws;
        auto values = draw_row(m, order, rng);
        if (sel) {
            double p = inclusion_prob(m, *sel, values);
            if (rng.next_double() >= p) continue;
        }
        std::vector<double> row;
        for (int v : observed) row.push_back(values[v]);
        d.add_row(row);
        ++kept;
    }
    return d;
}

namespace {

void check_capacity(const SCM& m) {
    if (m.kind != MechanismKind::Discrete)
        throw InputError("exact enumeration requires a discrete SCM");
    double states = 1;
    for (int c : m.cards) states *= c;
    if (states > static_cast<double>(1 << 20))
        throw DegenerateError("state space exceeds 2^20; exact enumeration refused");
}

// Walks every joint state; fn(values, prob).
template <typename Fn>
void enumerate_states(const SCM& m, const std::map<int, int>& forced, Fn&& fn) {
    auto order = m.topo_order();
    std::vector<double> values(m.graph.node_count(), 0.0);
    std::function<void(size_t, double)> rec = [&](size_t depth, double prob) {
        if (prob == 0.0) return;
        if (depth == order.size()) {
            fn(values, prob);
            return;
        }
        int v = order[depth];
        auto forced_it = forced.find(v);
        if (forced_it != forced.end()) {
            values[v] = forced_it->second;
            rec(depth + 1, prob);  // intervened: mechanism severed
            return;
        }
        const auto& row = m.mechanisms[v].cpt[cpt_row_of(m, v, values)];
        for (size_t lv = 0; lv < row.size(); ++lv) {
            values[v] = static_cast<double>(lv);
            rec(depth + 1, prob * row[lv]);
        }
    };
    rec(0, 1.0);
}

JointTable observed_table_skeleton(const SCM& m) {
    JointTable t;
    for (int v : m.observed_nodes()) {
        t.vars.push_back(m.graph.name_of(v));
        t.cards.push_back(m.cards[v]);
        std::vector<std::string> names;
        for (int l = 0; l < m.cards[v]; ++l) names.push_back(std::to_string(l));
        t.level_names.push_back(names);
    }
    long cells = 1;
    for (int c : t.cards) cells *= c;
    t.probs.assign(cells, 0.0);
    return t;
}

JointTable accumulate(const SCM& m, const std::map<int, int>& forced,
                      const SelectionMechanism* sel) {
    check_capacity(m);
    m.validate();
    JointTable t = observed_table_skeleton(m);
    auto observed = m.observed_nodes();
    enumerate_states(m, forced, [&](const std::vector<double>& values, double prob) {
        if (sel) prob *= inclusion_prob(m, *sel, values);
        std::vector<int> levels;
        for (int v : observed) levels.push_back(static_cast<int>(values[v]));
        t.probs[t.cell(levels)] += prob;
    });
    if (sel) t.normalize();
    return t;
}

}  // namespace

JointTable exact_joint(const SCM& m) { return accumulate(m, {}, nullptr); }

JointTable exact_joint_do(const SCM& m, const std::map<std::string, int>& assignment) {
    std::map<int, int> forced;
    for (const auto& [name, lv] : assignment) forced[m.graph.index_of(name)] = lv;
    return accumulate(m, forced, nullptr);
}

JointTable exact_joint_selected(const SCM& m, const SelectionMechanism& sel) {
    return accumulate(m, {}, &sel);
}

std::map<std::vector<int>, double> exact_query(const SCM& m, QueryKind kind,
                                               const std::vector<std::string>& outcome,
                                               const std::map<std::string, int>& given,
                                               const std::optional<SelectionMechanism>& sel) {
    JointTable t;
    std::map<std::string, int> condition = given;
    switch (kind) {
        case QueryKind::Observational:
            t = exact_joint(m);
            break;
        case QueryKind::Interventional:
            t = exact_joint_do(m, given);
            condition.clear();  // intervened values are baked into the table
            break;
        case QueryKind::SelectionConditioned:
            if (!sel) throw InputError("selection-conditioned query needs a mechanism");
            t = exact_joint_selected(m, *sel);
            break;
    }

    std::vector<int> cards;
    for (const auto& v : outcome) cards.push_back(t.cards[t.index_of(v)]);
    long combos = 1;
    for (int c : cards) combos *= c;
    std::map<std::vector<int>, double> out;
    for (long c = 0; c < combos; ++c) {
        std::vector<int> levels(outcome.size());
        long rem = c;
        for (int i = static_cast<int>(outcome.size()) - 1; i >= 0; --i) {
            levels[i] = static_cast<int>(rem % cards[i]);
            rem /= cards[i];
        }
        std::map<std::string, int> targets;
        for (size_t i = 0; i < outcome.size(); ++i) targets[outcome[i]] = levels[i];
        out[levels] = t.conditional(targets, condition);
    }
    return out;
}

void exact_moments(const SCM& m, const std::map<std::string, double>& do_values,
                   std::vector<double>& mean_out, std::vector<std::vector<double>>& cov_out) {
    if (m.kind != MechanismKind::LinearGaussian)
        throw InputError("exact_moments requires a linear-Gaussian SCM");
    const int n = m.graph.node_count();
    Eigen::MatrixXd coef = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd intercept(n), noise_var(n);
    for (int v = 0; v < n; ++v) {
        intercept(v) = m.mechanisms[v].intercept;
        noise_var(v) = m.mechanisms[v].noise_scale * m.mechanisms[v].noise_scale;
        auto parents = m.graph.parents(v);
        for (size_t i = 0; i < parents.size(); ++i)
            coef(v, parents[i]) = m.mechanisms[v].weights[i];
    }
    for (const auto& [name, value] : do_values) {
        int v = m.graph.index_of(name);
        coef.row(v).setZero();
        intercept(v) = value;
        noise_var(v) = 0.0;
    }
    Eigen::MatrixXd inv = (Eigen::MatrixXd::Identity(n, n) - coef).inverse();
    Eigen::VectorXd mean = inv * intercept;
    Eigen::MatrixXd cov = inv * noise_var.asDiagonal() * inv.transpose();

    mean_out.assign(n, 0.0);
    cov_out.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        mean_out[i] = mean(i);
        for (int j = 0; j < n; ++j) cov_out[i][j] = cov(i, j);
    }
}

SCM shift_environment(const SCM& m, const std::set<std::string>& targets, uint64_t seed) {
    SCM out = m;
    for (const auto& name : targets) {
        int v = m.graph.index_of(name);
        out.mechanisms[v] =
            sample_mechanism(m.graph, m.cards, m.kind, v, derive_stream(seed, 9000));
    }
    out.validate();
    return out;
}

// ---- serialization ------------------------------------------------------

SCMSpec load_scm_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open spec file: " + path);
    SCMSpec spec;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = line;
        size_t b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        s = s.substr(b);
        if (s.empty() || s[0] == '#') continue;
        size_t colon = s.find(':');
        if (colon == std::string::npos)
            throw ParseError("spec line " + std::to_string(lineno) + ": expected 'key: value'");
        std::string key = s.substr(0, colon);
        std::istringstream val(s.substr(colon + 1));
        try {
            if (key == "n_options") val >> spec.n_options;
            else if (key == "n_perf") val >> spec.n_perf;
            else if (key == "n_latent") val >> spec.n_latent;
            else if (key == "edge_prob") val >> spec.edge_prob;
            else if (key == "levels") val >> spec.levels;
            else if (key == "seed") val >> spec.seed;
            else if (key == "mechanism") {
                std::string mk;
                val >> mk;
                if (mk == "discrete") spec.mechanism = MechanismKind::Discrete;
                else if (mk == "linear_gaussian") spec.mechanism = MechanismKind::LinearGaussian;
                else
                    throw ParseError("spec line " + std::to_string(lineno) +
                                     ": unknown mechanism '" + mk + "'");
            } else {
                throw ParseError("spec line " + std::to_string(lineno) + ": unknown key '" + key +
                                 "'");
            }
        } catch (const ParseError&) {
            throw;
        }
    }
    spec.validate();
    return spec;
}

void save_scm_spec(const SCMSpec& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write spec file: " + path);
    out << "n_options: " << spec.n_options << "\n";
    out << "n_perf: " << spec.n_perf << "\n";
    out << "n_latent: " << spec.n_latent << "\n";
    out << "edge_prob: " << spec.edge_prob << "\n";
    out << "mechanism: "
        << (spec.mechanism == MechanismKind::Discrete ? "discrete" : "linear_gaussian") << "\n";
    out << "levels: " << spec.levels << "\n";
    out << "seed: " << spec.seed << "\n";
}

void save_scm(const SCM& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write SCM file: " + path);
    out.precision(17);
    out << "mechanism: "
        << (m.kind == MechanismKind::Discrete ? "discrete" : "linear_gaussian") << "\n";
    out << "seed: " << m.seed << "\n";
    out << "begin_graph\n" << causalperf::to_text(m.graph) << "end_graph\n";
    for (int v = 0; v < m.graph.node_count(); ++v) {
        out << "node: " << m.graph.name_of(v);
        if (m.kind == MechanismKind::Discrete) {
            out << " cards=" << m.cards[v] << "\n";
            for (const auto& row : m.mechanisms[v].cpt) {
                out << "cpt:";
                for (double p : row) out << " " << p;
                out << "\n";
            }
        } else {
            out << " noise=" << m.mechanisms[v].noise_scale
                << " intercept=" << m.mechanisms[v].intercept << "\nweights:";
            for (double w : m.mechanisms[v].weights) out << " " << w;
            out << "\n";
        }
    }
}

SCM load_scm(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open SCM file: " + path);
    SCM m;
    std::string line;
    std::string graph_text;
    bool in_graph = false;
    int cur = -1;
    while (std::getline(in, line)) {
        if (line == "begin_graph") {
            in_graph = true;
            continue;
        }
        if (line == "end_graph") {
            in_graph = false;
            m.graph = from_text(graph_text);
            m.cards.assign(m.graph.node_count(), 2);
            m.mechanisms.assign(m.graph.node_count(), {});
            continue;
        }
        if (in_graph) {
            graph_text += line + "\n";
            continue;
        }
        if (line.rfind("mechanism:", 0) == 0) {
            std::string mk = line.substr(10);
            mk.erase(0, mk.find_first_not_of(' '));
            m.kind = mk == "discrete" ? MechanismKind::Discrete : MechanismKind::LinearGaussian;
        } else if (line.rfind("seed:", 0) == 0) {
            m.seed = std::stoull(line.substr(5));
        } else if (line.rfind("node:", 0) == 0) {
            std::istringstream ss(line.substr(5));
            std::string name, field;
            ss >> name;
            cur = m.graph.index_of(name);
            while (ss >> field) {
                size_t eq = field.find('=');
                if (eq == std::string::npos) throw ParseError("bad node field: " + field);
                std::string key = field.substr(0, eq), val = field.substr(eq + 1);
                if (key == "cards") m.cards[cur] = std::stoi(val);
                else if (key == "noise") m.mechanisms[cur].noise_scale = std::stod(val);
                else if (key == "intercept") m.mechanisms[cur].intercept = std::stod(val);
            }
        } else if (line.rfind("cpt:", 0) == 0) {
            if (cur < 0) throw ParseError("cpt line before node line");
            std::istringstream ss(line.substr(4));
            std::vector<double> row;
            double p;
            while (ss >> p) row.push_back(p);
            m.mechanisms[cur].cpt.push_back(row);
        } else if (line.rfind("weights:", 0) == 0) {
            if (cur < 0) throw ParseError("weights line before node line");
            std::istringstream ss(line.substr(8));
            double w;
            while (ss >> w) m.mechanisms[cur].weights.push_back(w);
        }
    }
    m.validate();
    return m;
}

}  // namespace causalperf
