// End-to-end acceptance checks. Each numbered criterion prints exactly one
// PASS/FAIL line; the process exits nonzero if any gating criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "causalperf/ci_tests.hpp"
#include "causalperf/discovery.hpp"
#include "causalperf/equivalence.hpp"
#include "causalperf/estimation.hpp"
#include "causalperf/graph_io.hpp"
#include "causalperf/identify.hpp"
#include "causalperf/synthlab.hpp"
#include "causalperf/transport.hpp"

using namespace causalperf;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion << ": " << detail
              << std::endl;
    if (!pass) ++failures;
}

double elapsed_s(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool same_marks(const MixedGraph& a, const MixedGraph& b) {
    if (a.node_count() != b.node_count() || a.edges().size() != b.edges().size())
        return false;
    for (const Edge& e : a.edges()) {
        auto bi = b.find(a.name_of(e.a)), bj = b.find(a.name_of(e.b));
        if (!bi || !bj) return false;
        const Edge* f = b.edge_between(*bi, *bj);
        if (!f || f->mark_at(*bi) != e.mark_at(e.a) || f->mark_at(*bj) != e.mark_at(e.b))
            return false;
    }
    return true;
}

// ---- criterion 1: oracle PC recovers the CPDAG ---------------------------

void criterion_1() {
    auto start = std::chrono::steady_clock::now();
    int ok = 0;
    const int total = 200;
    for (int i = 0; i < total; ++i) {
        SCMSpec spec;
        spec.n_options = 4 + (i % 3);  // 7-8 nodes total
        spec.n_perf = 3;
        spec.edge_prob = 0.3;
        spec.seed = 10000 + static_cast<uint64_t>(i);
        MixedGraph truth = sample_structure(spec);
        OracleTester tester(truth);
        BackgroundKnowledge bk;
        DiscoveryResult r = pc(tester, bk, {});
        if (same_marks(r.graph, cpdag_of(truth))) ++ok;
    }
    double secs = elapsed_s(start);
    std::ostringstream d;
    d << "oracle PC = CPDAG in " << ok << "/" << total << " cases, " << secs << " s";
    report(1, ok == total && secs < 30.0, d.str());
}

// ---- criterion 2: oracle FCI matches the enumeration PAG -----------------

// Candidate enumeration: assign every edge of the true MAG's skeleton each of
// the four tail/arrow mark pairs, keep the ancestral graphs whose separation
// relation matches the true MAG everywhere, and intersect marks (circle where
// the class disagrees).
bool is_ancestral(const MixedGraph& g) {
    if (!g.is_directed_acyclic()) return false;
    for (const Edge& e : g.edges()) {
        bool bidirected = e.mark_at_a == EdgeMark::Arrow && e.mark_at_b == EdgeMark::Arrow;
        bool undirected = e.mark_at_a == EdgeMark::Tail && e.mark_at_b == EdgeMark::Tail;
        if (undirected) {
            // Undirected endpoints may not have incoming arrowheads.
            for (int v : {e.a, e.b})
                for (const Edge& f : g.edges())
                    if ((f.a == v || f.b == v) && f.mark_at(v) == EdgeMark::Arrow)
                        return false;
        }
        if (bidirected) {
            NodeSet anc_a = ancestors_of(g, {e.a});
            NodeSet anc_b = ancestors_of(g, {e.b});
            if (anc_a.count(e.b) || anc_b.count(e.a)) return false;  // almost-directed cycle
        }
    }
    return true;
}

std::vector<bool> separation_signature(const MixedGraph& g) {
    const int n = g.node_count();
    std::vector<bool> sig;
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) {
            std::vector<int> rest;
            for (int v = 0; v < n; ++v)
                if (v != x && v != y) rest.push_back(v);
            for (int bits = 0; bits < (1 << rest.size()); ++bits) {
                NodeSet z;
                for (size_t i = 0; i < rest.size(); ++i)
                    if (bits & (1 << i)) z.insert(rest[i]);
                sig.push_back(separated(g, NodeSet{x}, NodeSet{y}, z));
            }
        }
    return sig;
}

MixedGraph enumeration_pag(const MixedGraph& true_mag) {
    auto truth_sig = separation_signature(true_mag);
    const auto& edges = true_mag.edges();
    const int m = static_cast<int>(edges.size());
    const EdgeMark marks[2] = {EdgeMark::Tail, EdgeMark::Arrow};

    MixedGraph pag(GraphKind::PAG, true_mag.node_names());
    std::vector<std::pair<bool, bool>> seen_tail_a(m, {false, false});  // (tail@a, arrow@a)
    std::vector<std::pair<bool, bool>> seen_tail_b(m, {false, false});
    long members = 0;
    for (long bits = 0; bits < (1L << (2 * m)); ++bits) {
        MixedGraph cand(GraphKind::MAG, true_mag.node_names());
        for (int i = 0; i < m; ++i) {
            EdgeMark ma = marks[(bits >> (2 * i)) & 1];
            EdgeMark mb = marks[(bits >> (2 * i + 1)) & 1];
            cand.set_edge(edges[i].a, edges[i].b, ma, mb);
        }
        if (!is_ancestral(cand)) continue;
        if (separation_signature(cand) != truth_sig) continue;
        ++members;
        for (int i = 0; i < m; ++i) {
            const Edge* e = cand.edge_between(edges[i].a, edges[i].b);
            (e->mark_at(edges[i].a) == EdgeMark::Tail ? seen_tail_a[i].first
                                                      : seen_tail_a[i].second) = true;
            (e->mark_at(edges[i].b) == EdgeMark::Tail ? seen_tail_b[i].first
                                                      : seen_tail_b[i].second) = true;
        }
    }
    if (members == 0) throw std::logic_error("enumeration found no equivalent MAG");
    auto combine = [](const std::pair<bool, bool>& seen) {
        if (seen.first && seen.second) return EdgeMark::Circle;
        return seen.first ? EdgeMark::Tail : EdgeMark::Arrow;
    };
    for (int i = 0; i < m; ++i)
        pag.set_edge(edges[i].a, edges[i].b, combine(seen_tail_a[i]), combine(seen_tail_b[i]));
    return pag;
}

void criterion_2() {
    auto start = std::chrono::steady_clock::now();
    int ok = 0;
    const int total = 100;
    for (int i = 0; i < total; ++i) {
        SCMSpec spec;
        spec.n_options = 2;
        spec.n_perf = 2 + (i % 2);  // 4-5 observed nodes
        spec.n_latent = 1 + (i % 2);
        spec.edge_prob = 0.4;
        spec.seed = 20000 + static_cast<uint64_t>(i);
        MixedGraph full = sample_structure(spec);
        NodeSet latents;
        for (int v = 0; v < full.node_count(); ++v)
            if (full.role(v) == NodeRole::Latent) latents.insert(v);
        MixedGraph mag = mag_of(full, latents, {});

        OracleTester tester(mag);
        BackgroundKnowledge bk;
        DiscoveryParams params;
        params.algorithm = Algorithm::FCI;
        DiscoveryResult r = fci(tester, bk, params);

        if (same_marks(r.graph, enumeration_pag(mag))) ++ok;
    }
    double secs = elapsed_s(start);
    std::ostringstream d;
    d << "oracle FCI = enumeration PAG in " << ok << "/" << total << " cases, " << secs
      << " s";
    report(2, ok == total && secs < 300.0, d.str());
}

// ---- criterion 3: finite-sample skeleton recovery ------------------------

void criterion_3() {
    int ok = 0;
    const int total = 50;
    for (int i = 0; i < total; ++i) {
        SCMSpec spec;
        spec.n_options = 6;
        spec.n_perf = 4;  // 10 nodes
        spec.edge_prob = 0.25;
        spec.mechanism = MechanismKind::LinearGaussian;
        spec.seed = 30000 + static_cast<uint64_t>(i);
        SCM m = sample_scm(spec);
        Dataset d = simulate(m, 50000, std::nullopt, derive_stream(spec.seed, 3));
        DataTester tester(d, 0.01);
        BackgroundKnowledge bk;
        DiscoveryParams params;
        params.alpha = 0.01;
        DiscoveryResult r = pc(tester, bk, params);

        // Skeleton structural Hamming distance against the truth.
        int shd = 0;
        const MixedGraph& truth = m.graph;
        for (int x = 0; x < truth.node_count(); ++x)
            for (int y = x + 1; y < truth.node_count(); ++y) {
                int rx = r.graph.index_of(truth.name_of(x));
                int ry = r.graph.index_of(truth.name_of(y));
                if (truth.adjacent(x, y) != r.graph.adjacent(rx, ry)) ++shd;
            }
        if (shd <= 2) ++ok;
    }
    std::ostringstream d;
    d << "skeleton SHD <= 2 in " << ok << "/" << total << " seeds (need >= 45)";
    report(3, ok >= 45, d.str());
}

// ---- criterion 4: option effects are trivially identifiable --------------

void criterion_4() {
    int graphs_ok = 0;
    const int total = 100;
    for (int i = 0; i < total; ++i) {
        SCMSpec spec;
        spec.n_options = 3 + (i % 3);
        spec.n_perf = 2 + (i % 2);
        spec.edge_prob = 0.4;
        spec.seed = 40000 + static_cast<uint64_t>(i);
        MixedGraph g = sample_structure(spec);
        bool all_ok = true;
        for (int o = 0; o < g.node_count(); ++o) {
            if (g.role(o) != NodeRole::Option) continue;
            for (int p = 0; p < g.node_count(); ++p) {
                if (g.role(p) != NodeRole::Performance) continue;
                CausalQuery q;
                q.treatment = {g.name_of(o)};
                q.outcome = {g.name_of(p)};
                if (!rule2_applies(g, q)) all_ok = false;
                IdentificationResult r = id_effect(g, q);
                std::string expect = "P(" + g.name_of(p) + "|" + g.name_of(o) + ")";
                if (!r.identified || to_text(*r.estimand) != expect) all_ok = false;
            }
        }
        if (all_ok) ++graphs_ok;
    }
    std::ostringstream d;
    d << "rule 2 + plain conditional on " << graphs_ok << "/" << total
      << " option-root graphs";
    report(4, graphs_ok == total, d.str());
}

// ---- criterion 5: identification soundness + bow witness -----------------

void criterion_5() {
    int ok = 0, identified_count = 0;
    const int total = 100;
    const double tol = 1e-9;
    for (int i = 0; i < total; ++i) {
        // Unconstrained latent DAGs: 4 observed in a random order plus 1-2
        // latent confounders over random observed pairs.
        uint64_t seed = 50000 + static_cast<uint64_t>(i);
        Rng rng(derive_stream(seed, 1));
        MixedGraph full(GraphKind::DAG, {"V0", "V1", "V2", "V3"});
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
                if (rng.next_double() < 0.5) full.add_directed(a, b);
        int n_latent = 1 + (i % 2);
        for (int l = 0; l < n_latent; ++l) {
            int u = full.add_node("U" + std::to_string(l), NodeRole::Latent);
            int a = rng.next_int(4), b = rng.next_int(4);
            while (b == a) b = rng.next_int(4);
            full.add_directed(u, a);
            full.add_directed(u, b);
        }

        SCM m = mechanize(full, MechanismKind::Discrete, 2, seed);
        std::string x_name = "V0", y_name = "V3";
        CausalQuery q;
        q.treatment = {x_name};
        q.outcome = {y_name};
        IdentificationResult r = id_effect(full, q);
        if (!r.identified) {
            ++ok;  // nothing to verify; soundness concerns identified cases
            continue;
        }
        ++identified_count;
        EvalContext ctx;
        ctx.source = exact_joint(m);
        bool match = true;
        for (int xv = 0; xv < 2; ++xv) {
            auto truth = exact_query(m, QueryKind::Interventional, {y_name}, {{x_name, xv}});
            for (int yv = 0; yv < 2; ++yv) {
                double got =
                    evaluate_estimand(*r.estimand, ctx, {{x_name, xv}, {y_name, yv}});
                if (std::abs(got - truth.at({yv})) > tol) match = false;
            }
        }
        if (match) ++ok;
    }

    // Bow fixture: hedge plus a two-SCM witness (equal observations, gap in
    // the interventional world).
    MixedGraph bow(GraphKind::DAG, {"U", "X", "Y"});
    bow.set_role(0, NodeRole::Latent);
    bow.add_directed("U", "X");
    bow.add_directed("U", "Y");
    bow.add_directed("X", "Y");
    CausalQuery q;
    q.treatment = {"X"};
    q.outcome = {"Y"};
    IdentificationResult rb = id_effect(bow, q);
    bool bow_ok = !rb.identified && rb.hedge_witness.find("hedge") != std::string::npos;

    // Witness world: U -> X, U -> Y, X -> Y with binary U ~ uniform.
    MixedGraph world(GraphKind::DAG, {"U", "X", "Y"});
    world.set_role(0, NodeRole::Latent);
    world.add_directed("U", "X");
    world.add_directed("U", "Y");
    world.add_directed("X", "Y");
    auto make_scm = [&](bool copy_u) {
        SCM s;
        s.graph = world;
        s.kind = MechanismKind::Discrete;
        s.cards = {2, 2, 2};
        s.seed = 0;
        Mechanism mu;  // U ~ Bernoulli(1/2)
        mu.cpt = {{0.5, 0.5}};
        Mechanism mx;  // X = U (copy world) or X ~ Bernoulli(1/2) ignoring U
        if (copy_u) mx.cpt = {{1.0, 0.0}, {0.0, 1.0}};
        else mx.cpt = {{0.5, 0.5}, {0.5, 0.5}};
        Mechanism my;  // rows indexed by (U, X): Y = X xor U, or Y = 0
        if (copy_u) my.cpt = {{1.0, 0.0}, {0.0, 1.0}, {0.0, 1.0}, {1.0, 0.0}};
        else my.cpt = {{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}};
        s.mechanisms = {mu, mx, my};
        return s;
    };
    SCM sa = make_scm(false), sb = make_scm(true);
    JointTable ja = exact_joint(sa), jb = exact_joint(sb);
    double obs_gap = 0.0;
    for (size_t c = 0; c < ja.probs.size(); ++c)
        obs_gap = std::max(obs_gap, std::abs(ja.probs[c] - jb.probs[c]));
    auto da = exact_query(sa, QueryKind::Interventional, {"Y"}, {{"X", 1}});
    auto db = exact_query(sb, QueryKind::Interventional, {"Y"}, {{"X", 1}});
    double int_gap = std::abs(da.at({0}) - db.at({0}));
    bool witness_ok = obs_gap < 1e-12 && int_gap >= 0.1;

    std::ostringstream d;
    d << "sound on " << ok << "/" << total << " ADMGs (" << identified_count
      << " identified), bow hedge " << (bow_ok ? "yes" : "no") << ", witness gap "
      << int_gap;
    report(5, ok == total && bow_ok && witness_ok, d.str());
}

// ---- criterion 6: transportability ---------------------------------------

void criterion_6() {
    // Trivial transport on O -> perf with the environments differing at perf.
    MixedGraph shared(GraphKind::DAG, {"O", "perf"});
    shared.set_role(0, NodeRole::Option);
    shared.set_role(1, NodeRole::Performance);
    shared.add_directed("O", "perf");

    TransportQuery tq;
    tq.source_graph = shared;
    tq.target_graph = shared;
    tq.s_nodes = {"perf"};
    tq.query.treatment = {"O"};
    tq.query.outcome = {"perf"};
    tq.source_experiments = true;
    auto trivial = trivially_transportable(tq);
    bool formula_ok = trivial.has_value() && to_text(**trivial) == "P*(perf|O)";

    int trivial_ok = 0;
    const int seeds = 40;
    const long n = 100000;
    for (int i = 0; i < seeds; ++i) {
        uint64_t seed = 60000 + static_cast<uint64_t>(i);
        SCM source = mechanize(shared, MechanismKind::Discrete, 2, seed);
        SCM target = shift_environment(source, {"perf"}, seed + 7);
        Dataset target_data = simulate(target, n, std::nullopt, derive_stream(seed, 11));

        EstimationBindings b;
        b.target = &target_data;
        bool within = true;
        for (int x = 0; x < 2; ++x) {
            auto truth = exact_query(target, QueryKind::Interventional, {"perf"}, {{"O", x}});
            auto est = estimate(**trivial, b, {"perf"}, {{"O", x}});
            long nx = 0;
            for (long r = 0; r < target_data.row_count(); ++r)
                if (target_data.level(r, target_data.index_of("O")) == x) ++nx;
            for (int y = 0; y < 2; ++y) {
                double p = est.at({y});
                double se = std::sqrt(std::max(p * (1 - p), 1e-8) /
                                      static_cast<double>(std::max(nx, 1L)));
                if (std::abs(p - truth.at({y})) > 3 * se) within = false;
            }
        }
        if (within) ++trivial_ok;
    }

    // S-admissible fixture: X -> Y <- Z with the mechanism shift at Z.
    MixedGraph xyz(GraphKind::DAG, {"X", "Y", "Z"});
    xyz.add_directed("X", "Y");
    xyz.add_directed("Z", "Y");
    TransportQuery tq2;
    tq2.source_graph = xyz;
    tq2.target_graph = xyz;
    tq2.s_nodes = {"Z"};
    tq2.query.treatment = {"X"};
    tq2.query.outcome = {"Y"};
    tq2.source_experiments = true;
    auto adj = s_admissible_adjustment(tq2);
    bool adj_formula_ok =
        adj.has_value() && adj->first == std::set<std::string>{"Z"} &&
        to_text(*adj->second) == "sum_Z [ P(Y|do(X),Z) P*(Z) ]";

    int adj_ok = 0;
    for (int i = 0; i < seeds && adj_formula_ok; ++i) {
        uint64_t seed = 61000 + static_cast<uint64_t>(i);
        SCM source = mechanize(xyz, MechanismKind::Discrete, 2, seed);
        SCM target = shift_environment(source, {"Z"}, seed + 3);
        Dataset target_data = simulate(target, n, std::nullopt, derive_stream(seed, 13));

        // Source experiments are exact; the target marginal is estimated.
        std::map<std::map<std::string, int>, JointTable> exp_tables;
        for (int x = 0; x < 2; ++x)
            exp_tables[{{"X", x}}] = exact_joint_do(source, {{"X", x}});
        EvalContext ctx;
        ctx.target = empirical_joint(target_data);
        ctx.experiment = [&](const std::map<std::string, int>& a) -> const JointTable& {
            return exp_tables.at(a);
        };

        bool within = true;
        for (int x = 0; x < 2; ++x) {
            auto truth = exact_query(target, QueryKind::Interventional, {"Y"}, {{"X", x}});
            auto est = evaluate_distribution(*adj->second, ctx, {"Y"}, {{"X", x}});
            for (int y = 0; y < 2; ++y) {
                double p = est.at({y});
                double se = std::sqrt(std::max(p * (1 - p), 1e-8) / static_cast<double>(n));
                if (std::abs(p - truth.at({y})) > 3 * se) within = false;
            }
        }
        if (within) ++adj_ok;
    }

    std::ostringstream d;
    d << "trivial formula " << (formula_ok ? "ok" : "wrong") << ", within 3 SE in "
      << trivial_ok << "/" << seeds << "; adjustment formula "
      << (adj_formula_ok ? "ok" : "wrong") << ", within 3 SE in " << adj_ok << "/" << seeds
      << " (need >= 38 each)";
    report(6, formula_ok && trivial_ok >= 38 && adj_formula_ok && adj_ok >= 38, d.str());
}

// ---- criterion 7: s-recoverability law -----------------------------------

void criterion_7() {
    int checked = 0, ok = 0;
    bool all_true_exact = true, all_false_witnessed = true;
    for (uint64_t seed = 1; seed <= 30; ++seed) {
        SCMSpec spec;
        spec.n_options = 2;
        spec.n_perf = 1;
        spec.edge_prob = 0.5;
        spec.seed = 70000 + seed;
        MixedGraph base = sample_structure(spec);
        SCM m = mechanize(base, MechanismKind::Discrete, 2, spec.seed);

        // Attach the selection indicator to every nonempty driver subset.
        const int nb = base.node_count();  // 3 base nodes -> <= 4-node graphs
        for (int drivers = 1; drivers < (1 << nb); ++drivers) {
            MixedGraph gs = base;
            int s = gs.add_node("S", NodeRole::SelectionVar);
            std::vector<std::string> driver_names;
            for (int v = 0; v < nb; ++v)
                if (drivers & (1 << v)) {
                    gs.add_directed(v, s);
                    driver_names.push_back(base.name_of(v));
                }

            std::set<std::string> x{"O1", "O2"};
            std::set<std::string> y{"P1"};
            bool rec = s_recoverable(gs, "S", x, y);
            ++checked;

            SelectionMechanism sel;
            sel.inputs = driver_names;
            long cells = 1;
            for (const auto& dn : driver_names) cells *= m.cards[m.graph.index_of(dn)];

            if (rec) {
                // Every parameterization must leave P(y|x) untouched.
                bool exact_ok = true;
                for (uint64_t ps = 0; ps < 3; ++ps) {
                    Rng rng(derive_stream(seed * 100 + ps, 55));
                    sel.inclusion.clear();
                    for (long c = 0; c < cells; ++c)
                        sel.inclusion.push_back(rng.next_uniform(0.15, 0.9));
                    for (int o1 = 0; o1 < 2 && exact_ok; ++o1)
                        for (int o2 = 0; o2 < 2 && exact_ok; ++o2) {
                            std::map<std::string, int> given{{"O1", o1}, {"O2", o2}};
                            auto plain =
                                exact_query(m, QueryKind::Observational, {"P1"}, given);
                            auto biased = exact_query(m, QueryKind::SelectionConditioned,
                                                      {"P1"}, given, sel);
                            for (int yv = 0; yv < 2; ++yv)
                                if (std::abs(plain.at({yv}) - biased.at({yv})) > 1e-12)
                                    exact_ok = false;
                        }
                }
                if (exact_ok) ++ok;
                else all_true_exact = false;
            } else {
                // Exhibit one parameterization with a visible gap.
                bool witnessed = false;
                for (uint64_t ps = 0; ps < 40 && !witnessed; ++ps) {
                    Rng rng(derive_stream(seed * 100 + ps, 56));
                    sel.inclusion.clear();
                    for (long c = 0; c < cells; ++c)
                        sel.inclusion.push_back(rng.next_double() < 0.5 ? 0.05 : 0.95);
                    for (int o1 = 0; o1 < 2 && !witnessed; ++o1)
                        for (int o2 = 0; o2 < 2 && !witnessed; ++o2) {
                            std::map<std::string, int> given{{"O1", o1}, {"O2", o2}};
                            auto plain =
                                exact_query(m, QueryKind::Observational, {"P1"}, given);
                            auto biased = exact_query(m, QueryKind::SelectionConditioned,
                                                      {"P1"}, given, sel);
                            for (int yv = 0; yv < 2; ++yv)
                                if (std::abs(plain.at({yv}) - biased.at({yv})) > 0.01)
                                    witnessed = true;
                        }
                }
                if (witnessed) ++ok;
                else all_false_witnessed = false;
            }
        }
    }
    std::ostringstream d;
    d << ok << "/" << checked << " selection graphs verified (true => exact to 1e-12, "
      << "false => gap > 0.01 exhibited)";
    report(7, ok == checked && all_true_exact && all_false_witnessed, d.str());
}

// ---- criterion 8: selection-bias detection -------------------------------

void criterion_8() {
    MixedGraph cyc(GraphKind::PAG, {"A", "B", "C", "D"});
    cyc.add_undirected("A", "B");
    cyc.add_undirected("B", "C");
    cyc.add_undirected("C", "D");
    cyc.add_undirected("D", "A");
    bool cycle_flagged = detect_selection_bias(cyc).size() == 1;

    MixedGraph tri(GraphKind::PAG, {"A", "B", "C"});
    tri.add_undirected("A", "B");
    tri.add_undirected("B", "C");
    tri.add_undirected("A", "C");
    bool triangle_clean = detect_selection_bias(tri).empty();

    int clean = 0;
    const int seeds = 40;
    for (int i = 0; i < seeds; ++i) {
        SCMSpec spec;
        spec.n_options = 3;
        spec.n_perf = 2;
        spec.edge_prob = 0.4;
        spec.seed = 80000 + static_cast<uint64_t>(i);
        SCM m = sample_scm(spec);
        Dataset d = simulate(m, 50000, std::nullopt, derive_stream(spec.seed, 17));
        DataTester tester(d, 0.01);
        BackgroundKnowledge bk;
        DiscoveryParams params;
        params.algorithm = Algorithm::FCI;
        params.alpha = 0.01;
        DiscoveryResult r = fci(tester, bk, params);
        if (detect_selection_bias(r.graph).empty()) ++clean;
    }
    std::ostringstream d;
    d << "4-cycle " << (cycle_flagged ? "flagged" : "missed") << ", triangle "
      << (triangle_clean ? "clean" : "flagged") << ", unbiased FCI clean in " << clean << "/"
      << seeds << " (need >= 38)";
    report(8, cycle_flagged && triangle_clean && clean >= 38, d.str());
}

// ---- criterion 9: CLI determinism ----------------------------------------

std::string file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_9(const std::string& cli) {
    const std::string dir = "/tmp/causalperf_accept";
    std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str());
    {
        std::ofstream spec(dir + "/scm.txt");
        spec << "n_options: 3\nn_perf: 2\nedge_prob: 0.5\nlevels: 2\n";
    }
    auto run_once = [&](const std::string& tag) {
        std::string csv = dir + "/d_" + tag + ".csv";
        std::string graph = dir + "/g_" + tag + ".txt";
        std::string cmd = cli + " simulate --spec " + dir + "/scm.txt --n 2000 --seed 42" +
                          " --out " + csv + " --truth " + dir + "/t_" + tag + ".txt" +
                          " > /dev/null 2>&1";
        if (std::system(cmd.c_str()) != 0) return false;
        cmd = cli + " discover --data " + csv + " --meta " + csv + ".meta" +
              " --algo pc --alpha 0.01 --out " + graph + " > " + dir + "/out_" + tag +
              ".txt 2>&1";
        return std::system(cmd.c_str()) == 0;
    };
    bool ran = run_once("a") && run_once("b");
    bool identical =
        ran && file_bytes(dir + "/d_a.csv") == file_bytes(dir + "/d_b.csv") &&
        file_bytes(dir + "/g_a.txt") == file_bytes(dir + "/g_b.txt") &&
        file_bytes(dir + "/t_a.txt") == file_bytes(dir + "/t_b.txt") &&
        file_bytes(dir + "/out_a.txt") == file_bytes(dir + "/out_b.txt");
    std::ostringstream d;
    d << "repeated simulate+discover runs " << (identical ? "byte-identical" : "diverged");
    report(9, identical, d.str());
}

}  // namespace

int main(int argc, char** argv) {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    if (argc > 1) {
        criterion_9(argv[1]);
    } else {
        report(9, false, "CLI path not supplied");
    }
    std::cout << "SKIP criterion 10: optional external replication-data checks need "
                 "network access (non-gating)"
              << std::endl;
    return failures == 0 ? 0 : 1;
}
