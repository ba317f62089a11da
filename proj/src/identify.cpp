#include "causalperf/identify.hpp"

#include <algorithm>
#include <functional>

namespace causalperf {

void CausalQuery::validate() const {
    if (treatment.empty() || outcome.empty())
        throw InputError("query needs nonempty treatment and outcome");
    for (const auto& t : treatment)
        if (outcome.count(t))
            throw InputError("treatment and outcome overlap on '" + t + "'");
    for (const auto& c : conditioning)
        if (treatment.count(c) || outcome.count(c))
            throw InputError("conditioning overlaps treatment/outcome on '" + c + "'");
}

namespace {

void check_admg(const MixedGraph& g) {
    if (g.kind() != GraphKind::DAG && g.kind() != GraphKind::ADMG)
        throw InputError("identification requires a DAG or ADMG; commit to an "
                         "equivalence-class member first");
    for (const Edge& e : g.edges()) {
        bool directed = (e.mark_at_a == EdgeMark::Tail && e.mark_at_b == EdgeMark::Arrow) ||
                        (e.mark_at_a == EdgeMark::Arrow && e.mark_at_b == EdgeMark::Tail);
        bool bidirected = e.mark_at_a == EdgeMark::Arrow && e.mark_at_b == EdgeMark::Arrow;
        if (!directed && !bidirected)
            throw InputError("identification input has a non-directed, non-bidirected edge");
        if (bidirected &&
            (g.role(e.a) == NodeRole::Latent || g.role(e.b) == NodeRole::Latent))
            throw InputError("bidirected edge at a latent node");
    }
    if (!g.is_directed_acyclic())
        throw InputError("identification input has a directed cycle");
}

void check_observed(const MixedGraph& g, const CausalQuery& q) {
    for (const auto* set : {&q.treatment, &q.outcome, &q.conditioning})
        for (const auto& n : *set)
            if (g.role(g.index_of(n)) == NodeRole::Latent)
                throw InputError("query involves latent node '" + n + "'");
}

NodeSet resolve(const MixedGraph& g, const std::set<std::string>& names) {
    NodeSet out;
    for (const auto& n : names) out.insert(g.index_of(n));
    return out;
}

}  // namespace

bool rule2_applies(const MixedGraph& g, const CausalQuery& q) {
    q.validate();
    check_admg(g);
    check_observed(g, q);
    NodeSet x = resolve(g, q.treatment), y = resolve(g, q.outcome),
            c = resolve(g, q.conditioning);
    MixedGraph cut = mutilate(g, {}, x);
    return separated(cut, x, y, c);
}

std::optional<std::set<std::string>> backdoor_set(const MixedGraph& g, const CausalQuery& q) {
    q.validate();
    check_admg(g);
    check_observed(g, q);
    NodeSet x = resolve(g, q.treatment), y = resolve(g, q.outcome);

    NodeSet desc = descendants_of(g, x);
    std::vector<int> candidates;
    for (int v = 0; v < g.node_count(); ++v)
        if (!desc.count(v) && !x.count(v) && !y.count(v) && g.role(v) != NodeRole::Latent)
            candidates.push_back(v);
    // Lexicographic by name within each cardinality.
    std::sort(candidates.begin(), candidates.end(),
              [&](int a, int b) { return g.name_of(a) < g.name_of(b); });

    MixedGraph cut = mutilate(g, {}, x);  // only backdoor paths remain between X and Y
    const int m = static_cast<int>(candidates.size());
    for (int k = 0; k <= m; ++k) {
        std::vector<int> pick(k);
        std::function<std::optional<NodeSet>(int, int)> rec =
            [&](int start, int depth) -> std::optional<NodeSet> {
            if (depth == k) {
                NodeSet z;
                for (int i = 0; i < k; ++i) z.insert(candidates[pick[i]]);
                if (separated(cut, x, y, z)) return z;
                return std::nullopt;
            }
            for (int i = start; i <= m - (k - depth); ++i) {
                pick[depth] = i;
                if (auto r = rec(i + 1, depth + 1)) return r;
            }
            return std::nullopt;
        };
        if (auto z = rec(0, 0)) {
            std::set<std::string> names;
            for (int v : *z) names.insert(g.name_of(v));
            return names;
        }
    }
    return std::nullopt;
}

std::vector<std::set<int>> c_components(const MixedGraph& g, const std::set<int>& subset) {
    std::map<int, int> root;
    for (int v : subset) root[v] = v;
    std::function<int(int)> find = [&](int v) {
        while (root[v] != v) v = root[v] = root[root[v]];
        return v;
    };
    for (const Edge& e : g.edges()) {
        if (e.mark_at_a == EdgeMark::Arrow && e.mark_at_b == EdgeMark::Arrow &&
            subset.count(e.a) && subset.count(e.b))
            root[find(e.a)] = find(e.b);
    }
    std::map<int, std::set<int>> groups;
    for (int v : subset) groups[find(v)].insert(v);
    std::vector<std::set<int>> out;
    for (auto& [r, s] : groups) out.push_back(std::move(s));
    return out;
}

namespace {

struct HedgeFailure {
    std::string witness;
};

/// Latent projection over the observed nodes. A node pair may be both
/// directed-adjacent and confounded here (a bow), which the single-edge
/// MixedGraph cannot hold; bows are written as explicit latent nodes and
/// projected at this boundary.
struct Proj {
    std::vector<std::string> names;     // observed, original order
    std::vector<std::set<int>> pa;      // directed parents
    std::vector<std::set<int>> sib;     // bidirected siblings
};

Proj project(const MixedGraph& g) {
    const int n = g.node_count();
    std::vector<bool> latent(n, false);
    for (int v = 0; v < n; ++v) latent[v] = g.role(v) == NodeRole::Latent;

    // Children lists; bidirected observed pairs become synthetic latent roots.
    std::vector<std::set<int>> ch(n);
    std::vector<std::vector<int>> synthetic;  // each: the two confounded nodes
    for (const Edge& e : g.edges()) {
        if (e.mark_at_a == EdgeMark::Arrow && e.mark_at_b == EdgeMark::Arrow) {
            synthetic.push_back({e.a, e.b});
        } else if (e.mark_at_b == EdgeMark::Arrow) {
            ch[e.a].insert(e.b);
        } else {
            ch[e.b].insert(e.a);
        }
    }

    Proj p;
    std::vector<int> to_proj(n, -1);
    for (int v = 0; v < n; ++v)
        if (!latent[v]) {
            to_proj[v] = static_cast<int>(p.names.size());
            p.names.push_back(g.name_of(v));
        }
    if (p.names.empty()) throw InputError("no observed nodes after latent projection");
    p.pa.assign(p.names.size(), {});
    p.sib.assign(p.names.size(), {});

    // Observed nodes reachable from v along latent-only intermediates.
    std::vector<std::optional<std::set<int>>> memo(n);
    std::function<const std::set<int>&(int)> obs_reach = [&](int v) -> const std::set<int>& {
        if (memo[v]) return *memo[v];
        std::set<int> out;
        for (int c : ch[v]) {
            if (!latent[c]) out.insert(to_proj[c]);
            else {
                const auto& deeper = obs_reach(c);
                out.insert(deeper.begin(), deeper.end());
            }
        }
        memo[v] = std::move(out);
        return *memo[v];
    };

    for (int v = 0; v < n; ++v) {
        if (latent[v]) {
            const auto& reach = obs_reach(v);
            for (int a : reach)
                for (int b : reach)
                    if (a != b) p.sib[a].insert(b);
        } else {
            for (int c : obs_reach(v))
                if (c != to_proj[v]) p.pa[c].insert(to_proj[v]);
        }
    }
    for (const auto& pair : synthetic) {
        int a = to_proj[pair[0]], b = to_proj[pair[1]];
        p.sib[a].insert(b);
        p.sib[b].insert(a);
    }
    return p;
}

class IdSolver {
public:
    explicit IdSolver(Proj p) : p_(std::move(p)) {}

    EstimandPtr solve(const std::set<int>& y, const std::set<int>& x) {
        std::set<int> all;
        for (size_t v = 0; v < p_.names.size(); ++v) all.insert(static_cast<int>(v));
        Dist p{Estimand::term(names(all)), all, true};
        return run(y, x, p);
    }

private:
    /// Symbolic distribution over `domain`; `plain` marks a raw observational
    /// (marginal of the) source joint, which keeps conditionals as ProbTerms.
    struct Dist {
        EstimandPtr expr;
        std::set<int> domain;
        bool plain = false;
    };

    Proj p_;

    std::vector<std::string> names(const std::set<int>& vs) const {
        std::vector<std::string> out;
        for (int v : vs) out.push_back(p_.names[v]);
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Ancestors of `of` within `subset`, with incoming edges into `cut`
    /// removed first.
    std::set<int> ancestors_in(const std::set<int>& subset, const std::set<int>& of,
                               const std::set<int>& cut = {}) const {
        std::set<int> out;
        std::vector<int> stack;
        for (int v : of)
            if (subset.count(v)) stack.push_back(v);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (!out.insert(v).second) continue;
            if (cut.count(v)) continue;
            for (int u : p_.pa[v])
                if (subset.count(u)) stack.push_back(u);
        }
        return out;
    }

    std::vector<int> topo_order(const std::set<int>& subset) const {
        std::map<int, int> indeg;
        for (int v : subset) {
            indeg[v];
            for (int u : p_.pa[v])
                if (subset.count(u)) ++indeg[v];
        }
        std::set<int> ready;
        for (auto& [v, d] : indeg)
            if (d == 0) ready.insert(v);
        std::vector<int> order;
        while (!ready.empty()) {
            int v = *ready.begin();  // smallest index: deterministic
            ready.erase(ready.begin());
            order.push_back(v);
            for (int c : subset)
                if (p_.pa[c].count(v) && --indeg[c] == 0) ready.insert(c);
        }
        return order;
    }

    std::vector<std::set<int>> districts(const std::set<int>& subset) const {
        std::map<int, int> root;
        for (int v : subset) root[v] = v;
        std::function<int(int)> find = [&](int v) {
            while (root[v] != v) v = root[v] = root[root[v]];
            return v;
        };
        for (int v : subset)
            for (int u : p_.sib[v])
                if (subset.count(u)) root[find(v)] = find(u);
        std::map<int, std::set<int>> groups;
        for (int v : subset) groups[find(v)].insert(v);
        std::vector<std::set<int>> out;
        for (auto& [r, s] : groups) out.push_back(std::move(s));
        return out;
    }

    Dist marginalize(const Dist& p, const std::set<int>& keep) const {
        if (keep == p.domain) return p;
        if (p.plain) return {Estimand::term(names(keep)), keep, true};
        std::set<int> drop;
        for (int v : p.domain)
            if (!keep.count(v)) drop.insert(v);
        return {Estimand::sum(names(drop), p.expr), keep, false};
    }

    EstimandPtr conditional(const Dist& p, int target, const std::vector<int>& given) const {
        std::vector<std::string> given_names;
        for (int v : given) given_names.push_back(p_.names[v]);
        std::sort(given_names.begin(), given_names.end());
        if (p.plain) return Estimand::term({p_.names[target]}, given_names);
        std::set<int> num_keep(given.begin(), given.end());
        num_keep.insert(target);
        std::set<int> den_keep(given.begin(), given.end());
        Dist num = marginalize(p, num_keep);
        if (given.empty()) return num.expr;
        Dist den = marginalize(p, den_keep);
        return Estimand::quotient(num.expr, den.expr);
    }

    std::string brace_list(const std::set<int>& vs) const {
        std::string out = "{";
        bool first = true;
        for (const auto& n : names(vs)) {
            if (!first) out += ",";
            out += n;
            first = false;
        }
        return out + "}";
    }

    EstimandPtr run(std::set<int> y, std::set<int> x, Dist p) {
        const std::set<int>& active = p.domain;

        // 1: no intervention left.
        if (x.empty()) return marginalize(p, y).expr;

        // 2: restrict to ancestors of y.
        std::set<int> anc = ancestors_in(active, y);
        if (anc != active) {
            std::set<int> x_anc;
            for (int v : x)
                if (anc.count(v)) x_anc.insert(v);
            return run(y, x_anc, marginalize(p, anc));
        }

        // 3: absorb w-nodes into the intervention.
        std::set<int> anc_cut = ancestors_in(active, y, x);
        std::set<int> w;
        for (int v : active)
            if (!x.count(v) && !anc_cut.count(v)) w.insert(v);
        if (!w.empty()) {
            std::set<int> xw = x;
            xw.insert(w.begin(), w.end());
            return run(y, xw, p);
        }

        // 4: factorize over the c-components of G minus X.
        std::set<int> rest;
        for (int v : active)
            if (!x.count(v)) rest.insert(v);
        auto comps = districts(rest);
        if (comps.size() > 1) {
            std::vector<EstimandPtr> parts;
            for (const auto& s : comps) {
                std::set<int> xs;
                for (int v : active)
                    if (!s.count(v)) xs.insert(v);
                parts.push_back(run(s, xs, p));
            }
            std::set<int> bound;
            for (int v : rest)
                if (!y.count(v)) bound.insert(v);
            return Estimand::sum(names(bound), Estimand::product(std::move(parts)));
        }

        // 5-7: single component s against the c-components of G.
        std::set<int> s = comps[0];
        auto g_comps = districts(active);
        if (g_comps.size() == 1 && g_comps[0] == active) {
            throw HedgeFailure{"hedge: C-forests F=" + brace_list(active) + " and F'=" +
                               brace_list(s) + " for the effect of " + brace_list(x) +
                               " on " + brace_list(y)};
        }

        std::vector<int> order = topo_order(active);
        auto predecessors = [&](int v) {
            std::vector<int> out;
            for (int u : order) {
                if (u == v) break;
                out.push_back(u);
            }
            return out;
        };

        // 6: s is exactly one of G's c-components.
        for (const auto& c : g_comps) {
            if (c != s) continue;
            std::vector<EstimandPtr> terms;
            for (int v : order)
                if (s.count(v)) terms.push_back(conditional(p, v, predecessors(v)));
            std::set<int> bound;
            for (int v : s)
                if (!y.count(v)) bound.insert(v);
            return Estimand::sum(names(bound), Estimand::product(std::move(terms)));
        }

        // 7: s is strictly inside a c-component s'.
        for (const auto& c : g_comps) {
            bool contains = true;
            for (int v : s)
                if (!c.count(v)) contains = false;
            if (!contains) continue;
            std::vector<EstimandPtr> terms;
            for (int v : order)
                if (c.count(v)) terms.push_back(conditional(p, v, predecessors(v)));
            std::set<int> xs;
            for (int v : x)
                if (c.count(v)) xs.insert(v);
            Dist np{Estimand::product(std::move(terms)), c, false};
            return run(y, xs, np);
        }
        throw std::logic_error("id recursion: component containment violated");
    }
};

}  // namespace

IdentificationResult id_effect(const MixedGraph& g, const CausalQuery& q) {
    q.validate();
    check_admg(g);
    check_observed(g, q);

    // Rule-2 shortcut keeps the trivial case syntactically plain.
    if (rule2_applies(g, q)) {
        std::vector<std::string> given(q.treatment.begin(), q.treatment.end());
        given.insert(given.end(), q.conditioning.begin(), q.conditioning.end());
        std::sort(given.begin(), given.end());
        IdentificationResult r;
        r.identified = true;
        r.estimand = Estimand::term({q.outcome.begin(), q.outcome.end()}, given);
        return r;
    }

    Proj p = project(g);
    auto to_proj = [&](const std::set<std::string>& names) {
        std::set<int> out;
        for (const auto& n : names) {
            auto it = std::find(p.names.begin(), p.names.end(), n);
            out.insert(static_cast<int>(it - p.names.begin()));
        }
        return out;
    };
    std::set<int> ys = to_proj(q.outcome), xs = to_proj(q.treatment);
    std::set<int> yc = ys;
    for (int v : to_proj(q.conditioning)) yc.insert(v);

    IdentificationResult r;
    try {
        IdSolver solver(std::move(p));
        EstimandPtr joint = solver.solve(yc, xs);
        if (q.conditioning.empty()) {
            r.estimand = joint;
        } else {
            std::vector<std::string> ynames(q.outcome.begin(), q.outcome.end());
            r.estimand = Estimand::quotient(joint, Estimand::sum(ynames, joint));
        }
        r.identified = true;
    } catch (const HedgeFailure& h) {
        r.identified = false;
        r.hedge_witness = h.witness;
    }
    return r;
}

}  // namespace causalperf
