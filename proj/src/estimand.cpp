#include "causalperf/estimand.hpp"

#include <nlohmann/json.hpp>
#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace causalperf {

EstimandPtr Estimand::term(std::vector<std::string> targets, std::vector<std::string> given,
                           World world, std::vector<std::string> do_vars) {
    auto e = std::make_shared<Estimand>();
    e->kind = Kind::Term;
    e->targets = std::move(targets);
    e->given = std::move(given);
    e->world = world;
    e->do_vars = std::move(do_vars);
    return e;
}

EstimandPtr Estimand::sum(std::vector<std::string> vars, EstimandPtr child) {
    if (vars.empty()) return child;
    auto e = std::make_shared<Estimand>();
    e->kind = Kind::Sum;
    e->sum_vars = std::move(vars);
    e->children = {std::move(child)};
    return e;
}

EstimandPtr Estimand::product(std::vector<EstimandPtr> children) {
    if (children.size() == 1) return children[0];
    auto e = std::make_shared<Estimand>();
    e->kind = Kind::Product;
    e->children = std::move(children);
    return e;
}

EstimandPtr Estimand::quotient(EstimandPtr num, EstimandPtr den) {
    auto e = std::make_shared<Estimand>();
    e->kind = Kind::Quotient;
    e->children = {std::move(num), std::move(den)};
    return e;
}

bool Estimand::references_world(World w) const {
    if (kind == Kind::Term) return world == w;
    for (const auto& c : children)
        if (c->references_world(w)) return true;
    return false;
}

void Estimand::collect_variables(std::set<std::string>& out) const {
    if (kind == Kind::Term) {
        out.insert(targets.begin(), targets.end());
        out.insert(given.begin(), given.end());
        out.insert(do_vars.begin(), do_vars.end());
        return;
    }
    for (const auto& c : children) c->collect_variables(out);
}

namespace {

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += xs[i];
    }
    return out;
}

void render(const Estimand& e, std::ostream& out) {
    switch (e.kind) {
        case Estimand::Kind::Sum:
            out << "sum_" << join(e.sum_vars, ",") << " [ ";
            render(*e.children[0], out);
            out << " ]";
            break;
        case Estimand::Kind::Product:
            for (size_t i = 0; i < e.children.size(); ++i) {
                if (i) out << " ";
                render(*e.children[i], out);
            }
            break;
        case Estimand::Kind::Quotient:
            out << "( ";
            render(*e.children[0], out);
            out << " ) / ( ";
            render(*e.children[1], out);
            out << " )";
            break;
        case Estimand::Kind::Term: {
            out << (e.world == World::Target ? "P*(" : "P(");
            out << join(e.targets, ",");
            std::vector<std::string> cond;
            if (!e.do_vars.empty()) cond.push_back("do(" + join(e.do_vars, ",") + ")");
            for (const auto& gname : e.given) cond.push_back(gname);
            if (!cond.empty()) out << "|" << join(cond, ",");
            out << ")";
            break;
        }
    }
}

nlohmann::json to_json_node(const Estimand& e) {
    nlohmann::json j;
    switch (e.kind) {
        case Estimand::Kind::Sum:
            j["op"] = "sum";
            j["vars"] = e.sum_vars;
            j["child"] = to_json_node(*e.children[0]);
            break;
        case Estimand::Kind::Product: {
            j["op"] = "product";
            auto arr = nlohmann::json::array();
            for (const auto& c : e.children) arr.push_back(to_json_node(*c));
            j["children"] = arr;
            break;
        }
        case Estimand::Kind::Quotient:
            j["op"] = "quotient";
            j["num"] = to_json_node(*e.children[0]);
            j["den"] = to_json_node(*e.children[1]);
            break;
        case Estimand::Kind::Term:
            j["op"] = "term";
            j["world"] = e.world == World::Source   ? "source"
                         : e.world == World::Target ? "target"
                                                    : "source_experiment";
            j["targets"] = e.targets;
            j["given"] = e.given;
            j["do"] = e.do_vars;
            break;
    }
    return j;
}

}  // namespace

std::string to_text(const Estimand& e) {
    std::ostringstream out;
    render(e, out);
    return out.str();
}

std::string to_json(const Estimand& e) { return to_json_node(e).dump(2); }

// ---- JointTable ---------------------------------------------------------

int JointTable::index_of(const std::string& var) const {
    for (size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == var) return static_cast<int>(i);
    throw InputError("joint table has no variable '" + var + "'");
}

long JointTable::cell(const std::vector<int>& levels) const {
    long idx = 0;
    for (size_t i = 0; i < vars.size(); ++i) idx = idx * cards[i] + levels[i];
    return idx;
}

double JointTable::marginal(const std::map<std::string, int>& assignment) const {
    std::vector<int> fixed(vars.size(), -1);
    for (const auto& [name, lv] : assignment) {
        int i = index_of(name);
        if (lv < 0 || lv >= cards[i])
            throw InputError("level out of range for '" + name + "'");
        fixed[i] = lv;
    }
    double total = 0.0;
    std::vector<int> levels(vars.size(), 0);
    long cells = static_cast<long>(probs.size());
    for (long c = 0; c < cells; ++c) {
        long rem = c;
        bool match = true;
        for (int i = static_cast<int>(vars.size()) - 1; i >= 0; --i) {
            levels[i] = static_cast<int>(rem % cards[i]);
            rem /= cards[i];
            if (fixed[i] >= 0 && levels[i] != fixed[i]) match = false;
        }
        if (match) total += probs[c];
    }
    return total;
}

double JointTable::conditional(const std::map<std::string, int>& targets,
                               const std::map<std::string, int>& given) const {
    double den = given.empty() ? 1.0 : marginal(given);
    if (den <= 0.0) {
        std::string assign;
        for (const auto& [k, v] : given) assign += (assign.empty() ? "" : ",") + k + "=" +
                                                   std::to_string(v);
        throw DegenerateError("undefined conditional: zero probability of {" + assign + "}");
    }
    std::map<std::string, int> both = given;
    for (const auto& [k, v] : targets) both[k] = v;
    return marginal(both) / den;
}

JointTable JointTable::marginal_table(const std::vector<std::string>& keep) const {
    JointTable out;
    std::vector<int> keep_idx;
    for (const auto& k : keep) {
        int i = index_of(k);
        keep_idx.push_back(i);
        out.vars.push_back(vars[i]);
        out.cards.push_back(cards[i]);
        if (!level_names.empty()) out.level_names.push_back(level_names[i]);
    }
    long out_cells = 1;
    for (int c : out.cards) out_cells *= c;
    out.probs.assign(out_cells, 0.0);

    std::vector<int> levels(vars.size(), 0);
    for (long c = 0; c < static_cast<long>(probs.size()); ++c) {
        long rem = c;
        for (int i = static_cast<int>(vars.size()) - 1; i >= 0; --i) {
            levels[i] = static_cast<int>(rem % cards[i]);
            rem /= cards[i];
        }
        long oc = 0;
        for (size_t i = 0; i < keep_idx.size(); ++i) oc = oc * out.cards[i] + levels[keep_idx[i]];
        out.probs[oc] += probs[c];
    }
    return out;
}

void JointTable::normalize() {
    double total = 0.0;
    for (double p : probs) total += p;
    if (total <= 0.0) throw DegenerateError("joint table has zero total mass");
    for (double& p : probs) p /= total;
}

// ---- evaluation ---------------------------------------------------------

int EvalContext::card_of(const std::string& var) const {
    for (const JointTable* t : {source ? &*source : nullptr, target ? &*target : nullptr}) {
        if (!t) continue;
        for (size_t i = 0; i < t->vars.size(); ++i)
            if (t->vars[i] == var) return t->cards[i];
    }
    throw InputError("no bound distribution declares variable '" + var + "'");
}

namespace {

double eval(const Estimand& e, const EvalContext& ctx, std::map<std::string, int>& env) {
    switch (e.kind) {
        case Estimand::Kind::Sum: {
            std::vector<int> cards;
            std::map<std::string, int> saved;  // inner binding wins, restored after
            for (const auto& v : e.sum_vars) {
                auto it = env.find(v);
                if (it != env.end()) saved[v] = it->second;
                cards.push_back(ctx.card_of(v));
            }
            long combos = 1;
            for (int c : cards) combos *= c;
            if (combos == 0) throw DegenerateError("empty summation domain");
            double total = 0.0;
            for (long c = 0; c < combos; ++c) {
                long rem = c;
                for (int i = static_cast<int>(cards.size()) - 1; i >= 0; --i) {
                    env[e.sum_vars[i]] = static_cast<int>(rem % cards[i]);
                    rem /= cards[i];
                }
                total += eval(*e.children[0], ctx, env);
            }
            for (const auto& v : e.sum_vars) env.erase(v);
            for (const auto& [k, val] : saved) env[k] = val;
            return total;
        }
        case Estimand::Kind::Product: {
            double total = 1.0;
            for (const auto& c : e.children) total *= eval(*c, ctx, env);
            return total;
        }
        case Estimand::Kind::Quotient: {
            double den = eval(*e.children[1], ctx, env);
            if (den <= 0.0) throw DegenerateError("undefined conditional: zero denominator");
            return eval(*e.children[0], ctx, env) / den;
        }
        case Estimand::Kind::Term: {
            auto bind = [&](const std::vector<std::string>& names) {
                std::map<std::string, int> out;
                for (const auto& n : names) {
                    auto it = env.find(n);
                    if (it == env.end())
                        throw InputError("unbound variable '" + n + "' in probability term");
                    out[n] = it->second;
                }
                return out;
            };
            const JointTable* table = nullptr;
            if (e.world == World::Source) {
                if (!ctx.source) throw InputError("estimand references source world P, not bound");
                table = &*ctx.source;
            } else if (e.world == World::Target) {
                if (!ctx.target) throw InputError("estimand references target world P*, not bound");
                table = &*ctx.target;
            } else {
                if (!ctx.experiment)
                    throw InputError("estimand references source experiments, not bound");
                table = &ctx.experiment(bind(e.do_vars));
            }
            return table->conditional(bind(e.targets), bind(e.given));
        }
    }
    throw std::logic_error("unreachable estimand kind");
}

}  // namespace

double evaluate_estimand(const Estimand& e, const EvalContext& ctx,
                         const std::map<std::string, int>& env) {
    std::map<std::string, int> scratch = env;
    return eval(e, ctx, scratch);
}

std::map<std::vector<int>, double> evaluate_distribution(
    const Estimand& e, const EvalContext& ctx, const std::vector<std::string>& outcome,
    const std::map<std::string, int>& env) {
    std::vector<int> cards;
    for (const auto& v : outcome) cards.push_back(ctx.card_of(v));
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
        std::map<std::string, int> full = env;
        for (size_t i = 0; i < outcome.size(); ++i) full[outcome[i]] = levels[i];
        out[levels] = evaluate_estimand(e, ctx, full);
    }
    return out;
}

}  // namespace causalperf
