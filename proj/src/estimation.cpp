#include "causalperf/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace causalperf {

namespace {

std::string describe_assignment(const Dataset& d, const std::map<std::string, int>& given) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [var, lvl] : given) {
        if (!first) os << ", ";
        first = false;
        const VariableMeta& m = d.variable(d.index_of(var));
        os << var << "=";
        if (m.dtype == VarType::Discrete && lvl >= 0 &&
            lvl < static_cast<int>(m.levels.size()))
            os << m.levels[lvl];
        else
            os << lvl;
    }
    return os.str();
}

std::vector<long> matching_rows(const Dataset& d, const std::map<std::string, int>& given) {
    std::vector<std::pair<int, int>> cond;
    for (const auto& [var, lvl] : given) {
        int idx = d.index_of(var);
        if (d.variable(idx).dtype != VarType::Discrete)
            throw InputError("conditioning variable '" + var + "' is not discrete");
        if (lvl < 0 || lvl >= d.level_count(idx))
            throw InputError("level " + std::to_string(lvl) + " out of range for '" + var + "'");
        cond.emplace_back(idx, lvl);
    }
    std::vector<long> rows;
    for (long r = 0; r < d.row_count(); ++r) {
        bool ok = true;
        for (auto [idx, lvl] : cond)
            if (d.level(r, idx) != lvl) {
                ok = false;
                break;
            }
        if (ok) rows.push_back(r);
    }
    return rows;
}

}  // namespace

ConditionalSummary cond_summary(const Dataset& d, const std::string& outcome,
                                const std::map<std::string, int>& given, double smoothing) {
    if (smoothing < 0) throw InputError("smoothing must be nonnegative");
    int oidx = d.index_of(outcome);
    std::vector<long> rows = matching_rows(d, given);
    if (rows.empty())
        throw DegenerateError("no rows match the assignment {" +
                              describe_assignment(d, given) + "}");

    ConditionalSummary s;
    s.count = static_cast<long>(rows.size());
    const VariableMeta& meta = d.variable(oidx);
    if (meta.dtype == VarType::Discrete) {
        s.discrete = true;
        int k = d.level_count(oidx);
        std::vector<double> counts(k, smoothing);
        for (long r : rows) counts[d.level(r, oidx)] += 1.0;
        double total = static_cast<double>(rows.size()) + smoothing * k;
        s.probabilities.resize(k);
        for (int i = 0; i < k; ++i) s.probabilities[i] = counts[i] / total;
        double mean = 0.0;
        for (int i = 0; i < k; ++i) mean += i * s.probabilities[i];
        s.mean = mean;
    } else {
        double sum = 0.0;
        for (long r : rows) sum += d.value(r, oidx);
        s.mean = sum / static_cast<double>(rows.size());
        double ss = 0.0;
        for (long r : rows) {
            double dev = d.value(r, oidx) - s.mean;
            ss += dev * dev;
        }
        s.variance = rows.size() > 1 ? ss / static_cast<double>(rows.size() - 1) : 0.0;
    }
    return s;
}

std::map<std::vector<int>, ConditionalSummary> adjustment_estimate(
    const Dataset& d, const std::set<std::string>& treatment, const std::string& outcome,
    const std::set<std::string>& adjustment, double smoothing) {
    if (treatment.empty()) throw InputError("adjustment estimate needs a treatment");
    std::vector<std::string> xvars(treatment.begin(), treatment.end());
    std::vector<std::string> zvars(adjustment.begin(), adjustment.end());
    for (const auto& v : xvars)
        if (d.variable(d.index_of(v)).dtype != VarType::Discrete)
            throw InputError("treatment '" + v + "' must be discrete");
    for (const auto& v : zvars)
        if (d.variable(d.index_of(v)).dtype != VarType::Discrete)
            throw InputError("adjustment variable '" + v + "' must be discrete");

    auto enumerate = [&](const std::vector<std::string>& vars) {
        std::vector<std::map<std::string, int>> out{{}};
        for (const auto& v : vars) {
            int k = d.level_count(d.index_of(v));
            std::vector<std::map<std::string, int>> next;
            for (const auto& base : out)
                for (int lvl = 0; lvl < k; ++lvl) {
                    auto a = base;
                    a[v] = lvl;
                    next.push_back(std::move(a));
                }
            out = std::move(next);
        }
        return out;
    };

    const double n = static_cast<double>(d.row_count());
    std::map<std::vector<int>, ConditionalSummary> result;
    for (const auto& xa : enumerate(xvars)) {
        ConditionalSummary combined;
        double mean = 0.0, within_var = 0.0;
        std::vector<double> probs;
        long count = 0;
        std::vector<std::pair<double, double>> stratum_means;  // (weight, mean)
        for (const auto& za : enumerate(zvars)) {
            double weight =
                zvars.empty() ? 1.0
                              : static_cast<double>(matching_rows(d, za).size()) / n;
            if (weight == 0.0)
                throw DegenerateError("empty adjustment stratum {" +
                                      describe_assignment(d, za) + "}");
            auto given = xa;
            given.insert(za.begin(), za.end());
            ConditionalSummary s = cond_summary(d, outcome, given, smoothing);
            combined.discrete = s.discrete;
            mean += weight * s.mean;
            within_var += weight * s.variance;
            count += s.count;
            stratum_means.emplace_back(weight, s.mean);
            if (s.discrete) {
                if (probs.empty()) probs.assign(s.probabilities.size(), 0.0);
                for (size_t i = 0; i < probs.size(); ++i)
                    probs[i] += weight * s.probabilities[i];
            }
        }
        combined.mean = mean;
        combined.probabilities = std::move(probs);
        combined.count = count;
        if (!combined.discrete) {
            // Law of total variance: within-stratum plus between-stratum.
            double between = 0.0;
            for (auto [w, m] : stratum_means) between += w * (m - mean) * (m - mean);
            combined.variance = within_var + between;
        }
        std::vector<int> key;
        for (const auto& v : xvars) key.push_back(xa.at(v));
        result[key] = std::move(combined);
    }
    return result;
}

JointTable empirical_joint(const Dataset& d) {
    JointTable t;
    std::vector<int> cols;
    for (int i = 0; i < d.variable_count(); ++i) {
        if (d.variable(i).dtype != VarType::Discrete) continue;
        cols.push_back(i);
        t.vars.push_back(d.variable(i).name);
        t.cards.push_back(d.level_count(i));
        t.level_names.push_back(d.variable(i).levels);
    }
    long cells = 1;
    for (int c : t.cards) cells *= c;
    t.probs.assign(cells, 0.0);
    std::vector<int> levels(cols.size());
    for (long r = 0; r < d.row_count(); ++r) {
        for (size_t i = 0; i < cols.size(); ++i) levels[i] = d.level(r, cols[i]);
        t.probs[t.cell(levels)] += 1.0;
    }
    for (double& p : t.probs) p /= static_cast<double>(d.row_count());
    return t;
}

std::map<std::vector<int>, double> estimate(const Estimand& e, const EstimationBindings& b,
                                            const std::vector<std::string>& outcome,
                                            const std::map<std::string, int>& env) {
    EvalContext ctx;
    if (e.references_world(World::Source)) {
        if (!b.source) throw InputError("estimand references the source world but no "
                                        "source dataset is bound");
        ctx.source = empirical_joint(*b.source);
    }
    if (e.references_world(World::Target)) {
        if (!b.target) throw InputError("estimand references the target world but no "
                                        "target dataset is bound");
        ctx.target = empirical_joint(*b.target);
    }
    std::map<std::map<std::string, int>, JointTable> exp_tables;
    if (e.has_interventional_terms()) {
        if (b.experiments.empty())
            throw InputError("estimand has interventional terms but no experimental "
                             "datasets are bound");
        for (const auto& [assign, ds] : b.experiments)
            exp_tables.emplace(assign, empirical_joint(*ds));
        ctx.experiment = [&exp_tables](const std::map<std::string, int>& assign)
            -> const JointTable& {
            auto it = exp_tables.find(assign);
            if (it == exp_tables.end())
                throw InputError("no experimental dataset bound for the requested "
                                 "do-assignment");
            return it->second;
        };
    }
    return evaluate_distribution(e, ctx, outcome, env);
}

}  // namespace causalperf
