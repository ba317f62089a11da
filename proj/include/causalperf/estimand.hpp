#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "causalperf/graph.hpp"

namespace causalperf {

/// Which distribution a probability term refers to.
enum class World : uint8_t {
    Source,            // observational P
    Target,            // observational P*
    SourceExperiment,  // interventional P(.|do(...)) measured at the source
};

struct Estimand;
using EstimandPtr = std::shared_ptr<const Estimand>;

/// Expression tree over probability terms. Sum binds variables; ProbTerm
/// references variables symbolically (bound by an enclosing Sum or free).
struct Estimand {
    enum class Kind : uint8_t { Sum, Product, Quotient, Term };

    Kind kind = Kind::Term;
    std::vector<std::string> sum_vars;   // Sum
    std::vector<EstimandPtr> children;   // Sum: 1; Product: n; Quotient: {num, den}

    // Term
    std::vector<std::string> targets;
    std::vector<std::string> given;
    std::vector<std::string> do_vars;  // nonempty only for World::SourceExperiment
    World world = World::Source;

    static EstimandPtr term(std::vector<std::string> targets, std::vector<std::string> given = {},
                            World world = World::Source, std::vector<std::string> do_vars = {});
    static EstimandPtr sum(std::vector<std::string> vars, EstimandPtr child);
    static EstimandPtr product(std::vector<EstimandPtr> children);
    static EstimandPtr quotient(EstimandPtr num, EstimandPtr den);

    bool references_world(World w) const;
    bool has_interventional_terms() const { return references_world(World::SourceExperiment); }
    void collect_variables(std::set<std::string>& out) const;
};

/// Text rendering, e.g. `sum_z P*(z) P(y|do(x),z)`.
std::string to_text(const Estimand& e);
/// Machine-readable JSON expression tree.
std::string to_json(const Estimand& e);

/// Exact discrete joint distribution over named variables.
struct JointTable {
    std::vector<std::string> vars;
    std::vector<int> cards;
    std::vector<std::vector<std::string>> level_names;  // optional labels per variable
    std::vector<double> probs;  // row-major: last variable fastest

    int index_of(const std::string& var) const;
    long cell(const std::vector<int>& levels) const;
    double prob(const std::vector<int>& levels) const { return probs.at(cell(levels)); }

    /// Marginal probability of a partial assignment (variable -> level).
    double marginal(const std::map<std::string, int>& assignment) const;
    /// Conditional probability; throws DegenerateError on zero-mass condition.
    double conditional(const std::map<std::string, int>& targets,
                       const std::map<std::string, int>& given) const;

    JointTable marginal_table(const std::vector<std::string>& keep) const;
    void normalize();
};

/// Distributions supplied to evaluation, one slot per world. Interventional
/// terms are resolved through `experiment`, called with the do-assignment.
struct EvalContext {
    std::optional<JointTable> source;
    std::optional<JointTable> target;
    std::function<const JointTable&(const std::map<std::string, int>&)> experiment;

    /// Cardinality lookup for summation variables.
    int card_of(const std::string& var) const;
};

/// Evaluates the expression under a full assignment of its free variables.
double evaluate_estimand(const Estimand& e, const EvalContext& ctx,
                         const std::map<std::string, int>& env);

/// Distribution over the outcome variables' joint levels, for fixed values of
/// the remaining free variables.
std::map<std::vector<int>, double> evaluate_distribution(
    const Estimand& e, const EvalContext& ctx, const std::vector<std::string>& outcome,
    const std::map<std::string, int>& env);

}  // namespace causalperf
