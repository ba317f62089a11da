#pragma once

#include <map>
#include <string>
#include <vector>

#include "causalperf/dataset.hpp"
#include "causalperf/estimand.hpp"

namespace causalperf {

/// Empirical summary of one outcome variable within a stratum.
struct ConditionalSummary {
    bool discrete = false;
    double mean = 0.0;
    double variance = 0.0;               // unbiased (n-1); 0 when count == 1
    std::vector<double> probabilities;   // discrete: one entry per level
    long count = 0;
};

/// Summary over the rows matching `given` exactly (discrete assignments by
/// level index). Zero matching rows raise DegenerateError naming the
/// assignment. `smoothing` is additive pseudo-count mass per level.
ConditionalSummary cond_summary(const Dataset& d, const std::string& outcome,
                                const std::map<std::string, int>& given,
                                double smoothing = 0.0);

/// Covariate-adjusted estimate per treatment level: sum_z P(z) * summary
/// (outcome | x, z), combined by the laws of total probability/expectation.
std::map<std::vector<int>, ConditionalSummary> adjustment_estimate(
    const Dataset& d, const std::set<std::string>& treatment, const std::string& outcome,
    const std::set<std::string>& adjustment, double smoothing = 0.0);

/// Datasets bound to the worlds an estimand references. Experimental data is
/// keyed by the do-assignment (variable -> level).
struct EstimationBindings {
    const Dataset* source = nullptr;
    const Dataset* target = nullptr;
    std::map<std::map<std::string, int>, const Dataset*> experiments;
};

/// Empirical plug-in evaluation of an estimand over the outcome's joint
/// levels, for fixed values of the remaining free variables. Deterministic
/// given the datasets.
std::map<std::vector<int>, double> estimate(const Estimand& e, const EstimationBindings& b,
                                            const std::vector<std::string>& outcome,
                                            const std::map<std::string, int>& env = {});

/// Empirical joint distribution of the discrete variables of a dataset.
JointTable empirical_joint(const Dataset& d);

}  // namespace causalperf
