#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "causalperf/dataset.hpp"
#include "causalperf/estimand.hpp"
#include "causalperf/graph.hpp"

namespace causalperf {

/// Deterministic stream derivation: splitmix64 over (seed, stream index), the
/// documented seed contract for reproducible fixtures.
uint64_t derive_stream(uint64_t seed, uint64_t stream);

/// 64-bit xorshift-multiply generator with uniform doubles in [0,1).
class Rng {
public:
    explicit Rng(uint64_t seed);
    uint64_t next_u64();
    double next_double();                       // [0, 1)
    double next_uniform(double lo, double hi);  // [lo, hi)
    double next_gaussian();                     // standard normal, Box-Muller
    int next_int(int n);                        // [0, n)

private:
    uint64_t state_;
    std::optional<double> spare_;
};

enum class MechanismKind : uint8_t { Discrete, LinearGaussian };

struct SCMSpec {
    int n_options = 2;
    int n_perf = 1;
    int n_latent = 0;
    double edge_prob = 0.3;
    MechanismKind mechanism = MechanismKind::Discrete;
    int levels = 2;  // per discrete variable
    uint64_t seed = 0;

    void validate() const;
};

SCMSpec load_scm_spec(const std::string& path);
void save_scm_spec(const SCMSpec& spec, const std::string& path);

/// Per-node mechanism: a CPT (rows indexed by the parent assignment, parents
/// in node-index order) or linear weights plus Gaussian noise.
struct Mechanism {
    std::vector<std::vector<double>> cpt;  // discrete: [parent assignment][level]
    std::vector<double> weights;           // linear-Gaussian, aligned with sorted parents
    double intercept = 0.0;
    double noise_scale = 1.0;
};

struct SCM {
    MixedGraph graph;  // DAG; latent nodes carry NodeRole::Latent
    MechanismKind kind = MechanismKind::Discrete;
    std::vector<int> cards;  // discrete only
    std::vector<Mechanism> mechanisms;
    uint64_t seed = 0;

    void validate() const;
    std::vector<int> topo_order() const;
    std::vector<int> observed_nodes() const;  // non-latent
};

/// Inclusion probability as a function of selected input columns.
struct SelectionMechanism {
    std::vector<std::string> inputs;
    /// inclusion[joint level of inputs] in [0,1]; inputs must be discrete.
    std::vector<double> inclusion;
};

/// Random option->performance DAG: options are roots, latents are roots
/// confounding the rest, performance nodes never point back at options.
MixedGraph sample_structure(const SCMSpec& spec);

/// Structure plus sampled mechanisms (Dirichlet CPTs with a 0.02 cell floor,
/// or uniform +-[0.4,1.2] weights with noise scale in [0.5,1.0]).
SCM sample_scm(const SCMSpec& spec);

/// Mechanisms for an externally supplied DAG (used by test fixtures).
SCM mechanize(const MixedGraph& dag, MechanismKind kind, int levels, uint64_t seed);

/// Ancestral sampling; with a selection mechanism, rejection sampling until n
/// rows (cap 1000*n draws). Latent columns are dropped.
Dataset simulate(const SCM& m, long n, const std::optional<SelectionMechanism>& sel,
                 uint64_t seed);

/// Exact observational joint over the observed (non-latent) nodes, by world
/// enumeration. Discrete SCMs only; throws on state spaces beyond 2^20.
JointTable exact_joint(const SCM& m);
/// Joint of the mutilated model with `assignment` nodes forced.
JointTable exact_joint_do(const SCM& m, const std::map<std::string, int>& assignment);
/// Joint conditioned on inclusion (S=1) under the selection mechanism.
JointTable exact_joint_selected(const SCM& m, const SelectionMechanism& sel);

enum class QueryKind : uint8_t { Observational, Interventional, SelectionConditioned };

/// Exact P(y|x), P(y|do(x)) or P(y|x,S=1) as a distribution over y's levels.
std::map<std::vector<int>, double> exact_query(
    const SCM& m, QueryKind kind, const std::vector<std::string>& outcome,
    const std::map<std::string, int>& given,
    const std::optional<SelectionMechanism>& sel = std::nullopt);

/// Exact mean vector and covariance of a linear-Gaussian SCM; intervened
/// nodes are pinned (zero noise) at the given values.
void exact_moments(const SCM& m, const std::map<std::string, double>& do_values,
                   std::vector<double>& mean_out, std::vector<std::vector<double>>& cov_out);

/// Resamples mechanism parameters of exactly the target nodes; everything
/// else stays bit-identical.
SCM shift_environment(const SCM& m, const std::set<std::string>& targets, uint64_t seed);

void save_scm(const SCM& m, const std::string& path);
SCM load_scm(const std::string& path);

}  // namespace causalperf
