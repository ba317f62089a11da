#include <doctest.h>

#include <cmath>

#include "causalperf/estimation.hpp"
#include "causalperf/identify.hpp"
#include "causalperf/synthlab.hpp"

using namespace causalperf;

namespace {

Dataset two_by_two() {
    Dataset d;
    d.add_variable({"o", NodeRole::Option, VarType::Discrete, {"0", "1"}, ""});
    d.add_variable({"perf", NodeRole::Performance, VarType::Continuous, {}, "s"});
    d.add_row({1, 1.0});
    d.add_row({1, 3.0});
    d.add_row({0, 10.0});
    return d;
}

// Hand-built confounded fixture: Z -> X, Z -> Y, X -> Y, 8 rows.
// P(Z=1) = 1/2. Adjustment over Z for do(X=x) enumerates to:
//   E[Y|do(X=1)] = 0.5*E[Y|1,Z=0] + 0.5*E[Y|1,Z=1] = 0.5*2 + 0.5*6 = 4
//   E[Y|do(X=0)] = 0.5*1 + 0.5*5 = 3
Dataset confounded_eight() {
    Dataset d;
    d.add_variable({"X", NodeRole::Option, VarType::Discrete, {"0", "1"}, ""});
    d.add_variable({"Z", NodeRole::None, VarType::Discrete, {"0", "1"}, ""});
    d.add_variable({"Y", NodeRole::Performance, VarType::Continuous, {}, ""});
    d.add_row({0, 0, 1.0});
    d.add_row({0, 0, 1.0});
    d.add_row({1, 0, 2.0});
    d.add_row({1, 0, 2.0});
    d.add_row({0, 1, 5.0});
    d.add_row({1, 1, 6.0});
    d.add_row({1, 1, 6.0});
    d.add_row({1, 1, 6.0});
    return d;
}

}  // namespace

TEST_CASE("conditional summary by hand arithmetic") {
    Dataset d = two_by_two();
    ConditionalSummary s = cond_summary(d, "perf", {{"o", 1}});
    CHECK(s.mean == doctest::Approx(2.0));
    CHECK(s.variance == doctest::Approx(2.0));  // unbiased: ((1)^2+(1)^2)/(2-1)... = 2
    CHECK(s.count == 2);
    CHECK_FALSE(s.discrete);

    ConditionalSummary single = cond_summary(d, "perf", {{"o", 0}});
    CHECK(single.variance == 0.0);
    CHECK(single.count == 1);
}

TEST_CASE("discrete summaries are probability tables") {
    Dataset d;
    d.add_variable({"a", NodeRole::None, VarType::Discrete, {"0", "1"}, ""});
    d.add_variable({"b", NodeRole::None, VarType::Discrete, {"x", "y", "z"}, ""});
    d.add_row({0, 0});
    d.add_row({0, 0});
    d.add_row({0, 1});
    d.add_row({1, 2});
    ConditionalSummary s = cond_summary(d, "b", {{"a", 0}});
    REQUIRE(s.discrete);
    REQUIRE(s.probabilities.size() == 3);
    CHECK(s.probabilities[0] == doctest::Approx(2.0 / 3));
    CHECK(s.probabilities[1] == doctest::Approx(1.0 / 3));
    CHECK(s.probabilities[2] == 0.0);
    double total = s.probabilities[0] + s.probabilities[1] + s.probabilities[2];
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

    // Additive smoothing shifts mass toward uniform but keeps the sum at 1.
    ConditionalSummary sm = cond_summary(d, "b", {{"a", 0}}, 1.0);
    CHECK(sm.probabilities[2] > 0.0);
    CHECK(sm.probabilities[0] + sm.probabilities[1] + sm.probabilities[2] ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("empty strata raise undefined-conditional errors naming the assignment") {
    try {
        Dataset d2;
        d2.add_variable({"o", NodeRole::Option, VarType::Discrete, {"0", "1", "2"}, ""});
        d2.add_variable({"y", NodeRole::None, VarType::Continuous, {}, ""});
        d2.add_row({0, 1.0});
        d2.add_row({1, 2.0});
        cond_summary(d2, "y", {{"o", 2}});
        FAIL("expected DegenerateError");
    } catch (const DegenerateError& e) {
        CHECK(std::string(e.what()).find("o=2") != std::string::npos);
    }
}

TEST_CASE("adjustment matches manual enumeration on the 8-row fixture") {
    Dataset d = confounded_eight();
    auto table = adjustment_estimate(d, {"X"}, "Y", {"Z"});
    REQUIRE(table.size() == 2);
    CHECK(table.at({0}).mean == doctest::Approx(3.0));
    CHECK(table.at({1}).mean == doctest::Approx(4.0));
}

TEST_CASE("empty adjustment set reduces to the plain conditional") {
    Dataset d = confounded_eight();
    auto table = adjustment_estimate(d, {"X"}, "Y", {});
    ConditionalSummary direct = cond_summary(d, "Y", {{"X", 1}});
    CHECK(table.at({1}).mean == direct.mean);
    CHECK(table.at({1}).variance == direct.variance);
    CHECK(table.at({1}).count == direct.count);
}

TEST_CASE("estimate evaluates plug-in estimands deterministically") {
    Dataset d;
    d.add_variable({"X", NodeRole::Option, VarType::Discrete, {"0", "1"}, ""});
    d.add_variable({"Y", NodeRole::Performance, VarType::Discrete, {"0", "1"}, ""});
    Rng rng(7);
    for (int i = 0; i < 500; ++i) {
        int x = rng.next_int(2);
        int y = rng.next_double() < (x ? 0.7 : 0.2) ? 1 : 0;
        d.add_row({double(x), double(y)});
    }
    auto e = Estimand::term({"Y"}, {"X"});
    EstimationBindings b;
    b.source = &d;
    auto first = estimate(*e, b, {"Y"}, {{"X", 1}});
    auto second = estimate(*e, b, {"Y"}, {{"X", 1}});
    CHECK(first == second);  // bitwise determinism
    double total = 0;
    for (const auto& [lev, p] : first) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

    // Cross-check against the direct conditional summary.
    ConditionalSummary s = cond_summary(d, "Y", {{"X", 1}});
    CHECK(first.at({1}) == doctest::Approx(s.probabilities[1]));
}

TEST_CASE("estimates converge to the exact conditional") {
    SCMSpec spec;
    spec.n_options = 2;
    spec.n_perf = 1;
    spec.edge_prob = 0.9;
    spec.seed = 5;
    SCM m = sample_scm(spec);
    Dataset d = simulate(m, 100000, std::nullopt, 99);
    std::string perf = m.graph.name_of(m.observed_nodes().back());
    std::string opt = "O1";
    auto exact = exact_query(m, QueryKind::Observational, {perf}, {{opt, 1}});
    ConditionalSummary s = cond_summary(d, perf, {{opt, 1}});
    for (size_t lvl = 0; lvl < s.probabilities.size(); ++lvl) {
        CHECK(std::abs(s.probabilities[lvl] - exact.at({static_cast<int>(lvl)})) < 0.01);
    }
}

TEST_CASE("unbound worlds are rejected") {
    auto e = Estimand::term({"Y"}, {}, World::Target);
    EstimationBindings b;  // nothing bound
    CHECK_THROWS_AS(estimate(*e, b, {"Y"}, {}), InputError);
}
