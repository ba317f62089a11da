#include <doctest.h>

#include <cmath>

#include "causalperf/estimand.hpp"

using namespace causalperf;

namespace {

// Joint over binary X, Y with P(X=1)=0.4, P(Y=1|X=0)=0.2, P(Y=1|X=1)=0.7.
JointTable xy_joint() {
    JointTable t;
    t.vars = {"X", "Y"};
    t.cards = {2, 2};
    t.probs = {0.6 * 0.8, 0.6 * 0.2, 0.4 * 0.3, 0.4 * 0.7};
    return t;
}

}  // namespace

TEST_CASE("joint table marginals and conditionals") {
    JointTable t = xy_joint();
    CHECK(t.marginal({{"X", 1}}) == doctest::Approx(0.4));
    CHECK(t.marginal({{"Y", 1}}) == doctest::Approx(0.6 * 0.2 + 0.4 * 0.7));
    CHECK(t.conditional({{"Y", 1}}, {{"X", 1}}) == doctest::Approx(0.7));
    CHECK(t.conditional({{"Y", 0}}, {{"X", 0}}) == doctest::Approx(0.8));

    JointTable m = t.marginal_table({"Y"});
    CHECK(m.vars == std::vector<std::string>{"Y"});
    CHECK(m.probs[1] == doctest::Approx(0.4));

    JointTable zero = xy_joint();
    zero.probs = {1.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(zero.conditional({{"Y", 0}}, {{"X", 1}}), DegenerateError);
}

TEST_CASE("term evaluation matches direct conditional computation") {
    EvalContext ctx;
    ctx.source = xy_joint();
    auto term = Estimand::term({"Y"}, {"X"});
    CHECK(evaluate_estimand(*term, ctx, {{"Y", 1}, {"X", 1}}) == doctest::Approx(0.7));
    auto marg = Estimand::term({"X"});
    CHECK(evaluate_estimand(*marg, ctx, {{"X", 0}}) == doctest::Approx(0.6));
}

TEST_CASE("sum, product and quotient compose") {
    EvalContext ctx;
    ctx.source = xy_joint();
    // sum_x P(y|x) P(x) = P(y), the law of total probability.
    auto adjusted = Estimand::sum(
        {"X"}, Estimand::product({Estimand::term({"Y"}, {"X"}), Estimand::term({"X"})}));
    CHECK(evaluate_estimand(*adjusted, ctx, {{"Y", 1}}) ==
          doctest::Approx(0.6 * 0.2 + 0.4 * 0.7));

    // P(x,y)/P(x) = P(y|x).
    auto ratio = Estimand::quotient(Estimand::term({"X", "Y"}), Estimand::term({"X"}));
    CHECK(evaluate_estimand(*ratio, ctx, {{"X", 1}, {"Y", 1}}) == doctest::Approx(0.7));
}

TEST_CASE("worlds are kept apart") {
    EvalContext ctx;
    ctx.source = xy_joint();
    JointTable shifted = xy_joint();
    shifted.probs = {0.2 * 0.8, 0.2 * 0.2, 0.8 * 0.3, 0.8 * 0.7};  // P*(X=1)=0.8
    ctx.target = shifted;
    auto src = Estimand::term({"X"});
    auto tgt = Estimand::term({"X"}, {}, World::Target);
    CHECK(evaluate_estimand(*src, ctx, {{"X", 1}}) == doctest::Approx(0.4));
    CHECK(evaluate_estimand(*tgt, ctx, {{"X", 1}}) == doctest::Approx(0.8));
    CHECK(tgt->references_world(World::Target));
    CHECK_FALSE(tgt->references_world(World::Source));
}

TEST_CASE("interventional terms resolve through the experiment callback") {
    EvalContext ctx;
    JointTable exp;
    exp.vars = {"Y"};
    exp.cards = {2};
    exp.probs = {0.35, 0.65};
    std::map<std::string, int> seen;
    ctx.experiment = [&](const std::map<std::string, int>& assign) -> const JointTable& {
        seen = assign;
        return exp;
    };
    auto term = Estimand::term({"Y"}, {}, World::SourceExperiment, {"X"});
    CHECK(evaluate_estimand(*term, ctx, {{"Y", 1}, {"X", 1}}) == doctest::Approx(0.65));
    CHECK(seen == std::map<std::string, int>{{"X", 1}});
    CHECK(term->has_interventional_terms());
}

TEST_CASE("distributions over outcome levels sum to one") {
    EvalContext ctx;
    ctx.source = xy_joint();
    auto e = Estimand::term({"Y"}, {"X"});
    auto dist = evaluate_distribution(*e, ctx, {"Y"}, {{"X", 0}});
    REQUIRE(dist.size() == 2);
    double total = 0;
    for (const auto& [lev, p] : dist) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("text rendering is stable and readable") {
    auto formula = Estimand::sum(
        {"z"},
        Estimand::product({Estimand::term({"y"}, {"z"}, World::SourceExperiment, {"x"}),
                           Estimand::term({"z"}, {}, World::Target)}));
    std::string text = to_text(*formula);
    CHECK(text.find("sum_z") != std::string::npos);
    CHECK(text.find("do(x)") != std::string::npos);
    CHECK(text.find("P*(z)") != std::string::npos);

    std::string js = to_json(*formula);
    CHECK(js.find("\"sum\"") != std::string::npos);
    CHECK(js.find("\"target\"") != std::string::npos);
}

TEST_CASE("missing worlds and unbound variables fail loudly") {
    EvalContext ctx;  // nothing bound
    auto term = Estimand::term({"Y"});
    CHECK_THROWS_AS(evaluate_estimand(*term, ctx, {{"Y", 0}}), InputError);
    EvalContext ctx2;
    ctx2.source = xy_joint();
    CHECK_THROWS_AS(evaluate_estimand(*term, ctx2, {}), InputError);  // Y unbound
}
