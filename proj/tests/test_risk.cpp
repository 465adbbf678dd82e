#include <doctest.h>

#include <cmath>

#include "medgraph/errors.hpp"
#include "medgraph/risk.hpp"
#include "generators.hpp"

using namespace medgraph;

namespace {

const Vocabulary& vocab() {
    static const Vocabulary v = Vocabulary::builtin();
    return v;
}

// prior 0.1, two independent factors with rows (0.8, 0.2): the fixture
// behind the 0.64 golden value.
RiskModel demo_model() {
    RiskModel model{Probability(0.1), Probability(0.5), {}};
    for (const char* name : {"Smoking", "Alcohol"}) {
        Iri factor = vocab().term(name);
        model.cpts.emplace(factor, make_factor_cpt(factor, {{"present", CptRow{0.8, 0.2}},
                                                            {"absent", CptRow{0.2, 0.8}}}));
    }
    return model;
}

}  // namespace

TEST_CASE("probability type rejects out-of-range values") {
    CHECK_THROWS_AS(Probability(-0.1), ValidationError);
    CHECK_THROWS_AS(Probability(1.1), ValidationError);
    CHECK_THROWS_AS(Probability(std::nan("")), ValidationError);
    CHECK(Probability(0.0).value() == 0.0);
    CHECK(Probability(1.0).value() == 1.0);
}

TEST_CASE("bayes_update: symmetric likelihoods leave the prior unchanged") {
    for (double x : {0.1, 0.5, 0.9, 1.0}) {
        CHECK(bayes_update(Probability(0.5), Probability(x), Probability(x)).value() ==
              doctest::Approx(0.5).epsilon(1e-15));
    }
}

TEST_CASE("bayes_update: zero prior absorbs") {
    CHECK(bayes_update(Probability(0.0), Probability(0.8), Probability(0.2)).value() == 0.0);
}

TEST_CASE("bayes_update: direct substitution 0.08 / (0.08 + 0.18)") {
    double expected = 0.08 / 0.26;  // 0.3076923...
    CHECK(std::abs(bayes_update(Probability(0.1), Probability(0.8), Probability(0.2)).value() -
                   expected) < 1e-15);
}

TEST_CASE("bayes_update: degenerate zero denominator is a domain error") {
    CHECK_THROWS_AS(bayes_update(Probability(0.0), Probability(0.8), Probability(0.0)), DomainError);
    CHECK_THROWS_AS(bayes_update(Probability(1.0), Probability(0.0), Probability(0.5)), DomainError);
}

TEST_CASE("estimate_risk: no observations returns the prior with an empty trace") {
    RiskEstimate e = estimate_risk(demo_model(), {});
    CHECK(e.posterior.value() == 0.1);
    CHECK(e.trace.empty());
    CHECK(e.skipped.empty());
}

TEST_CASE("estimate_risk: single observation equals one bayes_update") {
    RiskEstimate e = estimate_risk(demo_model(), {{vocab().term("Smoking"), "present"}});
    double expected = bayes_update(Probability(0.1), Probability(0.8), Probability(0.2)).value();
    CHECK(std::abs(e.posterior.value() - expected) < 1e-15);
    REQUIRE(e.trace.size() == 1);
    CHECK(e.trace[0].prior_before == 0.1);
}

TEST_CASE("estimate_risk: two (0.8,0.2) factors from prior 0.1 give 0.64") {
    RiskEstimate e = estimate_risk(demo_model(), {{vocab().term("Smoking"), "present"},
                                                  {vocab().term("Alcohol"), "present"}});
    CHECK(std::abs(e.posterior.value() - 0.64) < 1e-12);
    REQUIRE(e.trace.size() == 2);
    // canonical order sorts by factor IRI: Alcohol before Smoking
    CHECK(e.trace[0].factor == vocab().term("Alcohol"));
    CHECK(std::abs(e.trace[0].posterior_after - 0.08 / 0.26) < 1e-12);
}

TEST_CASE("estimate_risk: unknown factors and values are skipped, not fatal") {
    RiskModel model = demo_model();
    std::vector<Observation> obs = {{vocab().term("Smoking"), "present"},
                                    {vocab().term("Age"), "70+"},          // factor not in model
                                    {vocab().term("Alcohol"), "sometimes"}};  // unknown label
    RiskEstimate e = estimate_risk(model, obs);
    REQUIRE(e.skipped.size() == 2);
    REQUIRE(e.trace.size() == 1);
    double expected = bayes_update(Probability(0.1), Probability(0.8), Probability(0.2)).value();
    CHECK(std::abs(e.posterior.value() - expected) < 1e-15);
}

TEST_CASE("estimate_risk: duplicate factor observations are an error naming the factor") {
    std::vector<Observation> obs = {{vocab().term("Smoking"), "present"},
                                    {vocab().term("Smoking"), "absent"}};
    try {
        estimate_risk(demo_model(), obs);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("Smoking") != std::string::npos);
    }
}

TEST_CASE("closed form: empty product returns the prior, one factor matches bayes_update") {
    RiskModel model = demo_model();
    CHECK(closed_form_posterior(model, {}).value() == 0.1);
    double one = closed_form_posterior(model, {{vocab().term("Smoking"), "present"}}).value();
    CHECK(std::abs(one - bayes_update(Probability(0.1), Probability(0.8), Probability(0.2)).value()) <
          1e-15);
}

TEST_CASE("iterative and closed-form posteriors agree on random models") {
    medtest::Rng rng(53);
    for (int trial = 0; trial < 300; ++trial) {
        RiskModel model = medtest::random_model(rng, vocab());
        std::vector<Observation> obs = medtest::random_observations(rng, model);
        double iterative = estimate_risk(model, obs).posterior.value();
        double closed = closed_form_posterior(model, obs).value();
        REQUIRE(std::abs(iterative - closed) <= 1e-12);
    }
}

TEST_CASE("observation order changes the posterior by at most 1e-12") {
    medtest::Rng rng(59);
    for (int trial = 0; trial < 100; ++trial) {
        RiskModel model = medtest::random_model(rng, vocab());
        std::vector<Observation> obs = medtest::random_observations(rng, model);
        double base = estimate_risk(model, obs).posterior.value();
        std::shuffle(obs.begin(), obs.end(), rng.engine());
        double shuffled = estimate_risk(model, obs).posterior.value();
        REQUIRE(std::abs(base - shuffled) <= 1e-12);
        // canonical ordering makes the fold bit-identical
        REQUIRE(base == shuffled);
    }
}

TEST_CASE("risk factors raise the posterior, protective factors lower it") {
    medtest::Rng rng(61);
    for (int trial = 0; trial < 200; ++trial) {
        RiskModel model = medtest::random_model(rng, vocab(), 4);
        std::vector<Observation> obs = medtest::random_observations(rng, model);
        double base = estimate_risk(model, obs).posterior.value();

        // pick an unused factor for the extra observation
        Iri extra = vocab().term("Smoking");
        bool found = false;
        for (const Iri& candidate : vocab().factor_individuals()) {
            if (!model.cpts.count(candidate)) {
                extra = candidate;
                found = true;
                break;
            }
        }
        if (!found) continue;

        RiskModel risky = model;
        risky.cpts.emplace(extra, make_factor_cpt(extra, {{"yes", CptRow{0.7, 0.3}},
                                                          {"no", CptRow{0.3, 0.7}}}));
        std::vector<Observation> more = obs;
        more.push_back({extra, "yes"});
        REQUIRE(estimate_risk(risky, more).posterior.value() > base);

        RiskModel protective = model;
        protective.cpts.emplace(extra, make_factor_cpt(extra, {{"yes", CptRow{0.2, 0.6}},
                                                               {"no", CptRow{0.8, 0.4}}}));
        REQUIRE(estimate_risk(protective, more).posterior.value() < base);
    }
}

TEST_CASE("posteriors stay strictly inside (0,1) with smoothed tables") {
    medtest::Rng rng(67);
    for (int trial = 0; trial < 100; ++trial) {
        RiskModel model = medtest::random_model(rng, vocab());
        double p = estimate_risk(model, medtest::random_observations(rng, model)).posterior.value();
        REQUIRE(p > 0.0);
        REQUIRE(p < 1.0);
    }
}

TEST_CASE("trace steps chain and start at the model prior") {
    medtest::Rng rng(71);
    for (int trial = 0; trial < 50; ++trial) {
        RiskModel model = medtest::random_model(rng, vocab());
        RiskEstimate e = estimate_risk(model, medtest::random_observations(rng, model));
        double expected_prior = model.prior.value();
        for (const TraceStep& step : e.trace) {
            REQUIRE(step.prior_before == expected_prior);
            expected_prior = step.posterior_after;
        }
        if (!e.trace.empty()) REQUIRE(e.posterior.value() == e.trace.back().posterior_after);
    }
}

TEST_CASE("classification is inclusive at the threshold") {
    RiskEstimate e{Probability(0.5), {}, {}};
    CHECK(classify(e, Probability(0.5)) == RiskLevel::HighRisk);
    CHECK(classify(RiskEstimate{Probability(0.64), {}, {}}, Probability(0.5)) ==
          RiskLevel::HighRisk);
    CHECK(classify(RiskEstimate{Probability(0.0), {}, {}}, Probability(0.01)) == RiskLevel::Normal);
    CHECK(classify(RiskEstimate{Probability(0.49), {}, {}}, Probability(0.5)) == RiskLevel::Normal);
}

TEST_CASE("cpt construction enforces row invariants and clamps to epsilon") {
    Iri smoking = vocab().term("Smoking");
    CHECK_THROWS_AS(make_factor_cpt(smoking, {{"only", CptRow{1.0, 1.0}}}), ValidationError);
    CHECK_THROWS_AS(make_factor_cpt(smoking, {{"a", CptRow{0.7, 0.5}}, {"b", CptRow{0.2, 0.5}}}),
                    ValidationError);  // case column sums to 0.9
    CHECK_THROWS_AS(make_factor_cpt(smoking, {{"a", CptRow{0.5, 0.5}}, {"a", CptRow{0.5, 0.5}}}),
                    ValidationError);  // duplicate label

    FactorCpt clamped = make_factor_cpt(smoking, {{"a", CptRow{0.0, 1.0}}, {"b", CptRow{1.0, 0.0}}});
    CHECK(clamped.rows.at("a").p_case == kCptEpsilon);
    CHECK(clamped.rows.at("a").p_control == 1.0 - kCptEpsilon);
    // interior entries are untouched, keeping golden posteriors exact
    FactorCpt interior = make_factor_cpt(smoking, {{"a", CptRow{0.8, 0.2}}, {"b", CptRow{0.2, 0.8}}});
    CHECK(interior.rows.at("a").p_case == 0.8);
}

TEST_CASE("model loader validates structure, ranges and vocabulary membership") {
    const std::string good = R"({
        "prior": 0.1, "threshold": 0.5,
        "factors": [{"iri": "http://medgraph.example/vocab#Smoking",
                     "rows": [{"value": "yes", "p_case": 0.8, "p_control": 0.2},
                              {"value": "no", "p_case": 0.2, "p_control": 0.8}]}]})";
    RiskModel model = parse_risk_model(good, vocab());
    CHECK(model.prior.value() == 0.1);
    CHECK(model.cpts.size() == 1);

    CHECK_THROWS_AS(parse_risk_model("{not json", vocab()), ValidationError);
    CHECK_THROWS_AS(parse_risk_model(R"({"prior": 0.1, "factors": []})", vocab()), ValidationError);
    CHECK_THROWS_AS(parse_risk_model(R"({"prior": 1.0, "threshold": 0.5, "factors": []})", vocab()),
                    ValidationError);
    CHECK_THROWS_AS(parse_risk_model(R"({"prior": 0.1, "threshold": 0.0, "factors": []})", vocab()),
                    ValidationError);

    // factor IRI outside the vocabulary
    std::string unknown = good;
    unknown.replace(unknown.find("#Smoking"), 8, "#Vaping!");
    CHECK_THROWS(parse_risk_model(unknown, vocab()));
}
