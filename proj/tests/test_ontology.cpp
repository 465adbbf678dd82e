#include <doctest.h>

#include "medgraph/ntriples.hpp"
#include "medgraph/ontology.hpp"

using namespace medgraph;

namespace {

const Vocabulary& vocab() {
    static const Vocabulary v = Vocabulary::builtin();
    return v;
}

Dataset valid_patient() {
    Dataset d;
    Iri patient("http://ex/p1");
    Iri obs("http://ex/obs1");
    d.add(Quad(patient, rdf_type(), Term(vocab().patient_class())));
    d.add(Quad(patient, vocab().has_observation(), Term(obs)));
    d.add(Quad(obs, vocab().observed_factor(), Term(vocab().term("Smoking"))));
    d.add(Quad(obs, vocab().observed_value(), Term(Literal::str("current"))));
    return d;
}

}  // namespace

TEST_CASE("builtin vocabulary carries the nine risk factors") {
    const auto& factors = vocab().factor_individuals();
    CHECK(factors.size() == 9);
    CHECK(factors.count(vocab().term("Smoking")));
    CHECK(factors.count(vocab().term("Alcohol")));
    CHECK(factors.count(vocab().term("Gender")));
    CHECK(factors.count(vocab().term("Age")));
    CHECK(factors.count(vocab().term("GeneticInheritance")));
    CHECK(factors.count(vocab().term("Ethnicity")));
    CHECK(factors.count(vocab().term("MenstrualHistory")));
    CHECK(factors.count(vocab().term("PregnancyBreastfeeding")));
    CHECK(factors.count(vocab().term("Overweight")));
}

TEST_CASE("builtin vocabulary declares the expected classes and properties") {
    CHECK(vocab().classes().size() == 6);
    CHECK(vocab().is_class(vocab().patient_class()));
    CHECK(vocab().is_class(vocab().doctor_class()));
    CHECK(vocab().properties().size() == 8);
    CHECK(vocab().is_property(vocab().has_observation()));
    CHECK(vocab().is_property(vocab().risk_score()));

    // every domain/range points at a declared class or supported datatype
    for (const auto& [iri, spec] : vocab().properties()) {
        CHECK(vocab().is_class(spec.domain));
        if (spec.range_is_datatype) {
            CHECK(xsd::supported(spec.range));
        } else {
            CHECK(vocab().is_class(spec.range));
        }
    }
    for (const Iri& f : vocab().factor_individuals()) {
        CHECK_FALSE(vocab().is_class(f));
    }
}

TEST_CASE("vocabulary base is configurable") {
    Vocabulary v = Vocabulary::builtin("http://other.example/ns#");
    CHECK(v.patient_class().value() == "http://other.example/ns#Patient");
    CHECK_THROWS_AS(Vocabulary::builtin("not an iri base "), ValidationError);
}

TEST_CASE("vocabulary exports loadable declaration triples") {
    Dataset decls = vocab().declarations();
    CHECK(decls.size() == 6 + 3 * 8 + 9);
    Dataset reparsed = dataset_from_nquads(serialize_canonical(decls));
    CHECK(reparsed == decls);
    CHECK(decls.contains(Quad(vocab().term("Smoking"), rdf_type(),
                              Term(vocab().risk_factor_class()))));
}

TEST_CASE("well-formed patient validates cleanly") {
    ValidationReport report = validate_record(valid_patient(), Iri("http://ex/p1"), vocab());
    CHECK(report.valid());
}

TEST_CASE("patient without a type triple gets missing-type") {
    Dataset d = valid_patient();
    d.remove(Quad(Iri("http://ex/p1"), rdf_type(), Term(vocab().patient_class())));
    ValidationReport report = validate_record(d, Iri("http://ex/p1"), vocab());
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].kind == ViolationKind::MissingType);
}

TEST_CASE("literal observedFactor is a range mismatch") {
    Dataset d = valid_patient();
    Iri obs("http://ex/obs1");
    d.remove(Quad(obs, vocab().observed_factor(), Term(vocab().term("Smoking"))));
    d.add(Quad(obs, vocab().observed_factor(), Term(Literal::str("Smoking"))));
    ValidationReport report = validate_record(d, Iri("http://ex/p1"), vocab());
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].kind == ViolationKind::RangeMismatch);
    CHECK(report.violations[0].subject == obs);
}

TEST_CASE("observedFactor naming an undeclared factor is a range mismatch") {
    Dataset d = valid_patient();
    Iri obs("http://ex/obs1");
    d.add(Quad(Iri("http://ex/p1"), vocab().has_observation(), Term(Iri("http://ex/obs2"))));
    d.add(Quad(Iri("http://ex/obs2"), vocab().observed_factor(), Term(Iri("http://ex/NotAFactor"))));
    d.add(Quad(Iri("http://ex/obs2"), vocab().observed_value(), Term(Literal::str("x"))));
    ValidationReport report = validate_record(d, Iri("http://ex/p1"), vocab());
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].kind == ViolationKind::RangeMismatch);
}

TEST_CASE("unknown predicate on the patient or observation is reported") {
    Dataset d = valid_patient();
    d.add(Quad(Iri("http://ex/p1"), Iri("http://ex/shoeSize"), Term(Literal::decimal("42"))));
    ValidationReport report = validate_record(d, Iri("http://ex/p1"), vocab());
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].kind == ViolationKind::UnknownProperty);
    CHECK(report.violations[0].detail == "http://ex/shoeSize");
}

TEST_CASE("observation lacking factor or value is missing-required") {
    Dataset d = valid_patient();
    d.add(Quad(Iri("http://ex/p1"), vocab().has_observation(), Term(Iri("http://ex/obs3"))));
    ValidationReport report = validate_record(d, Iri("http://ex/p1"), vocab());
    REQUIRE(report.violations.size() == 2);
    CHECK(report.violations[0].kind == ViolationKind::MissingRequired);
    CHECK(report.violations[1].kind == ViolationKind::MissingRequired);
}

TEST_CASE("adding out-of-vocabulary triples never shrinks the violation list") {
    Dataset d = valid_patient();
    std::size_t previous = validate_record(d, Iri("http://ex/p1"), vocab()).violations.size();
    for (int i = 0; i < 5; ++i) {
        d.add(Quad(Iri("http://ex/p1"), Iri("http://ex/extra" + std::to_string(i)),
                   Term(Literal::str("v"))));
        std::size_t now = validate_record(d, Iri("http://ex/p1"), vocab()).violations.size();
        CHECK(now >= previous);
        previous = now;
    }
}

TEST_CASE("validity is stable under triples about unrelated subjects") {
    Dataset d = valid_patient();
    d.add(Quad(Iri("http://ex/somebody-else"), Iri("http://ex/anything"),
               Term(Literal::str("noise"))));
    d.add(Quad(Iri("http://ex/somebody-else"), vocab().observed_factor(),
               Term(Literal::str("bad"))));
    CHECK(validate_record(d, Iri("http://ex/p1"), vocab()).valid());
}
