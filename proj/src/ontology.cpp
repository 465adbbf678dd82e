#include "medgraph/ontology.hpp"

#include <algorithm>

namespace medgraph {

Vocabulary Vocabulary::builtin(const std::string& base) {
    if (base.empty() || !Iri::valid(base + "Patient")) {
        throw ValidationError("base", "vocabulary base must form valid IRIs: '" + base + "'");
    }
    Vocabulary v;
    v.base_ = base;

    for (const char* name : {"Patient", "Department", "Observation", "RiskFactor", "Alarm", "Doctor"}) {
        v.classes_.insert(v.term(name));
    }

    auto cls = [&](const char* name) { return v.term(name); };
    auto add_prop = [&](const char* name, Iri domain, Iri range, bool datatype) {
        v.properties_.emplace(v.term(name), PropertySpec{std::move(domain), std::move(range), datatype});
    };
    add_prop("hasObservation", cls("Patient"), cls("Observation"), false);
    add_prop("observedFactor", cls("Observation"), cls("RiskFactor"), false);
    add_prop("observedValue", cls("Observation"), xsd::string_type(), true);
    add_prop("treatedBy", cls("Patient"), cls("Doctor"), false);
    add_prop("belongsToDepartment", cls("Patient"), cls("Department"), false);
    add_prop("riskScore", cls("Patient"), xsd::decimal(), true);
    add_prop("alarmFor", cls("Alarm"), cls("Patient"), false);
    add_prop("alarmRisk", cls("Alarm"), xsd::decimal(), true);

    for (const char* name : {"Gender", "Age", "GeneticInheritance", "Ethnicity", "MenstrualHistory",
                             "PregnancyBreastfeeding", "Alcohol", "Smoking", "Overweight"}) {
        v.factors_.insert(v.term(name));
    }

    // self-check: domains and ranges must be declared, factors disjoint from classes
    for (const auto& [iri, spec] : v.properties_) {
        if (!v.classes_.count(spec.domain)) {
            throw ValidationError("domain", "undeclared domain class for " + iri.value());
        }
        if (spec.range_is_datatype ? !xsd::supported(spec.range) : !v.classes_.count(spec.range)) {
            throw ValidationError("range", "undeclared range for " + iri.value());
        }
    }
    for (const Iri& f : v.factors_) {
        if (v.classes_.count(f)) {
            throw ValidationError("factor", "factor individual collides with a class: " + f.value());
        }
    }
    return v;
}

Dataset Vocabulary::declarations() const {
    Dataset d;
    for (const Iri& c : classes_) {
        d.add(Quad(c, rdf_type(), Term(rdfs_class())));
    }
    for (const auto& [iri, spec] : properties_) {
        d.add(Quad(iri, rdf_type(), Term(rdf_property())));
        d.add(Quad(iri, rdfs_domain(), Term(spec.domain)));
        d.add(Quad(iri, rdfs_range(), Term(spec.range)));
    }
    for (const Iri& f : factors_) {
        d.add(Quad(f, rdf_type(), Term(risk_factor_class())));
    }
    return d;
}

std::string_view violation_kind_name(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::MissingType: return "missing-type";
        case ViolationKind::UnknownProperty: return "unknown-property";
        case ViolationKind::RangeMismatch: return "range-mismatch";
        case ViolationKind::MissingRequired: return "missing-required";
    }
    return "?";
}

bool Violation::operator<(const Violation& other) const {
    if (subject != other.subject) return subject < other.subject;
    if (kind != other.kind) return kind < other.kind;
    return detail < other.detail;
}

namespace {

// All triples with this subject, across every graph, deduplicated to
// (predicate, object) pairs.
std::vector<std::pair<Iri, Term>> statements_about(const Dataset& dataset, const Iri& subject) {
    std::vector<std::pair<Iri, Term>> out;
    for (const Quad& q : dataset.match(QuadPattern{subject, {}, {}, {}})) {
        out.emplace_back(q.predicate, q.object);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void check_known_property(const Vocabulary& vocab, const Iri& subject, const Iri& predicate,
                          const Term& object, std::set<Violation>& out) {
    const PropertySpec& spec = vocab.properties().at(predicate);
    if (spec.range_is_datatype) {
        if (!object.is_literal()) {
            out.insert({subject, ViolationKind::RangeMismatch,
                        predicate.value() + " expects a literal"});
        } else if (object.literal().datatype() != spec.range) {
            out.insert({subject, ViolationKind::RangeMismatch,
                        predicate.value() + " expects datatype " + spec.range.value()});
        }
        return;
    }
    if (!object.is_iri()) {
        out.insert({subject, ViolationKind::RangeMismatch,
                    predicate.value() + " expects an IRI, got a literal"});
        return;
    }
    // observedFactor must point at one of the declared factor individuals
    if (predicate == vocab.observed_factor() && !vocab.is_factor(object.iri())) {
        out.insert({subject, ViolationKind::RangeMismatch,
                    "observedFactor must name a declared risk factor, got " + object.iri().value()});
    }
}

}  // namespace

ValidationReport validate_record(const Dataset& dataset, const Iri& patient,
                                 const Vocabulary& vocab) {
    std::set<Violation> found;

    auto patient_statements = statements_about(dataset, patient);

    bool typed = false;
    std::vector<Iri> observations;
    for (const auto& [predicate, object] : patient_statements) {
        if (predicate == rdf_type()) {
            if (object.is_iri() && object.iri() == vocab.patient_class()) typed = true;
            continue;
        }
        if (!vocab.is_property(predicate)) {
            found.insert({patient, ViolationKind::UnknownProperty, predicate.value()});
            continue;
        }
        check_known_property(vocab, patient, predicate, object, found);
        if (predicate == vocab.has_observation() && object.is_iri()) {
            observations.push_back(object.iri());
        }
    }
    if (!typed) {
        found.insert({patient, ViolationKind::MissingType,
                      "no rdf:type " + vocab.patient_class().value()});
    }

    for (const Iri& obs : observations) {
        bool has_factor = false, has_value = false;
        for (const auto& [predicate, object] : statements_about(dataset, obs)) {
            if (predicate == rdf_type()) continue;
            if (!vocab.is_property(predicate)) {
                found.insert({obs, ViolationKind::UnknownProperty, predicate.value()});
                continue;
            }
            check_known_property(vocab, obs, predicate, object, found);
            if (predicate == vocab.observed_factor()) has_factor = true;
            if (predicate == vocab.observed_value()) has_value = true;
        }
        if (!has_factor) {
            found.insert({obs, ViolationKind::MissingRequired, "observation lacks observedFactor"});
        }
        if (!has_value) {
            found.insert({obs, ViolationKind::MissingRequired, "observation lacks observedValue"});
        }
    }

    ValidationReport report;
    report.violations.assign(found.begin(), found.end());
    return report;
}

}  // namespace medgraph
