#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "medgraph/dataset.hpp"

namespace medgraph {

inline constexpr const char* kDefaultVocabBase = "http://medgraph.example/vocab#";

// What a property may point at: a declared class or a literal datatype.
struct PropertySpec {
    Iri domain;
    Iri range;
    bool range_is_datatype = false;
};

// The shared vocabulary for patient records: classes, properties with
// domain/range, and the nine risk-factor individuals. Immutable after
// construction; build one per namespace base and share it freely.
class Vocabulary {
public:
    static Vocabulary builtin(const std::string& base = kDefaultVocabBase);

    const std::string& base() const { return base_; }
    Iri term(const std::string& local_name) const { return Iri(base_ + local_name); }

    const std::set<Iri>& classes() const { return classes_; }
    const std::map<Iri, PropertySpec>& properties() const { return properties_; }
    const std::set<Iri>& factor_individuals() const { return factors_; }

    bool is_class(const Iri& iri) const { return classes_.count(iri) > 0; }
    bool is_property(const Iri& iri) const { return properties_.count(iri) > 0; }
    bool is_factor(const Iri& iri) const { return factors_.count(iri) > 0; }

    // Classes
    Iri patient_class() const { return term("Patient"); }
    Iri department_class() const { return term("Department"); }
    Iri observation_class() const { return term("Observation"); }
    Iri risk_factor_class() const { return term("RiskFactor"); }
    Iri alarm_class() const { return term("Alarm"); }
    Iri doctor_class() const { return term("Doctor"); }

    // Properties
    Iri has_observation() const { return term("hasObservation"); }
    Iri observed_factor() const { return term("observedFactor"); }
    Iri observed_value() const { return term("observedValue"); }
    Iri treated_by() const { return term("treatedBy"); }
    Iri belongs_to_department() const { return term("belongsToDepartment"); }
    Iri risk_score() const { return term("riskScore"); }
    Iri alarm_for() const { return term("alarmFor"); }
    Iri alarm_risk() const { return term("alarmRisk"); }

    // Declaration triples (rdfs:Class / rdf:Property / domain / range /
    // factor typing) for loading the vocabulary into a graph store.
    Dataset declarations() const;

private:
    Vocabulary() = default;

    std::string base_;
    std::set<Iri> classes_;
    std::map<Iri, PropertySpec> properties_;
    std::set<Iri> factors_;
};

enum class ViolationKind { MissingType, UnknownProperty, RangeMismatch, MissingRequired };

std::string_view violation_kind_name(ViolationKind kind);

struct Violation {
    Iri subject;
    ViolationKind kind;
    std::string detail;

    bool operator==(const Violation&) const = default;
    bool operator<(const Violation& other) const;
};

struct ValidationReport {
    std::vector<Violation> violations;  // sorted, duplicate-free

    bool valid() const { return violations.empty(); }
};

// Closed-world validation of one patient's subgraph: the patient's own
// triples plus those of its observations, across all graphs. Triples about
// unrelated subjects are ignored. Problems are reported, never thrown.
ValidationReport validate_record(const Dataset& dataset, const Iri& patient,
                                 const Vocabulary& vocab);

}  // namespace medgraph
