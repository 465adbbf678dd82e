#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "medgraph/ontology.hpp"
#include "medgraph/query.hpp"
#include "medgraph/risk.hpp"

namespace medgraph {

// A consequent triple template. Subject and predicate must be IRIs or
// variables; instantiations whose subject or predicate resolves to a literal
// are dropped rather than asserted.
struct TripleTemplate {
    PatternTerm subject;
    PatternTerm predicate;
    PatternTerm object;
};

// A range-restricted forward-chaining rule: every variable used in a guard
// or consequent is bound by the antecedent, so rule application can never
// invent new terms and the fixpoint is finite.
struct Rule {
    std::string name;
    std::vector<TriplePattern> antecedent;  // wildcard-graph scope
    std::vector<Filter> guards;
    std::vector<TripleTemplate> consequent;
};

// Rule file syntax (one or more rules, '#' comments):
//
//   RULE <name>: (term term term) ("," (term term term))*
//        ("WHERE" ?var cmp constant ("," ?var cmp constant)*)?
//        "=>" (term term term) ("," (term term term))*
//
// Terms use the query term syntax. Throws RuleParseError with a 1-based line
// number, or SemanticError naming the variable that breaks range
// restriction.
std::vector<Rule> parse_rules(std::string_view text);
std::vector<Rule> load_rules_file(const std::filesystem::path& path);

struct ChainResult {
    Dataset dataset;
    std::size_t inferred = 0;
};

// Naive least-fixpoint computation: apply every rule against the current
// dataset, add new consequent quads to the default graph, repeat until
// nothing changes. Guards follow filter semantics; ordering a non-numeric
// binding throws TypeError. Department graphs stay untouched, inferred
// quads only ever land in the default graph.
ChainResult forward_chain(const std::vector<Rule>& rules, const Dataset& dataset);

// Alarm raised for a patient whose risk reached the threshold.
struct Alarm {
    Iri patient;
    Iri doctor;
    double risk;
    double threshold;
    std::uint64_t sequence;  // 1-based per-run counter

    bool operator==(const Alarm&) const = default;
};

struct AlarmSweep {
    std::vector<Alarm> alarms;        // sorted by patient IRI; sequence 1..n
    std::vector<Iri> missing_doctor;  // at/above threshold but no treatedBy link
};

// Scans riskScore triples across all graphs. A patient alarms iff some
// riskScore value reached the threshold (inclusive) and a treatedBy doctor
// exists; the alarm carries the patient's maximum score. Non-numeric
// riskScore objects throw TypeError naming the patient.
AlarmSweep collect_alarms(const Dataset& dataset, Probability threshold, const Vocabulary& vocab);

}  // namespace medgraph
