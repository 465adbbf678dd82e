#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "medgraph/federation.hpp"
#include "medgraph/ontology.hpp"
#include "medgraph/risk.hpp"
#include "medgraph/rules.hpp"

namespace medgraph {

// Flat key-value configuration ('key = value', '#' comments). Repeatable
// keys build lists. Paths are resolved relative to the config file and must
// exist at load.
//
//   base_iri    = http://medgraph.example/vocab#
//   store       = <name> <file.nq>          (repeatable; first is the seed
//   seed_store  = <name>                     store unless overridden)
//   model       = <file.json>
//   rules       = <file.rules>
//   endpoint    = <iri-prefix> local:<store-name>
//   endpoint    = <iri-prefix> remote:<base-url>
//   department  = <name> <graph-iri>
//   max_documents / max_depth / timeout_ms / parallelism = <int>
//   threshold   = <decimal in (0,1)>        (optional model override)
struct Config {
    std::string base_iri = kDefaultVocabBase;
    std::vector<std::pair<std::string, std::filesystem::path>> stores;
    std::string seed_store;
    std::filesystem::path model_path;
    std::filesystem::path rules_path;
    std::vector<std::pair<std::string, std::string>> endpoints;  // prefix -> "local:..."/"remote:..."
    std::vector<Department> departments;
    FetchPolicy policy;
    std::optional<double> threshold_override;
};

Config load_config(const std::filesystem::path& path);

// Everything the config points at, loaded and cross-checked.
struct LoadedSystem {
    Vocabulary vocab;
    RiskModel model;
    std::vector<Rule> rules;
    std::map<std::string, std::shared_ptr<const Dataset>> stores;
    std::shared_ptr<const Dataset> seed_store;
    EndpointRegistry registry;
    std::vector<Department> departments;
    FetchPolicy policy;
    Probability threshold;  // override if configured, else the model's

    LoadedSystem() : vocab(Vocabulary::builtin()), model{Probability(0.5), Probability(0.5), {}},
                     threshold(Probability(0.5)) {}
};

LoadedSystem load_system(const Config& config);

struct PatientResult {
    Iri patient;
    RiskEstimate estimate;
    RiskLevel level;
};

struct MonitorReport {
    std::size_t patients_processed = 0;
    std::vector<PatientResult> estimates;
    std::vector<Alarm> alarms;
    std::vector<std::string> warnings;
    std::size_t inferred_quads = 0;
    double threshold = 0.5;

    // Stable plain-text rendering; two runs over identical inputs produce
    // byte-identical output.
    std::string render() const;
};

struct MonitorOutcome {
    MonitorReport report;
    Dataset dataset;  // post-run snapshot: seed store + enrichment +
                      // inferred quads + riskScore and alarm triples
};

// The batch pipeline: discover patients typed Patient in the seed store,
// enrich each record across departments, validate (warnings only), apply
// the inference rules to a fixpoint, read observations, estimate risk,
// write back riskScore, and finally sweep alarms. Per-patient failures
// become warnings and skip that patient; load failures throw.
MonitorOutcome run_monitor(const LoadedSystem& system);
MonitorOutcome run_monitor(const Config& config);

// Observation extraction used by the pipeline and the `estimate` CLI
// command: one Observation per hasObservation link carrying exactly one
// observedFactor IRI and one observedValue literal; malformed observations
// are reported in `warnings` and skipped.
struct ExtractedObservations {
    std::vector<Observation> observations;
    std::vector<std::string> warnings;
};
ExtractedObservations read_observations(const Dataset& dataset, const Iri& patient,
                                        const Vocabulary& vocab);

}  // namespace medgraph
