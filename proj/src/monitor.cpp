#include "medgraph/monitor.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "medgraph/decimal.hpp"
#include "medgraph/errors.hpp"
#include "medgraph/ntriples.hpp"

namespace medgraph {

namespace {

std::vector<std::string> split_fields(const std::string& value) {
    std::vector<std::string> out;
    std::istringstream in(value);
    std::string field;
    while (in >> field) out.push_back(field);
    return out;
}

std::size_t parse_positive(const std::string& key, const std::string& value, bool allow_zero) {
    std::size_t pos = 0;
    unsigned long long parsed = 0;
    try {
        parsed = std::stoull(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key + ": not an integer: '" + value + "'");
    }
    if (pos != value.size()) throw ConfigError(key + ": not an integer: '" + value + "'");
    if (!allow_zero && parsed == 0) throw ConfigError(key + ": must be positive");
    return static_cast<std::size_t>(parsed);
}

}  // namespace

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::filesystem::path base_dir = path.has_parent_path() ? path.parent_path() : ".";

    Config config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        std::size_t eq = line.find('=', first);
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": expected 'key = value'");
        }
        auto trim = [](std::string s) {
            std::size_t b = s.find_first_not_of(" \t");
            std::size_t e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.empty()) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": empty value for " + key);
        }

        if (key == "base_iri") {
            config.base_iri = value;
        } else if (key == "store") {
            auto fields = split_fields(value);
            if (fields.size() != 2) throw ConfigError("store: expected '<name> <file>'");
            config.stores.emplace_back(fields[0], base_dir / fields[1]);
        } else if (key == "seed_store") {
            config.seed_store = value;
        } else if (key == "model") {
            config.model_path = base_dir / value;
        } else if (key == "rules") {
            config.rules_path = base_dir / value;
        } else if (key == "endpoint") {
            auto fields = split_fields(value);
            if (fields.size() != 2) {
                throw ConfigError("endpoint: expected '<prefix> local:<name>|remote:<url>'");
            }
            config.endpoints.emplace_back(fields[0], fields[1]);
        } else if (key == "department") {
            auto fields = split_fields(value);
            if (fields.size() != 2) throw ConfigError("department: expected '<name> <graph-iri>'");
            if (!Iri::valid(fields[1])) throw ConfigError("department: malformed graph IRI " + fields[1]);
            config.departments.push_back(Department{fields[0], Iri(fields[1])});
        } else if (key == "max_documents") {
            config.policy.max_documents = parse_positive(key, value, false);
        } else if (key == "max_depth") {
            config.policy.max_depth = parse_positive(key, value, true);
        } else if (key == "timeout_ms") {
            config.policy.timeout_ms = parse_positive(key, value, false);
        } else if (key == "parallelism") {
            config.policy.parallelism = parse_positive(key, value, false);
        } else if (key == "threshold") {
            try {
                config.threshold_override = std::stod(value);
            } catch (const std::exception&) {
                throw ConfigError("threshold: not a number: '" + value + "'");
            }
            if (!(*config.threshold_override > 0.0 && *config.threshold_override < 1.0)) {
                throw ConfigError("threshold: must lie strictly inside (0,1)");
            }
        } else {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": unknown key '" +
                              key + "'");
        }
    }

    if (config.stores.empty()) throw ConfigError("config needs at least one store");
    if (config.model_path.empty()) throw ConfigError("config needs a model path");
    if (config.rules_path.empty()) throw ConfigError("config needs a rules path");
    if (config.seed_store.empty()) config.seed_store = config.stores.front().first;

    for (const auto& [name, file] : config.stores) {
        if (!std::filesystem::exists(file)) {
            throw ConfigError("store " + name + ": file does not exist: " + file.string());
        }
    }
    for (const auto* file : {&config.model_path, &config.rules_path}) {
        if (!std::filesystem::exists(*file)) {
            throw ConfigError("file does not exist: " + file->string());
        }
    }
    return config;
}

LoadedSystem load_system(const Config& config) {
    LoadedSystem sys;
    sys.vocab = Vocabulary::builtin(config.base_iri);
    sys.model = load_risk_model(config.model_path, sys.vocab);
    sys.rules = load_rules_file(config.rules_path);
    sys.policy = config.policy;
    sys.departments = config.departments;
    sys.threshold = config.threshold_override ? Probability(*config.threshold_override)
                                              : sys.model.threshold;

    for (const auto& [name, file] : config.stores) {
        if (sys.stores.count(name)) throw ConfigError("duplicate store name: " + name);
        sys.stores.emplace(name, std::make_shared<const Dataset>(load_nquads_file(file)));
    }
    auto seed = sys.stores.find(config.seed_store);
    if (seed == sys.stores.end()) {
        throw ConfigError("seed_store names an unknown store: " + config.seed_store);
    }
    sys.seed_store = seed->second;

    for (const auto& [prefix, target] : config.endpoints) {
        if (target.rfind("local:", 0) == 0) {
            std::string name = target.substr(6);
            auto it = sys.stores.find(name);
            if (it == sys.stores.end()) {
                throw ConfigError("endpoint " + prefix + " references unknown store " + name);
            }
            sys.registry.add(prefix, LocalSource{name, it->second});
        } else if (target.rfind("remote:", 0) == 0) {
            sys.registry.add(prefix, RemoteSource{target.substr(7)});
        } else {
            throw ConfigError("endpoint " + prefix + ": target must be local:<name> or remote:<url>");
        }
    }
    return sys;
}

ExtractedObservations read_observations(const Dataset& dataset, const Iri& patient,
                                        const Vocabulary& vocab) {
    ExtractedObservations out;

    std::set<Iri> observation_iris;
    for (const Quad& q : dataset.match(QuadPattern{patient, vocab.has_observation(), {}, {}})) {
        if (q.object.is_iri()) observation_iris.insert(q.object.iri());
    }

    for (const Iri& obs : observation_iris) {
        std::set<Iri> factors;
        for (const Quad& q : dataset.match(QuadPattern{obs, vocab.observed_factor(), {}, {}})) {
            if (q.object.is_iri()) factors.insert(q.object.iri());
        }
        std::set<std::string> values;
        for (const Quad& q : dataset.match(QuadPattern{obs, vocab.observed_value(), {}, {}})) {
            if (q.object.is_literal()) values.insert(q.object.literal().lexical());
        }
        if (factors.size() != 1 || values.size() != 1) {
            out.warnings.push_back("observation " + obs.value() + " of " + patient.value() +
                                   " needs exactly one observedFactor and one observedValue");
            continue;
        }
        out.observations.push_back(Observation{*factors.begin(), *values.begin()});
    }
    return out;
}

namespace {

// riskScore triples are replaced, never accumulated, so re-running the
// monitor cannot compound estimates.
void write_risk_score(Dataset& dataset, const Iri& patient, double posterior,
                      const Vocabulary& vocab) {
    for (const Quad& q : dataset.match(QuadPattern{patient, vocab.risk_score(), {}, GraphName()})) {
        dataset.remove(q);
    }
    dataset.add(Quad(patient, vocab.risk_score(),
                     Term(Literal::decimal(format_probability(posterior))), GraphName()));
}

void persist_alarms(Dataset& dataset, const std::vector<Alarm>& alarms, const Vocabulary& vocab) {
    for (const Alarm& alarm : alarms) {
        Iri alarm_iri = vocab.term("alarm-" + std::to_string(alarm.sequence));
        dataset.add(Quad(alarm_iri, rdf_type(), Term(vocab.alarm_class()), GraphName()));
        dataset.add(Quad(alarm_iri, vocab.alarm_for(), Term(alarm.patient), GraphName()));
        dataset.add(Quad(alarm_iri, vocab.alarm_risk(),
                         Term(Literal::decimal(format_probability(alarm.risk))), GraphName()));
    }
}

}  // namespace

MonitorOutcome run_monitor(const LoadedSystem& system) {
    MonitorOutcome outcome;
    MonitorReport& report = outcome.report;
    report.threshold = system.threshold.value();

    Dataset& working = outcome.dataset;
    working = *system.seed_store;

    // patients are discovered by type, not enumerated in config
    std::set<Iri> patients;
    for (const Quad& q :
         system.seed_store->match(QuadPattern{{}, rdf_type(), Term(system.vocab.patient_class()), {}})) {
        patients.insert(q.subject);
    }

    for (const Iri& patient : patients) {
        try {
            EnrichResult enriched =
                enrich_record(patient, system.departments, system.registry, system.policy);
            for (std::string& w : enriched.warnings) {
                report.warnings.push_back(patient.value() + ": " + w);
            }
            working.merge(enriched.dataset);

            ValidationReport validation = validate_record(working, patient, system.vocab);
            for (const Violation& v : validation.violations) {
                report.warnings.push_back(patient.value() + ": validation " +
                                          std::string(violation_kind_name(v.kind)) + " on " +
                                          v.subject.value() + ": " + v.detail);
            }

            ChainResult chained = forward_chain(system.rules, working);
            report.inferred_quads += chained.inferred;
            working = std::move(chained.dataset);

            ExtractedObservations extracted = read_observations(working, patient, system.vocab);
            for (std::string& w : extracted.warnings) report.warnings.push_back(std::move(w));

            RiskEstimate estimate = estimate_risk(system.model, extracted.observations);
            RiskLevel level = classify(estimate, system.threshold);
            write_risk_score(working, patient, estimate.posterior.value(), system.vocab);
            report.estimates.push_back(PatientResult{patient, std::move(estimate), level});
        } catch (const Error& e) {
            report.warnings.push_back(patient.value() + ": skipped: " + e.what());
        }
    }
    report.patients_processed = report.estimates.size();

    AlarmSweep sweep = collect_alarms(working, system.threshold, system.vocab);
    report.alarms = sweep.alarms;
    for (const Iri& patient : sweep.missing_doctor) {
        report.warnings.push_back(patient.value() +
                                  ": risk reached the threshold but no treatedBy doctor is linked");
    }
    persist_alarms(working, report.alarms, system.vocab);
    return outcome;
}

MonitorOutcome run_monitor(const Config& config) {
    return run_monitor(load_system(config));
}

std::string MonitorReport::render() const {
    std::string out;
    out += "monitor report\n";
    out += "patients processed: " + std::to_string(patients_processed) + "\n";
    out += "inferred quads: " + std::to_string(inferred_quads) + "\n";
    out += "threshold: " + format_probability(threshold) + "\n";

    out += "estimates (" + std::to_string(estimates.size()) + ")\n";
    for (const PatientResult& r : estimates) {
        out += "  patient " + r.patient.value() + " posterior=" +
               format_probability(r.estimate.posterior.value()) + " level=" +
               std::string(risk_level_name(r.level)) + "\n";
        for (const TraceStep& step : r.estimate.trace) {
            out += "    step " + step.factor.value() + " value=" + step.value + " prior=" +
                   format_probability(step.prior_before) + " posterior=" +
                   format_probability(step.posterior_after) + "\n";
        }
        for (const Observation& skipped : r.estimate.skipped) {
            out += "    skipped " + skipped.factor.value() + " value=" + skipped.value + "\n";
        }
    }

    out += "alarms (" + std::to_string(alarms.size()) + ")\n";
    for (const Alarm& a : alarms) {
        out += "  " + std::to_string(a.sequence) + " patient=" + a.patient.value() + " doctor=" +
               a.doctor.value() + " risk=" + format_probability(a.risk) + " threshold=" +
               format_probability(a.threshold) + "\n";
    }

    out += "warnings (" + std::to_string(warnings.size()) + ")\n";
    for (const std::string& w : warnings) {
        out += "  " + w + "\n";
    }
    return out;
}

}  // namespace medgraph
