#include "medgraph/risk.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "medgraph/errors.hpp"

namespace medgraph {

Probability::Probability(double value) : value_(value) {
    if (!std::isfinite(value_) || value_ < 0.0 || value_ > 1.0) {
        throw ValidationError("probability", "value outside [0,1]: " + std::to_string(value));
    }
}

std::string_view risk_level_name(RiskLevel level) {
    return level == RiskLevel::HighRisk ? "HIGH_RISK" : "NORMAL";
}

FactorCpt make_factor_cpt(Iri factor, const std::vector<std::pair<std::string, CptRow>>& rows) {
    if (rows.size() < 2) {
        throw ValidationError("rows", factor.value() + ": a factor needs at least two value labels");
    }
    double case_sum = 0.0, control_sum = 0.0;
    FactorCpt cpt{std::move(factor), {}};
    for (const auto& [label, row] : rows) {
        if (label.empty()) {
            throw ValidationError("value", cpt.factor.value() + ": empty value label");
        }
        for (double p : {row.p_case, row.p_control}) {
            if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
                throw ValidationError("row", cpt.factor.value() + "/" + label +
                                                 ": probability outside [0,1]");
            }
        }
        case_sum += row.p_case;
        control_sum += row.p_control;
        CptRow clamped{std::clamp(row.p_case, kCptEpsilon, 1.0 - kCptEpsilon),
                       std::clamp(row.p_control, kCptEpsilon, 1.0 - kCptEpsilon)};
        if (!cpt.rows.emplace(label, clamped).second) {
            throw ValidationError("value", cpt.factor.value() + ": duplicate value label '" +
                                               label + "'");
        }
    }
    if (std::abs(case_sum - 1.0) > 1e-9) {
        throw ValidationError("p_case", cpt.factor.value() + ": case column sums to " +
                                            std::to_string(case_sum) + ", expected 1");
    }
    if (std::abs(control_sum - 1.0) > 1e-9) {
        throw ValidationError("p_control", cpt.factor.value() + ": control column sums to " +
                                               std::to_string(control_sum) + ", expected 1");
    }
    return cpt;
}

Probability bayes_update(Probability prior, Probability p_b_given_a, Probability p_b_given_not_a) {
    double evidence = p_b_given_a.value() * prior.value() +
                      p_b_given_not_a.value() * (1.0 - prior.value());
    if (evidence <= 0.0) {
        throw DomainError("bayes_update: zero evidence probability P(B)");
    }
    return Probability(p_b_given_a.value() * prior.value() / evidence);
}

namespace {

// Splits observations into (applied, skipped) in canonical order and rejects
// duplicate factors. Shared by the iterative fold and the closed-form oracle
// so both see the same evidence.
struct PartitionedObservations {
    std::vector<std::pair<Observation, CptRow>> applied;
    std::vector<Observation> skipped;
};

PartitionedObservations partition_observations(const RiskModel& model,
                                               std::vector<Observation> observations) {
    std::sort(observations.begin(), observations.end());
    std::set<Iri> seen;
    for (const Observation& obs : observations) {
        if (!seen.insert(obs.factor).second) {
            throw DomainError("duplicate observation of factor " + obs.factor.value());
        }
    }
    PartitionedObservations out;
    for (Observation& obs : observations) {
        auto cpt = model.cpts.find(obs.factor);
        if (cpt == model.cpts.end()) {
            out.skipped.push_back(std::move(obs));
            continue;
        }
        auto row = cpt->second.rows.find(obs.value);
        if (row == cpt->second.rows.end()) {
            out.skipped.push_back(std::move(obs));
            continue;
        }
        out.applied.emplace_back(std::move(obs), row->second);
    }
    return out;
}

}  // namespace

RiskEstimate estimate_risk(const RiskModel& model, const std::vector<Observation>& observations) {
    PartitionedObservations parts = partition_observations(model, observations);

    RiskEstimate estimate{model.prior, {}, std::move(parts.skipped)};
    double posterior = model.prior.value();
    for (const auto& [obs, row] : parts.applied) {
        double before = posterior;
        posterior = bayes_update(Probability(posterior), Probability(row.p_case),
                                 Probability(row.p_control))
                        .value();
        estimate.trace.push_back(TraceStep{obs.factor, obs.value, before, posterior});
    }
    estimate.posterior = Probability(posterior);
    return estimate;
}

Probability closed_form_posterior(const RiskModel& model,
                                  const std::vector<Observation>& observations) {
    PartitionedObservations parts = partition_observations(model, observations);

    double case_product = model.prior.value();
    double control_product = 1.0 - model.prior.value();
    for (const auto& [obs, row] : parts.applied) {
        case_product *= row.p_case;
        control_product *= row.p_control;
    }
    double denominator = case_product + control_product;
    if (denominator <= 0.0) {
        throw DomainError("closed_form_posterior: zero evidence probability");
    }
    return Probability(case_product / denominator);
}

RiskLevel classify(const RiskEstimate& estimate, Probability threshold) {
    if (threshold.value() <= 0.0 || threshold.value() >= 1.0) {
        throw ValidationError("threshold", "threshold must lie strictly inside (0,1)");
    }
    return estimate.posterior.value() >= threshold.value() ? RiskLevel::HighRisk
                                                           : RiskLevel::Normal;
}

namespace {

double required_probability(const nlohmann::json& obj, const char* key, bool open_interval) {
    if (!obj.contains(key) || !obj[key].is_number()) {
        throw ValidationError(key, "missing or non-numeric");
    }
    double v = obj[key].get<double>();
    if (open_interval && (v <= 0.0 || v >= 1.0)) {
        throw ValidationError(key, "must lie strictly inside (0,1)");
    }
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw ValidationError(key, "must lie in [0,1]");
    }
    return v;
}

}  // namespace

RiskModel parse_risk_model(const std::string& json_text, const Vocabulary& vocab) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("model", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("model", "top level must be an object");

    RiskModel model{Probability(required_probability(doc, "prior", true)),
                    Probability(required_probability(doc, "threshold", true)),
                    {}};

    if (!doc.contains("factors") || !doc["factors"].is_array()) {
        throw ValidationError("factors", "missing or not an array");
    }
    for (const auto& fobj : doc["factors"]) {
        if (!fobj.is_object() || !fobj.contains("iri") || !fobj["iri"].is_string()) {
            throw ValidationError("factors", "each factor needs an \"iri\" string");
        }
        std::string iri_text = fobj["iri"].get<std::string>();
        if (!Iri::valid(iri_text)) {
            throw ValidationError("iri", "malformed factor IRI: '" + iri_text + "'");
        }
        Iri factor(iri_text);
        if (!vocab.is_factor(factor)) {
            throw ValidationError("iri", "factor not declared in the vocabulary: " + iri_text);
        }
        if (!fobj.contains("rows") || !fobj["rows"].is_array()) {
            throw ValidationError("rows", iri_text + ": missing or not an array");
        }
        std::vector<std::pair<std::string, CptRow>> rows;
        for (const auto& robj : fobj["rows"]) {
            if (!robj.is_object() || !robj.contains("value") || !robj["value"].is_string()) {
                throw ValidationError("rows", iri_text + ": each row needs a \"value\" string");
            }
            rows.emplace_back(robj["value"].get<std::string>(),
                              CptRow{required_probability(robj, "p_case", false),
                                     required_probability(robj, "p_control", false)});
        }
        FactorCpt cpt = make_factor_cpt(std::move(factor), rows);
        Iri key = cpt.factor;
        if (!model.cpts.emplace(std::move(key), std::move(cpt)).second) {
            throw ValidationError("factors", "duplicate factor " + iri_text);
        }
    }
    return model;
}

RiskModel load_risk_model(const std::filesystem::path& path, const Vocabulary& vocab) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open model file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_risk_model(buf.str(), vocab);
}

}  // namespace medgraph
