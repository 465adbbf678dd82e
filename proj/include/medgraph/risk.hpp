#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "medgraph/ontology.hpp"
#include "medgraph/term.hpp"

namespace medgraph {

// A probability value, checked to be finite and inside [0,1].
class Probability {
public:
    explicit Probability(double value);

    double value() const { return value_; }

    auto operator<=>(const Probability&) const = default;

private:
    double value_;
};

// Smallest likelihood a conditional probability table may hold after
// loading. Entries outside [kCptEpsilon, 1 - kCptEpsilon] are clamped so a
// single zero likelihood can never saturate the posterior for good.
inline constexpr double kCptEpsilon = 1e-6;

struct CptRow {
    double p_case;     // P(value | cancer)
    double p_control;  // P(value | no cancer)
};

// Per-factor conditional probability table: one row per observable value
// label, columns conditioned on case vs control status.
struct FactorCpt {
    Iri factor;
    std::map<std::string, CptRow> rows;
};

// Validates row invariants (>= 2 labels, entries in [0,1], both columns
// summing to 1 within 1e-9) and clamps entries into [eps, 1-eps].
FactorCpt make_factor_cpt(Iri factor, const std::vector<std::pair<std::string, CptRow>>& rows);

struct RiskModel {
    Probability prior;      // baseline prevalence P(cancer)
    Probability threshold;  // alarm threshold
    std::map<Iri, FactorCpt> cpts;
};

// One observed risk-factor value for a patient.
struct Observation {
    Iri factor;
    std::string value;

    bool operator==(const Observation&) const = default;
    auto operator<=>(const Observation&) const = default;
};

struct TraceStep {
    Iri factor;
    std::string value;
    double prior_before;
    double posterior_after;
};

// Posterior plus the per-step audit trail. Trace steps chain: each step's
// prior_before equals the previous step's posterior_after, and the first
// prior_before is the model prior. Observations naming a factor or value the
// model does not know land in `skipped` and leave the posterior untouched.
struct RiskEstimate {
    Probability posterior;
    std::vector<TraceStep> trace;
    std::vector<Observation> skipped;
};

enum class RiskLevel { HighRisk, Normal };

std::string_view risk_level_name(RiskLevel level);

// One Bayes step:
//   P(A|B) = P(B|A) * P(A) / (P(B|A) * P(A) + P(B|~A) * (1 - P(A)))
// Throws DomainError when the denominator is zero (degenerate priors with
// unsmoothed likelihoods; unreachable through a loaded model).
Probability bayes_update(Probability prior, Probability p_b_given_a, Probability p_b_given_not_a);

// Folds bayes_update over the observations in canonical order (sorted by
// factor IRI). Duplicate factors are an error naming the factor.
RiskEstimate estimate_risk(const RiskModel& model, const std::vector<Observation>& observations);

// Independent single-pass oracle:
//   prior * prod(p_case) / (prior * prod(p_case) + (1-prior) * prod(p_control))
// Must match estimate_risk to within 1e-12; kept free of the iterative code
// path on purpose.
Probability closed_form_posterior(const RiskModel& model,
                                  const std::vector<Observation>& observations);

// HighRisk iff the posterior reached the threshold (inclusive).
RiskLevel classify(const RiskEstimate& estimate, Probability threshold);

// Model file loader (JSON):
//   {"prior": 0.1, "threshold": 0.5,
//    "factors": [{"iri": "...", "rows": [{"value": "...", "p_case": 0.8,
//                                          "p_control": 0.2}, ...]}, ...]}
// Enforces all model invariants and that every factor IRI is a declared
// vocabulary factor individual.
RiskModel parse_risk_model(const std::string& json_text, const Vocabulary& vocab);
RiskModel load_risk_model(const std::filesystem::path& path, const Vocabulary& vocab);

}  // namespace medgraph
