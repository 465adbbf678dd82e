#pragma once

#include <memory>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "medgraph/dataset.hpp"
#include "medgraph/query.hpp"

namespace medgraph {

// A department dataset held in this process.
struct LocalSource {
    std::string name;
    std::shared_ptr<const Dataset> data;
};

// A department behind HTTP; documents are served at
// <base_url>/resource/<url-encoded-iri> as N-Triples.
struct RemoteSource {
    std::string base_url;
};

using EndpointSource = std::variant<LocalSource, RemoteSource>;

// Maps IRI prefixes to department sources. Resolution picks the longest
// matching prefix; duplicate prefixes are rejected at insertion.
class EndpointRegistry {
public:
    void add(std::string iri_prefix, EndpointSource source);

    const std::pair<std::string, EndpointSource>* resolve(const Iri& iri) const;

    const std::vector<std::pair<std::string, EndpointSource>>& entries() const { return entries_; }

private:
    std::vector<std::pair<std::string, EndpointSource>> entries_;
};

// Traversal budget. A document counts against max_documents when its fetch
// is attempted; links found at depth d are followed only while d+1 stays
// within max_depth.
struct FetchPolicy {
    std::size_t max_documents = 32;
    std::size_t max_depth = 2;
    std::size_t timeout_ms = 2000;
    std::size_t parallelism = 1;  // concurrent fetches per traversal level
};

enum class DerefStatus {
    Found,       // document retrieved (possibly empty)
    NotFound,    // no registry prefix matched, or the endpoint returned 404
    FetchError,  // transport failure or unexpected HTTP status
    ParseError,  // body was not valid N-Triples
};

// The document behind one IRI: all triples whose subject is that IRI,
// returned as default-graph quads.
struct DerefResult {
    DerefStatus status = DerefStatus::NotFound;
    std::vector<Quad> triples;
    std::string error;

    bool ok() const { return status == DerefStatus::Found || status == DerefStatus::NotFound; }
};

DerefResult dereference(const Iri& iri, const EndpointRegistry& registry,
                        std::size_t timeout_ms = 2000);

struct FetchFailure {
    Iri iri;
    DerefStatus status;
    std::string message;
};

// Audit trail of one traversal. Every named graph in `acquired` is named by
// a visited IRI; `frontier` holds links discovered but not followed because
// a budget ran out.
struct TraversalState {
    std::set<Iri> visited;
    std::vector<std::pair<Iri, std::size_t>> frontier;
    Dataset acquired;
    std::vector<FetchFailure> failures;
};

struct TraversalResult {
    std::vector<Solution> solutions;
    TraversalState state;
};

// Link-traversal query execution: dereference the seeds, follow IRIs found
// in object position breadth-first within the policy budget, then evaluate
// the query over everything acquired (patterns match across all graphs).
// Individual fetch failures are recorded and skipped; throws FetchError only
// when every seed fails. Results do not depend on fetch completion order.
TraversalResult traverse_query(const SelectQuery& query, const std::vector<Iri>& seeds,
                               const EndpointRegistry& registry, const FetchPolicy& policy);

// A department taking part in enrichment. `graph` doubles as the IRI prefix
// its resources live under and as the named graph acquired triples land in.
struct Department {
    std::string name;
    Iri graph;
};

struct EnrichResult {
    Dataset dataset;
    std::vector<std::string> warnings;
};

// Gathers everything the departments hold about one patient: dereferences
// the patient IRI (the seed document, stored under a graph named by the
// patient IRI), then per department follows links restricted to that
// department's prefix, storing acquired triples under the department's
// graph. Unreachable departments become warnings, never failures.
EnrichResult enrich_record(const Iri& patient, const std::vector<Department>& departments,
                           const EndpointRegistry& registry, const FetchPolicy& policy);

// Percent-encoding helpers shared with the HTTP layer.
std::string url_encode(std::string_view raw);
std::string url_decode(std::string_view encoded);

}  // namespace medgraph
