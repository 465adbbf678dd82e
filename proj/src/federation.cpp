#include "medgraph/federation.hpp"

#include <algorithm>
#include <future>

#include <httplib.h>

#include "medgraph/errors.hpp"
#include "medgraph/ntriples.hpp"

namespace medgraph {

void EndpointRegistry::add(std::string iri_prefix, EndpointSource source) {
    if (iri_prefix.empty()) {
        throw ValidationError("prefix", "endpoint prefix must not be empty");
    }
    for (const auto& [existing, _] : entries_) {
        if (existing == iri_prefix) {
            throw ValidationError("prefix", "duplicate endpoint prefix: " + iri_prefix);
        }
    }
    entries_.emplace_back(std::move(iri_prefix), std::move(source));
}

const std::pair<std::string, EndpointSource>* EndpointRegistry::resolve(const Iri& iri) const {
    const std::pair<std::string, EndpointSource>* best = nullptr;
    for (const auto& entry : entries_) {
        if (iri.starts_with(entry.first)) {
            if (!best || entry.first.size() > best->first.size()) best = &entry;
        }
    }
    return best;
}

std::string url_encode(std::string_view raw) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    out.reserve(raw.size() * 3 / 2);
    for (unsigned char c : raw) {
        bool unreserved = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                          (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.' || c == '~';
        if (unreserved) {
            out += static_cast<char>(c);
        } else {
            out += '%';
            out += hex[c >> 4];
            out += hex[c & 0xF];
        }
    }
    return out;
}

std::string url_decode(std::string_view encoded) {
    auto hex_value = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    std::string out;
    out.reserve(encoded.size());
    for (std::size_t i = 0; i < encoded.size(); ++i) {
        if (encoded[i] == '%' && i + 2 < encoded.size()) {
            int hi = hex_value(encoded[i + 1]);
            int lo = hex_value(encoded[i + 2]);
            if (hi >= 0 && lo >= 0) {
                out += static_cast<char>((hi << 4) | lo);
                i += 2;
                continue;
            }
        }
        out += encoded[i];
    }
    return out;
}

namespace {

DerefResult fetch_local(const Iri& iri, const LocalSource& source) {
    DerefResult result;
    result.status = DerefStatus::Found;
    for (const Quad& q : source.data->match(QuadPattern{iri, {}, {}, {}})) {
        Quad triple(q.subject, q.predicate, q.object, GraphName());
        if (result.triples.empty() || !(result.triples.back() == triple)) {
            result.triples.push_back(std::move(triple));
        }
    }
    return result;
}

DerefResult fetch_remote(const Iri& iri, const RemoteSource& source, std::size_t timeout_ms) {
    DerefResult result;
    httplib::Client client(source.base_url);
    auto seconds = static_cast<time_t>(timeout_ms / 1000);
    auto microseconds = static_cast<time_t>((timeout_ms % 1000) * 1000);
    client.set_connection_timeout(seconds, microseconds);
    client.set_read_timeout(seconds, microseconds);

    auto response = client.Get("/resource/" + url_encode(iri.value()),
                               {{"Accept", "application/n-triples"}});
    if (!response) {
        result.status = DerefStatus::FetchError;
        result.error = iri.value() + ": " + httplib::to_string(response.error());
        return result;
    }
    if (response->status == 404) {
        result.status = DerefStatus::NotFound;
        return result;
    }
    if (response->status != 200) {
        result.status = DerefStatus::FetchError;
        result.error = iri.value() + ": HTTP status " + std::to_string(response->status);
        return result;
    }
    try {
        result.triples = parse_ntriples(response->body, GraphName());
        result.status = DerefStatus::Found;
    } catch (const NtParseError& e) {
        result.status = DerefStatus::ParseError;
        result.error = iri.value() + ": " + e.what();
    }
    return result;
}

// Fetches a batch of IRIs, at most `parallelism` at a time. Results come
// back in input order, so downstream merging never depends on completion
// order.
std::vector<DerefResult> fetch_batch(const std::vector<Iri>& iris,
                                     const EndpointRegistry& registry,
                                     std::size_t timeout_ms, std::size_t parallelism) {
    std::vector<DerefResult> results(iris.size());
    if (parallelism <= 1 || iris.size() <= 1) {
        for (std::size_t i = 0; i < iris.size(); ++i) {
            results[i] = dereference(iris[i], registry, timeout_ms);
        }
        return results;
    }
    for (std::size_t window = 0; window < iris.size(); window += parallelism) {
        std::size_t end = std::min(window + parallelism, iris.size());
        std::vector<std::future<DerefResult>> futures;
        futures.reserve(end - window);
        for (std::size_t i = window; i < end; ++i) {
            futures.push_back(std::async(std::launch::async, [&, i] {
                return dereference(iris[i], registry, timeout_ms);
            }));
        }
        for (std::size_t i = window; i < end; ++i) {
            results[i] = futures[i - window].get();
        }
    }
    return results;
}

// Object-position IRIs of a document, sorted and deduplicated.
std::vector<Iri> object_links(const std::vector<Quad>& triples) {
    std::set<Iri> links;
    for (const Quad& q : triples) {
        if (q.object.is_iri()) links.insert(q.object.iri());
    }
    return {links.begin(), links.end()};
}

}  // namespace

DerefResult dereference(const Iri& iri, const EndpointRegistry& registry, std::size_t timeout_ms) {
    const auto* entry = registry.resolve(iri);
    if (!entry) {
        return DerefResult{DerefStatus::NotFound, {}, {}};
    }
    if (const auto* local = std::get_if<LocalSource>(&entry->second)) {
        return fetch_local(iri, *local);
    }
    return fetch_remote(iri, std::get<RemoteSource>(entry->second), timeout_ms);
}

TraversalResult traverse_query(const SelectQuery& query, const std::vector<Iri>& seeds,
                               const EndpointRegistry& registry, const FetchPolicy& policy) {
    if (seeds.empty()) {
        throw ValidationError("seeds", "traversal needs at least one seed IRI");
    }

    TraversalState state;
    std::set<Iri> seed_set(seeds.begin(), seeds.end());
    std::vector<Iri> level(seed_set.begin(), seed_set.end());
    std::size_t depth = 0;
    bool any_seed_ok = false;

    std::set<Iri> in_frontier;
    auto push_frontier = [&](const Iri& iri, std::size_t at_depth) {
        if (in_frontier.insert(iri).second) state.frontier.emplace_back(iri, at_depth);
    };

    while (!level.empty()) {
        // budget: every fetch attempt occupies one max_documents slot
        std::vector<Iri> to_fetch;
        for (const Iri& iri : level) {
            if (state.visited.count(iri)) continue;
            if (state.visited.size() + to_fetch.size() >= policy.max_documents) {
                push_frontier(iri, depth);
                continue;
            }
            to_fetch.push_back(iri);
        }

        std::vector<DerefResult> results =
            fetch_batch(to_fetch, registry, policy.timeout_ms, policy.parallelism);

        std::set<Iri> next;
        for (std::size_t i = 0; i < to_fetch.size(); ++i) {
            const Iri& iri = to_fetch[i];
            DerefResult& result = results[i];
            state.visited.insert(iri);
            if (!result.ok()) {
                state.failures.push_back(FetchFailure{iri, result.status, result.error});
                continue;
            }
            if (depth == 0) any_seed_ok = true;
            for (const Iri& link : object_links(result.triples)) {
                if (!state.visited.count(link)) next.insert(link);
            }
            GraphName document_graph{iri};
            for (Quad& triple : result.triples) {
                state.acquired.add(
                    Quad(triple.subject, triple.predicate, std::move(triple.object), document_graph));
            }
        }

        if (depth == 0 && !any_seed_ok && !to_fetch.empty()) {
            throw FetchError("all seeds failed to dereference");
        }

        ++depth;
        if (depth > policy.max_depth) {
            for (const Iri& iri : next) {
                if (!state.visited.count(iri)) push_frontier(iri, depth);
            }
            break;
        }
        level.assign(next.begin(), next.end());
    }

    TraversalResult result{evaluate_query(query, state.acquired, EvalOptions{true}), std::move(state)};
    return result;
}

EnrichResult enrich_record(const Iri& patient, const std::vector<Department>& departments,
                           const EndpointRegistry& registry, const FetchPolicy& policy) {
    EnrichResult result;

    DerefResult seed = dereference(patient, registry, policy.timeout_ms);
    if (!seed.ok()) {
        result.warnings.push_back("seed document fetch failed for " + patient.value() + ": " +
                                  seed.error);
        return result;
    }
    GraphName seed_graph{patient};
    for (const Quad& triple : seed.triples) {
        result.dataset.add(Quad(triple.subject, triple.predicate, triple.object, seed_graph));
    }
    std::vector<Iri> seed_links = object_links(seed.triples);

    for (const Department& dept : departments) {
        const std::string& prefix = dept.graph.value();
        GraphName dept_graph{dept.graph};

        std::set<Iri> visited{patient};
        std::vector<Iri> level;
        for (const Iri& link : seed_links) {
            if (link.starts_with(prefix) && !visited.count(link)) level.push_back(link);
        }

        std::size_t depth = 1;
        std::size_t attempted = 0, failed = 0;
        while (!level.empty() && depth <= policy.max_depth) {
            std::vector<Iri> to_fetch;
            for (const Iri& iri : level) {
                if (visited.count(iri)) continue;
                if (visited.size() + to_fetch.size() >= policy.max_documents) break;
                to_fetch.push_back(iri);
            }
            if (to_fetch.empty()) break;

            std::vector<DerefResult> results =
                fetch_batch(to_fetch, registry, policy.timeout_ms, policy.parallelism);

            std::set<Iri> next;
            for (std::size_t i = 0; i < to_fetch.size(); ++i) {
                const Iri& iri = to_fetch[i];
                DerefResult& fetched = results[i];
                visited.insert(iri);
                ++attempted;
                if (!fetched.ok()) {
                    ++failed;
                    result.warnings.push_back("department " + dept.name + ": fetch failed for " +
                                              iri.value() + ": " + fetched.error);
                    continue;
                }
                for (const Iri& link : object_links(fetched.triples)) {
                    if (link.starts_with(prefix) && !visited.count(link)) next.insert(link);
                }
                for (Quad& triple : fetched.triples) {
                    result.dataset.add(Quad(triple.subject, triple.predicate,
                                            std::move(triple.object), dept_graph));
                }
            }
            ++depth;
            level.assign(next.begin(), next.end());
        }

        if (attempted > 0 && failed == attempted) {
            result.warnings.push_back("department " + dept.name + " is unreachable");
        }
    }
    return result;
}

}  // namespace medgraph
