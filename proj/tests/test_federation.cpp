#include <doctest.h>

#include "medgraph/errors.hpp"
#include "medgraph/federation.hpp"
#include "generators.hpp"
#include "fixtures.hpp"

using namespace medgraph;

TEST_CASE("registry resolves by longest prefix and rejects duplicates") {
    auto data = std::make_shared<const Dataset>();
    EndpointRegistry registry;
    registry.add("http://ex/", LocalSource{"broad", data});
    registry.add("http://ex/dept/", LocalSource{"narrow", data});
    CHECK_THROWS_AS(registry.add("http://ex/", LocalSource{"again", data}), ValidationError);

    const auto* hit = registry.resolve(Iri("http://ex/dept/r1"));
    REQUIRE(hit != nullptr);
    CHECK(hit->first == "http://ex/dept/");
    CHECK(std::get<LocalSource>(hit->second).name == "narrow");

    hit = registry.resolve(Iri("http://ex/other"));
    REQUIRE(hit != nullptr);
    CHECK(std::get<LocalSource>(hit->second).name == "broad");

    CHECK(registry.resolve(Iri("http://elsewhere/x")) == nullptr);
}

TEST_CASE("dereference: local source returns the subject's triples") {
    medtest::Fed4 f = medtest::fed4();
    DerefResult result = dereference(f.patient, f.registry);
    CHECK(result.status == DerefStatus::Found);
    CHECK(result.triples.size() == 4);
    for (const Quad& q : result.triples) {
        CHECK(q.subject == f.patient);
        CHECK(q.graph.is_default());
    }
}

TEST_CASE("dereference: unmatched prefix is not-found, not an error") {
    medtest::Fed4 f = medtest::fed4();
    DerefResult result = dereference(Iri("http://unknown.example/x"), f.registry);
    CHECK(result.status == DerefStatus::NotFound);
    CHECK(result.triples.empty());
}

TEST_CASE("dereference: matched prefix with zero triples yields an empty document") {
    medtest::Fed4 f = medtest::fed4();
    DerefResult result = dereference(Iri("http://records.example/nobody"), f.registry);
    CHECK(result.status == DerefStatus::Found);
    CHECK(result.triples.empty());
}

TEST_CASE("traverse: generous budget equals evaluation over the union graph") {
    medtest::Fed4 f = medtest::fed4();
    SelectQuery query = parse_query(
        "SELECT ?o ?fact WHERE { ?o <http://medgraph.example/vocab#observedFactor> ?fact . }");

    FetchPolicy generous{64, 8, 2000, 1};
    TraversalResult traversed = traverse_query(query, {f.patient}, f.registry, generous);

    auto expected = evaluate_query(query, medtest::fed4_union(f), EvalOptions{true});
    REQUIRE(medtest::same_solution_multiset(traversed.solutions, expected));
    REQUIRE(traversed.solutions.size() == 2);  // smoking + brca observations
    CHECK(traversed.state.failures.empty());
}

TEST_CASE("traverse: deep links require depth budget") {
    medtest::Fed4 f = medtest::fed4();
    // the oncology board sits three hops from the patient
    SelectQuery query = parse_query(
        "SELECT ?s WHERE { ?s <http://www.w3.org/1999/02/22-rdf-syntax-ns#type>"
        " <http://medgraph.example/vocab#Department> . }");

    CHECK(traverse_query(query, {f.patient}, f.registry, FetchPolicy{64, 2, 2000, 1})
              .solutions.empty());
    CHECK(traverse_query(query, {f.patient}, f.registry, FetchPolicy{64, 3, 2000, 1})
              .solutions.size() == 1);
}

TEST_CASE("traverse: max_depth zero acquires only the seed documents") {
    medtest::Fed4 f = medtest::fed4();
    SelectQuery query = parse_query(
        "SELECT ?o ?fact WHERE { ?o <http://medgraph.example/vocab#observedFactor> ?fact . }");
    TraversalResult result = traverse_query(query, {f.patient}, f.registry, FetchPolicy{64, 0, 2000, 1});
    CHECK(result.solutions.empty());
    CHECK(result.state.visited.size() == 1);
    CHECK(result.state.acquired.graphs().size() == 1);
    CHECK_FALSE(result.state.frontier.empty());  // unfollowed links are auditable
}

TEST_CASE("traverse: max_documents caps fetch attempts") {
    medtest::Fed4 f = medtest::fed4();
    SelectQuery query = parse_query("SELECT * WHERE { ?s ?p ?o . }");
    TraversalResult result =
        traverse_query(query, {f.patient}, f.registry, FetchPolicy{2, 8, 2000, 1});
    CHECK(result.state.visited.size() == 2);
    CHECK_FALSE(result.state.frontier.empty());
}

TEST_CASE("traverse: budget growth never removes solutions") {
    medtest::Fed4 f = medtest::fed4();
    SelectQuery query = parse_query("SELECT ?s ?o WHERE { ?s <http://genetics.example/ns#basedOnPanel> ?o . }");
    std::size_t previous = 0;
    for (std::size_t depth = 0; depth <= 4; ++depth) {
        auto result = traverse_query(query, {f.patient}, f.registry, FetchPolicy{64, depth, 2000, 1});
        CHECK(result.solutions.size() >= previous);
        previous = result.solutions.size();
    }

    previous = 0;
    for (std::size_t documents = 1; documents <= 12; ++documents) {
        auto result =
            traverse_query(query, {f.patient}, f.registry, FetchPolicy{documents, 8, 2000, 1});
        CHECK(result.solutions.size() >= previous);
        previous = result.solutions.size();
    }
}

TEST_CASE("traverse: parallel fetching acquires the identical dataset") {
    medtest::Fed4 f = medtest::fed4();
    SelectQuery query = parse_query("SELECT * WHERE { ?s ?p ?o . }");
    TraversalResult sequential =
        traverse_query(query, {f.patient}, f.registry, FetchPolicy{64, 8, 2000, 1});
    TraversalResult parallel =
        traverse_query(query, {f.patient}, f.registry, FetchPolicy{64, 8, 2000, 4});
    CHECK(sequential.state.acquired == parallel.state.acquired);
    CHECK(sequential.solutions == parallel.solutions);
    CHECK(sequential.state.visited == parallel.state.visited);
}

TEST_CASE("traverse: all seeds failing is an error, a single good seed is not") {
    medtest::Fed4 f = medtest::fed4();
    EndpointRegistry broken;
    // unroutable remote: fetch errors, not not-found
    broken.add("http://records.example/", RemoteSource{"http://127.0.0.1:1"});
    SelectQuery query = parse_query("SELECT * WHERE { ?s ?p ?o . }");

    CHECK_THROWS_AS(traverse_query(query, {f.patient}, broken, FetchPolicy{8, 1, 200, 1}),
                    FetchError);

    // same broken endpoint, but a second healthy seed keeps the traversal alive
    EndpointRegistry mixed;
    mixed.add("http://records.example/", RemoteSource{"http://127.0.0.1:1"});
    mixed.add("http://lifestyle.example/", LocalSource{"lifestyle", f.lifestyle});
    TraversalResult result = traverse_query(
        query, {f.patient, Iri("http://lifestyle.example/obs/p1-smoking")}, mixed,
        FetchPolicy{8, 1, 200, 1});
    CHECK_FALSE(result.state.failures.empty());
    CHECK_FALSE(result.solutions.empty());
}

TEST_CASE("enrich: three departments populate three named graphs plus the seed document") {
    medtest::Fed4 f = medtest::fed4();
    std::vector<Department> departments = {
        {"lifestyle", Iri("http://lifestyle.example/")},
        {"genetics", Iri("http://genetics.example/")},
        {"records", Iri("http://records.example/")},
    };
    EnrichResult result = enrich_record(f.patient, departments, f.registry, FetchPolicy{64, 4, 2000, 1});
    CHECK(result.warnings.empty());

    auto graphs = result.dataset.graphs();
    REQUIRE(graphs.size() == 4);  // seed doc + 3 departments

    auto count_in = [&](const char* graph_iri) {
        QuadPattern p;
        p.graph = GraphName(Iri(graph_iri));
        return result.dataset.match(p).size();
    };
    CHECK(count_in("http://records.example/patient/p1") == 4);  // seed document
    CHECK(count_in("http://lifestyle.example/") == 2);          // smoking observation
    CHECK(count_in("http://genetics.example/") == 5);           // brca obs + panel doc
    CHECK(count_in("http://records.example/") == 1);            // the doctor's record
}

TEST_CASE("enrich: unknown patient gathers only the seed document graph") {
    medtest::Fed4 f = medtest::fed4();
    std::vector<Department> departments = {{"lifestyle", Iri("http://lifestyle.example/")}};
    EnrichResult result = enrich_record(Iri("http://records.example/patient/nobody"), departments,
                                        f.registry, FetchPolicy{64, 4, 2000, 1});
    CHECK(result.dataset.empty());  // empty seed document, nothing to follow
    CHECK(result.warnings.empty());
}

TEST_CASE("enrich: an offline department leaves the others intact and warns") {
    medtest::Fed4 f = medtest::fed4();
    EndpointRegistry registry;
    registry.add("http://records.example/", LocalSource{"records", f.records});
    registry.add("http://lifestyle.example/", LocalSource{"lifestyle", f.lifestyle});
    registry.add("http://genetics.example/", RemoteSource{"http://127.0.0.1:1"});  // offline

    std::vector<Department> departments = {
        {"lifestyle", Iri("http://lifestyle.example/")},
        {"genetics", Iri("http://genetics.example/")},
    };
    EnrichResult result = enrich_record(f.patient, departments, registry, FetchPolicy{64, 4, 200, 1});

    QuadPattern lifestyle;
    lifestyle.graph = GraphName(Iri("http://lifestyle.example/"));
    CHECK(result.dataset.match(lifestyle).size() == 2);

    QuadPattern genetics;
    genetics.graph = GraphName(Iri("http://genetics.example/"));
    CHECK(result.dataset.match(genetics).empty());

    REQUIRE_FALSE(result.warnings.empty());
    bool unreachable_reported = false;
    for (const std::string& w : result.warnings) {
        if (w.find("genetics") != std::string::npos && w.find("unreachable") != std::string::npos) {
            unreachable_reported = true;
        }
    }
    CHECK(unreachable_reported);
}

TEST_CASE("url encoding round-trips IRIs") {
    std::string iri = "http://ex.example/path/to?x=1&y=%20#frag";
    CHECK(url_decode(url_encode(iri)) == iri);
    CHECK(url_encode("abc-_.~") == "abc-_.~");
    CHECK(url_encode("a b") == "a%20b");
}
