#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "medgraph/term.hpp"

namespace medgraph {

// A subject-predicate-object statement scoped to a graph.
struct Quad {
    Iri subject;
    Iri predicate;
    Term object;
    GraphName graph;

    Quad(Iri s, Iri p, Term o, GraphName g = GraphName())
        : subject(std::move(s)), predicate(std::move(p)), object(std::move(o)),
          graph(std::move(g)) {}

    bool operator==(const Quad& other) const = default;

    // Canonical order: (graph, subject, predicate, object serialization).
    // The default graph sorts first.
    bool operator<(const Quad& other) const;
};

// Each position is either a concrete value or a wildcard (nullopt).
struct QuadPattern {
    std::optional<Iri> subject;
    std::optional<Iri> predicate;
    std::optional<Term> object;
    std::optional<GraphName> graph;

    bool matches(const Quad& quad) const;
};

// In-memory named-graph quad store with set semantics. Three indexes keyed
// on (graph, subject), (graph, predicate) and (graph, object) back pattern
// matching. A Dataset is a plain value: copying it takes a snapshot, and a
// const Dataset is safe to read from any number of threads.
class Dataset {
public:
    Dataset() = default;

    // Returns true iff the quad was absent before.
    bool add(Quad quad);
    bool remove(const Quad& quad);
    bool contains(const Quad& quad) const;

    // Set union with another dataset. Returns the number of new quads.
    std::size_t merge(const Dataset& other);

    std::size_t size() const { return quads_.size(); }
    bool empty() const { return quads_.empty(); }

    // All quads matching the pattern, in canonical order without duplicates.
    std::vector<Quad> match(const QuadPattern& pattern) const;

    // Upper-bound match count from index bucket sizes; used for join
    // ordering, never for correctness.
    std::size_t estimate_matches(const QuadPattern& pattern) const;

    // Distinct graph names present, sorted (default graph first if present).
    std::vector<GraphName> graphs() const;

    const std::set<Quad>& quads() const { return quads_; }

    bool operator==(const Dataset& other) const { return quads_ == other.quads_; }

    // True iff every index entry corresponds to a stored quad and vice versa.
    bool indexes_coherent() const;

private:
    using SubjectKey = std::pair<GraphName, Iri>;
    using ObjectKey = std::pair<GraphName, Term>;

    std::set<Quad> quads_;
    std::map<SubjectKey, std::set<Quad>> by_graph_subject_;
    std::map<SubjectKey, std::set<Quad>> by_graph_predicate_;
    std::map<ObjectKey, std::set<Quad>> by_graph_object_;
};

}  // namespace medgraph
