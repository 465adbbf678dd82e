#include "medgraph/dataset.hpp"

#include <algorithm>

namespace medgraph {

namespace {

std::string graph_key(const GraphName& graph) {
    return graph.is_default() ? std::string() : serialize(*graph.iri());
}

}  // namespace

bool Quad::operator<(const Quad& other) const {
    if (int c = graph_key(graph).compare(graph_key(other.graph)); c != 0) return c < 0;
    if (int c = subject.value().compare(other.subject.value()); c != 0) return c < 0;
    if (int c = predicate.value().compare(other.predicate.value()); c != 0) return c < 0;
    return serialize(object) < serialize(other.object);
}

bool QuadPattern::matches(const Quad& quad) const {
    if (subject && *subject != quad.subject) return false;
    if (predicate && *predicate != quad.predicate) return false;
    if (object && *object != quad.object) return false;
    if (graph && *graph != quad.graph) return false;
    return true;
}

bool Dataset::add(Quad quad) {
    auto [it, inserted] = quads_.insert(std::move(quad));
    if (!inserted) return false;
    const Quad& q = *it;
    by_graph_subject_[{q.graph, q.subject}].insert(q);
    by_graph_predicate_[{q.graph, q.predicate}].insert(q);
    by_graph_object_[{q.graph, q.object}].insert(q);
    return true;
}

bool Dataset::remove(const Quad& quad) {
    auto it = quads_.find(quad);
    if (it == quads_.end()) return false;

    auto drop = [&](auto& index, const auto& key) {
        auto bucket = index.find(key);
        bucket->second.erase(quad);
        if (bucket->second.empty()) index.erase(bucket);
    };
    drop(by_graph_subject_, SubjectKey{quad.graph, quad.subject});
    drop(by_graph_predicate_, SubjectKey{quad.graph, quad.predicate});
    drop(by_graph_object_, ObjectKey{quad.graph, quad.object});
    quads_.erase(it);
    return true;
}

bool Dataset::contains(const Quad& quad) const {
    return quads_.count(quad) > 0;
}

std::size_t Dataset::merge(const Dataset& other) {
    std::size_t added = 0;
    for (const Quad& q : other.quads_) {
        if (add(q)) ++added;
    }
    return added;
}

std::vector<Quad> Dataset::match(const QuadPattern& pattern) const {
    std::vector<Quad> out;

    auto scan_bucket = [&](const std::set<Quad>* bucket) {
        if (!bucket) return;
        for (const Quad& q : *bucket) {
            if (pattern.matches(q)) out.push_back(q);
        }
    };
    auto find_bucket = [](const auto& index, const auto& key) -> const std::set<Quad>* {
        auto it = index.find(key);
        return it == index.end() ? nullptr : &it->second;
    };

    if (pattern.graph) {
        if (pattern.subject) {
            scan_bucket(find_bucket(by_graph_subject_, SubjectKey{*pattern.graph, *pattern.subject}));
        } else if (pattern.predicate) {
            scan_bucket(find_bucket(by_graph_predicate_, SubjectKey{*pattern.graph, *pattern.predicate}));
        } else if (pattern.object) {
            scan_bucket(find_bucket(by_graph_object_, ObjectKey{*pattern.graph, *pattern.object}));
        } else {
            for (const Quad& q : quads_) {
                if (q.graph == *pattern.graph) out.push_back(q);
            }
        }
        return out;
    }

    // Wildcard graph: walk the per-graph buckets of the narrowest index.
    if (pattern.subject || pattern.predicate || pattern.object) {
        for (const GraphName& g : graphs()) {
            if (pattern.subject) {
                scan_bucket(find_bucket(by_graph_subject_, SubjectKey{g, *pattern.subject}));
            } else if (pattern.predicate) {
                scan_bucket(find_bucket(by_graph_predicate_, SubjectKey{g, *pattern.predicate}));
            } else {
                scan_bucket(find_bucket(by_graph_object_, ObjectKey{g, *pattern.object}));
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    out.assign(quads_.begin(), quads_.end());
    return out;
}

std::size_t Dataset::estimate_matches(const QuadPattern& pattern) const {
    auto bucket_size = [](const auto& index, const auto& key) -> std::size_t {
        auto it = index.find(key);
        return it == index.end() ? 0 : it->second.size();
    };

    std::size_t best = quads_.size();
    if (pattern.graph) {
        if (pattern.subject) {
            best = std::min(best, bucket_size(by_graph_subject_, SubjectKey{*pattern.graph, *pattern.subject}));
        }
        if (pattern.predicate) {
            best = std::min(best, bucket_size(by_graph_predicate_, SubjectKey{*pattern.graph, *pattern.predicate}));
        }
        if (pattern.object) {
            best = std::min(best, bucket_size(by_graph_object_, ObjectKey{*pattern.graph, *pattern.object}));
        }
        return best;
    }

    auto sum_over_graphs = [&](const auto& index, auto make_key) {
        std::size_t total = 0;
        for (const GraphName& g : graphs()) total += bucket_size(index, make_key(g));
        return total;
    };
    if (pattern.subject) {
        best = std::min(best, sum_over_graphs(by_graph_subject_,
                                              [&](const GraphName& g) { return SubjectKey{g, *pattern.subject}; }));
    }
    if (pattern.predicate) {
        best = std::min(best, sum_over_graphs(by_graph_predicate_,
                                              [&](const GraphName& g) { return SubjectKey{g, *pattern.predicate}; }));
    }
    if (pattern.object) {
        best = std::min(best, sum_over_graphs(by_graph_object_,
                                              [&](const GraphName& g) { return ObjectKey{g, *pattern.object}; }));
    }
    return best;
}

std::vector<GraphName> Dataset::graphs() const {
    std::vector<GraphName> out;
    for (const Quad& q : quads_) {
        if (out.empty() || !(out.back() == q.graph)) out.push_back(q.graph);
    }
    // quads_ is sorted by graph first, so `out` is already sorted and unique
    return out;
}

bool Dataset::indexes_coherent() const {
    std::size_t subject_total = 0, predicate_total = 0, object_total = 0;
    for (const auto& [key, bucket] : by_graph_subject_) {
        subject_total += bucket.size();
        for (const Quad& q : bucket) {
            if (!quads_.count(q) || q.graph != key.first || q.subject != key.second) return false;
        }
    }
    for (const auto& [key, bucket] : by_graph_predicate_) {
        predicate_total += bucket.size();
        for (const Quad& q : bucket) {
            if (!quads_.count(q) || q.graph != key.first || q.predicate != key.second) return false;
        }
    }
    for (const auto& [key, bucket] : by_graph_object_) {
        object_total += bucket.size();
        for (const Quad& q : bucket) {
            if (!quads_.count(q) || q.graph != key.first || !(q.object == key.second)) return false;
        }
    }
    return subject_total == quads_.size() && predicate_total == quads_.size() &&
           object_total == quads_.size();
}

}  // namespace medgraph
