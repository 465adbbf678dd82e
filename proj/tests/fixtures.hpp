#pragma once

// Fixture loading helpers. MEDGRAPH_FIXTURE_DIR is injected by CMake and
// points at the source-tree fixtures/ directory.

#include <memory>
#include <string>

#include "medgraph/federation.hpp"
#include "medgraph/ntriples.hpp"

namespace medtest {

inline std::string fixture_path(const std::string& relative) {
    return std::string(MEDGRAPH_FIXTURE_DIR) + "/" + relative;
}

inline std::shared_ptr<const medgraph::Dataset> load_fixture(const std::string& relative) {
    return std::make_shared<const medgraph::Dataset>(
        medgraph::load_nquads_file(fixture_path(relative)));
}

struct Fed4 {
    std::shared_ptr<const medgraph::Dataset> records;
    std::shared_ptr<const medgraph::Dataset> lifestyle;
    std::shared_ptr<const medgraph::Dataset> genetics;
    std::shared_ptr<const medgraph::Dataset> oncology;
    medgraph::EndpointRegistry registry;
    medgraph::Iri patient{"http://records.example/patient/p1"};
};

// The fully linked four-department fixture with an all-local registry.
inline Fed4 fed4() {
    Fed4 f;
    f.records = load_fixture("federation4/records.nq");
    f.lifestyle = load_fixture("federation4/lifestyle.nq");
    f.genetics = load_fixture("federation4/genetics.nq");
    f.oncology = load_fixture("federation4/oncology.nq");
    f.registry.add("http://records.example/", medgraph::LocalSource{"records", f.records});
    f.registry.add("http://lifestyle.example/", medgraph::LocalSource{"lifestyle", f.lifestyle});
    f.registry.add("http://genetics.example/", medgraph::LocalSource{"genetics", f.genetics});
    f.registry.add("http://oncology.example/", medgraph::LocalSource{"oncology", f.oncology});
    return f;
}

inline medgraph::Dataset fed4_union(const Fed4& f) {
    medgraph::Dataset u = *f.records;
    u.merge(*f.lifestyle);
    u.merge(*f.genetics);
    u.merge(*f.oncology);
    return u;
}

}  // namespace medtest
