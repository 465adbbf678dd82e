#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "medgraph/dataset.hpp"

namespace medgraph {

// Line-oriented N-Triples subset:
//
//   triple := iriref iriref (iriref | literal) '.'
//   literal := '"' chars '"' ('^^' iriref)?
//
// Escapes accepted inside literals: \" \\ \n \t \r and \uXXXX. Blank lines
// and lines whose first non-space character is '#' are skipped. Parsing is
// all-or-nothing; errors carry the 1-based line number. Every parsed quad is
// placed in `graph`, and line order is preserved in the result.
std::vector<Quad> parse_ntriples(std::string_view text, const GraphName& graph = GraphName());

// Same grammar plus an optional fourth iriref naming the graph; three-term
// lines fall into the default graph.
std::vector<Quad> parse_nquads(std::string_view text);

// Sorted N-Quads rendering: one line per quad, ordered by
// (graph, subject, predicate, object serialization). Default-graph quads are
// written as triples. parse_nquads(serialize_canonical(d)) reproduces d.
std::string serialize_canonical(const Dataset& dataset);

// Convenience: parse N-Quads text straight into a dataset.
Dataset dataset_from_nquads(std::string_view text);

// Reads a whole .nt/.nq file. Throws ConfigError if unreadable.
Dataset load_nquads_file(const std::filesystem::path& path);

}  // namespace medgraph
