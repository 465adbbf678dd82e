#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "medgraph/errors.hpp"

namespace medgraph {

// An absolute IRI. No whitespace, '<', '>' or '"', and it must start with a
// scheme followed by ':'. Blank nodes do not exist in this store; every
// resource is named.
class Iri {
public:
    explicit Iri(std::string value);

    static bool valid(std::string_view value);

    const std::string& value() const { return value_; }
    bool starts_with(std::string_view prefix) const {
        return value_.compare(0, prefix.size(), prefix) == 0;
    }

    auto operator<=>(const Iri&) const = default;

private:
    std::string value_;
};

namespace xsd {
const Iri& string_type();
const Iri& decimal();
const Iri& boolean();
const Iri& date_time();
// True for the four datatypes literals may carry.
bool supported(const Iri& datatype);
}  // namespace xsd

const Iri& rdf_type();
const Iri& rdf_property();
const Iri& rdfs_class();
const Iri& rdfs_domain();
const Iri& rdfs_range();

// A typed literal. Plain strings carry xsd:string. Numeric lexical forms are
// checked at construction; booleans must be exactly "true" or "false".
class Literal {
public:
    Literal(std::string lexical, Iri datatype);

    static Literal str(std::string lexical);
    static Literal decimal(std::string lexical);
    static Literal boolean(bool value);

    const std::string& lexical() const { return lexical_; }
    const Iri& datatype() const { return datatype_; }
    bool is_decimal() const;

    auto operator<=>(const Literal&) const = default;

private:
    std::string lexical_;
    Iri datatype_;
};

// Either an IRI or a literal.
class Term {
public:
    Term(Iri iri) : value_(std::move(iri)) {}            // NOLINT: implicit by design
    Term(Literal literal) : value_(std::move(literal)) {}  // NOLINT

    bool is_iri() const { return std::holds_alternative<Iri>(value_); }
    bool is_literal() const { return std::holds_alternative<Literal>(value_); }
    const Iri& iri() const { return std::get<Iri>(value_); }
    const Literal& literal() const { return std::get<Literal>(value_); }

    // Structural order, used for map keys; canonical order is by serialization.
    auto operator<=>(const Term&) const = default;

private:
    std::variant<Iri, Literal> value_;
};

// Name of the graph a quad lives in: either the default graph or a named one.
class GraphName {
public:
    GraphName() = default;  // default graph
    explicit GraphName(Iri iri) : iri_(std::move(iri)) {}

    static GraphName default_graph() { return GraphName(); }

    bool is_default() const { return !iri_.has_value(); }
    const Iri* iri() const { return iri_ ? &*iri_ : nullptr; }

    // Default graph sorts before every named graph.
    auto operator<=>(const GraphName&) const = default;

private:
    std::optional<Iri> iri_;
};

// N-Triples surface forms: "<iri>", "\"lexical\"" or "\"lexical\"^^<dt>".
// The xsd:string suffix is always omitted so serialization is canonical.
std::string serialize(const Iri& iri);
std::string serialize(const Literal& literal);
std::string serialize(const Term& term);

// Backslash-escapes '"', '\', LF, TAB, CR and renders all other control
// characters as \uXXXX.
std::string escape_literal(std::string_view lexical);

}  // namespace medgraph
