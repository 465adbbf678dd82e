#include "medgraph/term.hpp"

#include <cctype>
#include <cstdio>

#include "medgraph/decimal.hpp"

namespace medgraph {

namespace {

bool scheme_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool scheme_char(char c) {
    return scheme_start(c) || (c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.';
}

}  // namespace

Iri::Iri(std::string value) : value_(std::move(value)) {
    if (!valid(value_)) {
        throw ValidationError("iri", "malformed IRI: '" + value_ + "'");
    }
}

bool Iri::valid(std::string_view value) {
    if (value.empty()) return false;
    if (!scheme_start(value.front())) return false;
    std::size_t colon = std::string_view::npos;
    for (std::size_t i = 0; i < value.size(); ++i) {
        char c = value[i];
        if (c == '<' || c == '>' || c == '"') return false;
        if (std::isspace(static_cast<unsigned char>(c))) return false;
        if (c == ':' && colon == std::string_view::npos) colon = i;
    }
    if (colon == std::string_view::npos || colon == 0) return false;
    for (std::size_t i = 1; i < colon; ++i) {
        if (!scheme_char(value[i])) return false;
    }
    return true;
}

namespace xsd {

namespace {
const std::string kBase = "http://www.w3.org/2001/XMLSchema#";
}

const Iri& string_type() {
    static const Iri iri(kBase + "string");
    return iri;
}
const Iri& decimal() {
    static const Iri iri(kBase + "decimal");
    return iri;
}
const Iri& boolean() {
    static const Iri iri(kBase + "boolean");
    return iri;
}
const Iri& date_time() {
    static const Iri iri(kBase + "dateTime");
    return iri;
}

bool supported(const Iri& datatype) {
    return datatype == string_type() || datatype == decimal() || datatype == boolean() ||
           datatype == date_time();
}

}  // namespace xsd

const Iri& rdf_type() {
    static const Iri iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type");
    return iri;
}
const Iri& rdf_property() {
    static const Iri iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#Property");
    return iri;
}
const Iri& rdfs_class() {
    static const Iri iri("http://www.w3.org/2000/01/rdf-schema#Class");
    return iri;
}
const Iri& rdfs_domain() {
    static const Iri iri("http://www.w3.org/2000/01/rdf-schema#domain");
    return iri;
}
const Iri& rdfs_range() {
    static const Iri iri("http://www.w3.org/2000/01/rdf-schema#range");
    return iri;
}

Literal::Literal(std::string lexical, Iri datatype)
    : lexical_(std::move(lexical)), datatype_(std::move(datatype)) {
    if (!xsd::supported(datatype_)) {
        throw ValidationError("datatype", "unsupported literal datatype: " + datatype_.value());
    }
    if (datatype_ == xsd::decimal() && !is_valid_decimal(lexical_)) {
        throw ValidationError("literal", "not a finite decimal: '" + lexical_ + "'");
    }
    if (datatype_ == xsd::boolean() && lexical_ != "true" && lexical_ != "false") {
        throw ValidationError("literal", "boolean must be 'true' or 'false', got '" + lexical_ + "'");
    }
}

Literal Literal::str(std::string lexical) {
    return Literal(std::move(lexical), xsd::string_type());
}

Literal Literal::decimal(std::string lexical) {
    return Literal(std::move(lexical), xsd::decimal());
}

Literal Literal::boolean(bool value) {
    return Literal(value ? "true" : "false", xsd::boolean());
}

bool Literal::is_decimal() const {
    return datatype_ == xsd::decimal();
}

std::string serialize(const Iri& iri) {
    return "<" + iri.value() + ">";
}

std::string serialize(const Literal& literal) {
    std::string out = "\"" + escape_literal(literal.lexical()) + "\"";
    if (literal.datatype() != xsd::string_type()) {
        out += "^^" + serialize(literal.datatype());
    }
    return out;
}

std::string serialize(const Term& term) {
    return term.is_iri() ? serialize(term.iri()) : serialize(term.literal());
}

std::string escape_literal(std::string_view lexical) {
    std::string out;
    out.reserve(lexical.size());
    for (unsigned char c : lexical) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (c < 0x20 || c == 0x7f) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04X", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    return out;
}

}  // namespace medgraph
