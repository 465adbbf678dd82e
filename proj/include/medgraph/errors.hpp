#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace medgraph {

// Base class for every error raised by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A term or model value violates a structural invariant. `field` names the
// offending position (e.g. "subject", "prior").
struct ValidationError : Error {
    std::string field;
    ValidationError(std::string field_name, const std::string& msg)
        : Error(field_name + ": " + msg), field(std::move(field_name)) {}
};

// Syntax error in N-Triples/N-Quads input. Lines are 1-based.
struct NtParseError : Error {
    std::size_t line;
    NtParseError(std::size_t line_no, const std::string& reason)
        : Error("line " + std::to_string(line_no) + ": " + reason), line(line_no) {}
};

// Syntax error in query or rule text. `offset` is a byte offset into the
// input; `expected` hints at the token the parser was looking for.
struct SyntaxError : Error {
    std::size_t offset;
    std::string expected;
    SyntaxError(std::size_t byte_offset, const std::string& expected_hint)
        : Error("syntax error at offset " + std::to_string(byte_offset) +
                ": expected " + expected_hint),
          offset(byte_offset),
          expected(expected_hint) {}
};

// Syntax error in a rule file. Lines are 1-based.
struct RuleParseError : Error {
    std::size_t line;
    RuleParseError(std::size_t line_no, const std::string& reason)
        : Error("line " + std::to_string(line_no) + ": " + reason), line(line_no) {}
};

// Structurally valid input that breaks a binding rule (unbound projection
// variable, non-range-restricted rule, ...).
struct SemanticError : Error {
    explicit SemanticError(const std::string& msg) : Error(msg) {}
};

// A comparison was applied to a value of the wrong kind, e.g. ordering a
// non-numeric literal or an IRI.
struct TypeError : Error {
    explicit TypeError(const std::string& msg) : Error(msg) {}
};

// Arithmetic left its domain (zero denominator in a Bayes update).
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Remote document could not be fetched.
struct FetchError : Error {
    explicit FetchError(const std::string& msg) : Error(msg) {}
};

// Bad or missing configuration.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace medgraph
