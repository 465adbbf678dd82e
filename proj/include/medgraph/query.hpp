#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "medgraph/dataset.hpp"

namespace medgraph {

struct Variable {
    std::string name;  // without the leading '?'

    explicit Variable(std::string n);
    auto operator<=>(const Variable&) const = default;
};

// A pattern position: a variable or a concrete term.
using PatternTerm = std::variant<Variable, Term>;

bool is_variable(const PatternTerm& t);
const Variable& as_variable(const PatternTerm& t);
const Term& as_term(const PatternTerm& t);

// Where a pattern looks for quads.
//   Default — the default graph only (or every graph in union mode)
//   Any     — every graph; used by rule antecedents
//   Named   — one named graph
//   Var     — every named graph, binding the variable to the graph IRI
class GraphScope {
public:
    enum class Kind { Default, Any, Named, Var };

    static GraphScope default_graph() { return GraphScope(Kind::Default, {}, {}); }
    static GraphScope any_graph() { return GraphScope(Kind::Any, {}, {}); }
    static GraphScope named(Iri iri) { return GraphScope(Kind::Named, std::move(iri), {}); }
    static GraphScope var(Variable v) { return GraphScope(Kind::Var, {}, std::move(v)); }

    Kind kind() const { return kind_; }
    const Iri& iri() const { return *iri_; }
    const Variable& variable() const { return *var_; }

private:
    GraphScope(Kind k, std::optional<Iri> iri, std::optional<Variable> var)
        : kind_(k), iri_(std::move(iri)), var_(std::move(var)) {}

    Kind kind_;
    std::optional<Iri> iri_;
    std::optional<Variable> var_;
};

struct TriplePattern {
    PatternTerm subject;
    PatternTerm predicate;  // never a Literal; enforced by parsers
    PatternTerm object;
    GraphScope scope = GraphScope::default_graph();

    // Variables this pattern can bind, including a graph-scope variable.
    std::vector<Variable> variables() const;
};

enum class Comparator { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view comparator_symbol(Comparator c);

struct Filter {
    Variable var;
    Comparator cmp;
    Term constant;
};

struct SelectQuery {
    bool select_all = false;
    std::vector<Variable> projection;  // empty when select_all
    std::vector<TriplePattern> patterns;
    std::vector<Filter> filters;
    std::optional<std::size_t> limit;

    // Distinct variables over all patterns, in first-appearance order.
    std::vector<Variable> pattern_variables() const;
};

struct Solution {
    std::map<Variable, Term> bindings;

    bool operator==(const Solution&) const = default;
    bool operator<(const Solution& other) const { return bindings < other.bindings; }
};

struct EvalOptions {
    // When set, default-scope patterns match quads in every graph. Used by
    // the link-traversal executor, where each fetched document is its own
    // named graph.
    bool union_default_graph = false;
};

// Grammar:
//   query  := "SELECT" ("*" | var+) "WHERE" "{" block "}" ("LIMIT" int)?
//   block  := (triple | group | filter)+
//   group  := "GRAPH" (iri | var) "{" (triple | filter)+ "}"
//   triple := term term term "."
//   filter := "FILTER" "(" var cmp constant ")"
// Terms are ?vars, <iri>s, "strings" (optionally ^^<datatype>), bare decimal
// numbers, or true/false. Throws SyntaxError with a byte offset, or
// SemanticError when a projected or filtered variable is not bound by any
// pattern.
SelectQuery parse_query(std::string_view text);

// Natural join over the patterns, then filters, projection, deterministic
// sort and LIMIT. Result order is sorted by serialized bindings so repeated
// runs are byte-identical.
std::vector<Solution> evaluate_query(const SelectQuery& query, const Dataset& dataset,
                                     const EvalOptions& options = {});

// True iff the solution satisfies the filter. Order comparators require
// xsd:decimal literals on both sides and throw TypeError otherwise; =/!=
// compare terms, numerically when both sides are decimals.
bool filter_passes(const Filter& filter, const Solution& solution);

// Tab-separated rendering: header row of variable names, one row per
// solution with serialized terms.
std::string render_solutions_tsv(const SelectQuery& query, const std::vector<Solution>& solutions);

}  // namespace medgraph
