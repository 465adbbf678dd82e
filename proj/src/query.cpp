#include "medgraph/query.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "medgraph/decimal.hpp"
#include "medgraph/errors.hpp"
#include "lexer.hpp"

namespace medgraph {

using detail::Lexer;
using detail::Token;
using detail::TokenKind;

Variable::Variable(std::string n) : name(std::move(n)) {
    if (name.empty()) throw ValidationError("variable", "empty variable name");
    for (char c : name) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') {
            throw ValidationError("variable", "bad variable name: '" + name + "'");
        }
    }
}

bool is_variable(const PatternTerm& t) {
    return std::holds_alternative<Variable>(t);
}
const Variable& as_variable(const PatternTerm& t) {
    return std::get<Variable>(t);
}
const Term& as_term(const PatternTerm& t) {
    return std::get<Term>(t);
}

std::vector<Variable> TriplePattern::variables() const {
    std::vector<Variable> out;
    auto push = [&](const PatternTerm& t) {
        if (is_variable(t)) out.push_back(as_variable(t));
    };
    push(subject);
    push(predicate);
    push(object);
    if (scope.kind() == GraphScope::Kind::Var) out.push_back(scope.variable());
    return out;
}

std::string_view comparator_symbol(Comparator c) {
    switch (c) {
        case Comparator::Eq: return "=";
        case Comparator::Ne: return "!=";
        case Comparator::Lt: return "<";
        case Comparator::Le: return "<=";
        case Comparator::Gt: return ">";
        case Comparator::Ge: return ">=";
    }
    return "?";
}

std::vector<Variable> SelectQuery::pattern_variables() const {
    std::vector<Variable> out;
    std::set<Variable> seen;
    for (const TriplePattern& p : patterns) {
        for (const Variable& v : p.variables()) {
            if (seen.insert(v).second) out.push_back(v);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

Term parse_constant_term(Lexer& lex) {
    if (lex.at(TokenKind::IriRef)) {
        Token t = lex.take();
        if (!Iri::valid(t.text)) throw SyntaxError(t.offset, "valid absolute IRI");
        return Term(Iri(t.text));
    }
    if (lex.at(TokenKind::String)) {
        Token t = lex.take();
        Iri datatype = xsd::string_type();
        if (lex.at_symbol("^^")) {
            lex.take();
            if (!lex.at(TokenKind::IriRef)) lex.fail("datatype IRI after '^^'");
            Token dt = lex.take();
            if (!Iri::valid(dt.text)) throw SyntaxError(dt.offset, "valid datatype IRI");
            datatype = Iri(dt.text);
            if (!xsd::supported(datatype)) {
                throw SyntaxError(dt.offset, "one of xsd:string/decimal/boolean/dateTime");
            }
        }
        try {
            return Term(Literal(t.text, std::move(datatype)));
        } catch (const ValidationError& e) {
            throw SyntaxError(t.offset, std::string("valid literal (") + e.what() + ")");
        }
    }
    if (lex.at(TokenKind::Number)) {
        Token t = lex.take();
        if (!is_valid_decimal(t.text)) throw SyntaxError(t.offset, "decimal number");
        return Term(Literal::decimal(t.text));
    }
    if (lex.at_keyword("TRUE")) {
        lex.take();
        return Term(Literal::boolean(true));
    }
    if (lex.at_keyword("FALSE")) {
        lex.take();
        return Term(Literal::boolean(false));
    }
    lex.fail("IRI, literal, number or true/false");
}

PatternTerm parse_pattern_term(Lexer& lex) {
    if (lex.at(TokenKind::Variable)) {
        return Variable(lex.take().text);
    }
    return parse_constant_term(lex);
}

Comparator parse_comparator(Lexer& lex) {
    if (!lex.at(TokenKind::Symbol)) lex.fail("comparator");
    Token t = lex.take();
    if (t.text == "=") return Comparator::Eq;
    if (t.text == "!=") return Comparator::Ne;
    if (t.text == "<") return Comparator::Lt;
    if (t.text == "<=") return Comparator::Le;
    if (t.text == ">") return Comparator::Gt;
    if (t.text == ">=") return Comparator::Ge;
    throw SyntaxError(t.offset, "one of = != < <= > >=");
}

TriplePattern parse_triple(Lexer& lex, const GraphScope& scope) {
    std::size_t start = lex.peek().offset;
    TriplePattern p{parse_pattern_term(lex), parse_pattern_term(lex), parse_pattern_term(lex),
                    scope};
    if (!is_variable(p.subject) && !as_term(p.subject).is_iri()) {
        throw SyntaxError(start, "IRI or variable in subject position");
    }
    if (!is_variable(p.predicate) && !as_term(p.predicate).is_iri()) {
        throw SyntaxError(start, "IRI or variable in predicate position");
    }
    lex.expect_symbol(".");
    return p;
}

Filter parse_filter(Lexer& lex) {
    lex.expect_keyword("FILTER");
    lex.expect_symbol("(");
    if (!lex.at(TokenKind::Variable)) lex.fail("variable in FILTER");
    Variable var(lex.take().text);
    Comparator cmp = parse_comparator(lex);
    Term constant = parse_constant_term(lex);
    lex.expect_symbol(")");
    return Filter{std::move(var), cmp, std::move(constant)};
}

void parse_block(Lexer& lex, SelectQuery& query, bool inside_group) {
    bool saw_any = false;
    while (true) {
        if (lex.at_symbol("}")) break;
        if (lex.at(TokenKind::End)) lex.fail("'}'");
        if (lex.at_keyword("FILTER")) {
            query.filters.push_back(parse_filter(lex));
            saw_any = true;
            continue;
        }
        if (!inside_group && lex.at_keyword("GRAPH")) {
            lex.take();
            GraphScope scope = GraphScope::default_graph();
            if (lex.at(TokenKind::Variable)) {
                scope = GraphScope::var(Variable(lex.take().text));
            } else if (lex.at(TokenKind::IriRef)) {
                Token t = lex.take();
                if (!Iri::valid(t.text)) throw SyntaxError(t.offset, "valid graph IRI");
                scope = GraphScope::named(Iri(t.text));
            } else {
                lex.fail("graph IRI or variable after GRAPH");
            }
            lex.expect_symbol("{");
            bool saw_triple = false;
            while (!lex.at_symbol("}")) {
                if (lex.at(TokenKind::End)) lex.fail("'}'");
                if (lex.at_keyword("FILTER")) {
                    query.filters.push_back(parse_filter(lex));
                    continue;
                }
                query.patterns.push_back(parse_triple(lex, scope));
                saw_triple = true;
            }
            lex.take();  // '}'
            if (!saw_triple) lex.fail("at least one triple inside GRAPH group");
            saw_any = true;
            continue;
        }
        if (lex.at(TokenKind::Ident) && !lex.at_keyword("TRUE") && !lex.at_keyword("FALSE")) {
            lex.fail("triple, GRAPH group or FILTER");  // unknown keyword
        }
        query.patterns.push_back(parse_triple(lex, GraphScope::default_graph()));
        saw_any = true;
    }
    if (!saw_any) lex.fail("at least one triple pattern");
}

}  // namespace

SelectQuery parse_query(std::string_view text) {
    Lexer lex(text);
    SelectQuery query;

    lex.expect_keyword("SELECT");
    if (lex.at_symbol("*")) {
        lex.take();
        query.select_all = true;
    } else {
        while (lex.at(TokenKind::Variable)) {
            query.projection.emplace_back(lex.take().text);
        }
        if (query.projection.empty()) lex.fail("'*' or at least one ?variable");
    }

    lex.expect_keyword("WHERE");
    lex.expect_symbol("{");
    parse_block(lex, query, false);
    lex.expect_symbol("}");

    if (lex.at_keyword("LIMIT")) {
        lex.take();
        if (!lex.at(TokenKind::Number)) lex.fail("positive integer after LIMIT");
        Token t = lex.take();
        if (t.text.find_first_not_of("0123456789") != std::string::npos || t.text == "0") {
            throw SyntaxError(t.offset, "positive integer after LIMIT");
        }
        query.limit = std::stoull(t.text);
    }
    if (!lex.at(TokenKind::End)) lex.fail("end of query");

    // semantic checks: projected and filtered variables must be bound
    std::set<Variable> bound;
    for (const Variable& v : query.pattern_variables()) bound.insert(v);
    for (const Variable& v : query.projection) {
        if (!bound.count(v)) {
            throw SemanticError("projected variable ?" + v.name + " is not bound by any pattern");
        }
    }
    for (const Filter& f : query.filters) {
        if (!bound.count(f.var)) {
            throw SemanticError("filter variable ?" + f.var.name + " is not bound by any pattern");
        }
    }
    return query;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

// A pattern with bound variables substituted in. `impossible` marks a
// substitution that can never match (e.g. a literal in subject position).
struct InstantiatedPattern {
    QuadPattern quad_pattern;
    bool impossible = false;
    bool graph_var_unbound = false;
};

InstantiatedPattern instantiate(const TriplePattern& pattern, const Solution& solution,
                                const EvalOptions& options) {
    InstantiatedPattern out;

    auto lookup = [&](const Variable& v) -> const Term* {
        auto it = solution.bindings.find(v);
        return it == solution.bindings.end() ? nullptr : &it->second;
    };

    auto fill_iri_slot = [&](const PatternTerm& t, std::optional<Iri>& slot) {
        if (is_variable(t)) {
            if (const Term* bound = lookup(as_variable(t))) {
                if (!bound->is_iri()) {
                    out.impossible = true;
                    return;
                }
                slot = bound->iri();
            }
        } else {
            slot = as_term(t).iri();
        }
    };

    fill_iri_slot(pattern.subject, out.quad_pattern.subject);
    fill_iri_slot(pattern.predicate, out.quad_pattern.predicate);

    if (is_variable(pattern.object)) {
        if (const Term* bound = lookup(as_variable(pattern.object))) {
            out.quad_pattern.object = *bound;
        }
    } else {
        out.quad_pattern.object = as_term(pattern.object);
    }

    switch (pattern.scope.kind()) {
        case GraphScope::Kind::Default:
            if (!options.union_default_graph) out.quad_pattern.graph = GraphName();
            break;
        case GraphScope::Kind::Any:
            break;
        case GraphScope::Kind::Named:
            out.quad_pattern.graph = GraphName(pattern.scope.iri());
            break;
        case GraphScope::Kind::Var:
            if (const Term* bound = lookup(pattern.scope.variable())) {
                if (!bound->is_iri()) {
                    out.impossible = true;
                } else {
                    out.quad_pattern.graph = GraphName(bound->iri());
                }
            } else {
                out.graph_var_unbound = true;
            }
            break;
    }
    return out;
}

// Extends `solution` with the bindings this quad induces. Returns false when
// a variable repeated inside the pattern would get two different values.
bool extend(Solution& solution, const TriplePattern& pattern, const Quad& quad) {
    auto bind = [&](const Variable& v, const Term& value) {
        auto it = solution.bindings.find(v);
        if (it != solution.bindings.end()) return it->second == value;
        solution.bindings.emplace(v, value);
        return true;
    };

    if (is_variable(pattern.subject) && !bind(as_variable(pattern.subject), Term(quad.subject)))
        return false;
    if (is_variable(pattern.predicate) && !bind(as_variable(pattern.predicate), Term(quad.predicate)))
        return false;
    if (is_variable(pattern.object) && !bind(as_variable(pattern.object), quad.object)) return false;
    if (pattern.scope.kind() == GraphScope::Kind::Var) {
        if (quad.graph.is_default()) return false;  // GRAPH ?g ranges over named graphs
        if (!bind(pattern.scope.variable(), Term(*quad.graph.iri()))) return false;
    }
    return true;
}

std::string solution_sort_key(const Solution& solution, const std::vector<Variable>& display) {
    std::string key;
    for (const Variable& v : display) {
        auto it = solution.bindings.find(v);
        if (it != solution.bindings.end()) key += serialize(it->second);
        key += '\x1f';
    }
    return key;
}

}  // namespace

bool filter_passes(const Filter& filter, const Solution& solution) {
    auto it = solution.bindings.find(filter.var);
    if (it == solution.bindings.end()) {
        throw SemanticError("filter variable ?" + filter.var.name + " is unbound");
    }
    const Term& value = it->second;

    if (filter.cmp == Comparator::Eq || filter.cmp == Comparator::Ne) {
        bool equal;
        if (value.is_literal() && filter.constant.is_literal() && value.literal().is_decimal() &&
            filter.constant.literal().is_decimal()) {
            equal = compare_decimal(value.literal().lexical(),
                                    filter.constant.literal().lexical()) == 0;
        } else {
            equal = value == filter.constant;
        }
        return filter.cmp == Comparator::Eq ? equal : !equal;
    }

    if (!value.is_literal() || !value.literal().is_decimal()) {
        throw TypeError("?" + filter.var.name +
                        ": ordered comparison requires an xsd:decimal value");
    }
    if (!filter.constant.is_literal() || !filter.constant.literal().is_decimal()) {
        throw TypeError("?" + filter.var.name +
                        ": ordered comparison against a non-numeric constant");
    }
    int c = compare_decimal(value.literal().lexical(), filter.constant.literal().lexical());
    switch (filter.cmp) {
        case Comparator::Lt: return c < 0;
        case Comparator::Le: return c <= 0;
        case Comparator::Gt: return c > 0;
        case Comparator::Ge: return c >= 0;
        default: return false;  // unreachable
    }
}

std::vector<Solution> evaluate_query(const SelectQuery& query, const Dataset& dataset,
                                     const EvalOptions& options) {
    // Greedy join order: cheapest estimated pattern first. The estimate only
    // affects speed; any order yields the same multiset of solutions.
    std::vector<std::size_t> order(query.patterns.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::size_t> estimates(query.patterns.size());
    for (std::size_t i = 0; i < query.patterns.size(); ++i) {
        estimates[i] =
            dataset.estimate_matches(instantiate(query.patterns[i], Solution{}, options).quad_pattern);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return estimates[a] < estimates[b]; });

    std::vector<Solution> partials{Solution{}};
    for (std::size_t idx : order) {
        const TriplePattern& pattern = query.patterns[idx];
        std::vector<Solution> next;
        for (const Solution& sol : partials) {
            InstantiatedPattern inst = instantiate(pattern, sol, options);
            if (inst.impossible) continue;
            for (const Quad& quad : dataset.match(inst.quad_pattern)) {
                if (inst.graph_var_unbound && quad.graph.is_default()) continue;
                Solution extended = sol;
                if (extend(extended, pattern, quad)) next.push_back(std::move(extended));
            }
        }
        partials = std::move(next);
        if (partials.empty()) break;
    }

    for (const Filter& f : query.filters) {
        std::erase_if(partials, [&](const Solution& s) { return !filter_passes(f, s); });
    }

    std::vector<Variable> display = query.select_all ? query.pattern_variables() : query.projection;
    std::vector<Solution> projected;
    projected.reserve(partials.size());
    for (const Solution& s : partials) {
        Solution p;
        for (const Variable& v : display) {
            auto it = s.bindings.find(v);
            if (it != s.bindings.end()) p.bindings.emplace(v, it->second);
        }
        projected.push_back(std::move(p));
    }

    std::sort(projected.begin(), projected.end(), [&](const Solution& a, const Solution& b) {
        return solution_sort_key(a, display) < solution_sort_key(b, display);
    });

    if (query.limit && projected.size() > *query.limit) {
        projected.resize(*query.limit);
    }
    return projected;
}

std::string render_solutions_tsv(const SelectQuery& query, const std::vector<Solution>& solutions) {
    std::vector<Variable> display = query.select_all ? query.pattern_variables() : query.projection;
    std::string out;
    for (std::size_t i = 0; i < display.size(); ++i) {
        if (i) out += '\t';
        out += "?" + display[i].name;
    }
    out += '\n';
    for (const Solution& s : solutions) {
        for (std::size_t i = 0; i < display.size(); ++i) {
            if (i) out += '\t';
            auto it = s.bindings.find(display[i]);
            if (it != s.bindings.end()) out += serialize(it->second);
        }
        out += '\n';
    }
    return out;
}

}  // namespace medgraph
