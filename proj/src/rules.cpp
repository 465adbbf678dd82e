#include "medgraph/rules.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <type_traits>

#include "medgraph/decimal.hpp"
#include "medgraph/errors.hpp"
#include "lexer.hpp"

namespace medgraph {

using detail::Lexer;
using detail::Token;
using detail::TokenKind;

namespace {

[[noreturn]] void fail_at(const Lexer& lex, const std::string& reason) {
    throw RuleParseError(lex.peek().line, reason);
}

Term parse_rule_constant(Lexer& lex) {
    if (lex.at(TokenKind::IriRef)) {
        Token t = lex.take();
        if (!Iri::valid(t.text)) fail_at(lex, "malformed IRI: '" + t.text + "'");
        return Term(Iri(t.text));
    }
    if (lex.at(TokenKind::String)) {
        Token t = lex.take();
        Iri datatype = xsd::string_type();
        if (lex.at_symbol("^^")) {
            lex.take();
            if (!lex.at(TokenKind::IriRef)) fail_at(lex, "expected datatype IRI after '^^'");
            Token dt = lex.take();
            if (!Iri::valid(dt.text) || !xsd::supported(Iri(dt.text))) {
                fail_at(lex, "unsupported datatype: '" + dt.text + "'");
            }
            datatype = Iri(dt.text);
        }
        try {
            return Term(Literal(t.text, std::move(datatype)));
        } catch (const ValidationError& e) {
            fail_at(lex, e.what());
        }
    }
    if (lex.at(TokenKind::Number)) {
        Token t = lex.take();
        if (!is_valid_decimal(t.text)) fail_at(lex, "malformed number: '" + t.text + "'");
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
    fail_at(lex, "expected IRI, literal, number or true/false");
}

PatternTerm parse_rule_term(Lexer& lex) {
    if (lex.at(TokenKind::Variable)) return Variable(lex.take().text);
    return parse_rule_constant(lex);
}

// "(" term term term ")"
template <typename Triple>
Triple parse_parenthesized_triple(Lexer& lex, const char* what) {
    if (!lex.at_symbol("(")) fail_at(lex, std::string("expected '(' starting a ") + what);
    lex.take();
    PatternTerm s = parse_rule_term(lex);
    PatternTerm p = parse_rule_term(lex);
    PatternTerm o = parse_rule_term(lex);
    if (!lex.at_symbol(")")) fail_at(lex, std::string("expected ')' closing a ") + what);
    lex.take();
    if (!is_variable(s) && !as_term(s).is_iri()) {
        fail_at(lex, std::string(what) + " subject must be an IRI or variable");
    }
    if (!is_variable(p) && !as_term(p).is_iri()) {
        fail_at(lex, std::string(what) + " predicate must be an IRI or variable");
    }
    if constexpr (std::is_same_v<Triple, TriplePattern>) {
        return TriplePattern{std::move(s), std::move(p), std::move(o), GraphScope::any_graph()};
    } else {
        return TripleTemplate{std::move(s), std::move(p), std::move(o)};
    }
}

Comparator parse_rule_comparator(Lexer& lex) {
    if (!lex.at(TokenKind::Symbol)) fail_at(lex, "expected comparator");
    Token t = lex.take();
    if (t.text == "=") return Comparator::Eq;
    if (t.text == "!=") return Comparator::Ne;
    if (t.text == "<") return Comparator::Lt;
    if (t.text == "<=") return Comparator::Le;
    if (t.text == ">") return Comparator::Gt;
    if (t.text == ">=") return Comparator::Ge;
    throw RuleParseError(t.line, "expected one of = != < <= > >=");
}

void check_range_restriction(const Rule& rule) {
    std::set<Variable> bound;
    for (const TriplePattern& p : rule.antecedent) {
        for (const Variable& v : p.variables()) bound.insert(v);
    }
    for (const Filter& g : rule.guards) {
        if (!bound.count(g.var)) {
            throw SemanticError("rule " + rule.name + ": guard variable ?" + g.var.name +
                                " is not bound by the antecedent");
        }
    }
    auto check = [&](const PatternTerm& t) {
        if (is_variable(t) && !bound.count(as_variable(t))) {
            throw SemanticError("rule " + rule.name + ": consequent variable ?" +
                                as_variable(t).name + " is not bound by the antecedent");
        }
    };
    for (const TripleTemplate& t : rule.consequent) {
        check(t.subject);
        check(t.predicate);
        check(t.object);
    }
}

std::vector<Rule> parse_rules_impl(std::string_view text) {
    Lexer lex(text);
    std::vector<Rule> rules;
    std::set<std::string> names;

    while (!lex.at(TokenKind::End)) {
        if (!lex.at_keyword("RULE")) fail_at(lex, "expected RULE");
        lex.take();
        if (!lex.at(TokenKind::Ident)) fail_at(lex, "expected rule name");
        Rule rule;
        rule.name = lex.take().text;
        if (!names.insert(rule.name).second) {
            fail_at(lex, "duplicate rule name '" + rule.name + "'");
        }
        if (!lex.at_symbol(":")) fail_at(lex, "expected ':' after rule name");
        lex.take();

        rule.antecedent.push_back(parse_parenthesized_triple<TriplePattern>(lex, "pattern"));
        while (lex.at_symbol(",")) {
            lex.take();
            rule.antecedent.push_back(parse_parenthesized_triple<TriplePattern>(lex, "pattern"));
        }

        if (lex.at_keyword("WHERE")) {
            lex.take();
            while (true) {
                if (!lex.at(TokenKind::Variable)) fail_at(lex, "expected ?variable in guard");
                Variable var(lex.take().text);
                Comparator cmp = parse_rule_comparator(lex);
                Term constant = parse_rule_constant(lex);
                rule.guards.push_back(Filter{std::move(var), cmp, std::move(constant)});
                if (!lex.at_symbol(",")) break;
                lex.take();
            }
        }

        if (!lex.at_symbol("=>")) fail_at(lex, "expected '=>'");
        lex.take();
        rule.consequent.push_back(parse_parenthesized_triple<TripleTemplate>(lex, "template"));
        while (lex.at_symbol(",")) {
            lex.take();
            rule.consequent.push_back(parse_parenthesized_triple<TripleTemplate>(lex, "template"));
        }

        check_range_restriction(rule);
        rules.push_back(std::move(rule));
    }
    return rules;
}

}  // namespace

std::vector<Rule> parse_rules(std::string_view text) {
    try {
        return parse_rules_impl(text);
    } catch (const SyntaxError& e) {
        // lexer-level errors carry byte offsets; rule errors report lines
        std::size_t line = 1 + static_cast<std::size_t>(std::count(
                                   text.begin(),
                                   text.begin() + static_cast<std::ptrdiff_t>(
                                                      std::min(e.offset, text.size())),
                                   '\n'));
        throw RuleParseError(line, e.what());
    }
}

std::vector<Rule> load_rules_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open rules file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_rules(buf.str());
}

namespace {

std::optional<Quad> instantiate_template(const TripleTemplate& tmpl, const Solution& solution) {
    auto resolve = [&](const PatternTerm& t) -> Term {
        if (is_variable(t)) return solution.bindings.at(as_variable(t));
        return as_term(t);
    };
    Term subject = resolve(tmpl.subject);
    Term predicate = resolve(tmpl.predicate);
    Term object = resolve(tmpl.object);
    // a literal bound into subject/predicate position cannot form a quad
    if (!subject.is_iri() || !predicate.is_iri()) return std::nullopt;
    return Quad(subject.iri(), predicate.iri(), std::move(object), GraphName());
}

}  // namespace

ChainResult forward_chain(const std::vector<Rule>& rules, const Dataset& dataset) {
    ChainResult result{dataset, 0};

    bool changed = true;
    while (changed) {
        changed = false;
        for (const Rule& rule : rules) {
            SelectQuery query;
            query.select_all = true;
            query.patterns = rule.antecedent;
            query.filters = rule.guards;
            for (const Solution& match : evaluate_query(query, result.dataset)) {
                for (const TripleTemplate& tmpl : rule.consequent) {
                    std::optional<Quad> quad = instantiate_template(tmpl, match);
                    if (quad && result.dataset.add(std::move(*quad))) {
                        ++result.inferred;
                        changed = true;
                    }
                }
            }
        }
    }
    return result;
}

AlarmSweep collect_alarms(const Dataset& dataset, Probability threshold, const Vocabulary& vocab) {
    AlarmSweep sweep;
    std::string threshold_lexical = format_probability(threshold.value());

    // patients with a risk score, sorted and deduplicated across graphs
    std::set<Iri> patients;
    for (const Quad& q : dataset.match(QuadPattern{{}, vocab.risk_score(), {}, {}})) {
        patients.insert(q.subject);
    }

    std::uint64_t sequence = 0;
    for (const Iri& patient : patients) {
        std::optional<std::string> best;
        for (const Quad& q : dataset.match(QuadPattern{patient, vocab.risk_score(), {}, {}})) {
            if (!q.object.is_literal() || !q.object.literal().is_decimal()) {
                throw TypeError("riskScore of " + patient.value() + " is not numeric");
            }
            const std::string& lexical = q.object.literal().lexical();
            if (!best || compare_decimal(lexical, *best) > 0) best = lexical;
        }
        if (compare_decimal(*best, threshold_lexical) < 0) continue;

        std::set<Iri> doctors;
        for (const Quad& q : dataset.match(QuadPattern{patient, vocab.treated_by(), {}, {}})) {
            if (q.object.is_iri()) doctors.insert(q.object.iri());
        }
        if (doctors.empty()) {
            sweep.missing_doctor.push_back(patient);
            continue;
        }
        sweep.alarms.push_back(Alarm{patient, *doctors.begin(), std::stod(*best),
                                     threshold.value(), ++sequence});
    }
    return sweep;
}

}  // namespace medgraph
