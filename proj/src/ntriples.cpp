#include "medgraph/ntriples.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "medgraph/errors.hpp"

namespace medgraph {

namespace {

// Cursor over a single line. All errors reference the line's 1-based number.
class LineParser {
public:
    LineParser(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

    void skip_ws() {
        while (pos_ < line_.size() && is_ws(line_[pos_])) ++pos_;
    }

    bool at_end() const { return pos_ >= line_.size(); }
    char peek() const { return line_[pos_]; }

    [[noreturn]] void fail(const std::string& reason) const {
        throw NtParseError(line_no_, reason);
    }

    Iri read_iriref() {
        if (at_end() || peek() != '<') fail("expected '<'");
        ++pos_;
        std::size_t start = pos_;
        while (pos_ < line_.size() && line_[pos_] != '>') ++pos_;
        if (pos_ >= line_.size()) fail("unterminated IRI");
        std::string value(line_.substr(start, pos_ - start));
        ++pos_;
        if (!Iri::valid(value)) fail("malformed IRI: '" + value + "'");
        return Iri(std::move(value));
    }

    Literal read_literal() {
        if (at_end() || peek() != '"') fail("expected '\"'");
        ++pos_;
        std::string lexical;
        while (true) {
            if (pos_ >= line_.size()) fail("unterminated literal");
            char c = line_[pos_];
            if (c == '"') {
                ++pos_;
                break;
            }
            if (c == '\\') {
                lexical += read_escape();
            } else {
                lexical += c;
                ++pos_;
            }
        }
        Iri datatype = xsd::string_type();
        if (pos_ + 1 < line_.size() && line_[pos_] == '^' && line_[pos_ + 1] == '^') {
            pos_ += 2;
            datatype = read_iriref();
            if (!xsd::supported(datatype)) {
                fail("unsupported literal datatype: " + datatype.value());
            }
        }
        try {
            return Literal(std::move(lexical), std::move(datatype));
        } catch (const ValidationError& e) {
            fail(e.what());
        }
    }

    Term read_term() {
        if (at_end()) fail("expected term");
        if (peek() == '<') return Term(read_iriref());
        if (peek() == '"') return Term(read_literal());
        fail("expected '<' or '\"'");
    }

    void expect_dot_then_end() {
        skip_ws();
        if (at_end() || peek() != '.') fail("expected '.'");
        ++pos_;
        skip_ws();
        if (!at_end()) fail("unexpected content after '.'");
    }

private:
    static bool is_ws(char c) { return c == ' ' || c == '\t'; }

    std::string read_escape() {
        // pos_ is at the backslash
        if (pos_ + 1 >= line_.size()) fail("dangling escape");
        char c = line_[pos_ + 1];
        pos_ += 2;
        switch (c) {
            case '"': return "\"";
            case '\\': return "\\";
            case 'n': return "\n";
            case 't': return "\t";
            case 'r': return "\r";
            case 'u': {
                if (pos_ + 4 > line_.size()) fail("truncated \\u escape");
                unsigned code = 0;
                for (int i = 0; i < 4; ++i) {
                    char h = line_[pos_ + i];
                    code <<= 4;
                    if (h >= '0' && h <= '9') code |= h - '0';
                    else if (h >= 'a' && h <= 'f') code |= h - 'a' + 10;
                    else if (h >= 'A' && h <= 'F') code |= h - 'A' + 10;
                    else fail("bad hex digit in \\u escape");
                }
                pos_ += 4;
                return encode_utf8(code);
            }
            default:
                fail(std::string("unknown escape '\\") + c + "'");
        }
    }

    static std::string encode_utf8(unsigned code) {
        std::string out;
        if (code < 0x80) {
            out += static_cast<char>(code);
        } else if (code < 0x800) {
            out += static_cast<char>(0xC0 | (code >> 6));
            out += static_cast<char>(0x80 | (code & 0x3F));
        } else {
            out += static_cast<char>(0xE0 | (code >> 12));
            out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (code & 0x3F));
        }
        return out;
    }

    std::string_view line_;
    std::size_t line_no_;
    std::size_t pos_ = 0;
};

enum class GraphTerms { Forbidden, Allowed };

std::vector<Quad> parse_lines(std::string_view text, const GraphName& fixed_graph,
                              GraphTerms graph_terms) {
    std::vector<Quad> out;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;

        std::size_t first = line.find_first_not_of(" \t");
        if (first != std::string_view::npos && line[first] != '#') {
            LineParser p(line, line_no);
            p.skip_ws();
            Iri subject = p.read_iriref();
            p.skip_ws();
            Iri predicate = p.read_iriref();
            p.skip_ws();
            Term object = p.read_term();
            p.skip_ws();
            GraphName graph = fixed_graph;
            if (!p.at_end() && p.peek() == '<') {
                if (graph_terms == GraphTerms::Forbidden) {
                    p.fail("graph term not allowed in N-Triples input");
                }
                graph = GraphName(p.read_iriref());
            }
            p.expect_dot_then_end();
            out.emplace_back(std::move(subject), std::move(predicate), std::move(object),
                             std::move(graph));
        }

        if (end == text.size()) break;
        start = end + 1;
    }
    return out;
}

}  // namespace

std::vector<Quad> parse_ntriples(std::string_view text, const GraphName& graph) {
    return parse_lines(text, graph, GraphTerms::Forbidden);
}

std::vector<Quad> parse_nquads(std::string_view text) {
    return parse_lines(text, GraphName(), GraphTerms::Allowed);
}

std::string serialize_canonical(const Dataset& dataset) {
    std::string out;
    for (const Quad& q : dataset.quads()) {
        out += serialize(q.subject);
        out += ' ';
        out += serialize(q.predicate);
        out += ' ';
        out += serialize(q.object);
        if (!q.graph.is_default()) {
            out += ' ';
            out += serialize(*q.graph.iri());
        }
        out += " .\n";
    }
    return out;
}

Dataset dataset_from_nquads(std::string_view text) {
    Dataset d;
    for (Quad& q : parse_nquads(text)) d.add(std::move(q));
    return d;
}

Dataset load_nquads_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return dataset_from_nquads(buf.str());
}

}  // namespace medgraph
