#pragma once

// Token stream shared by the query and rule parsers. Not installed.

#include <cctype>
#include <string>
#include <string_view>

#include "medgraph/errors.hpp"

namespace medgraph::detail {

enum class TokenKind {
    End,
    Ident,      // bare word: keywords, rule names
    Variable,   // ?name (text excludes the '?')
    IriRef,     // <...> (text excludes the brackets)
    String,     // "..." (text is the unescaped lexical form)
    Number,     // decimal literal sugar
    Symbol,     // one of { } ( ) . , plus comparators and =>
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    std::size_t offset = 0;  // byte offset of the first character
    std::size_t line = 1;    // 1-based line of the first character
};

class Lexer {
public:
    explicit Lexer(std::string_view input) : input_(input) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& expected) const {
        throw SyntaxError(current_.offset, expected);
    }

    bool at(TokenKind kind) const { return current_.kind == kind; }

    bool at_symbol(std::string_view sym) const {
        return current_.kind == TokenKind::Symbol && current_.text == sym;
    }

    // Case-insensitive keyword check against an upper-case spelling.
    bool at_keyword(std::string_view upper) const {
        if (current_.kind != TokenKind::Ident) return false;
        if (current_.text.size() != upper.size()) return false;
        for (std::size_t i = 0; i < upper.size(); ++i) {
            if (std::toupper(static_cast<unsigned char>(current_.text[i])) != upper[i]) return false;
        }
        return true;
    }

    Token expect_symbol(std::string_view sym) {
        if (!at_symbol(sym)) fail("'" + std::string(sym) + "'");
        return take();
    }

    Token expect_keyword(std::string_view upper) {
        if (!at_keyword(upper)) fail(std::string(upper));
        return take();
    }

private:
    void advance() {
        skip_trivia();
        current_ = Token{};
        current_.offset = pos_;
        current_.line = line_;
        if (pos_ >= input_.size()) {
            current_.kind = TokenKind::End;
            return;
        }
        char c = input_[pos_];
        if (c == '?') {
            ++pos_;
            current_.kind = TokenKind::Variable;
            current_.text = read_while([](char ch) {
                return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
            });
            if (current_.text.empty()) throw SyntaxError(current_.offset, "variable name after '?'");
            return;
        }
        if (c == '<') {
            // '<...>' is an IRI reference only if '>' arrives before any
            // whitespace; otherwise this is the < or <= comparator.
            std::size_t probe = pos_ + 1;
            while (probe < input_.size() && input_[probe] != '>' &&
                   !std::isspace(static_cast<unsigned char>(input_[probe]))) {
                ++probe;
            }
            if (probe < input_.size() && input_[probe] == '>') {
                current_.kind = TokenKind::IriRef;
                current_.text = std::string(input_.substr(pos_ + 1, probe - pos_ - 1));
                pos_ = probe + 1;
                return;
            }
            current_.kind = TokenKind::Symbol;
            if (pos_ + 1 < input_.size() && input_[pos_ + 1] == '=') {
                current_.text = "<=";
                pos_ += 2;
            } else {
                current_.text = "<";
                ++pos_;
            }
            return;
        }
        if (c == '"') {
            current_.kind = TokenKind::String;
            current_.text = read_string();
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            ((c == '-' || c == '+') && pos_ + 1 < input_.size() &&
             (std::isdigit(static_cast<unsigned char>(input_[pos_ + 1])) || input_[pos_ + 1] == '.')) ||
            (c == '.' && pos_ + 1 < input_.size() &&
             std::isdigit(static_cast<unsigned char>(input_[pos_ + 1])))) {
            current_.kind = TokenKind::Number;
            current_.text = read_while([](char ch) {
                return std::isdigit(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-' || ch == '+';
            });
            // do not swallow a statement terminator: "5." is Number "5" + "."
            if (current_.text.size() > 1 && current_.text.back() == '.') {
                current_.text.pop_back();
                --pos_;
            }
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            current_.kind = TokenKind::Ident;
            current_.text = read_while([](char ch) {
                return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-';
            });
            return;
        }
        current_.kind = TokenKind::Symbol;
        // multi-character symbols first
        auto two = input_.substr(pos_, 2);
        if (two == "=>" || two == ">=" || two == "!=" || two == "^^") {
            current_.text = std::string(two);
            pos_ += 2;
            return;
        }
        current_.text = std::string(1, c);
        ++pos_;
    }

    void skip_trivia() {
        while (pos_ < input_.size()) {
            char c = input_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < input_.size() && input_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    template <typename Pred>
    std::string read_while(Pred pred) {
        std::size_t start = pos_;
        while (pos_ < input_.size() && pred(input_[pos_])) ++pos_;
        return std::string(input_.substr(start, pos_ - start));
    }

    std::string read_string() {
        // pos_ at opening quote
        std::size_t start_offset = pos_;
        ++pos_;
        std::string out;
        while (true) {
            if (pos_ >= input_.size()) throw SyntaxError(start_offset, "closing '\"'");
            char c = input_[pos_];
            if (c == '"') {
                ++pos_;
                return out;
            }
            if (c == '\\') {
                if (pos_ + 1 >= input_.size()) throw SyntaxError(pos_, "escape sequence");
                char e = input_[pos_ + 1];
                pos_ += 2;
                switch (e) {
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case 'r': out += '\r'; break;
                    default: throw SyntaxError(pos_ - 1, "valid escape");
                }
            } else {
                if (c == '\n') ++line_;
                out += c;
                ++pos_;
            }
        }
    }

    std::string_view input_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    Token current_;
};

}  // namespace medgraph::detail
