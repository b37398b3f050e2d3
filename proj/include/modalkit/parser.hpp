#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "modalkit/formula.hpp"

// Recursive-descent parser for the formula language. Tokens:
//   ~ & | -> <-> [] <> A- A+ E- E+ ( ) . ,
//   keywords: all ex allp exp Pos Ess
//   identifiers: [a-zA-Z][a-zA-Z0-9_]*
// '#' starts a line comment. Operator precedence, tightest first:
// unary (~ [] <> A- A+ E- E+), &, |, -> (right associative), <->.
// Quantifier prefixes (all/ex/allp/exp and the sugared temporal binders
// "E- x. ...") bind to the longest formula to their right.

namespace modalkit {

struct ParseError : std::runtime_error {
    int line = 0;
    int col = 0;
    std::vector<std::string> expected;

    ParseError(std::string msg, int line_, int col_, std::vector<std::string> exp = {})
        : std::runtime_error(std::move(msg)), line(line_), col(col_), expected(std::move(exp)) {}
};

namespace detail {

enum class Tok {
    Ident, Not, And, Or, Implies, Iff, Box, Dia,
    PastAll, PastEx, FutAll, FutEx,
    LParen, RParen, Dot, Comma, End,
};

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

inline const char* tok_name(Tok t) {
    switch (t) {
        case Tok::Ident: return "identifier";
        case Tok::Not: return "'~'";
        case Tok::And: return "'&'";
        case Tok::Or: return "'|'";
        case Tok::Implies: return "'->'";
        case Tok::Iff: return "'<->'";
        case Tok::Box: return "'[]'";
        case Tok::Dia: return "'<>'";
        case Tok::PastAll: return "'A-'";
        case Tok::PastEx: return "'E-'";
        case Tok::FutAll: return "'A+'";
        case Tok::FutEx: return "'E+'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Dot: return "'.'";
        case Tok::Comma: return "','";
        case Tok::End: return "end of input";
    }
    return "?";
}

inline std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto push = [&](Tok k, std::string s, int l, int c) { out.push_back({k, std::move(s), l, c}); };
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') { ++line; col = 1; ++i; continue; }
        if (c == ' ' || c == '\t' || c == '\r') { ++col; ++i; continue; }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        int l = line, co = col;
        auto adv = [&](size_t k) { i += k; col += static_cast<int>(k); };
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
            std::string word = text.substr(i, j - i);
            if ((word == "A" || word == "E") && j < text.size() && (text[j] == '-' || text[j] == '+')) {
                bool past = text[j] == '-';
                Tok k = word == "A" ? (past ? Tok::PastAll : Tok::FutAll) : (past ? Tok::PastEx : Tok::FutEx);
                push(k, word + text[j], l, co);
                adv(word.size() + 1);
                continue;
            }
            push(Tok::Ident, word, l, co);
            adv(word.size());
            continue;
        }
        switch (c) {
            case '~': push(Tok::Not, "~", l, co); adv(1); continue;
            case '&': push(Tok::And, "&", l, co); adv(1); continue;
            case '|': push(Tok::Or, "|", l, co); adv(1); continue;
            case '(': push(Tok::LParen, "(", l, co); adv(1); continue;
            case ')': push(Tok::RParen, ")", l, co); adv(1); continue;
            case '.': push(Tok::Dot, ".", l, co); adv(1); continue;
            case ',': push(Tok::Comma, ",", l, co); adv(1); continue;
            case '-':
                if (i + 1 < text.size() && text[i + 1] == '>') { push(Tok::Implies, "->", l, co); adv(2); continue; }
                throw ParseError("unexpected '-'", l, co, {"'->'"});
            case '<':
                if (i + 2 < text.size() && text[i + 1] == '-' && text[i + 2] == '>') {
                    push(Tok::Iff, "<->", l, co); adv(3); continue;
                }
                if (i + 1 < text.size() && text[i + 1] == '>') { push(Tok::Dia, "<>", l, co); adv(2); continue; }
                throw ParseError("unexpected '<'", l, co, {"'<>'", "'<->'"});
            case '[':
                if (i + 1 < text.size() && text[i + 1] == ']') { push(Tok::Box, "[]", l, co); adv(2); continue; }
                throw ParseError("unexpected '['", l, co, {"'[]'"});
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", l, co);
        }
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> toks, std::set<std::string> registry)
        : toks_(std::move(toks)), registry_(std::move(registry)) {}

    Formula parse_all() {
        Formula f = formula();
        expect(Tok::End);
        return f;
    }

private:
    std::vector<Token> toks_;
    size_t pos_ = 0;
    std::set<std::string> registry_;
    std::vector<std::string> iBound_;
    std::vector<std::string> pBound_;

    const Token& cur() const { return toks_[pos_]; }
    const Token& peek(size_t k = 1) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    Token take() { return toks_[pos_++]; }

    [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected = {}) const {
        throw ParseError(msg + " at " + std::to_string(cur().line) + ":" + std::to_string(cur().col),
                         cur().line, cur().col, std::move(expected));
    }

    void expect(Tok k) {
        if (cur().kind != k) fail(std::string("expected ") + tok_name(k), {tok_name(k)});
        ++pos_;
    }

    bool bound_individual(const std::string& n) const {
        return std::find(iBound_.begin(), iBound_.end(), n) != iBound_.end();
    }
    bool bound_property(const std::string& n) const {
        return std::find(pBound_.begin(), pBound_.end(), n) != pBound_.end();
    }

    static bool keyword(const Token& t, const char* kw) { return t.kind == Tok::Ident && t.text == kw; }

    Formula formula() { return iff_level(); }

    Formula iff_level() {
        Formula lhs = imp_level();
        if (cur().kind == Tok::Iff) {
            take();
            return iff(std::move(lhs), iff_level());
        }
        return lhs;
    }

    Formula imp_level() {
        Formula lhs = or_level();
        if (cur().kind == Tok::Implies) {
            take();
            return implies(std::move(lhs), imp_level());
        }
        return lhs;
    }

    Formula or_level() {
        Formula lhs = and_level();
        while (cur().kind == Tok::Or) {
            take();
            lhs = disj(std::move(lhs), and_level());
        }
        return lhs;
    }

    Formula and_level() {
        Formula lhs = unary();
        while (cur().kind == Tok::And) {
            take();
            lhs = conj(std::move(lhs), unary());
        }
        return lhs;
    }

    Formula unary() {
        switch (cur().kind) {
            case Tok::Not: take(); return neg(unary());
            case Tok::Box: take(); return box(unary());
            case Tok::Dia: take(); return dia(unary());
            case Tok::PastAll: return temporal_prefix(TemporalTag::Past, QuantMode::Universal);
            case Tok::PastEx: return temporal_prefix(TemporalTag::Past, QuantMode::Existential);
            case Tok::FutAll: return temporal_prefix(TemporalTag::Future, QuantMode::Universal);
            case Tok::FutEx: return temporal_prefix(TemporalTag::Future, QuantMode::Existential);
            default: break;
        }
        if (keyword(cur(), "all") || keyword(cur(), "ex")) return individual_quant();
        if (keyword(cur(), "allp") || keyword(cur(), "exp")) return property_quant();
        return primary();
    }

    // "E- x. ..." is accepted as sugar for a temporal operator over the
    // matching individual quantifier.
    Formula temporal_prefix(TemporalTag tag, QuantMode mode) {
        take();
        if (cur().kind == Tok::Ident && peek().kind == Tok::Dot && !reserved_word(cur().text)) {
            IndividualTerm v = binder_var();
            expect(Tok::Dot);
            iBound_.push_back(v.name);
            Formula body = formula();
            iBound_.pop_back();
            return temporal(tag, mode, iquant(mode, std::move(v), std::move(body)));
        }
        return temporal(tag, mode, unary());
    }

    static bool reserved_word(const std::string& s) {
        return s == "all" || s == "ex" || s == "allp" || s == "exp" || s == "Pos" || s == "Ess";
    }

    IndividualTerm binder_var() {
        if (cur().kind != Tok::Ident) fail("expected variable", {"identifier"});
        std::string name = take().text;
        if (!is_individual_name(name)) fail("individual variable must match [a-z][a-zA-Z0-9_]*: " + name);
        if (bound_property(name)) fail("identifier already bound as a property variable: " + name);
        return ivar(name);
    }

    Formula individual_quant() {
        QuantMode mode = take().text == "all" ? QuantMode::Universal : QuantMode::Existential;
        IndividualTerm v = binder_var();
        expect(Tok::Dot);
        iBound_.push_back(v.name);
        Formula body = formula();
        iBound_.pop_back();
        return iquant(mode, std::move(v), std::move(body));
    }

    Formula property_quant() {
        QuantMode mode = take().text == "allp" ? QuantMode::Universal : QuantMode::Existential;
        if (cur().kind != Tok::Ident) fail("expected property variable", {"identifier"});
        std::string name = take().text;
        if (reserved_word(name)) fail("reserved word cannot be a property variable: " + name);
        if (registry_.count(name)) fail("cannot bind registered property name: " + name);
        if (bound_individual(name)) fail("identifier already bound as an individual variable: " + name);
        expect(Tok::Dot);
        pBound_.push_back(name);
        Formula body = formula();
        pBound_.pop_back();
        return pquant(mode, name, std::move(body));
    }

    PropertyTerm property_term() {
        if (cur().kind == Tok::Not) {
            take();
            return pneg(property_term());
        }
        if (cur().kind != Tok::Ident) fail("expected property term", {"identifier", "'~'"});
        std::string name = take().text;
        if (reserved_word(name)) fail("reserved word cannot be a property term: " + name);
        if (bound_individual(name)) fail("individual variable used as a property: " + name);
        if (registry_.count(name)) return pnamed(name);
        return pvar(name);
    }

    IndividualTerm arg_term() {
        if (cur().kind != Tok::Ident) fail("expected individual term", {"identifier"});
        std::string name = take().text;
        if (!is_individual_name(name)) fail("individual term must match [a-z][a-zA-Z0-9_]*: " + name);
        if (bound_property(name)) fail("property variable used as an individual term: " + name);
        return ivar(name);
    }

    Formula primary() {
        if (cur().kind == Tok::LParen) {
            take();
            Formula f = formula();
            expect(Tok::RParen);
            return f;
        }
        if (cur().kind != Tok::Ident)
            fail("expected formula", {"identifier", "'('", "'~'", "'[]'", "'<>'", "quantifier"});
        if (keyword(cur(), "Pos")) {
            take();
            expect(Tok::LParen);
            PropertyTerm p = property_term();
            expect(Tok::RParen);
            return pos(std::move(p));
        }
        if (keyword(cur(), "Ess")) {
            take();
            expect(Tok::LParen);
            PropertyTerm p = property_term();
            expect(Tok::Comma);
            IndividualTerm t = arg_term();
            expect(Tok::RParen);
            return essence(std::move(p), std::move(t));
        }
        std::string name = take().text;
        if (reserved_word(name)) fail("reserved word in formula position: " + name);
        if (cur().kind != Tok::LParen) {
            if (bound_property(name)) fail("property variable used as an atom: " + name);
            if (bound_individual(name)) fail("individual variable used as an atom: " + name);
            return atom(name);
        }
        take();  // '('
        std::vector<IndividualTerm> args;
        args.push_back(arg_term());
        while (cur().kind == Tok::Comma) {
            take();
            args.push_back(arg_term());
        }
        expect(Tok::RParen);
        if (args.size() == 1) {
            // One-argument applications are property applications: named when
            // registered, property variables otherwise.
            if (bound_individual(name)) fail("individual variable applied as a property: " + name);
            PropertyTerm p = registry_.count(name) ? pnamed(name) : pvar(name);
            return apply(std::move(p), args[0]);
        }
        if (bound_property(name)) fail("property variable used as a predicate: " + name);
        return atom(name, std::move(args));
    }
};

}  // namespace detail

inline const std::set<std::string>& default_property_registry() {
    static const std::set<std::string> reg = {"G", "NE"};
    return reg;
}

inline Formula parse(const std::string& text, const std::set<std::string>& registry = default_property_registry()) {
    detail::Parser p(detail::lex(text), registry);
    return p.parse_all();
}

}  // namespace modalkit
