#pragma once

#include <string>

#include "modalkit/formula.hpp"

// Concrete-syntax printer. render() is the inverse of parse(): parentheses are
// emitted only where the precedence rules would otherwise regroup the tree.

namespace modalkit {

inline std::string render(const PropertyTerm& p) {
    return p.negated ? "~" + p.name : p.name;
}

inline std::string render(const IndividualTerm& t) { return t.name; }

namespace detail {

// Precedence levels, loosest first: iff 0, implies 1, or 2, and 3, unary 4,
// atomic 5. Quantifiers swallow everything to their right, so they act as
// level 0 and additionally force parentheses whenever text continues after
// them on the same bracketing level.
inline int print_level(const Formula& f) {
    switch (f.op()) {
        case Op::Iff: return 0;
        case Op::Implies: return 1;
        case Op::Or: return 2;
        case Op::And: return 3;
        case Op::Not:
        case Op::Box:
        case Op::Dia:
        case Op::Temporal: return 4;
        case Op::IQuant:
        case Op::PQuant: return 0;
        default: return 5;
    }
}

// True when the rightmost frontier of the printed text is an open quantifier
// body, which would swallow any operator that follows.
inline bool swallows_right(const Formula& f) {
    switch (f.op()) {
        case Op::IQuant:
        case Op::PQuant: return true;
        case Op::Not:
        case Op::Box:
        case Op::Dia:
        case Op::Temporal: return swallows_right(f.node().lhs);
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff: return swallows_right(f.node().rhs);
        default: return false;
    }
}

inline bool is_quantifier_shape(const Formula& f) {
    return f.op() == Op::IQuant || f.op() == Op::PQuant;
}

inline void render_rec(const Formula& f, int minLevel, bool rightmost, std::string& out) {
    // a quantifier swallows everything to its right, so in rightmost position
    // it needs no parentheses regardless of the surrounding precedence
    bool parens = (print_level(f) < minLevel && !(is_quantifier_shape(f) && rightmost)) ||
                  (!rightmost && swallows_right(f));
    if (parens) {
        out += "(";
        render_rec(f, 0, true, out);
        out += ")";
        return;
    }
    const Formula::Node& n = f.node();
    switch (n.op) {
        case Op::Atom:
            out += n.name;
            if (!n.args.empty()) {
                out += "(";
                for (size_t i = 0; i < n.args.size(); ++i) {
                    if (i) out += ",";
                    out += n.args[i].name;
                }
                out += ")";
            }
            break;
        case Op::Pos:
            out += "Pos(" + render(n.prop) + ")";
            break;
        case Op::Apply:
            out += n.prop.name + "(" + n.ivar.name + ")";
            break;
        case Op::Ess:
            out += "Ess(" + render(n.prop) + "," + n.ivar.name + ")";
            break;
        case Op::Not:
            out += "~";
            render_rec(n.lhs, 4, rightmost, out);
            break;
        case Op::Box:
            out += "[]";
            render_rec(n.lhs, 4, rightmost, out);
            break;
        case Op::Dia:
            out += "<>";
            render_rec(n.lhs, 4, rightmost, out);
            break;
        case Op::Temporal:
            out += n.tag == TemporalTag::Past ? (n.mode == QuantMode::Universal ? "A-" : "E-")
                                              : (n.mode == QuantMode::Universal ? "A+" : "E+");
            out += " ";
            render_rec(n.lhs, 4, rightmost, out);
            break;
        case Op::And:
            render_rec(n.lhs, 3, false, out);
            out += " & ";
            render_rec(n.rhs, 4, rightmost, out);
            break;
        case Op::Or:
            render_rec(n.lhs, 2, false, out);
            out += " | ";
            render_rec(n.rhs, 3, rightmost, out);
            break;
        case Op::Implies:
            render_rec(n.lhs, 2, false, out);
            out += " -> ";
            render_rec(n.rhs, 1, rightmost, out);
            break;
        case Op::Iff:
            render_rec(n.lhs, 1, false, out);
            out += " <-> ";
            render_rec(n.rhs, 0, rightmost, out);
            break;
        case Op::IQuant:
            out += n.mode == QuantMode::Universal ? "all " : "ex ";
            out += n.ivar.name;
            out += ". ";
            render_rec(n.lhs, 0, rightmost, out);
            break;
        case Op::PQuant:
            out += n.mode == QuantMode::Universal ? "allp " : "exp ";
            out += n.name;
            out += ". ";
            render_rec(n.lhs, 0, rightmost, out);
            break;
    }
}

}  // namespace detail

inline std::string render(const Formula& f) {
    std::string out;
    detail::render_rec(f, 0, true, out);
    return out;
}

// Sugared rendering: a temporal operator directly over a matching-mode
// quantifier prints as a temporal binder, e.g. "E- x. G(x)".
inline std::string render_sugared(const Formula& f);

namespace detail {

inline void render_sugar_rec(const Formula& f, int minLevel, bool rightmost, std::string& out) {
    if (f.op() == Op::Temporal) {
        const Formula::Node& n = f.node();
        if (n.lhs.op() == Op::IQuant && n.lhs.node().mode == n.mode) {
            bool parens = !rightmost;
            if (parens) out += "(";
            out += n.tag == TemporalTag::Past ? (n.mode == QuantMode::Universal ? "A-" : "E-")
                                              : (n.mode == QuantMode::Universal ? "A+" : "E+");
            out += " " + n.lhs.node().ivar.name + ". ";
            render_sugar_rec(n.lhs.node().lhs, 0, parens ? true : rightmost, out);
            if (parens) out += ")";
            return;
        }
    }
    // fall back to the plain printer for this node, recursing through children
    bool parens = (print_level(f) < minLevel && !(is_quantifier_shape(f) && rightmost)) ||
                  (!rightmost && swallows_right(f));
    if (parens) {
        out += "(";
        render_sugar_rec(f, 0, true, out);
        out += ")";
        return;
    }
    const Formula::Node& n = f.node();
    switch (n.op) {
        case Op::Not:
            out += "~";
            render_sugar_rec(n.lhs, 4, rightmost, out);
            return;
        case Op::Box:
            out += "[]";
            render_sugar_rec(n.lhs, 4, rightmost, out);
            return;
        case Op::Dia:
            out += "<>";
            render_sugar_rec(n.lhs, 4, rightmost, out);
            return;
        case Op::Temporal:
            out += n.tag == TemporalTag::Past ? (n.mode == QuantMode::Universal ? "A-" : "E-")
                                              : (n.mode == QuantMode::Universal ? "A+" : "E+");
            out += " ";
            render_sugar_rec(n.lhs, 4, rightmost, out);
            return;
        case Op::And:
            render_sugar_rec(n.lhs, 3, false, out);
            out += " & ";
            render_sugar_rec(n.rhs, 4, rightmost, out);
            return;
        case Op::Or:
            render_sugar_rec(n.lhs, 2, false, out);
            out += " | ";
            render_sugar_rec(n.rhs, 3, rightmost, out);
            return;
        case Op::Implies:
            render_sugar_rec(n.lhs, 2, false, out);
            out += " -> ";
            render_sugar_rec(n.rhs, 1, rightmost, out);
            return;
        case Op::Iff:
            render_sugar_rec(n.lhs, 1, false, out);
            out += " <-> ";
            render_sugar_rec(n.rhs, 0, rightmost, out);
            return;
        case Op::IQuant:
            out += n.mode == QuantMode::Universal ? "all " : "ex ";
            out += n.ivar.name + ". ";
            render_sugar_rec(n.lhs, 0, rightmost, out);
            return;
        case Op::PQuant:
            out += n.mode == QuantMode::Universal ? "allp " : "exp ";
            out += n.name + ". ";
            render_sugar_rec(n.lhs, 0, rightmost, out);
            return;
        default:
            render_rec(f, minLevel, rightmost, out);
            return;
    }
}

}  // namespace detail

inline std::string render_sugared(const Formula& f) {
    std::string out;
    detail::render_sugar_rec(f, 0, true, out);
    return out;
}

}  // namespace modalkit
