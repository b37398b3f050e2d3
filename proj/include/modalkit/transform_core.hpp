#pragma once

#include <string>
#include <vector>

#include "modalkit/formula.hpp"

// The three syntactic formula-to-formula maps. Temporalization splits each
// individual quantifier into conjoined past/future sentential copies; time
// reversal swaps the temporal tags; the symmetry-breaking variant produces an
// exclusive disjunction of the two copies. Property quantifiers are left
// untouched throughout.

namespace modalkit {

enum class TransformKind { Temporalize, TimeReverse, BreakTemporalize };

inline const char* transform_name(TransformKind k) {
    switch (k) {
        case TransformKind::Temporalize: return "temporalize";
        case TransformKind::TimeReverse: return "time-reverse";
        case TransformKind::BreakTemporalize: return "break";
    }
    return "?";
}

inline const char* transform_suffix(TransformKind k) {
    switch (k) {
        case TransformKind::Temporalize: return "T";
        case TransformKind::TimeReverse: return "R";
        case TransformKind::BreakTemporalize: return "TB";
    }
    return "?";
}

namespace detail {

inline Formula map_rec(const Formula& f, TransformKind k) {
    const Formula::Node& n = f.node();
    switch (n.op) {
        case Op::Atom:
        case Op::Pos:
        case Op::Apply:
        case Op::Ess:
            return f;
        case Op::Not: return neg(map_rec(n.lhs, k));
        case Op::Box: return box(map_rec(n.lhs, k));
        case Op::Dia: return dia(map_rec(n.lhs, k));
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff:
            return binary(n.op, map_rec(n.lhs, k), map_rec(n.rhs, k));
        case Op::Temporal: {
            TemporalTag tag = n.tag;
            if (k == TransformKind::TimeReverse)
                tag = tag == TemporalTag::Past ? TemporalTag::Future : TemporalTag::Past;
            return temporal(tag, n.mode, map_rec(n.lhs, k));
        }
        case Op::PQuant:
            return pquant(n.mode, n.name, map_rec(n.lhs, k));
        case Op::IQuant: {
            Formula body = map_rec(n.lhs, k);
            Formula q = iquant(n.mode, n.ivar, std::move(body));
            switch (k) {
                case TransformKind::TimeReverse:
                    return q;
                case TransformKind::Temporalize:
                    return conj(temporal(TemporalTag::Past, n.mode, q),
                                temporal(TemporalTag::Future, n.mode, q));
                case TransformKind::BreakTemporalize: {
                    Formula past = temporal(TemporalTag::Past, n.mode, q);
                    Formula future = temporal(TemporalTag::Future, n.mode, q);
                    return disj(conj(past, neg(future)), conj(future, neg(past)));
                }
            }
            return q;
        }
    }
    throw FormulaError("unreachable");
}

}  // namespace detail

inline Formula temporalize(const Formula& f) { return detail::map_rec(f, TransformKind::Temporalize); }
inline Formula time_reverse(const Formula& f) { return detail::map_rec(f, TransformKind::TimeReverse); }
inline Formula break_temporalize(const Formula& f) {
    return detail::map_rec(f, TransformKind::BreakTemporalize);
}

inline Formula apply_transform(TransformKind k, const Formula& f) { return detail::map_rec(f, k); }

inline Formula apply_transform_chain(const std::vector<TransformKind>& chain, Formula f) {
    for (TransformKind k : chain) f = apply_transform(k, f);
    return f;
}

// ---------------------------------------------------------------------------
// Generalization shapes
//
// In a transformed system the universal-generalization rules conclude the
// transform's image of the introduced quantifier, with the premise formula
// appearing verbatim inside it. The shape is built around an internal hole
// marker that no surface formula can contain.

namespace detail {

inline Formula hole_marker() {
    Formula::Node n;
    n.op = Op::Atom;
    n.name = "\x01hole";
    return Formula::make(std::move(n));
}

inline bool is_hole(const Formula& f) {
    return f.op() == Op::Atom && f.node().name == "\x01hole";
}

inline Formula splice_hole(const Formula& f, const Formula& replacement) {
    if (is_hole(f)) return replacement;
    const Formula::Node& n = f.node();
    switch (n.op) {
        case Op::Atom:
        case Op::Pos:
        case Op::Apply:
        case Op::Ess:
            return f;
        case Op::Not: return neg(splice_hole(n.lhs, replacement));
        case Op::Box: return box(splice_hole(n.lhs, replacement));
        case Op::Dia: return dia(splice_hole(n.lhs, replacement));
        case Op::Temporal: return temporal(n.tag, n.mode, splice_hole(n.lhs, replacement));
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff:
            return binary(n.op, splice_hole(n.lhs, replacement), splice_hole(n.rhs, replacement));
        case Op::IQuant: return iquant(n.mode, n.ivar, splice_hole(n.lhs, replacement));
        case Op::PQuant: return pquant(n.mode, n.name, splice_hole(n.lhs, replacement));
    }
    throw FormulaError("unreachable");
}

}  // namespace detail

// Conclusion shape of universal generalization over an individual variable.
inline Formula gen_individual_shape(const std::vector<TransformKind>& chain,
                                    const IndividualTerm& var, const Formula& body) {
    Formula tmpl = iquant(QuantMode::Universal, var, detail::hole_marker());
    tmpl = apply_transform_chain(chain, tmpl);
    return detail::splice_hole(tmpl, body);
}

// Conclusion shape of universal generalization over a property variable.
inline Formula gen_property_shape(const std::vector<TransformKind>& chain, const std::string& var,
                                  const Formula& body) {
    Formula tmpl = pquant(QuantMode::Universal, var, detail::hole_marker());
    tmpl = apply_transform_chain(chain, tmpl);
    return detail::splice_hole(tmpl, body);
}

}  // namespace modalkit
