#pragma once

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "modalkit/formula.hpp"
#include "modalkit/normalize.hpp"
#include "modalkit/parser.hpp"
#include "modalkit/printer.hpp"
#include "modalkit/transform_core.hpp"

// Hilbert-style proof checking. A formal system is a set of named axiom
// schemas (pattern or computed), registered definitions unfolded positionally,
// and an inference-rule set. The checker validates each step against its
// justification; formulas are compared up to normalization, so alpha-variants
// and reordered conjunctions are interchangeable. Necessitation is restricted
// to premise-free steps, and the generalization rules check that the
// generalized variable is not free in any premise the step depends on.

namespace modalkit {

// ---------------------------------------------------------------------------
// Schemas

enum class MetaKind { FormulaMeta, PropertyMeta, IndividualMeta };

struct Binding {
    MetaKind kind = MetaKind::FormulaMeta;
    Formula formula;
    PropertyTerm prop;
    IndividualTerm term;

    static Binding of(Formula f) { return Binding{MetaKind::FormulaMeta, std::move(f), {}, {}}; }
    static Binding of(PropertyTerm p) { return Binding{MetaKind::PropertyMeta, {}, std::move(p), {}}; }
    static Binding of(IndividualTerm t) { return Binding{MetaKind::IndividualMeta, {}, {}, std::move(t)}; }
};

using Bindings = std::map<std::string, Binding>;

enum class BuiltinSchema {
    InstI, InstP, ExGenI, ExGenP, DistI, DistP, VacI, VacP, DualI, DualP, ExElimI, ExElimP,
};

struct AxiomSchema {
    enum class Kind { Pattern, Taut, Computed };
    std::string name;
    Kind kind = Kind::Pattern;
    Formula pattern;                       // Pattern: the schema formula over metavariables
    std::map<std::string, MetaKind> meta;  // declared metavariables and their kinds
    BuiltinSchema builtin{};               // Computed only
};

struct InstantiationError : std::runtime_error {
    std::string code;  // missing-binding | kind-mismatch | capture | bad-schema
    InstantiationError(std::string code_, const std::string& what)
        : std::runtime_error(what), code(std::move(code_)) {}
};

namespace detail {

inline const Binding& need(const Bindings& b, const std::string& key, MetaKind kind,
                           const std::string& schema) {
    auto it = b.find(key);
    if (it == b.end())
        throw InstantiationError("missing-binding", schema + ": no binding for " + key);
    if (it->second.kind != kind)
        throw InstantiationError("kind-mismatch", schema + ": wrong kind for " + key);
    return it->second;
}

// Simultaneous substitution of all declared metavariables; binders that would
// capture a binding's free variables are renamed first.
inline Formula subst_metas(const Formula& f, const Bindings& b,
                           const std::set<std::string>& indAvoid,
                           const std::set<std::string>& propAvoid) {
    const Formula::Node& n = f.node();
    auto term = [&](const IndividualTerm& t) -> IndividualTerm {
        if (t.kind == IndividualTerm::Kind::Variable) {
            auto it = b.find(t.name);
            if (it != b.end() && it->second.kind == MetaKind::IndividualMeta)
                return it->second.term;
        }
        return t;
    };
    auto prop = [&](const PropertyTerm& p) -> PropertyTerm {
        if (p.kind == PropertyTerm::Kind::Variable) {
            auto it = b.find(p.name);
            if (it != b.end() && it->second.kind == MetaKind::PropertyMeta)
                return p.negated ? pneg(it->second.prop) : it->second.prop;
        }
        return p;
    };
    switch (n.op) {
        case Op::Atom: {
            if (n.args.empty()) {
                auto it = b.find(n.name);
                if (it != b.end() && it->second.kind == MetaKind::FormulaMeta)
                    return it->second.formula;
                return f;
            }
            std::vector<IndividualTerm> args;
            args.reserve(n.args.size());
            for (const auto& a : n.args) args.push_back(term(a));
            return atom(n.name, std::move(args));
        }
        case Op::Pos: return pos(prop(n.prop));
        case Op::Apply: return apply(prop(n.prop), term(n.ivar));
        case Op::Ess: return essence(prop(n.prop), term(n.ivar));
        case Op::Not: return neg(subst_metas(n.lhs, b, indAvoid, propAvoid));
        case Op::Box: return box(subst_metas(n.lhs, b, indAvoid, propAvoid));
        case Op::Dia: return dia(subst_metas(n.lhs, b, indAvoid, propAvoid));
        case Op::Temporal:
            return temporal(n.tag, n.mode, subst_metas(n.lhs, b, indAvoid, propAvoid));
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff:
            return binary(n.op, subst_metas(n.lhs, b, indAvoid, propAvoid),
                          subst_metas(n.rhs, b, indAvoid, propAvoid));
        case Op::IQuant: {
            if (!indAvoid.count(n.ivar.name))
                return iquant(n.mode, n.ivar, subst_metas(n.lhs, b, indAvoid, propAvoid));
            std::set<std::string> avoid = indAvoid;
            auto bodyFree = free_individual_vars(n.lhs);
            avoid.insert(bodyFree.begin(), bodyFree.end());
            IndividualTerm nb = ivar(fresh_name(n.ivar.name, avoid));
            Formula body = substitute_individual(n.lhs, n.ivar.name, nb);
            return iquant(n.mode, nb, subst_metas(body, b, indAvoid, propAvoid));
        }
        case Op::PQuant: {
            if (!propAvoid.count(n.name))
                return pquant(n.mode, n.name, subst_metas(n.lhs, b, indAvoid, propAvoid));
            std::set<std::string> avoid = propAvoid;
            auto bodyFree = free_property_vars(n.lhs);
            avoid.insert(bodyFree.begin(), bodyFree.end());
            std::string nb = fresh_name(n.name, avoid);
            Formula body = substitute_property(n.lhs, n.name, pvar(nb));
            return pquant(n.mode, nb, subst_metas(body, b, indAvoid, propAvoid));
        }
    }
    throw FormulaError("unreachable");
}

inline Formula instantiate_builtin(BuiltinSchema which, const Bindings& b, const std::string& name) {
    auto F = [&](const char* k) { return need(b, k, MetaKind::FormulaMeta, name).formula; };
    auto P = [&](const char* k) { return need(b, k, MetaKind::PropertyMeta, name).prop; };
    auto I = [&](const char* k) { return need(b, k, MetaKind::IndividualMeta, name).term; };
    switch (which) {
        case BuiltinSchema::InstI: {
            IndividualTerm x = I("x");
            Formula phi = F("phi");
            return implies(iquant(QuantMode::Universal, x, phi),
                           substitute_individual(phi, x.name, I("t")));
        }
        case BuiltinSchema::InstP: {
            Formula phi = F("phi");
            std::string v = need(b, "F", MetaKind::PropertyMeta, name).prop.name;
            return implies(pquant(QuantMode::Universal, v, phi),
                           substitute_property(phi, v, P("P")));
        }
        case BuiltinSchema::ExGenI: {
            IndividualTerm x = I("x");
            Formula phi = F("phi");
            return implies(substitute_individual(phi, x.name, I("t")),
                           iquant(QuantMode::Existential, x, phi));
        }
        case BuiltinSchema::ExGenP: {
            Formula phi = F("phi");
            std::string v = need(b, "F", MetaKind::PropertyMeta, name).prop.name;
            return implies(substitute_property(phi, v, P("P")),
                           pquant(QuantMode::Existential, v, phi));
        }
        case BuiltinSchema::DistI: {
            IndividualTerm x = I("x");
            Formula phi = F("phi"), psi = F("psi");
            return implies(iquant(QuantMode::Universal, x, implies(phi, psi)),
                           implies(iquant(QuantMode::Universal, x, phi),
                                   iquant(QuantMode::Universal, x, psi)));
        }
        case BuiltinSchema::DistP: {
            std::string v = need(b, "F", MetaKind::PropertyMeta, name).prop.name;
            Formula phi = F("phi"), psi = F("psi");
            return implies(pquant(QuantMode::Universal, v, implies(phi, psi)),
                           implies(pquant(QuantMode::Universal, v, phi),
                                   pquant(QuantMode::Universal, v, psi)));
        }
        case BuiltinSchema::VacI: {
            IndividualTerm x = I("x");
            Formula phi = F("phi");
            if (free_individual_vars(phi).count(x.name))
                throw InstantiationError("capture", name + ": " + x.name + " is free in phi");
            return implies(phi, iquant(QuantMode::Universal, x, phi));
        }
        case BuiltinSchema::VacP: {
            std::string v = need(b, "F", MetaKind::PropertyMeta, name).prop.name;
            Formula phi = F("phi");
            if (free_property_vars(phi).count(v))
                throw InstantiationError("capture", name + ": " + v + " is free in phi");
            return implies(phi, pquant(QuantMode::Universal, v, phi));
        }
        case BuiltinSchema::DualI: {
            IndividualTerm x = I("x");
            Formula phi = F("phi");
            return iff(iquant(QuantMode::Existential, x, phi),
                       neg(iquant(QuantMode::Universal, x, neg(phi))));
        }
        case BuiltinSchema::DualP: {
            std::string v = need(b, "F", MetaKind::PropertyMeta, name).prop.name;
            Formula phi = F("phi");
            return iff(pquant(QuantMode::Existential, v, phi),
                       neg(pquant(QuantMode::Universal, v, neg(phi))));
        }
        case BuiltinSchema::ExElimI: {
            IndividualTerm x = I("x");
            Formula phi = F("phi"), psi = F("psi");
            if (free_individual_vars(psi).count(x.name))
                throw InstantiationError("capture", name + ": " + x.name + " is free in psi");
            return implies(iquant(QuantMode::Universal, x, implies(phi, psi)),
                           implies(iquant(QuantMode::Existential, x, phi), psi));
        }
        case BuiltinSchema::ExElimP: {
            std::string v = need(b, "F", MetaKind::PropertyMeta, name).prop.name;
            Formula phi = F("phi"), psi = F("psi");
            if (free_property_vars(psi).count(v))
                throw InstantiationError("capture", name + ": " + v + " is free in psi");
            return implies(pquant(QuantMode::Universal, v, implies(phi, psi)),
                           implies(pquant(QuantMode::Existential, v, phi), psi));
        }
    }
    throw InstantiationError("bad-schema", "unknown builtin");
}

}  // namespace detail

// The quantifier layer: standard first- and second-order axiom schemas made
// available to systems with quantifier rules enabled. In a transformed system
// their instances are the transform's images.
inline const std::vector<AxiomSchema>& quantifier_schemas() {
    static const std::vector<AxiomSchema> layer = [] {
        auto mk = [](const char* name, BuiltinSchema b,
                     std::initializer_list<std::pair<const char*, MetaKind>> meta) {
            AxiomSchema s;
            s.name = name;
            s.kind = AxiomSchema::Kind::Computed;
            s.builtin = b;
            for (auto& m : meta) s.meta[m.first] = m.second;
            return s;
        };
        using MK = MetaKind;
        std::vector<AxiomSchema> v;
        v.push_back(mk("inst-i", BuiltinSchema::InstI,
                       {{"x", MK::IndividualMeta}, {"phi", MK::FormulaMeta}, {"t", MK::IndividualMeta}}));
        v.push_back(mk("inst-p", BuiltinSchema::InstP,
                       {{"F", MK::PropertyMeta}, {"phi", MK::FormulaMeta}, {"P", MK::PropertyMeta}}));
        v.push_back(mk("exgen-i", BuiltinSchema::ExGenI,
                       {{"x", MK::IndividualMeta}, {"phi", MK::FormulaMeta}, {"t", MK::IndividualMeta}}));
        v.push_back(mk("exgen-p", BuiltinSchema::ExGenP,
                       {{"F", MK::PropertyMeta}, {"phi", MK::FormulaMeta}, {"P", MK::PropertyMeta}}));
        v.push_back(mk("dist-i", BuiltinSchema::DistI,
                       {{"x", MK::IndividualMeta}, {"phi", MK::FormulaMeta}, {"psi", MK::FormulaMeta}}));
        v.push_back(mk("dist-p", BuiltinSchema::DistP,
                       {{"F", MK::PropertyMeta}, {"phi", MK::FormulaMeta}, {"psi", MK::FormulaMeta}}));
        v.push_back(mk("vac-i", BuiltinSchema::VacI,
                       {{"x", MK::IndividualMeta}, {"phi", MK::FormulaMeta}}));
        v.push_back(mk("vac-p", BuiltinSchema::VacP,
                       {{"F", MK::PropertyMeta}, {"phi", MK::FormulaMeta}}));
        v.push_back(mk("dual-i", BuiltinSchema::DualI,
                       {{"x", MK::IndividualMeta}, {"phi", MK::FormulaMeta}}));
        v.push_back(mk("dual-p", BuiltinSchema::DualP,
                       {{"F", MK::PropertyMeta}, {"phi", MK::FormulaMeta}}));
        v.push_back(mk("exelim-i", BuiltinSchema::ExElimI,
                       {{"x", MK::IndividualMeta}, {"phi", MK::FormulaMeta}, {"psi", MK::FormulaMeta}}));
        v.push_back(mk("exelim-p", BuiltinSchema::ExElimP,
                       {{"F", MK::PropertyMeta}, {"phi", MK::FormulaMeta}, {"psi", MK::FormulaMeta}}));
        return v;
    }();
    return layer;
}

// ---------------------------------------------------------------------------
// Definitions

struct Definition {
    std::string name;  // script token: G, ess, NE
    enum class Head { Godlike, Essence, NecExists } head = Head::Godlike;
    Formula definiens;     // pattern over the metavariables below
    std::string propMeta;  // empty unless head == Essence
    std::string indMeta;
};

// ---------------------------------------------------------------------------
// Systems

enum class Rule { ModusPonens, Necessitation, GenIndividual, GenProperty, Unfold };

struct FormalSystem {
    std::string name;
    std::vector<AxiomSchema> schemas;
    std::vector<Definition> definitions;
    std::set<Rule> rules;
    bool quantifierLayer = false;
    std::vector<TransformKind> transforms;

    const AxiomSchema* find_schema(const std::string& n) const {
        for (const auto& s : schemas)
            if (s.name == n) return &s;
        if (quantifierLayer)
            for (const auto& s : quantifier_schemas())
                if (s.name == n) return &s;
        return nullptr;
    }

    const Definition* find_definition(const std::string& n) const {
        for (const auto& d : definitions)
            if (d.name == n) return &d;
        return nullptr;
    }
};

// Uniform, capture-avoiding instantiation. Computed schemas build their base
// instance and then apply the system's transform chain.
inline Formula instantiate_schema(const AxiomSchema& s, const Bindings& b,
                                  const std::vector<TransformKind>& chain = {}) {
    if (s.kind == AxiomSchema::Kind::Taut)
        throw InstantiationError("bad-schema", "the tautology schema has no instances to build");
    if (s.kind == AxiomSchema::Kind::Computed) {
        Formula base = detail::instantiate_builtin(s.builtin, b, s.name);
        return apply_transform_chain(chain, base);
    }
    for (const auto& m : s.meta) detail::need(b, m.first, m.second, s.name);
    for (const auto& extra : b)
        if (!s.meta.count(extra.first))
            throw InstantiationError("bad-schema", s.name + ": unknown metavariable " + extra.first);
    std::set<std::string> indAvoid, propAvoid;
    for (const auto& kv : b) {
        switch (kv.second.kind) {
            case MetaKind::FormulaMeta: {
                auto iv = free_individual_vars(kv.second.formula);
                indAvoid.insert(iv.begin(), iv.end());
                auto pv = free_property_vars(kv.second.formula);
                propAvoid.insert(pv.begin(), pv.end());
                break;
            }
            case MetaKind::PropertyMeta:
                if (kv.second.prop.kind == PropertyTerm::Kind::Variable)
                    propAvoid.insert(kv.second.prop.name);
                break;
            case MetaKind::IndividualMeta:
                if (kv.second.term.kind == IndividualTerm::Kind::Variable)
                    indAvoid.insert(kv.second.term.name);
                break;
        }
    }
    return detail::subst_metas(s.pattern, b, indAvoid, propAvoid);
}

// ---------------------------------------------------------------------------
// Propositional skeleton tautology check

namespace detail {

inline bool is_propositional_connective(Op op) {
    return op == Op::Not || op == Op::And || op == Op::Or || op == Op::Implies || op == Op::Iff;
}

inline void skeleton_atoms(const Formula& f, std::vector<std::string>& names,
                           std::map<std::string, int>& index) {
    const Formula::Node& n = f.node();
    if (is_propositional_connective(n.op)) {
        skeleton_atoms(n.lhs, names, index);
        if (n.op != Op::Not) skeleton_atoms(n.rhs, names, index);
        return;
    }
    std::string key = render(f);
    if (!index.count(key)) {
        index[key] = static_cast<int>(names.size());
        names.push_back(key);
    }
}

inline bool skeleton_eval(const Formula& f, const std::map<std::string, int>& index,
                          unsigned mask) {
    const Formula::Node& n = f.node();
    switch (n.op) {
        case Op::Not: return !skeleton_eval(n.lhs, index, mask);
        case Op::And: return skeleton_eval(n.lhs, index, mask) && skeleton_eval(n.rhs, index, mask);
        case Op::Or: return skeleton_eval(n.lhs, index, mask) || skeleton_eval(n.rhs, index, mask);
        case Op::Implies:
            return !skeleton_eval(n.lhs, index, mask) || skeleton_eval(n.rhs, index, mask);
        case Op::Iff:
            return skeleton_eval(n.lhs, index, mask) == skeleton_eval(n.rhs, index, mask);
        default:
            return (mask >> index.at(render(f))) & 1u;
    }
}

}  // namespace detail

// Truth-table decision on the propositional skeleton; non-propositional
// subformulas are opaque atoms. Normalization first makes the atom keys
// insensitive to bound-variable names.
inline bool is_skeleton_tautology(const Formula& f, int maxAtoms = 12) {
    Formula n = normalize(f);
    std::vector<std::string> names;
    std::map<std::string, int> index;
    detail::skeleton_atoms(n, names, index);
    if (static_cast<int>(names.size()) > maxAtoms)
        throw InstantiationError("bad-taut",
                                 "tautology check limit: " + std::to_string(names.size()) +
                                     " skeleton atoms > " + std::to_string(maxAtoms));
    unsigned total = 1u << names.size();
    for (unsigned mask = 0; mask < total; ++mask)
        if (!detail::skeleton_eval(n, index, mask)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Definition matching and positional rewriting

namespace detail {

struct MatchState {
    std::map<std::string, PropertyTerm> propB;
    std::map<std::string, IndividualTerm> indB;
    std::vector<std::pair<std::string, std::string>> envI;  // pattern name -> node name
    std::vector<std::pair<std::string, std::string>> envP;
};

inline bool match_term(const IndividualTerm& pat, const IndividualTerm& node,
                       const std::string& iMeta, MatchState& st) {
    for (auto it = st.envI.rbegin(); it != st.envI.rend(); ++it) {
        if (it->first == pat.name)
            return node.kind == IndividualTerm::Kind::Variable && it->second == node.name;
        if (node.kind == IndividualTerm::Kind::Variable && it->second == node.name) return false;
    }
    if (pat.kind == IndividualTerm::Kind::Variable && pat.name == iMeta) {
        auto it = st.indB.find(pat.name);
        if (it != st.indB.end()) return it->second == node;
        st.indB[pat.name] = node;
        return true;
    }
    return pat == node;
}

inline bool match_prop(const PropertyTerm& pat, const PropertyTerm& node, const std::string& pMeta,
                       MatchState& st) {
    for (auto it = st.envP.rbegin(); it != st.envP.rend(); ++it) {
        if (pat.kind == PropertyTerm::Kind::Variable && it->first == pat.name)
            return node.kind == PropertyTerm::Kind::Variable && it->second == node.name &&
                   pat.negated == node.negated;
        if (node.kind == PropertyTerm::Kind::Variable && it->second == node.name) return false;
    }
    if (pat.kind == PropertyTerm::Kind::Variable && pat.name == pMeta && !pat.negated) {
        auto it = st.propB.find(pat.name);
        if (it != st.propB.end()) return it->second == node;
        st.propB[pat.name] = node;
        return true;
    }
    return pat == node;
}

inline bool match_formula(const Formula& pat, const Formula& node, const std::string& pMeta,
                          const std::string& iMeta, MatchState& st) {
    const Formula::Node& x = pat.node();
    const Formula::Node& y = node.node();
    if (x.op != y.op) return false;
    switch (x.op) {
        case Op::Atom: {
            if (x.name != y.name || x.args.size() != y.args.size()) return false;
            for (size_t i = 0; i < x.args.size(); ++i)
                if (!match_term(x.args[i], y.args[i], iMeta, st)) return false;
            return true;
        }
        case Op::Pos:
            return match_prop(x.prop, y.prop, pMeta, st);
        case Op::Apply:
        case Op::Ess:
            return match_prop(x.prop, y.prop, pMeta, st) && match_term(x.ivar, y.ivar, iMeta, st);
        case Op::Not:
        case Op::Box:
        case Op::Dia:
            return match_formula(x.lhs, y.lhs, pMeta, iMeta, st);
        case Op::Temporal:
            return x.tag == y.tag && x.mode == y.mode && match_formula(x.lhs, y.lhs, pMeta, iMeta, st);
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff:
            return match_formula(x.lhs, y.lhs, pMeta, iMeta, st) &&
                   match_formula(x.rhs, y.rhs, pMeta, iMeta, st);
        case Op::IQuant: {
            if (x.mode != y.mode) return false;
            st.envI.emplace_back(x.ivar.name, y.ivar.name);
            bool r = match_formula(x.lhs, y.lhs, pMeta, iMeta, st);
            st.envI.pop_back();
            return r;
        }
        case Op::PQuant: {
            if (x.mode != y.mode) return false;
            st.envP.emplace_back(x.name, y.name);
            bool r = match_formula(x.lhs, y.lhs, pMeta, iMeta, st);
            st.envP.pop_back();
            return r;
        }
    }
    return false;
}

}  // namespace detail

inline Formula definition_head_instance(const Definition& d, const PropertyTerm& p,
                                        const IndividualTerm& t) {
    switch (d.head) {
        case Definition::Head::Godlike: return apply(pnamed("G"), t);
        case Definition::Head::Essence: return essence(p, t);
        case Definition::Head::NecExists: return apply(pnamed("NE"), t);
    }
    throw FormulaError("unreachable");
}

inline Formula definition_body_instance(const Definition& d, const PropertyTerm& p,
                                        const IndividualTerm& t) {
    Formula out = d.definiens;
    if (!d.propMeta.empty()) out = substitute_property(out, d.propMeta, p);
    return substitute_individual(out, d.indMeta, t);
}

// Does this node match the definiendum (head) of d?
inline std::optional<std::pair<PropertyTerm, IndividualTerm>> match_definition_head(
    const Definition& d, const Formula& f) {
    const Formula::Node& n = f.node();
    switch (d.head) {
        case Definition::Head::Godlike:
            if (n.op == Op::Apply && n.prop == pnamed("G")) return std::make_pair(pnamed("G"), n.ivar);
            return std::nullopt;
        case Definition::Head::NecExists:
            if (n.op == Op::Apply && n.prop == pnamed("NE"))
                return std::make_pair(pnamed("NE"), n.ivar);
            return std::nullopt;
        case Definition::Head::Essence:
            if (n.op == Op::Ess) return std::make_pair(n.prop, n.ivar);
            return std::nullopt;
    }
    return std::nullopt;
}

// Does this node match the definiens of d (fold direction)?
inline std::optional<std::pair<PropertyTerm, IndividualTerm>> match_definition_body(
    const Definition& d, const Formula& f) {
    detail::MatchState st;
    if (!detail::match_formula(d.definiens, f, d.propMeta, d.indMeta, st)) return std::nullopt;
    PropertyTerm p = d.propMeta.empty() ? pnamed("G") : st.propB.at(d.propMeta);
    auto it = st.indB.find(d.indMeta);
    if (it == st.indB.end()) return std::nullopt;
    return std::make_pair(p, it->second);
}

// Candidate rewrite positions for a definition, in pre-order; k is 1-based.
// Each position is either a definiendum occurrence (rewritten to the
// definiens) or a definiens occurrence (folded back to the definiendum).
namespace detail {

inline Formula unfold_rewrite(const Formula& f, const Definition& d, int& countdown, bool& done) {
    if (!done) {
        if (auto h = match_definition_head(d, f)) {
            if (--countdown == 0) {
                done = true;
                return definition_body_instance(d, h->first, h->second);
            }
        } else if (auto b = match_definition_body(d, f)) {
            if (--countdown == 0) {
                done = true;
                return definition_head_instance(d, b->first, b->second);
            }
        }
    }
    if (done) return f;
    const Formula::Node& n = f.node();
    switch (n.op) {
        case Op::Atom:
        case Op::Pos:
        case Op::Apply:
        case Op::Ess:
            return f;
        case Op::Not: return neg(unfold_rewrite(n.lhs, d, countdown, done));
        case Op::Box: return box(unfold_rewrite(n.lhs, d, countdown, done));
        case Op::Dia: return dia(unfold_rewrite(n.lhs, d, countdown, done));
        case Op::Temporal: return temporal(n.tag, n.mode, unfold_rewrite(n.lhs, d, countdown, done));
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff: {
            Formula l = unfold_rewrite(n.lhs, d, countdown, done);
            Formula r = done ? n.rhs : unfold_rewrite(n.rhs, d, countdown, done);
            return binary(n.op, std::move(l), std::move(r));
        }
        case Op::IQuant: return iquant(n.mode, n.ivar, unfold_rewrite(n.lhs, d, countdown, done));
        case Op::PQuant: return pquant(n.mode, n.name, unfold_rewrite(n.lhs, d, countdown, done));
    }
    throw FormulaError("unreachable");
}

}  // namespace detail

// Rewrites the k-th matching occurrence; nullopt when fewer than k exist.
inline std::optional<Formula> unfold_at(const Formula& f, const Definition& d, int k) {
    if (k < 1) return std::nullopt;
    int countdown = k;
    bool done = false;
    Formula out = detail::unfold_rewrite(f, d, countdown, done);
    if (!done) return std::nullopt;
    return out;
}

// ---------------------------------------------------------------------------
// Proofs

struct Justification {
    enum class Kind { Axiom, Premise, MP, Nec, GenI, GenP, Unfold };
    Kind kind = Kind::Axiom;
    std::string name;  // Axiom: schema; Premise: premise name; Unfold: definition
    Bindings bindings;
    int ref1 = -1;
    int ref2 = -1;
    std::string var;   // GenI / GenP
    int position = 1;  // Unfold
};

struct ProofStep {
    int id = 0;
    Formula formula;
    Justification just;
};

struct Proof {
    std::string systemName;
    Formula goal;
    std::vector<std::pair<std::string, Formula>> premises;  // declaration order
    std::vector<ProofStep> steps;

    const Formula* premise(const std::string& name) const {
        for (const auto& p : premises)
            if (p.first == name) return &p.second;
        return nullptr;
    }
};

struct CheckReport {
    bool accepted = false;
    int failingStep = -1;
    std::string reason;  // machine-readable code, empty when accepted
    std::string detail;
    std::set<std::string> premisesUsed;  // premises in the final step's dependency cone
    bool goalMatched = false;
};

// Formula identity used throughout checking: normalized structural equality,
// so alpha-variants and commuted conjunctions are interchangeable.
inline bool kernel_eq(const Formula& a, const Formula& b) {
    if (a == b) return true;
    return normalize(a) == normalize(b);
}

inline CheckReport check_proof(const FormalSystem& sys, const Proof& proof, const Formula& goal,
                               const std::vector<std::pair<std::string, Formula>>& premises) {
    CheckReport rep;
    auto reject = [&](int id, std::string code, std::string detail) {
        rep.accepted = false;
        rep.failingStep = id;
        rep.reason = std::move(code);
        rep.detail = std::move(detail);
        return rep;
    };
    if (proof.steps.empty()) return reject(-1, "empty-proof", "proof has no steps");

    std::map<int, const ProofStep*> byId;
    std::map<int, std::set<std::string>> deps;
    int prevId = -1;

    auto premiseOf = [&](const std::string& name) -> const Formula* {
        for (const auto& p : premises)
            if (p.first == name) return &p.second;
        return nullptr;
    };
    auto ruleAvailable = [&](Rule r) { return sys.rules.count(r) > 0; };

    for (const auto& step : proof.steps) {
        if (step.id <= prevId)
            return reject(step.id, "bad-id", "step ids must be strictly increasing");
        prevId = step.id;
        const Justification& j = step.just;
        auto refStep = [&](int id) -> const ProofStep* {
            auto it = byId.find(id);
            return it == byId.end() ? nullptr : it->second;
        };
        switch (j.kind) {
            case Justification::Kind::Axiom: {
                const AxiomSchema* schema = sys.find_schema(j.name);
                if (!schema) return reject(step.id, "unknown-schema", "no schema named " + j.name);
                if (schema->kind == AxiomSchema::Kind::Taut) {
                    if (!j.bindings.empty())
                        return reject(step.id, "bad-instantiation", "taut takes no bindings");
                    try {
                        if (!is_skeleton_tautology(step.formula))
                            return reject(step.id, "bad-taut",
                                          "not a propositional-skeleton tautology: " +
                                              render(step.formula));
                    } catch (const InstantiationError& e) {
                        return reject(step.id, e.code, e.what());
                    }
                    deps[step.id] = {};
                    break;
                }
                try {
                    Formula inst = instantiate_schema(*schema, j.bindings, sys.transforms);
                    if (!kernel_eq(inst, step.formula))
                        return reject(step.id, "bad-instantiation",
                                      "schema " + j.name + " instantiates to " + render(inst));
                } catch (const InstantiationError& e) {
                    return reject(step.id, e.code, e.what());
                }
                deps[step.id] = {};
                break;
            }
            case Justification::Kind::Premise: {
                const Formula* p = premiseOf(j.name);
                if (!p) return reject(step.id, "unknown-premise", "no premise named " + j.name);
                if (!kernel_eq(*p, step.formula))
                    return reject(step.id, "premise-mismatch",
                                  "premise " + j.name + " reads " + render(*p));
                deps[step.id] = {j.name};
                break;
            }
            case Justification::Kind::MP: {
                if (!ruleAvailable(Rule::ModusPonens))
                    return reject(step.id, "rule-not-available", "modus ponens not in system");
                const ProofStep* a = refStep(j.ref1);
                const ProofStep* b = refStep(j.ref2);
                if (!a || !b)
                    return reject(step.id, "unknown-dependency",
                                  "mp cites a step that does not precede it");
                if (b->formula.op() != Op::Implies)
                    return reject(step.id, "bad-mp", "second cited step is not an implication");
                if (!kernel_eq(b->formula.node().lhs, a->formula))
                    return reject(step.id, "bad-mp", "antecedent does not match the cited step");
                if (!kernel_eq(b->formula.node().rhs, step.formula))
                    return reject(step.id, "bad-mp", "consequent does not match this step");
                deps[step.id] = deps[j.ref1];
                deps[step.id].insert(deps[j.ref2].begin(), deps[j.ref2].end());
                break;
            }
            case Justification::Kind::Nec: {
                if (!ruleAvailable(Rule::Necessitation))
                    return reject(step.id, "rule-not-available", "necessitation not in system");
                const ProofStep* a = refStep(j.ref1);
                if (!a)
                    return reject(step.id, "unknown-dependency",
                                  "nec cites a step that does not precede it");
                if (!deps[j.ref1].empty())
                    return reject(step.id, "nec-on-premise",
                                  "necessitation applied to a premise-dependent step");
                if (!kernel_eq(step.formula, box(a->formula)))
                    return reject(step.id, "bad-nec", "conclusion is not the boxed cited step");
                deps[step.id] = {};
                break;
            }
            case Justification::Kind::GenI:
            case Justification::Kind::GenP: {
                bool individual = j.kind == Justification::Kind::GenI;
                if (!ruleAvailable(individual ? Rule::GenIndividual : Rule::GenProperty))
                    return reject(step.id, "rule-not-available", "generalization not in system");
                const ProofStep* a = refStep(j.ref1);
                if (!a)
                    return reject(step.id, "unknown-dependency",
                                  "gen cites a step that does not precede it");
                for (const auto& pname : deps[j.ref1]) {
                    const Formula* p = premiseOf(pname);
                    bool freeInPremise =
                        individual ? free_individual_vars(*p).count(j.var) > 0
                                   : free_property_vars(*p).count(j.var) > 0;
                    if (freeInPremise)
                        return reject(step.id, "capture",
                                      j.var + " is free in premise " + pname);
                }
                Formula want =
                    individual
                        ? gen_individual_shape(sys.transforms, ivar(j.var), a->formula)
                        : gen_property_shape(sys.transforms, j.var, a->formula);
                if (!kernel_eq(step.formula, want))
                    return reject(step.id, "bad-gen",
                                  "expected the generalization shape " + render(want));
                deps[step.id] = deps[j.ref1];
                break;
            }
            case Justification::Kind::Unfold: {
                if (!ruleAvailable(Rule::Unfold))
                    return reject(step.id, "rule-not-available", "definition unfolding not in system");
                const Definition* d = sys.find_definition(j.name);
                if (!d) return reject(step.id, "unknown-definition", "no definition named " + j.name);
                const ProofStep* a = refStep(j.ref1);
                if (!a)
                    return reject(step.id, "unknown-dependency",
                                  "unfold cites a step that does not precede it");
                auto rewritten = unfold_at(a->formula, *d, j.position);
                if (!rewritten)
                    return reject(step.id, "bad-unfold",
                                  "no occurrence " + std::to_string(j.position) + " of " + j.name);
                if (!kernel_eq(*rewritten, step.formula))
                    return reject(step.id, "bad-unfold",
                                  "rewriting yields " + render(*rewritten));
                deps[step.id] = deps[j.ref1];
                break;
            }
        }
        byId[step.id] = &step;
    }

    const ProofStep& last = proof.steps.back();
    rep.goalMatched = kernel_eq(last.formula, goal);
    if (!rep.goalMatched)
        return reject(last.id, "goal-mismatch", "final step is not the declared goal");
    rep.accepted = true;
    rep.failingStep = -1;
    rep.premisesUsed = deps[last.id];
    return rep;
}

inline CheckReport check_proof(const FormalSystem& sys, const Proof& proof) {
    return check_proof(sys, proof, proof.goal, proof.premises);
}

}  // namespace modalkit
