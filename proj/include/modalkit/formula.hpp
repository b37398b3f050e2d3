#pragma once

#include <algorithm>
#include <cctype>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Formula language shared by every component: abstract syntax for the
// propositional/modal/temporal connectives, individual and property
// quantifiers, and the second-order constructs Pos, Ess, NE-style
// applications. Values are immutable; builders return shared handles.

namespace modalkit {

struct FormulaError : std::runtime_error {
    explicit FormulaError(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_individual_name(const std::string& s) {
    if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

inline bool is_identifier(const std::string& s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Terms

struct IndividualTerm {
    enum class Kind { Variable, Constant };
    Kind kind = Kind::Variable;
    std::string name;

    friend bool operator==(const IndividualTerm& a, const IndividualTerm& b) {
        return a.kind == b.kind && a.name == b.name;
    }
    friend bool operator!=(const IndividualTerm& a, const IndividualTerm& b) { return !(a == b); }
};

inline IndividualTerm ivar(std::string name) {
    if (!is_individual_name(name)) throw FormulaError("bad individual name: " + name);
    return IndividualTerm{IndividualTerm::Kind::Variable, std::move(name)};
}

inline IndividualTerm iconst(std::string name) {
    if (!is_individual_name(name)) throw FormulaError("bad individual name: " + name);
    return IndividualTerm{IndividualTerm::Kind::Constant, std::move(name)};
}

// Property terms are a name with an optional single negation; double negation
// collapses structurally, so negate(negate(t)) == t by construction.
struct PropertyTerm {
    enum class Kind { Named, Variable };
    Kind kind = Kind::Variable;
    std::string name;
    bool negated = false;

    friend bool operator==(const PropertyTerm& a, const PropertyTerm& b) {
        return a.kind == b.kind && a.name == b.name && a.negated == b.negated;
    }
    friend bool operator!=(const PropertyTerm& a, const PropertyTerm& b) { return !(a == b); }
};

inline PropertyTerm pnamed(std::string name) {
    if (!is_identifier(name)) throw FormulaError("bad property name: " + name);
    return PropertyTerm{PropertyTerm::Kind::Named, std::move(name), false};
}

inline PropertyTerm pvar(std::string name) {
    if (!is_identifier(name)) throw FormulaError("bad property variable: " + name);
    return PropertyTerm{PropertyTerm::Kind::Variable, std::move(name), false};
}

inline PropertyTerm pneg(PropertyTerm t) {
    t.negated = !t.negated;
    return t;
}

// ---------------------------------------------------------------------------
// Formulas

enum class Op {
    Atom,      // name + individual args (0-ary atoms are propositional letters)
    Pos,       // positivity predicate over a property term
    Apply,     // property applied to an individual
    Ess,       // essence: property, individual
    Not,
    And,
    Or,
    Implies,
    Iff,
    Box,
    Dia,
    Temporal,  // sentential past/future operator
    IQuant,    // individual quantifier
    PQuant,    // property quantifier
};

enum class TemporalTag { Past, Future };
enum class QuantMode { Universal, Existential };

class Formula {
public:
    struct Node;

    Formula() = default;

    bool valid() const { return node_ != nullptr; }
    const Node& node() const;
    Op op() const;

    // Structural equality (bound-variable names significant; see alpha_equal).
    friend bool operator==(const Formula& a, const Formula& b);
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

    static Formula make(Node n);

private:
    std::shared_ptr<const Node> node_;
};

struct Formula::Node {
    Op op;
    std::string name;                   // Atom name; PQuant bound variable
    std::vector<IndividualTerm> args;   // Atom arguments
    PropertyTerm prop;                  // Pos / Apply / Ess property argument
    IndividualTerm ivar;                // Apply / Ess argument; IQuant bound variable
    TemporalTag tag = TemporalTag::Past;
    QuantMode mode = QuantMode::Universal;
    Formula lhs;                        // unary body / binary left
    Formula rhs;                        // binary right
};

inline Formula Formula::make(Node n) {
    Formula f;
    f.node_ = std::make_shared<const Node>(std::move(n));
    return f;
}

inline const Formula::Node& Formula::node() const {
    if (!node_) throw FormulaError("empty formula handle");
    return *node_;
}

inline Op Formula::op() const { return node().op; }

inline bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (!a.node_ || !b.node_) return false;
    const Formula::Node& x = *a.node_;
    const Formula::Node& y = *b.node_;
    if (x.op != y.op) return false;
    switch (x.op) {
        case Op::Atom: return x.name == y.name && x.args == y.args;
        case Op::Pos: return x.prop == y.prop;
        case Op::Apply:
        case Op::Ess: return x.prop == y.prop && x.ivar == y.ivar;
        case Op::Not:
        case Op::Box:
        case Op::Dia: return x.lhs == y.lhs;
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff: return x.lhs == y.lhs && x.rhs == y.rhs;
        case Op::Temporal: return x.tag == y.tag && x.mode == y.mode && x.lhs == y.lhs;
        case Op::IQuant: return x.mode == y.mode && x.ivar == y.ivar && x.lhs == y.lhs;
        case Op::PQuant: return x.mode == y.mode && x.name == y.name && x.lhs == y.lhs;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Builders

inline Formula atom(std::string name, std::vector<IndividualTerm> args = {}) {
    if (!is_identifier(name)) throw FormulaError("bad atom name: " + name);
    Formula::Node n;
    n.op = Op::Atom;
    n.name = std::move(name);
    n.args = std::move(args);
    return Formula::make(std::move(n));
}

inline Formula pos(PropertyTerm p) {
    Formula::Node n;
    n.op = Op::Pos;
    n.prop = std::move(p);
    return Formula::make(std::move(n));
}

inline Formula neg(Formula f) {
    Formula::Node n;
    n.op = Op::Not;
    n.lhs = std::move(f);
    return Formula::make(std::move(n));
}

// Application of a negated property collapses to formula negation, so the
// term-level constructions stay interchangeable with their pointwise reading.
inline Formula apply(PropertyTerm p, IndividualTerm t) {
    if (p.negated) {
        PropertyTerm base = p;
        base.negated = false;
        return neg(apply(std::move(base), std::move(t)));
    }
    Formula::Node n;
    n.op = Op::Apply;
    n.prop = std::move(p);
    n.ivar = std::move(t);
    return Formula::make(std::move(n));
}

inline Formula essence(PropertyTerm p, IndividualTerm t) {
    Formula::Node n;
    n.op = Op::Ess;
    n.prop = std::move(p);
    n.ivar = std::move(t);
    return Formula::make(std::move(n));
}

inline Formula binary(Op op, Formula a, Formula b) {
    Formula::Node n;
    n.op = op;
    n.lhs = std::move(a);
    n.rhs = std::move(b);
    return Formula::make(std::move(n));
}

inline Formula conj(Formula a, Formula b) { return binary(Op::And, std::move(a), std::move(b)); }
inline Formula disj(Formula a, Formula b) { return binary(Op::Or, std::move(a), std::move(b)); }
inline Formula implies(Formula a, Formula b) { return binary(Op::Implies, std::move(a), std::move(b)); }
inline Formula iff(Formula a, Formula b) { return binary(Op::Iff, std::move(a), std::move(b)); }

inline Formula box(Formula f) {
    Formula::Node n;
    n.op = Op::Box;
    n.lhs = std::move(f);
    return Formula::make(std::move(n));
}

inline Formula dia(Formula f) {
    Formula::Node n;
    n.op = Op::Dia;
    n.lhs = std::move(f);
    return Formula::make(std::move(n));
}

inline Formula temporal(TemporalTag tag, QuantMode mode, Formula f) {
    Formula::Node n;
    n.op = Op::Temporal;
    n.tag = tag;
    n.mode = mode;
    n.lhs = std::move(f);
    return Formula::make(std::move(n));
}

inline Formula iquant(QuantMode mode, IndividualTerm var, Formula body) {
    if (var.kind != IndividualTerm::Kind::Variable)
        throw FormulaError("quantifier binds a constant: " + var.name);
    Formula::Node n;
    n.op = Op::IQuant;
    n.mode = mode;
    n.ivar = std::move(var);
    n.lhs = std::move(body);
    return Formula::make(std::move(n));
}

inline Formula pquant(QuantMode mode, std::string var, Formula body) {
    if (!is_identifier(var)) throw FormulaError("bad property variable: " + var);
    Formula::Node n;
    n.op = Op::PQuant;
    n.mode = mode;
    n.name = std::move(var);
    n.lhs = std::move(body);
    return Formula::make(std::move(n));
}

// ---------------------------------------------------------------------------
// Free variables (individual and property namespaces are distinct)

namespace detail {

inline void free_vars_rec(const Formula& f, std::set<std::string>& iv, std::set<std::string>& pv,
                          std::vector<std::string>& iBound, std::vector<std::string>& pBound) {
    auto boundI = [&](const std::string& n) {
        return std::find(iBound.begin(), iBound.end(), n) != iBound.end();
    };
    auto boundP = [&](const std::string& n) {
        return std::find(pBound.begin(), pBound.end(), n) != pBound.end();
    };
    auto term = [&](const IndividualTerm& t) {
        if (t.kind == IndividualTerm::Kind::Variable && !boundI(t.name)) iv.insert(t.name);
    };
    auto prop = [&](const PropertyTerm& p) {
        if (p.kind == PropertyTerm::Kind::Variable && !boundP(p.name)) pv.insert(p.name);
    };
    const Formula::Node& n = f.node();
    switch (n.op) {
        case Op::Atom:
            for (const auto& a : n.args) term(a);
            break;
        case Op::Pos:
            prop(n.prop);
            break;
        case Op::Apply:
        case Op::Ess:
            prop(n.prop);
            term(n.ivar);
            break;
        case Op::Not:
        case Op::Box:
        case Op::Dia:
        case Op::Temporal:
            free_vars_rec(n.lhs, iv, pv, iBound, pBound);
            break;
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff:
            free_vars_rec(n.lhs, iv, pv, iBound, pBound);
            free_vars_rec(n.rhs, iv, pv, iBound, pBound);
            break;
        case Op::IQuant:
            iBound.push_back(n.ivar.name);
            free_vars_rec(n.lhs, iv, pv, iBound, pBound);
            iBound.pop_back();
            break;
        case Op::PQuant:
            pBound.push_back(n.name);
            free_vars_rec(n.lhs, iv, pv, iBound, pBound);
            pBound.pop_back();
            break;
    }
}

}  // namespace detail

inline std::set<std::string> free_individual_vars(const Formula& f) {
    std::set<std::string> iv, pv;
    std::vector<std::string> ib, pb;
    detail::free_vars_rec(f, iv, pv, ib, pb);
    return iv;
}

inline std::set<std::string> free_property_vars(const Formula& f) {
    std::set<std::string> iv, pv;
    std::vector<std::string> ib, pb;
    detail::free_vars_rec(f, iv, pv, ib, pb);
    return pv;
}

namespace detail {

inline std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
    std::string stem = base;
    while (!stem.empty() && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
    if (stem.empty()) stem = "v";
    for (int i = 1;; ++i) {
        std::string cand = stem + std::to_string(i);
        if (!avoid.count(cand)) return cand;
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Substitution (capture-avoiding)

inline Formula substitute_individual(const Formula& f, const std::string& var, const IndividualTerm& t);

namespace detail {

inline IndividualTerm subst_term(const IndividualTerm& u, const std::string& var, const IndividualTerm& t) {
    if (u.kind == IndividualTerm::Kind::Variable && u.name == var) return t;
    return u;
}

}  // namespace detail

inline Formula substitute_individual(const Formula& f, const std::string& var, const IndividualTerm& t) {
    const Formula::Node& n = f.node();
    switch (n.op) {
        case Op::Atom: {
            std::vector<IndividualTerm> args;
            args.reserve(n.args.size());
            for (const auto& a : n.args) args.push_back(detail::subst_term(a, var, t));
            return atom(n.name, std::move(args));
        }
        case Op::Pos:
            return f;
        case Op::Apply:
            return apply(n.prop, detail::subst_term(n.ivar, var, t));
        case Op::Ess:
            return essence(n.prop, detail::subst_term(n.ivar, var, t));
        case Op::Not:
            return neg(substitute_individual(n.lhs, var, t));
        case Op::Box:
            return box(substitute_individual(n.lhs, var, t));
        case Op::Dia:
            return dia(substitute_individual(n.lhs, var, t));
        case Op::Temporal:
            return temporal(n.tag, n.mode, substitute_individual(n.lhs, var, t));
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff:
            return binary(n.op, substitute_individual(n.lhs, var, t), substitute_individual(n.rhs, var, t));
        case Op::IQuant: {
            if (n.ivar.name == var) return f;  // bound here
            if (!free_individual_vars(n.lhs).count(var)) return f;
            if (t.kind == IndividualTerm::Kind::Variable && t.name == n.ivar.name) {
                // rename the binder away from the incoming name
                std::set<std::string> avoid = free_individual_vars(n.lhs);
                avoid.insert(var);
                avoid.insert(t.name);
                IndividualTerm nb = ivar(detail::fresh_name(n.ivar.name, avoid));
                Formula body = substitute_individual(n.lhs, n.ivar.name, nb);
                return iquant(n.mode, nb, substitute_individual(body, var, t));
            }
            return iquant(n.mode, n.ivar, substitute_individual(n.lhs, var, t));
        }
        case Op::PQuant:
            return pquant(n.mode, n.name, substitute_individual(n.lhs, var, t));
    }
    throw FormulaError("unreachable");
}

inline PropertyTerm substitute_prop_term(const PropertyTerm& p, const std::string& var, const PropertyTerm& t) {
    if (p.kind == PropertyTerm::Kind::Variable && p.name == var) {
        return p.negated ? pneg(t) : t;
    }
    return p;
}

inline Formula substitute_property(const Formula& f, const std::string& var, const PropertyTerm& t) {
    const Formula::Node& n = f.node();
    switch (n.op) {
        case Op::Atom:
            return f;
        case Op::Pos:
            return pos(substitute_prop_term(n.prop, var, t));
        case Op::Apply:
            return apply(substitute_prop_term(n.prop, var, t), n.ivar);
        case Op::Ess:
            return essence(substitute_prop_term(n.prop, var, t), n.ivar);
        case Op::Not:
            return neg(substitute_property(n.lhs, var, t));
        case Op::Box:
            return box(substitute_property(n.lhs, var, t));
        case Op::Dia:
            return dia(substitute_property(n.lhs, var, t));
        case Op::Temporal:
            return temporal(n.tag, n.mode, substitute_property(n.lhs, var, t));
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff:
            return binary(n.op, substitute_property(n.lhs, var, t), substitute_property(n.rhs, var, t));
        case Op::IQuant:
            return iquant(n.mode, n.ivar, substitute_property(n.lhs, var, t));
        case Op::PQuant: {
            if (n.name == var) return f;  // bound here
            if (!free_property_vars(n.lhs).count(var)) return f;
            if (t.kind == PropertyTerm::Kind::Variable && t.name == n.name) {
                std::set<std::string> avoid = free_property_vars(n.lhs);
                avoid.insert(var);
                avoid.insert(t.name);
                std::string nb = detail::fresh_name(n.name, avoid);
                Formula body = substitute_property(n.lhs, n.name, pvar(nb));
                return pquant(n.mode, nb, substitute_property(body, var, t));
            }
            return pquant(n.mode, n.name, substitute_property(n.lhs, var, t));
        }
    }
    throw FormulaError("unreachable");
}

// ---------------------------------------------------------------------------
// Alpha equivalence

namespace detail {

struct AlphaEnv {
    std::vector<std::pair<std::string, std::string>> ind;   // left name -> right name
    std::vector<std::pair<std::string, std::string>> prop;
};

inline bool alpha_term(const IndividualTerm& a, const IndividualTerm& b, const AlphaEnv& env) {
    if (a.kind != b.kind) return false;
    if (a.kind == IndividualTerm::Kind::Constant) return a.name == b.name;
    for (auto it = env.ind.rbegin(); it != env.ind.rend(); ++it) {
        if (it->first == a.name || it->second == b.name) return it->first == a.name && it->second == b.name;
    }
    return a.name == b.name;  // both free
}

inline bool alpha_prop(const PropertyTerm& a, const PropertyTerm& b, const AlphaEnv& env) {
    if (a.kind != b.kind || a.negated != b.negated) return false;
    if (a.kind == PropertyTerm::Kind::Named) return a.name == b.name;
    for (auto it = env.prop.rbegin(); it != env.prop.rend(); ++it) {
        if (it->first == a.name || it->second == b.name) return it->first == a.name && it->second == b.name;
    }
    return a.name == b.name;
}

inline bool alpha_rec(const Formula& a, const Formula& b, AlphaEnv& env) {
    const Formula::Node& x = a.node();
    const Formula::Node& y = b.node();
    if (x.op != y.op) return false;
    switch (x.op) {
        case Op::Atom: {
            if (x.name != y.name || x.args.size() != y.args.size()) return false;
            for (size_t i = 0; i < x.args.size(); ++i)
                if (!alpha_term(x.args[i], y.args[i], env)) return false;
            return true;
        }
        case Op::Pos:
            return alpha_prop(x.prop, y.prop, env);
        case Op::Apply:
        case Op::Ess:
            return alpha_prop(x.prop, y.prop, env) && alpha_term(x.ivar, y.ivar, env);
        case Op::Not:
        case Op::Box:
        case Op::Dia:
            return alpha_rec(x.lhs, y.lhs, env);
        case Op::Temporal:
            return x.tag == y.tag && x.mode == y.mode && alpha_rec(x.lhs, y.lhs, env);
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff:
            return alpha_rec(x.lhs, y.lhs, env) && alpha_rec(x.rhs, y.rhs, env);
        case Op::IQuant: {
            if (x.mode != y.mode) return false;
            env.ind.emplace_back(x.ivar.name, y.ivar.name);
            bool r = alpha_rec(x.lhs, y.lhs, env);
            env.ind.pop_back();
            return r;
        }
        case Op::PQuant: {
            if (x.mode != y.mode) return false;
            env.prop.emplace_back(x.name, y.name);
            bool r = alpha_rec(x.lhs, y.lhs, env);
            env.prop.pop_back();
            return r;
        }
    }
    return false;
}

}  // namespace detail

inline bool alpha_equal(const Formula& a, const Formula& b) {
    detail::AlphaEnv env;
    return detail::alpha_rec(a, b, env);
}

// ---------------------------------------------------------------------------
// Signature

struct Signature {
    std::set<std::string> atoms;                      // 0-ary propositional letters
    std::set<std::pair<std::string, int>> predicates; // atoms with arguments
    std::set<std::string> namedProperties;

    void merge(const Signature& o) {
        atoms.insert(o.atoms.begin(), o.atoms.end());
        predicates.insert(o.predicates.begin(), o.predicates.end());
        namedProperties.insert(o.namedProperties.begin(), o.namedProperties.end());
    }
};

inline void collect_signature(const Formula& f, Signature& sig) {
    const Formula::Node& n = f.node();
    switch (n.op) {
        case Op::Atom:
            if (n.args.empty())
                sig.atoms.insert(n.name);
            else
                sig.predicates.insert({n.name, static_cast<int>(n.args.size())});
            break;
        case Op::Pos:
        case Op::Apply:
        case Op::Ess:
            if (n.prop.kind == PropertyTerm::Kind::Named) sig.namedProperties.insert(n.prop.name);
            break;
        case Op::Not:
        case Op::Box:
        case Op::Dia:
        case Op::Temporal:
        case Op::IQuant:
        case Op::PQuant:
            collect_signature(n.lhs, sig);
            break;
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff:
            collect_signature(n.lhs, sig);
            collect_signature(n.rhs, sig);
            break;
    }
}

inline Signature formula_signature(const Formula& f) {
    Signature sig;
    collect_signature(f, sig);
    return sig;
}

inline bool signature_covers(const Signature& sig, const Formula& f) {
    Signature s = formula_signature(f);
    for (const auto& a : s.atoms)
        if (!sig.atoms.count(a)) return false;
    for (const auto& p : s.predicates)
        if (!sig.predicates.count(p)) return false;
    for (const auto& p : s.namedProperties)
        if (!sig.namedProperties.count(p)) return false;
    return true;
}

}  // namespace modalkit
