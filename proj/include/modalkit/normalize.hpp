#pragma once

#include <map>
#include <string>
#include <vector>

#include "modalkit/formula.hpp"
#include "modalkit/printer.hpp"

// Canonical form: bound variables renamed to a depth-indexed scheme (x1, x2,
// ... / F1, F2, ..., skipping names that occur free), nested conjunctions and
// disjunctions flattened and sorted by rendered text, then rebuilt
// right-nested. normalize is idempotent and identifies alpha-variants:
// alpha_equal(a, b) implies render(normalize(a)) == render(normalize(b)).

namespace modalkit {

namespace detail {

struct CanonNames {
    std::vector<std::string> ind;
    std::vector<std::string> prop;

    const std::string& individual(size_t depth) { return grow(ind, depth, "x", indAvoid); }
    const std::string& property(size_t depth) { return grow(prop, depth, "F", propAvoid); }

    std::set<std::string> indAvoid;
    std::set<std::string> propAvoid;

private:
    static const std::string& grow(std::vector<std::string>& v, size_t depth, const char* stem,
                                   const std::set<std::string>& avoid) {
        while (v.size() <= depth) {
            int next = v.empty() ? 1 : std::stoi(v.back().substr(1)) + 1;
            std::string cand;
            do {
                cand = stem + std::to_string(next);
                ++next;
            } while (avoid.count(cand));
            v.push_back(cand);
        }
        return v[depth];
    }
};

inline Formula canon_rename(const Formula& f, CanonNames& names, size_t iDepth, size_t pDepth,
                            std::map<std::string, std::string>& iMap,
                            std::map<std::string, std::string>& pMap) {
    const Formula::Node& n = f.node();
    auto term = [&](const IndividualTerm& t) -> IndividualTerm {
        if (t.kind == IndividualTerm::Kind::Variable) {
            auto it = iMap.find(t.name);
            if (it != iMap.end()) return ivar(it->second);
        }
        return t;
    };
    auto prop = [&](const PropertyTerm& p) -> PropertyTerm {
        if (p.kind == PropertyTerm::Kind::Variable) {
            auto it = pMap.find(p.name);
            if (it != pMap.end()) {
                PropertyTerm q = pvar(it->second);
                q.negated = p.negated;
                return q;
            }
        }
        return p;
    };
    switch (n.op) {
        case Op::Atom: {
            std::vector<IndividualTerm> args;
            args.reserve(n.args.size());
            for (const auto& a : n.args) args.push_back(term(a));
            return atom(n.name, std::move(args));
        }
        case Op::Pos:
            return pos(prop(n.prop));
        case Op::Apply:
            return apply(prop(n.prop), term(n.ivar));
        case Op::Ess:
            return essence(prop(n.prop), term(n.ivar));
        case Op::Not:
            return neg(canon_rename(n.lhs, names, iDepth, pDepth, iMap, pMap));
        case Op::Box:
            return box(canon_rename(n.lhs, names, iDepth, pDepth, iMap, pMap));
        case Op::Dia:
            return dia(canon_rename(n.lhs, names, iDepth, pDepth, iMap, pMap));
        case Op::Temporal:
            return temporal(n.tag, n.mode, canon_rename(n.lhs, names, iDepth, pDepth, iMap, pMap));
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff:
            return binary(n.op, canon_rename(n.lhs, names, iDepth, pDepth, iMap, pMap),
                          canon_rename(n.rhs, names, iDepth, pDepth, iMap, pMap));
        case Op::IQuant: {
            std::string canonName = names.individual(iDepth);
            auto saved = iMap.find(n.ivar.name);
            std::string savedVal;
            bool had = saved != iMap.end();
            if (had) savedVal = saved->second;
            iMap[n.ivar.name] = canonName;
            Formula body = canon_rename(n.lhs, names, iDepth + 1, pDepth, iMap, pMap);
            if (had) iMap[n.ivar.name] = savedVal; else iMap.erase(n.ivar.name);
            return iquant(n.mode, ivar(canonName), std::move(body));
        }
        case Op::PQuant: {
            std::string canonName = names.property(pDepth);
            auto saved = pMap.find(n.name);
            std::string savedVal;
            bool had = saved != pMap.end();
            if (had) savedVal = saved->second;
            pMap[n.name] = canonName;
            Formula body = canon_rename(n.lhs, names, iDepth, pDepth + 1, iMap, pMap);
            if (had) pMap[n.name] = savedVal; else pMap.erase(n.name);
            return pquant(n.mode, canonName, std::move(body));
        }
    }
    throw FormulaError("unreachable");
}

inline void flatten_spine(const Formula& f, Op op, std::vector<Formula>& out) {
    if (f.op() == op) {
        flatten_spine(f.node().lhs, op, out);
        flatten_spine(f.node().rhs, op, out);
    } else {
        out.push_back(f);
    }
}

inline Formula sort_assoc(const Formula& f) {
    const Formula::Node& n = f.node();
    switch (n.op) {
        case Op::Atom:
        case Op::Pos:
        case Op::Apply:
        case Op::Ess:
            return f;
        case Op::Not:
            return neg(sort_assoc(n.lhs));
        case Op::Box:
            return box(sort_assoc(n.lhs));
        case Op::Dia:
            return dia(sort_assoc(n.lhs));
        case Op::Temporal:
            return temporal(n.tag, n.mode, sort_assoc(n.lhs));
        case Op::Implies:
        case Op::Iff:
            return binary(n.op, sort_assoc(n.lhs), sort_assoc(n.rhs));
        case Op::And:
        case Op::Or: {
            std::vector<Formula> parts;
            flatten_spine(f, n.op, parts);
            std::vector<std::pair<std::string, Formula>> keyed;
            keyed.reserve(parts.size());
            for (const auto& p : parts) {
                Formula s = sort_assoc(p);
                keyed.emplace_back(render(s), std::move(s));
            }
            std::stable_sort(keyed.begin(), keyed.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            Formula acc = keyed.back().second;
            for (size_t i = keyed.size() - 1; i-- > 0;)
                acc = binary(n.op, keyed[i].second, std::move(acc));
            return acc;
        }
        case Op::IQuant:
            return iquant(n.mode, n.ivar, sort_assoc(n.lhs));
        case Op::PQuant:
            return pquant(n.mode, n.name, sort_assoc(n.lhs));
    }
    throw FormulaError("unreachable");
}

}  // namespace detail

namespace detail {

inline void collect_constants(const Formula& f, std::set<std::string>& out) {
    const Formula::Node& n = f.node();
    auto term = [&](const IndividualTerm& t) {
        if (t.kind == IndividualTerm::Kind::Constant) out.insert(t.name);
    };
    switch (n.op) {
        case Op::Atom:
            for (const auto& a : n.args) term(a);
            break;
        case Op::Apply:
        case Op::Ess:
            term(n.ivar);
            break;
        case Op::Pos:
            break;
        case Op::Not:
        case Op::Box:
        case Op::Dia:
        case Op::Temporal:
        case Op::IQuant:
        case Op::PQuant:
            collect_constants(n.lhs, out);
            break;
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff:
            collect_constants(n.lhs, out);
            collect_constants(n.rhs, out);
            break;
    }
}

}  // namespace detail

inline Formula normalize(const Formula& f) {
    detail::CanonNames names;
    names.indAvoid = free_individual_vars(f);
    detail::collect_constants(f, names.indAvoid);  // constants share the name space in print
    names.propAvoid = free_property_vars(f);
    std::map<std::string, std::string> iMap, pMap;
    Formula renamed = detail::canon_rename(f, names, 0, 0, iMap, pMap);
    return detail::sort_assoc(renamed);
}

}  // namespace modalkit
