#pragma once

#include "modalkit/formula.hpp"

// Definitional bodies for the registered second-order constructs. G(x) means
// having every positive property; Ess(F,x) means F holds of x and necessarily
// entails every property of x; NE(x) means every essence of x is necessarily
// instantiated. The kernel registers these as rewrite rules; the evaluator
// uses them as the semantic reading of the corresponding nodes.

namespace modalkit {

namespace detail {

inline std::string fresh_binder(const char* stem, const std::set<std::string>& avoid) {
    if (!avoid.count(stem)) return stem;
    return fresh_name(stem, avoid);
}

}  // namespace detail

inline Formula godlike_definiens(const IndividualTerm& x) {
    std::string f = detail::fresh_binder("F", {});
    return pquant(QuantMode::Universal, f, implies(pos(pvar(f)), apply(pvar(f), x)));
}

inline Formula essence_definiens(const PropertyTerm& p, const IndividualTerm& x) {
    std::set<std::string> avoidP;
    if (p.kind == PropertyTerm::Kind::Variable) avoidP.insert(p.name);
    std::string psi = detail::fresh_binder("psi", avoidP);
    std::set<std::string> avoidI = {x.name};
    std::string y = detail::fresh_binder("y", avoidI);
    Formula entail = box(iquant(QuantMode::Universal, ivar(y),
                                implies(apply(p, ivar(y)), apply(pvar(psi), ivar(y)))));
    return conj(apply(p, x),
                pquant(QuantMode::Universal, psi, implies(apply(pvar(psi), x), entail)));
}

inline Formula ne_definiens(const IndividualTerm& x) {
    std::string f = detail::fresh_binder("F", {});
    std::set<std::string> avoidI = {x.name};
    std::string y = detail::fresh_binder("y", avoidI);
    return pquant(QuantMode::Universal, f,
                  implies(essence(pvar(f), x),
                          box(iquant(QuantMode::Existential, ivar(y), apply(pvar(f), ivar(y))))));
}

}  // namespace modalkit
