#pragma once

#include <optional>
#include <string>

#include "modalkit/defs.hpp"
#include "modalkit/kernel.hpp"

// The built-in modal systems. T is propositional logic plus the ten modal
// schemas below (admitted alongside the truth-table tautology schema); S4
// adds the two iteration schemas; S5 adds box-5. TMP is propositional logic
// with the two temporal weakening schemas.

namespace modalkit {

namespace detail {

inline AxiomSchema pattern_schema(const std::string& name, const std::string& text,
                                  std::initializer_list<std::pair<const char*, MetaKind>> meta) {
    AxiomSchema s;
    s.name = name;
    s.kind = AxiomSchema::Kind::Pattern;
    s.pattern = parse(text);
    for (auto& m : meta) s.meta[m.first] = m.second;
    return s;
}

inline AxiomSchema formula_schema1(const std::string& name, const std::string& text) {
    return pattern_schema(name, text, {{"phi", MetaKind::FormulaMeta}});
}

inline AxiomSchema formula_schema2(const std::string& name, const std::string& text) {
    return pattern_schema(name, text,
                          {{"phi", MetaKind::FormulaMeta}, {"psi", MetaKind::FormulaMeta}});
}

inline AxiomSchema taut_schema() {
    AxiomSchema s;
    s.name = "taut";
    s.kind = AxiomSchema::Kind::Taut;
    return s;
}

}  // namespace detail

inline FormalSystem builtin_T() {
    FormalSystem sys;
    sys.name = "T";
    sys.rules = {Rule::ModusPonens, Rule::Necessitation};
    sys.schemas.push_back(detail::taut_schema());
    sys.schemas.push_back(detail::formula_schema1("box-t", "[]phi -> phi"));
    sys.schemas.push_back(detail::formula_schema1("dia-t", "phi -> <>phi"));
    sys.schemas.push_back(detail::formula_schema1("box-dual", "[]phi <-> ~<>~phi"));
    sys.schemas.push_back(detail::formula_schema1("dia-dual", "<>phi <-> ~[]~phi"));
    sys.schemas.push_back(detail::formula_schema2("box-and", "[](phi & psi) <-> []phi & []psi"));
    sys.schemas.push_back(detail::formula_schema2("dia-or", "<>(phi | psi) <-> <>phi | <>psi"));
    sys.schemas.push_back(detail::formula_schema2("box-or", "[]phi | []psi -> [](phi | psi)"));
    sys.schemas.push_back(detail::formula_schema2("dia-and", "<>(phi & psi) -> <>phi & <>psi"));
    sys.schemas.push_back(detail::formula_schema2("k-dist", "[](phi -> psi) -> ([]phi -> []psi)"));
    sys.schemas.push_back(detail::formula_schema2("dia-k", "(<>phi -> <>psi) -> <>(phi -> psi)"));
    return sys;
}

inline FormalSystem builtin_S4() {
    FormalSystem sys = builtin_T();
    sys.name = "S4";
    sys.schemas.push_back(detail::formula_schema1("box-4", "[][]phi <-> []phi"));
    sys.schemas.push_back(detail::formula_schema1("dia-4", "<><>phi <-> <>phi"));
    return sys;
}

inline FormalSystem builtin_S5() {
    FormalSystem sys = builtin_S4();
    sys.name = "S5";
    sys.schemas.push_back(detail::formula_schema1("box-5", "<>[]phi -> []phi"));
    return sys;
}

inline FormalSystem builtin_TMP() {
    FormalSystem sys;
    sys.name = "TMP";
    sys.rules = {Rule::ModusPonens};
    sys.schemas.push_back(detail::taut_schema());
    sys.schemas.push_back(detail::formula_schema1("past-weaken", "A- phi -> E- phi"));
    sys.schemas.push_back(detail::formula_schema1("future-weaken", "A+ phi -> E+ phi"));
    return sys;
}

inline std::optional<FormalSystem> builtin_system(const std::string& name) {
    if (name == "T") return builtin_T();
    if (name == "S4") return builtin_S4();
    if (name == "S5") return builtin_S5();
    if (name == "TMP") return builtin_TMP();
    return std::nullopt;
}

}  // namespace modalkit
