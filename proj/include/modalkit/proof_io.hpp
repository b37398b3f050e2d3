#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "modalkit/kernel.hpp"

// Line-oriented proof script format:
//
//   system O
//   goal <formula>
//   premise NAME <formula>
//   N <formula> | axiom SCHEMA key=(value) ...
//   N <formula> | mp I J
//   N <formula> | nec I
//   N <formula> | geni I x
//   N <formula> | genp I F
//   N <formula> | unfold I DEF K
//   N <formula> | premise NAME
//
// The separator is the last '|' at parenthesis depth zero, so formulas may
// contain disjunctions; axiom binding values are always parenthesized.
// '#' starts a comment. Parsing needs the formal system to know each
// binding's kind.

namespace modalkit {

struct ScriptError : std::runtime_error {
    int line;
    ScriptError(const std::string& what, int line_)
        : std::runtime_error("script line " + std::to_string(line_) + ": " + what), line(line_) {}
};

namespace detail {

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// splits on whitespace at parenthesis depth zero
inline std::vector<std::string> split_depth0(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if ((c == ' ' || c == '\t') && depth == 0) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

inline PropertyTerm parse_property_text(const std::string& text, int lineNo) {
    std::string t = trim(text);
    bool negated = false;
    while (!t.empty() && t[0] == '~') {
        negated = !negated;
        t = trim(t.substr(1));
    }
    if (!is_identifier(t)) throw ScriptError("bad property term: " + text, lineNo);
    PropertyTerm p = default_property_registry().count(t) ? pnamed(t) : pvar(t);
    return negated ? pneg(p) : p;
}

inline Binding parse_binding_value(MetaKind kind, const std::string& text, int lineNo) {
    switch (kind) {
        case MetaKind::FormulaMeta:
            try {
                return Binding::of(parse(text));
            } catch (const ParseError& e) {
                throw ScriptError(std::string("in binding formula: ") + e.what(), lineNo);
            }
        case MetaKind::PropertyMeta:
            return Binding::of(parse_property_text(text, lineNo));
        case MetaKind::IndividualMeta: {
            std::string t = trim(text);
            if (!is_individual_name(t)) throw ScriptError("bad individual term: " + text, lineNo);
            return Binding::of(ivar(t));
        }
    }
    throw ScriptError("bad binding", lineNo);
}

}  // namespace detail

inline std::string peek_script_system(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.rfind("system", 0) == 0) return detail::trim(line.substr(6));
        throw ScriptError("expected a 'system' line first", lineNo);
    }
    throw ScriptError("empty script", 1);
}

inline Proof parse_proof_script(const std::string& text, const FormalSystem& sys) {
    Proof proof;
    std::istringstream in(text);
    std::string line;
    int lineNo = 0;
    auto formula_at = [&](const std::string& s) {
        try {
            return parse(s);
        } catch (const ParseError& e) {
            throw ScriptError(e.what(), lineNo);
        }
    };
    while (std::getline(in, line)) {
        ++lineNo;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;

        if (line.rfind("system", 0) == 0 && (line.size() == 6 || line[6] == ' ' || line[6] == '\t')) {
            proof.systemName = detail::trim(line.substr(6));
            if (proof.systemName.empty()) throw ScriptError("missing system name", lineNo);
            continue;
        }
        if (line.rfind("goal", 0) == 0 && (line.size() == 4 || line[4] == ' ' || line[4] == '\t')) {
            proof.goal = formula_at(detail::trim(line.substr(4)));
            continue;
        }
        if (line.rfind("premise", 0) == 0 &&
            (line.size() == 7 || line[7] == ' ' || line[7] == '\t')) {
            std::string rest = detail::trim(line.substr(7));
            size_t sp = rest.find_first_of(" \t");
            if (sp == std::string::npos) throw ScriptError("premise needs a name and a formula", lineNo);
            std::string name = rest.substr(0, sp);
            proof.premises.emplace_back(name, formula_at(detail::trim(rest.substr(sp))));
            continue;
        }

        // step line: id, formula, '|', justification
        size_t sep = std::string::npos;
        int depth = 0;
        for (size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '(') ++depth;
            if (line[i] == ')') --depth;
            if (line[i] == '|' && depth == 0) sep = i;
        }
        if (sep == std::string::npos) throw ScriptError("step line has no justification", lineNo);
        std::string left = detail::trim(line.substr(0, sep));
        std::string right = detail::trim(line.substr(sep + 1));
        size_t sp = left.find_first_of(" \t");
        if (sp == std::string::npos) throw ScriptError("step line needs an id and a formula", lineNo);
        ProofStep step;
        try {
            step.id = std::stoi(left.substr(0, sp));
        } catch (...) {
            throw ScriptError("bad step id: " + left.substr(0, sp), lineNo);
        }
        step.formula = formula_at(detail::trim(left.substr(sp)));

        std::vector<std::string> toks = detail::split_depth0(right);
        if (toks.empty()) throw ScriptError("empty justification", lineNo);
        const std::string& kind = toks[0];
        Justification& j = step.just;
        auto ref_at = [&](size_t i) {
            if (i >= toks.size()) throw ScriptError("justification is missing a step reference", lineNo);
            try {
                return std::stoi(toks[i]);
            } catch (...) {
                throw ScriptError("bad step reference: " + toks[i], lineNo);
            }
        };
        if (kind == "axiom") {
            if (toks.size() < 2) throw ScriptError("axiom needs a schema name", lineNo);
            j.kind = Justification::Kind::Axiom;
            j.name = toks[1];
            const AxiomSchema* schema = sys.find_schema(j.name);
            if (!schema) throw ScriptError("unknown schema: " + j.name, lineNo);
            for (size_t i = 2; i < toks.size(); ++i) {
                size_t eq = toks[i].find('=');
                if (eq == std::string::npos)
                    throw ScriptError("expected key=(value): " + toks[i], lineNo);
                std::string key = toks[i].substr(0, eq);
                std::string val = toks[i].substr(eq + 1);
                if (val.size() < 2 || val.front() != '(' || val.back() != ')')
                    throw ScriptError("binding value must be parenthesized: " + toks[i], lineNo);
                val = val.substr(1, val.size() - 2);
                auto mk = schema->meta.find(key);
                if (mk == schema->meta.end())
                    throw ScriptError("schema " + j.name + " has no metavariable " + key, lineNo);
                j.bindings[key] = detail::parse_binding_value(mk->second, val, lineNo);
            }
        } else if (kind == "mp") {
            j.kind = Justification::Kind::MP;
            j.ref1 = ref_at(1);
            j.ref2 = ref_at(2);
        } else if (kind == "nec") {
            j.kind = Justification::Kind::Nec;
            j.ref1 = ref_at(1);
        } else if (kind == "geni" || kind == "genp") {
            j.kind = kind == "geni" ? Justification::Kind::GenI : Justification::Kind::GenP;
            j.ref1 = ref_at(1);
            if (toks.size() < 3) throw ScriptError(kind + " needs a variable", lineNo);
            j.var = toks[2];
        } else if (kind == "unfold") {
            j.kind = Justification::Kind::Unfold;
            j.ref1 = ref_at(1);
            if (toks.size() < 4) throw ScriptError("unfold needs I DEF K", lineNo);
            j.name = toks[2];
            try {
                j.position = std::stoi(toks[3]);
            } catch (...) {
                throw ScriptError("bad unfold position: " + toks[3], lineNo);
            }
        } else if (kind == "premise") {
            j.kind = Justification::Kind::Premise;
            if (toks.size() < 2) throw ScriptError("premise justification needs a name", lineNo);
            j.name = toks[1];
        } else {
            throw ScriptError("unknown justification: " + kind, lineNo);
        }
        proof.steps.push_back(std::move(step));
    }
    if (!proof.goal.valid()) throw ScriptError("script has no goal", 1);
    if (proof.systemName.empty()) throw ScriptError("script has no system", 1);
    return proof;
}

inline std::string render_binding(const Binding& b) {
    switch (b.kind) {
        case MetaKind::FormulaMeta: return "(" + render(b.formula) + ")";
        case MetaKind::PropertyMeta: return "(" + render(b.prop) + ")";
        case MetaKind::IndividualMeta: return "(" + b.term.name + ")";
    }
    return "()";
}

inline std::string render_justification(const Justification& j) {
    std::ostringstream out;
    switch (j.kind) {
        case Justification::Kind::Axiom:
            out << "axiom " << j.name;
            for (const auto& kv : j.bindings) out << " " << kv.first << "=" << render_binding(kv.second);
            break;
        case Justification::Kind::Premise:
            out << "premise " << j.name;
            break;
        case Justification::Kind::MP:
            out << "mp " << j.ref1 << " " << j.ref2;
            break;
        case Justification::Kind::Nec:
            out << "nec " << j.ref1;
            break;
        case Justification::Kind::GenI:
            out << "geni " << j.ref1 << " " << j.var;
            break;
        case Justification::Kind::GenP:
            out << "genp " << j.ref1 << " " << j.var;
            break;
        case Justification::Kind::Unfold:
            out << "unfold " << j.ref1 << " " << j.name << " " << j.position;
            break;
    }
    return out.str();
}

inline std::string render_proof_script(const Proof& proof) {
    std::ostringstream out;
    out << "system " << proof.systemName << "\n";
    out << "goal " << render(proof.goal) << "\n";
    for (const auto& p : proof.premises) out << "premise " << p.first << " " << render(p.second) << "\n";
    for (const auto& s : proof.steps)
        out << s.id << " " << render(s.formula) << " | " << render_justification(s.just) << "\n";
    return out.str();
}

}  // namespace modalkit
