#pragma once

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "modalkit/defs.hpp"
#include "modalkit/formula.hpp"

// Finite Kripke models and direct satisfaction evaluation. Worlds and domain
// elements are named; relations are index sets. A model may carry a strict
// linear time order (used only by the temporal operators) and a positivity
// interpretation (a set of world-indexed extensions deemed positive).

namespace modalkit {

struct EvalError : std::runtime_error {
    explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

// One world-indexed extension: for each world, the set of domain indices.
using Extension = std::vector<std::set<int>>;

struct KripkeModel {
    std::vector<std::string> worlds;
    std::set<std::pair<int, int>> access;
    std::optional<std::vector<int>> timeOrder;  // world indices, earliest first
    std::vector<std::string> domain;
    std::set<std::string> atoms;                       // declared propositional letters
    std::set<std::pair<std::string, int>> valuation;   // (atom, world) pairs that hold
    std::map<std::string, Extension> propExt;          // named property extensions
    std::optional<std::vector<Extension>> positive;    // positivity interpretation

    int world_index(const std::string& id) const {
        for (size_t i = 0; i < worlds.size(); ++i)
            if (worlds[i] == id) return static_cast<int>(i);
        return -1;
    }

    int domain_index(const std::string& id) const {
        for (size_t i = 0; i < domain.size(); ++i)
            if (domain[i] == id) return static_cast<int>(i);
        return -1;
    }

    bool related(int a, int b) const { return access.count({a, b}) > 0; }
};

// ---------------------------------------------------------------------------
// Frame conditions

inline bool frame_reflexive(const KripkeModel& m) {
    for (size_t w = 0; w < m.worlds.size(); ++w)
        if (!m.related(static_cast<int>(w), static_cast<int>(w))) return false;
    return true;
}

inline bool frame_symmetric(const KripkeModel& m) {
    for (const auto& e : m.access)
        if (!m.related(e.second, e.first)) return false;
    return true;
}

inline bool frame_transitive(const KripkeModel& m) {
    for (const auto& e : m.access)
        for (const auto& f : m.access)
            if (e.second == f.first && !m.related(e.first, f.second)) return false;
    return true;
}

inline bool frame_serial(const KripkeModel& m) {
    for (size_t w = 0; w < m.worlds.size(); ++w) {
        bool any = false;
        for (size_t v = 0; v < m.worlds.size(); ++v)
            if (m.related(static_cast<int>(w), static_cast<int>(v))) { any = true; break; }
        if (!any) return false;
    }
    return true;
}

inline bool frame_euclidean(const KripkeModel& m) {
    for (const auto& e : m.access)
        for (const auto& f : m.access)
            if (e.first == f.first && !m.related(e.second, f.second)) return false;
    return true;
}

inline bool time_order_valid(const KripkeModel& m) {
    if (!m.timeOrder) return false;
    if (m.timeOrder->size() != m.worlds.size()) return false;
    std::set<int> seen(m.timeOrder->begin(), m.timeOrder->end());
    if (seen.size() != m.worlds.size()) return false;
    for (int w : *m.timeOrder)
        if (w < 0 || w >= static_cast<int>(m.worlds.size())) return false;
    return true;
}

inline std::set<std::string> check_frame_class(const KripkeModel& m) {
    std::set<std::string> flags;
    if (frame_reflexive(m)) flags.insert("reflexive");
    if (frame_symmetric(m)) flags.insert("symmetric");
    if (frame_transitive(m)) flags.insert("transitive");
    if (frame_serial(m)) flags.insert("serial");
    if (frame_euclidean(m)) flags.insert("euclidean");
    if (flags.count("reflexive") && flags.count("symmetric") && flags.count("transitive"))
        flags.insert("equivalence");
    if (time_order_valid(m)) flags.insert("linear-time-valid");
    return flags;
}

enum class FrameClass { All, Reflexive, Preorder, Equivalence };

inline bool frame_in_class(const KripkeModel& m, FrameClass fc) {
    switch (fc) {
        case FrameClass::All: return true;
        case FrameClass::Reflexive: return frame_reflexive(m);
        case FrameClass::Preorder: return frame_reflexive(m) && frame_transitive(m);
        case FrameClass::Equivalence:
            return frame_reflexive(m) && frame_symmetric(m) && frame_transitive(m);
    }
    return false;
}

// ---------------------------------------------------------------------------
// Evaluation

struct EvalOptions {
    // Property quantifiers enumerate every world-indexed extension; refused
    // when |domain| * |worlds| exceeds this bound.
    int extensionBound = 6;
};

struct EvalEnv {
    std::map<std::string, int> ind;         // individual variable -> domain index
    std::map<std::string, Extension> prop;  // property variable -> extension
};

namespace detail {

inline bool eval_rec(const KripkeModel& m, int w, const Formula& f, EvalEnv& env,
                     const EvalOptions& opt);

inline int eval_term(const KripkeModel& m, const EvalEnv& env, const IndividualTerm& t) {
    if (t.kind == IndividualTerm::Kind::Variable) {
        auto it = env.ind.find(t.name);
        if (it == env.ind.end()) throw EvalError("unbound individual variable: " + t.name);
        return it->second;
    }
    int d = m.domain_index(t.name);
    if (d < 0) throw EvalError("uninterpreted constant: " + t.name);
    return d;
}

// Extension of a property term. Named properties without a declared extension
// fall back to their definitional reading when they are the registered G/NE.
inline Extension prop_extension(const KripkeModel& m, EvalEnv& env, const PropertyTerm& p,
                                const EvalOptions& opt) {
    Extension base;
    if (p.kind == PropertyTerm::Kind::Named) {
        auto it = m.propExt.find(p.name);
        if (it != m.propExt.end()) {
            base = it->second;
        } else if (p.name == "G" || p.name == "NE") {
            base.resize(m.worlds.size());
            const std::string probe = "x0";  // scratch variable, saved/restored below
            for (size_t w = 0; w < m.worlds.size(); ++w)
                for (size_t d = 0; d < m.domain.size(); ++d) {
                    Formula body = p.name == "G" ? godlike_definiens(ivar(probe))
                                                 : ne_definiens(ivar(probe));
                    auto saved = env.ind.find(probe);
                    bool had = saved != env.ind.end();
                    int savedVal = had ? saved->second : -1;
                    env.ind[probe] = static_cast<int>(d);
                    bool in = eval_rec(m, static_cast<int>(w), body, env, opt);
                    if (had) env.ind[probe] = savedVal; else env.ind.erase(probe);
                    if (in) base[w].insert(static_cast<int>(d));
                }
        } else {
            throw EvalError("uninterpreted property: " + p.name);
        }
    } else {
        auto it = env.prop.find(p.name);
        if (it == env.prop.end()) throw EvalError("unbound property variable: " + p.name);
        base = it->second;
    }
    if (!p.negated) return base;
    Extension compl_(m.worlds.size());
    for (size_t w = 0; w < m.worlds.size(); ++w)
        for (size_t d = 0; d < m.domain.size(); ++d)
            if (!base[w].count(static_cast<int>(d))) compl_[w].insert(static_cast<int>(d));
    return compl_;
}

inline void enumerate_extensions(const KripkeModel& m, const EvalOptions& opt,
                                 std::vector<Extension>& out) {
    size_t bits = m.domain.size() * m.worlds.size();
    if (bits > static_cast<size_t>(opt.extensionBound))
        throw EvalError("property quantification bound exceeded: domain*worlds = " +
                        std::to_string(bits) + " > " + std::to_string(opt.extensionBound));
    size_t total = size_t{1} << bits;
    out.reserve(total);
    for (size_t mask = 0; mask < total; ++mask) {
        Extension e(m.worlds.size());
        size_t bit = 0;
        for (size_t w = 0; w < m.worlds.size(); ++w)
            for (size_t d = 0; d < m.domain.size(); ++d, ++bit)
                if (mask & (size_t{1} << bit)) e[w].insert(static_cast<int>(d));
        out.push_back(std::move(e));
    }
}

inline bool eval_rec(const KripkeModel& m, int w, const Formula& f, EvalEnv& env,
                     const EvalOptions& opt) {
    const Formula::Node& n = f.node();
    switch (n.op) {
        case Op::Atom: {
            if (!n.args.empty())
                throw EvalError("uninterpreted predicate: " + n.name + "/" +
                                std::to_string(n.args.size()));
            if (!m.atoms.count(n.name)) throw EvalError("uninterpreted atom: " + n.name);
            return m.valuation.count({n.name, w}) > 0;
        }
        case Op::Pos: {
            if (!m.positive) throw EvalError("uninterpreted positivity predicate");
            Extension e = prop_extension(m, env, n.prop, opt);
            for (const auto& p : *m.positive)
                if (p == e) return true;
            return false;
        }
        case Op::Apply: {
            Extension e = prop_extension(m, env, n.prop, opt);
            int d = eval_term(m, env, n.ivar);
            return e[static_cast<size_t>(w)].count(d) > 0;
        }
        case Op::Ess:
            return eval_rec(m, w, essence_definiens(n.prop, n.ivar), env, opt);
        case Op::Not:
            return !eval_rec(m, w, n.lhs, env, opt);
        case Op::And:
            return eval_rec(m, w, n.lhs, env, opt) && eval_rec(m, w, n.rhs, env, opt);
        case Op::Or:
            return eval_rec(m, w, n.lhs, env, opt) || eval_rec(m, w, n.rhs, env, opt);
        case Op::Implies:
            return !eval_rec(m, w, n.lhs, env, opt) || eval_rec(m, w, n.rhs, env, opt);
        case Op::Iff:
            return eval_rec(m, w, n.lhs, env, opt) == eval_rec(m, w, n.rhs, env, opt);
        case Op::Box: {
            for (size_t v = 0; v < m.worlds.size(); ++v)
                if (m.related(w, static_cast<int>(v)) &&
                    !eval_rec(m, static_cast<int>(v), n.lhs, env, opt))
                    return false;
            return true;
        }
        case Op::Dia: {
            for (size_t v = 0; v < m.worlds.size(); ++v)
                if (m.related(w, static_cast<int>(v)) &&
                    eval_rec(m, static_cast<int>(v), n.lhs, env, opt))
                    return true;
            return false;
        }
        case Op::Temporal: {
            if (!time_order_valid(m))
                throw EvalError("temporal operator requires a time order");
            const std::vector<int>& order = *m.timeOrder;
            size_t here = 0;
            while (order[here] != w) ++here;
            bool universal = n.mode == QuantMode::Universal;
            if (n.tag == TemporalTag::Past) {
                for (size_t i = 0; i < here; ++i) {
                    bool v = eval_rec(m, order[i], n.lhs, env, opt);
                    if (universal && !v) return false;
                    if (!universal && v) return true;
                }
            } else {
                for (size_t i = here + 1; i < order.size(); ++i) {
                    bool v = eval_rec(m, order[i], n.lhs, env, opt);
                    if (universal && !v) return false;
                    if (!universal && v) return true;
                }
            }
            return universal;
        }
        case Op::IQuant: {
            bool universal = n.mode == QuantMode::Universal;
            auto saved = env.ind.find(n.ivar.name);
            bool had = saved != env.ind.end();
            int savedVal = had ? saved->second : -1;
            for (size_t d = 0; d < m.domain.size(); ++d) {
                env.ind[n.ivar.name] = static_cast<int>(d);
                bool v = eval_rec(m, w, n.lhs, env, opt);
                if (had) env.ind[n.ivar.name] = savedVal; else env.ind.erase(n.ivar.name);
                if (universal && !v) return false;
                if (!universal && v) return true;
            }
            return universal;
        }
        case Op::PQuant: {
            bool universal = n.mode == QuantMode::Universal;
            std::vector<Extension> exts;
            enumerate_extensions(m, opt, exts);
            auto saved = env.prop.find(n.name);
            bool had = saved != env.prop.end();
            Extension savedVal = had ? saved->second : Extension{};
            for (const auto& e : exts) {
                env.prop[n.name] = e;
                bool v = eval_rec(m, w, n.lhs, env, opt);
                if (had) env.prop[n.name] = savedVal; else env.prop.erase(n.name);
                if (universal && !v) return false;
                if (!universal && v) return true;
            }
            return universal;
        }
    }
    throw EvalError("unreachable");
}

}  // namespace detail

inline bool eval(const KripkeModel& m, int w, const Formula& f, EvalEnv& env,
                 const EvalOptions& opt = {}) {
    if (w < 0 || w >= static_cast<int>(m.worlds.size())) throw EvalError("world index out of range");
    return detail::eval_rec(m, w, f, env, opt);
}

inline bool eval(const KripkeModel& m, const std::string& world, const Formula& f,
                 const EvalOptions& opt = {}) {
    int w = m.world_index(world);
    if (w < 0) throw EvalError("unknown world: " + world);
    EvalEnv env;
    return eval(m, w, f, env, opt);
}

// ---------------------------------------------------------------------------
// Text format
//
//   worlds: w1 w2
//   atoms: p q
//   access: w1->w2 w2->w2
//   time: w1<w2
//   domain: a b
//   val: p @ w1
//   ext: G @ w1 = {a b}
//   positive: G
//
// Every line type is optional except "worlds:". "positive:" lists named
// properties whose extensions make up the positivity interpretation.

inline std::string render_model(const KripkeModel& m) {
    std::ostringstream out;
    out << "worlds:";
    for (const auto& w : m.worlds) out << " " << w;
    out << "\n";
    if (!m.atoms.empty()) {
        out << "atoms:";
        for (const auto& a : m.atoms) out << " " << a;
        out << "\n";
    }
    out << "access:";
    for (const auto& e : m.access) out << " " << m.worlds[e.first] << "->" << m.worlds[e.second];
    out << "\n";
    if (m.timeOrder) {
        out << "time: ";
        for (size_t i = 0; i < m.timeOrder->size(); ++i) {
            if (i) out << "<";
            out << m.worlds[(*m.timeOrder)[i]];
        }
        out << "\n";
    }
    if (!m.domain.empty()) {
        out << "domain:";
        for (const auto& d : m.domain) out << " " << d;
        out << "\n";
    }
    for (const auto& v : m.valuation) out << "val: " << v.first << " @ " << m.worlds[v.second] << "\n";
    for (const auto& pe : m.propExt) {
        for (size_t w = 0; w < m.worlds.size(); ++w) {
            out << "ext: " << pe.first << " @ " << m.worlds[w] << " = {";
            bool first = true;
            for (int d : pe.second[w]) {
                if (!first) out << " ";
                first = false;
                out << m.domain[d];
            }
            out << "}\n";
        }
    }
    if (m.positive) {
        // positivity is serialized by naming properties with matching extensions
        out << "positive:";
        for (const auto& pe : m.propExt)
            for (const auto& p : *m.positive)
                if (p == pe.second) { out << " " << pe.first; break; }
        out << "\n";
    }
    return out.str();
}

struct ModelParseError : std::runtime_error {
    int line;
    ModelParseError(const std::string& what, int line_)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what), line(line_) {}
};

inline KripkeModel parse_model(const std::string& text) {
    KripkeModel m;
    std::istringstream in(text);
    std::string line;
    int lineNo = 0;
    auto words = [](const std::string& s) {
        std::istringstream ws(s);
        std::vector<std::string> out;
        std::string w;
        while (ws >> w) out.push_back(w);
        return out;
    };
    while (std::getline(in, line)) {
        ++lineNo;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto colon = line.find(':');
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (colon == std::string::npos) throw ModelParseError("expected 'key: ...'", lineNo);
        std::string key = line.substr(0, colon);
        std::string rest = line.substr(colon + 1);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
        if (key == "worlds") {
            for (const auto& w : words(rest)) m.worlds.push_back(w);
        } else if (key == "atoms") {
            for (const auto& a : words(rest)) m.atoms.insert(a);
        } else if (key == "access") {
            for (const auto& pair : words(rest)) {
                auto arrow = pair.find("->");
                if (arrow == std::string::npos) throw ModelParseError("expected 'w->v'", lineNo);
                int a = m.world_index(pair.substr(0, arrow));
                int b = m.world_index(pair.substr(arrow + 2));
                if (a < 0 || b < 0) throw ModelParseError("unknown world in access pair", lineNo);
                m.access.insert({a, b});
            }
        } else if (key == "time") {
            std::vector<int> order;
            std::string token;
            std::string compact;
            for (char c : rest)
                if (c != ' ' && c != '\t' && c != '\r') compact += c;
            size_t start = 0;
            while (start <= compact.size()) {
                size_t lt = compact.find('<', start);
                std::string id = compact.substr(start, lt == std::string::npos ? std::string::npos
                                                                               : lt - start);
                if (!id.empty()) {
                    int w = m.world_index(id);
                    if (w < 0) throw ModelParseError("unknown world in time order: " + id, lineNo);
                    order.push_back(w);
                }
                if (lt == std::string::npos) break;
                start = lt + 1;
            }
            m.timeOrder = order;
        } else if (key == "domain") {
            for (const auto& d : words(rest)) m.domain.push_back(d);
        } else if (key == "val") {
            auto ws = words(rest);
            if (ws.size() != 3 || ws[1] != "@") throw ModelParseError("expected 'val: atom @ world'", lineNo);
            int w = m.world_index(ws[2]);
            if (w < 0) throw ModelParseError("unknown world: " + ws[2], lineNo);
            m.atoms.insert(ws[0]);
            m.valuation.insert({ws[0], w});
        } else if (key == "ext") {
            auto eq = rest.find('=');
            if (eq == std::string::npos) throw ModelParseError("expected '= {...}'", lineNo);
            auto head = words(rest.substr(0, eq));
            if (head.size() != 3 || head[1] != "@") throw ModelParseError("expected 'ext: P @ world = {..}'", lineNo);
            int w = m.world_index(head[2]);
            if (w < 0) throw ModelParseError("unknown world: " + head[2], lineNo);
            std::string body = rest.substr(eq + 1);
            auto lb = body.find('{');
            auto rb = body.find('}');
            if (lb == std::string::npos || rb == std::string::npos || rb < lb)
                throw ModelParseError("expected '{...}'", lineNo);
            std::string inner = body.substr(lb + 1, rb - lb - 1);
            for (auto& c : inner)
                if (c == ',') c = ' ';
            auto& ext = m.propExt[head[0]];
            if (ext.empty()) ext.resize(m.worlds.size());
            for (const auto& d : words(inner)) {
                int di = m.domain_index(d);
                if (di < 0) throw ModelParseError("unknown domain element: " + d, lineNo);
                ext[w].insert(di);
            }
        } else if (key == "positive") {
            if (!m.positive) m.positive.emplace();
            for (const auto& p : words(rest)) {
                auto it = m.propExt.find(p);
                if (it == m.propExt.end())
                    throw ModelParseError("positive property without extension: " + p, lineNo);
                m.positive->push_back(it->second);
            }
        } else {
            throw ModelParseError("unknown key: " + key, lineNo);
        }
    }
    if (m.worlds.empty()) throw ModelParseError("model has no worlds", 1);
    for (auto& pe : m.propExt)
        if (pe.second.size() != m.worlds.size()) pe.second.resize(m.worlds.size());
    return m;
}

}  // namespace modalkit
