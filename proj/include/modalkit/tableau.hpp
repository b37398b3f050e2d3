#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modalkit/enumerate.hpp"
#include "modalkit/kripke.hpp"
#include "modalkit/printer.hpp"

// Labeled tableau for the propositional-modal fragment in K, T, S4, S5, with
// countermodel extraction. Rule application order is fixed: non-branching
// rules first, then branching, then modal successor creation, scanning worlds
// in creation order; this makes verdicts, statistics, and extracted models
// reproducible. S4 uses seed-set blocking for loop checks; S5 works over a
// single cluster where boxes are global and each diamond gets one witness.

namespace modalkit {

enum class System { K, T, S4, S5 };

inline const char* system_name(System s) {
    switch (s) {
        case System::K: return "K";
        case System::T: return "T";
        case System::S4: return "S4";
        case System::S5: return "S5";
    }
    return "?";
}

inline std::optional<System> system_from_name(const std::string& s) {
    if (s == "K") return System::K;
    if (s == "T") return System::T;
    if (s == "S4") return System::S4;
    if (s == "S5") return System::S5;
    return std::nullopt;
}

struct UnsupportedConstruct : std::runtime_error {
    std::string offending;
    explicit UnsupportedConstruct(const std::string& sub)
        : std::runtime_error("tableau: unsupported construct in subformula: " + sub), offending(sub) {}
};

struct TableauError : std::runtime_error {
    explicit TableauError(const std::string& what) : std::runtime_error(what) {}
};

struct TableauStats {
    long nodesExpanded = 0;
    int worldsCreated = 0;

    friend bool operator==(const TableauStats& a, const TableauStats& b) {
        return a.nodesExpanded == b.nodesExpanded && a.worldsCreated == b.worldsCreated;
    }
};

struct TableauResult {
    bool sat = false;
    KripkeModel model;  // meaningful iff sat
    int world = -1;     // root world in model
    TableauStats stats;
};

namespace detail {

inline void ensure_propositional_modal(const Formula& f) {
    const Formula::Node& n = f.node();
    switch (n.op) {
        case Op::Atom:
            if (!n.args.empty()) throw UnsupportedConstruct(render(f));
            return;
        case Op::Pos:
        case Op::Apply:
        case Op::Ess:
        case Op::Temporal:
        case Op::IQuant:
        case Op::PQuant:
            throw UnsupportedConstruct(render(f));
        case Op::Not:
        case Op::Box:
        case Op::Dia:
            ensure_propositional_modal(n.lhs);
            return;
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff:
            ensure_propositional_modal(n.lhs);
            ensure_propositional_modal(n.rhs);
            return;
    }
}

struct Entry {
    Formula f;
    std::string key;
    bool processed = false;
};

struct WorldState {
    std::vector<Entry> entries;
    std::set<std::string> present;
    std::vector<Formula> boxBodies;  // what this world pushes to its successors

    // returns false when the complement is already present (branch closes)
    bool add(const Formula& f) {
        std::string key = render(f);
        if (present.count(key)) return true;
        std::string complKey = f.op() == Op::Not ? render(f.node().lhs) : render(neg(f));
        present.insert(key);
        entries.push_back({f, std::move(key), false});
        return !present.count(complKey);
    }
};

struct Branch {
    std::vector<WorldState> worlds;
    std::vector<std::pair<int, int>> edges;
    std::vector<Formula> globalBoxes;            // S5 only
    std::map<std::string, int> seedMemo;         // S4 blocking: seed key -> world
    bool closed = false;

    int new_world() {
        worlds.emplace_back();
        return static_cast<int>(worlds.size()) - 1;
    }
};

class Tableau {
public:
    Tableau(System sys) : sys_(sys) {}

    TableauStats stats;

    std::optional<Branch> run(const Formula& root) {
        Branch b;
        int w = b.new_world();
        ++stats.worldsCreated;
        add(b, w, root);
        return b.closed ? std::nullopt : solve(std::move(b));
    }

    KripkeModel extract(const Branch& b, const Signature& sig) const {
        KripkeModel m;
        for (size_t i = 0; i < b.worlds.size(); ++i) m.worlds.push_back("w" + std::to_string(i + 1));
        m.atoms = sig.atoms;
        for (size_t w = 0; w < b.worlds.size(); ++w)
            for (const auto& e : b.worlds[w].entries) {
                if (e.f.op() == Op::Atom) m.valuation.insert({e.f.node().name, static_cast<int>(w)});
                if (e.f.op() == Op::Atom) m.atoms.insert(e.f.node().name);
            }
        switch (sys_) {
            case System::K:
                for (auto& e : b.edges) m.access.insert(e);
                break;
            case System::T:
                for (auto& e : b.edges) m.access.insert(e);
                for (size_t w = 0; w < b.worlds.size(); ++w)
                    m.access.insert({static_cast<int>(w), static_cast<int>(w)});
                break;
            case System::S4: {
                // reflexive-transitive closure of the created edges
                size_t n = b.worlds.size();
                std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
                for (size_t w = 0; w < n; ++w) adj[w][w] = true;
                for (auto& e : b.edges) adj[e.first][e.second] = true;
                for (size_t k = 0; k < n; ++k)
                    for (size_t a = 0; a < n; ++a)
                        for (size_t c = 0; c < n; ++c)
                            if (adj[a][k] && adj[k][c]) adj[a][c] = true;
                for (size_t a = 0; a < n; ++a)
                    for (size_t c = 0; c < n; ++c)
                        if (adj[a][c]) m.access.insert({static_cast<int>(a), static_cast<int>(c)});
                break;
            }
            case System::S5:
                for (size_t a = 0; a < b.worlds.size(); ++a)
                    for (size_t c = 0; c < b.worlds.size(); ++c)
                        m.access.insert({static_cast<int>(a), static_cast<int>(c)});
                break;
        }
        return m;
    }

private:
    System sys_;

    void add(Branch& b, int w, const Formula& f) {
        if (!b.worlds[w].add(f)) b.closed = true;
    }

    enum class Cat { Literal, Alpha, Beta, BoxRule, DiaRule };

    // classification drives the fixed application order
    static Cat classify(const Formula& f) {
        const Formula::Node& n = f.node();
        switch (n.op) {
            case Op::Atom: return Cat::Literal;
            case Op::And: return Cat::Alpha;
            case Op::Or:
            case Op::Implies:
            case Op::Iff: return Cat::Beta;
            case Op::Box: return Cat::BoxRule;
            case Op::Dia: return Cat::DiaRule;
            case Op::Not: {
                const Formula::Node& g = n.lhs.node();
                switch (g.op) {
                    case Op::Atom: return Cat::Literal;
                    case Op::Not: return Cat::Alpha;
                    case Op::Or:
                    case Op::Implies: return Cat::Alpha;
                    case Op::And:
                    case Op::Iff: return Cat::Beta;
                    case Op::Box: return Cat::DiaRule;  // ~[]A acts as <>~A
                    case Op::Dia: return Cat::BoxRule;  // ~<>A acts as []~A
                    default: throw UnsupportedConstruct(render(f));
                }
            }
            default: throw UnsupportedConstruct(render(f));
        }
    }

    std::optional<std::pair<int, size_t>> find_next(const Branch& b, Cat wanted) const {
        for (size_t w = 0; w < b.worlds.size(); ++w)
            for (size_t i = 0; i < b.worlds[w].entries.size(); ++i) {
                const Entry& e = b.worlds[w].entries[i];
                if (e.processed) continue;
                if (classify(e.f) == wanted) return std::make_pair(static_cast<int>(w), i);
            }
        return std::nullopt;
    }

    std::optional<Branch> solve(Branch b) {
        while (true) {
            if (b.closed) return std::nullopt;
            if (stats.nodesExpanded > 2000000)
                throw TableauError("expansion limit exceeded (internal error)");

            std::optional<std::pair<int, size_t>> hit;
            Cat cat = Cat::Literal;
            for (Cat c : {Cat::Literal, Cat::Alpha, Cat::Beta, Cat::BoxRule, Cat::DiaRule}) {
                hit = find_next(b, c);
                if (hit) { cat = c; break; }
            }
            if (!hit) break;  // saturated and open

            int w = hit->first;
            Entry& entry = b.worlds[w].entries[hit->second];
            entry.processed = true;
            Formula f = entry.f;
            ++stats.nodesExpanded;

            switch (cat) {
                case Cat::Literal:
                    continue;  // recorded at insertion
                case Cat::Alpha: {
                    apply_alpha(b, w, f);
                    continue;
                }
                case Cat::Beta: {
                    auto parts = beta_parts(f);
                    for (size_t k = 0; k < parts.size(); ++k) {
                        Branch alt = b;
                        bool ok = true;
                        for (const Formula& g : parts[k]) {
                            if (!alt.worlds[w].add(g)) { alt.closed = true; }
                        }
                        (void)ok;
                        if (!alt.closed) {
                            auto r = solve(std::move(alt));
                            if (r) return r;
                        }
                    }
                    return std::nullopt;
                }
                case Cat::BoxRule: {
                    apply_box(b, w, f);
                    continue;
                }
                case Cat::DiaRule: {
                    if (sys_ == System::S5) {
                        // place the witness at the first cluster world that
                        // tolerates it, creating a fresh world as last resort
                        Formula body = dia_body(f);
                        std::string bodyKey = render(body);
                        bool witnessed = false;
                        for (auto& ws : b.worlds)
                            if (ws.present.count(bodyKey)) { witnessed = true; break; }
                        if (witnessed) continue;
                        for (size_t v = 0; v <= b.worlds.size(); ++v) {
                            Branch alt = b;
                            int target;
                            if (v < b.worlds.size()) {
                                target = static_cast<int>(v);
                            } else {
                                target = alt.new_world();
                                ++stats.worldsCreated;
                            }
                            if (!alt.worlds[target].add(body)) alt.closed = true;
                            if (!alt.closed && v == b.worlds.size())
                                for (const Formula& g : alt.globalBoxes) {
                                    if (!alt.worlds[target].add(g)) { alt.closed = true; break; }
                                }
                            if (!alt.closed) {
                                auto r = solve(std::move(alt));
                                if (r) return r;
                            }
                        }
                        return std::nullopt;
                    }
                    apply_dia(b, w, f);
                    continue;
                }
            }
        }
        return b;
    }

    static Formula box_body(const Formula& f) {
        return f.op() == Op::Box ? f.node().lhs : neg(f.node().lhs.node().lhs);  // ~<>A -> ~A
    }

    static Formula dia_body(const Formula& f) {
        return f.op() == Op::Dia ? f.node().lhs : neg(f.node().lhs.node().lhs);  // ~[]A -> ~A
    }

    void apply_alpha(Branch& b, int w, const Formula& f) {
        const Formula::Node& n = f.node();
        if (n.op == Op::And) {
            add(b, w, n.lhs);
            if (!b.closed) add(b, w, n.rhs);
            return;
        }
        const Formula::Node& g = n.lhs.node();  // f = ~g
        switch (g.op) {
            case Op::Not:
                add(b, w, g.lhs);
                return;
            case Op::Or:
                add(b, w, neg(g.lhs));
                if (!b.closed) add(b, w, neg(g.rhs));
                return;
            case Op::Implies:
                add(b, w, g.lhs);
                if (!b.closed) add(b, w, neg(g.rhs));
                return;
            default:
                throw TableauError("bad alpha");
        }
    }

    static std::vector<std::vector<Formula>> beta_parts(const Formula& f) {
        const Formula::Node& n = f.node();
        if (n.op == Op::Or) return {{n.lhs}, {n.rhs}};
        if (n.op == Op::Implies) return {{neg(n.lhs)}, {n.rhs}};
        if (n.op == Op::Iff) return {{n.lhs, n.rhs}, {neg(n.lhs), neg(n.rhs)}};
        const Formula::Node& g = n.lhs.node();  // f = ~g
        if (g.op == Op::And) return {{neg(g.lhs)}, {neg(g.rhs)}};
        if (g.op == Op::Iff) return {{g.lhs, neg(g.rhs)}, {neg(g.lhs), g.rhs}};
        throw TableauError("bad beta");
    }

    void apply_box(Branch& b, int w, const Formula& f) {
        Formula body = box_body(f);
        switch (sys_) {
            case System::K: {
                b.worlds[w].boxBodies.push_back(body);
                for (auto& e : b.edges)
                    if (e.first == w) {
                        add(b, e.second, body);
                        if (b.closed) return;
                    }
                return;
            }
            case System::T: {
                b.worlds[w].boxBodies.push_back(body);
                add(b, w, body);
                if (b.closed) return;
                for (auto& e : b.edges)
                    if (e.first == w) {
                        add(b, e.second, body);
                        if (b.closed) return;
                    }
                return;
            }
            case System::S4: {
                // successors inherit both the body and the box itself
                Formula boxed = f.op() == Op::Box ? f : box(body);
                b.worlds[w].boxBodies.push_back(body);
                b.worlds[w].boxBodies.push_back(boxed);
                add(b, w, body);
                if (b.closed) return;
                for (auto& e : b.edges)
                    if (e.first == w) {
                        add(b, e.second, body);
                        if (b.closed) return;
                        add(b, e.second, boxed);
                        if (b.closed) return;
                    }
                return;
            }
            case System::S5: {
                b.globalBoxes.push_back(body);
                for (size_t v = 0; v < b.worlds.size(); ++v) {
                    add(b, static_cast<int>(v), body);
                    if (b.closed) return;
                }
                return;
            }
        }
    }

    void apply_dia(Branch& b, int w, const Formula& f) {
        Formula body = dia_body(f);
        std::string bodyKey = render(body);
        switch (sys_) {
            case System::K:
            case System::T: {
                int v = b.new_world();
                ++stats.worldsCreated;
                b.edges.push_back({w, v});
                add(b, v, body);
                if (b.closed) return;
                for (const Formula& g : b.worlds[w].boxBodies) {
                    add(b, v, g);
                    if (b.closed) return;
                }
                return;
            }
            case System::S4: {
                // seed = body plus everything this world pushes forward
                std::vector<Formula> seed;
                seed.push_back(body);
                std::set<std::string> seen = {bodyKey};
                for (const Formula& g : b.worlds[w].boxBodies) {
                    std::string k = render(g);
                    if (seen.insert(k).second) seed.push_back(g);
                }
                std::string seedKey;
                {
                    std::set<std::string> keys;
                    for (const Formula& g : seed) keys.insert(render(g));
                    for (const auto& k : keys) seedKey += k + "\x1f";
                }
                auto memo = b.seedMemo.find(seedKey);
                if (memo != b.seedMemo.end()) {
                    b.edges.push_back({w, memo->second});
                    return;
                }
                int v = b.new_world();
                ++stats.worldsCreated;
                b.edges.push_back({w, v});
                b.seedMemo[seedKey] = v;
                for (const Formula& g : seed) {
                    add(b, v, g);
                    if (b.closed) return;
                }
                return;
            }
            case System::S5:
                throw TableauError("S5 diamonds are handled by the placement branching");
        }
    }
};

}  // namespace detail

inline TableauResult decide_sat(const Formula& f, System sys) {
    detail::ensure_propositional_modal(f);
    detail::Tableau t(sys);
    auto open = t.run(f);
    TableauResult r;
    r.stats = t.stats;
    if (!open) {
        r.sat = false;
        return r;
    }
    r.sat = true;
    r.model = t.extract(*open, formula_signature(f));
    r.world = 0;
    // a SAT verdict always carries an eval-verified model
    EvalEnv env;
    if (!eval(r.model, 0, f, env))
        throw TableauError("internal error: extracted model fails verification for " + render(f));
    return r;
}

struct ValidityVerdict {
    bool valid = false;
    KripkeModel countermodel;  // meaningful iff !valid
    int world = -1;
    TableauStats stats;
};

inline ValidityVerdict decide_valid(const Formula& f, System sys) {
    TableauResult r = decide_sat(neg(f), sys);
    ValidityVerdict v;
    v.stats = r.stats;
    if (r.sat) {
        v.valid = false;
        v.countermodel = r.model;
        v.world = r.world;
    } else {
        v.valid = true;
    }
    return v;
}

// Serializes the satisfying model of a SAT result in the model text format.
inline std::string extract_countermodel(const TableauResult& r) {
    if (!r.sat) throw TableauError("extract_countermodel: verdict is UNSAT");
    return render_model(r.model);
}

}  // namespace modalkit
