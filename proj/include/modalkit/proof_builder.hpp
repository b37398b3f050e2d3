#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "modalkit/kernel.hpp"

// Convenience layer for constructing Proof objects step by step. The builder
// computes each step's formula from its justification, so scripts stay
// literal and the kernel re-derives everything independently when checking.

namespace modalkit {

class ProofBuilder {
public:
    explicit ProofBuilder(const FormalSystem& sys) : sys_(sys) {
        proof_.systemName = sys.name;
    }

    // Continues an existing proof, e.g. appending to a replayed script.
    ProofBuilder(const FormalSystem& sys, Proof base) : sys_(sys), proof_(std::move(base)) {
        proof_.systemName = sys.name;
        for (const auto& s : proof_.steps) next_ = std::max(next_, s.id + 1);
    }

    void declare_premise(const std::string& name, Formula f) {
        proof_.premises.emplace_back(name, std::move(f));
    }

    void set_goal(Formula g) { proof_.goal = std::move(g); }

    Formula at(int id) const {
        for (const auto& s : proof_.steps)
            if (s.id == id) return s.formula;
        throw FormulaError("no step with id " + std::to_string(id));
    }

    int axiom(const std::string& schema, Bindings b = {}) {
        const AxiomSchema* s = sys_.find_schema(schema);
        if (!s) throw FormulaError("builder: unknown schema " + schema);
        Formula f = instantiate_schema(*s, b, sys_.transforms);
        Justification j;
        j.kind = Justification::Kind::Axiom;
        j.name = schema;
        j.bindings = std::move(b);
        return push(std::move(f), std::move(j));
    }

    int taut(Formula f) {
        if (!is_skeleton_tautology(f))
            throw FormulaError("builder: not a skeleton tautology: " + render(f));
        Justification j;
        j.kind = Justification::Kind::Axiom;
        j.name = "taut";
        return push(std::move(f), std::move(j));
    }

    int premise(const std::string& name) {
        const Formula* f = proof_.premise(name);
        if (!f) throw FormulaError("builder: unknown premise " + name);
        Justification j;
        j.kind = Justification::Kind::Premise;
        j.name = name;
        return push(*f, std::move(j));
    }

    int mp(int i, int j) {
        Formula imp = at(j);
        if (imp.op() != Op::Implies || !kernel_eq(imp.node().lhs, at(i)))
            throw FormulaError("builder: bad mp " + std::to_string(i) + " " + std::to_string(j));
        Justification just;
        just.kind = Justification::Kind::MP;
        just.ref1 = i;
        just.ref2 = j;
        return push(imp.node().rhs, std::move(just));
    }

    int nec(int i) {
        Justification j;
        j.kind = Justification::Kind::Nec;
        j.ref1 = i;
        return push(box(at(i)), std::move(j));
    }

    int geni(int i, const std::string& var) {
        Justification j;
        j.kind = Justification::Kind::GenI;
        j.ref1 = i;
        j.var = var;
        return push(gen_individual_shape(sys_.transforms, ivar(var), at(i)), std::move(j));
    }

    int genp(int i, const std::string& var) {
        Justification j;
        j.kind = Justification::Kind::GenP;
        j.ref1 = i;
        j.var = var;
        return push(gen_property_shape(sys_.transforms, var, at(i)), std::move(j));
    }

    int unfold(int i, const std::string& def, int k = 1) {
        const Definition* d = sys_.find_definition(def);
        if (!d) throw FormulaError("builder: unknown definition " + def);
        auto r = unfold_at(at(i), *d, k);
        if (!r) throw FormulaError("builder: no occurrence " + std::to_string(k) + " of " + def);
        Justification j;
        j.kind = Justification::Kind::Unfold;
        j.ref1 = i;
        j.name = def;
        j.position = k;
        return push(std::move(*r), std::move(j));
    }

    // Propositional consequence: adds the tautology
    //   f1 -> (f2 -> ... -> target)
    // and discharges it against the given steps with modus ponens.
    int pc(Formula target, std::initializer_list<int> steps) {
        Formula t = target;
        std::vector<int> ids(steps);
        for (auto it = ids.rbegin(); it != ids.rend(); ++it) t = implies(at(*it), t);
        int cur = taut(std::move(t));
        for (int id : ids) cur = mp(id, cur);
        return cur;
    }

    const Proof& proof() const { return proof_; }
    Proof take() { return std::move(proof_); }

private:
    const FormalSystem& sys_;
    Proof proof_;
    int next_ = 1;

    int push(Formula f, Justification j) {
        ProofStep s;
        s.id = next_++;
        s.formula = std::move(f);
        s.just = std::move(j);
        proof_.steps.push_back(std::move(s));
        return proof_.steps.back().id;
    }
};

}  // namespace modalkit
