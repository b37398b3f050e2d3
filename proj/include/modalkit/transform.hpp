#pragma once

#include <optional>
#include <string>

#include "modalkit/ontology.hpp"
#include "modalkit/proof_builder.hpp"
#include "modalkit/transform_core.hpp"

// Lifting the syntactic transformations to formal systems and proofs.
// Transforming a system maps every schema pattern and definition body and
// appends the temporal weakening axioms; computed schemas acquire the
// transform on their instantiation chain, and the generalization rules
// conclude the transformed quantifier shapes. Theorems are transported by
// replay: each step is transformed and re-justified natively in the target
// system, so nothing is assumed about the transform preserving provability.

namespace modalkit {

inline FormalSystem transform_system(const FormalSystem& src, TransformKind kind) {
    FormalSystem out = src;
    out.name = src.name + "_" + transform_suffix(kind);
    for (auto& s : out.schemas)
        if (s.kind == AxiomSchema::Kind::Pattern) s.pattern = apply_transform(kind, s.pattern);
    for (auto& d : out.definitions) d.definiens = apply_transform(kind, d.definiens);
    out.transforms.push_back(kind);
    auto has = [&](const std::string& n) {
        for (const auto& s : out.schemas)
            if (s.name == n) return true;
        return false;
    };
    if (!has("past-weaken"))
        out.schemas.push_back(detail::formula_schema1("past-weaken", "A- phi -> E- phi"));
    if (!has("future-weaken"))
        out.schemas.push_back(detail::formula_schema1("future-weaken", "A+ phi -> E+ phi"));
    return out;
}

// The death-of-god setting: the symmetry-broken system plus the schema that
// rules out positivity in the future.
inline FormalSystem system_OTB_NFP() {
    FormalSystem sys = transform_system(system_O(), TransformKind::BreakTemporalize);
    sys.name = "O_TB+NFP";
    sys.schemas.push_back(detail::pattern_schema("no-future-pos", "[] A+ ~Pos(phi)",
                                                 {{"phi", MetaKind::PropertyMeta}}));
    return sys;
}

inline std::optional<FormalSystem> lookup_system(const std::string& name) {
    if (auto s = builtin_system(name)) return s;
    if (name == "O" || name == "S5+O") return system_O();
    if (name == "O_T") return transform_system(system_O(), TransformKind::Temporalize);
    if (name == "O_TB") return transform_system(system_O(), TransformKind::BreakTemporalize);
    if (name == "O_TB+NFP") return system_OTB_NFP();
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Replay

struct ReplayResult {
    Proof transformed;
    CheckReport report;
};

// Transforms every step formula and re-checks the proof in the target system.
// Formula bindings of pattern schemas are transformed alongside (their
// patterns were transformed with the system); computed schemas keep base
// bindings, since their transformed instances are the transform images of the
// base instances. A replay Reject is a meaningful outcome and is returned,
// not thrown.
inline ReplayResult replay_transformed(const Proof& proof, TransformKind kind,
                                       const FormalSystem& target) {
    Proof out;
    out.systemName = target.name;
    out.goal = apply_transform(kind, proof.goal);
    for (const auto& p : proof.premises)
        out.premises.emplace_back(p.first, apply_transform(kind, p.second));
    for (const auto& s : proof.steps) {
        ProofStep t = s;
        t.formula = apply_transform(kind, s.formula);
        if (t.just.kind == Justification::Kind::Axiom) {
            const AxiomSchema* schema = target.find_schema(t.just.name);
            if (schema && schema->kind == AxiomSchema::Kind::Pattern) {
                for (auto& kv : t.just.bindings)
                    if (kv.second.kind == MetaKind::FormulaMeta)
                        kv.second.formula = apply_transform(kind, kv.second.formula);
            }
        }
        out.steps.push_back(std::move(t));
    }
    ReplayResult r;
    r.report = check_proof(target, out);
    r.transformed = std::move(out);
    return r;
}

// ---------------------------------------------------------------------------
// Shipped temporal scripts

// Temporalized main theorem: the replayed derivation ends in the boxed
// conjunction; distributing the box yields both temporal theses, restated as
// a single conjunction goal.
inline Proof script_temporalized() {
    FormalSystem target = transform_system(system_O(), TransformKind::Temporalize);
    ReplayResult r = replay_transformed(script_main_theorem(), TransformKind::Temporalize, target);
    ProofBuilder b(target, std::move(r.transformed));
    int boxedPair = b.proof().steps.back().id;

    Formula past = parse("E- ex x. G(x)");
    Formula future = parse("E+ ex x. G(x)");
    // the replayed conclusion uses the definition's bound variable
    Formula pastY = parse("E- ex y. G(y)");
    Formula futureY = parse("E+ ex y. G(y)");
    int dist = b.axiom("box-and", scripts::bind({{"phi", Binding::of(pastY)},
                                                 {"psi", Binding::of(futureY)}}));
    int pastThesis = b.pc(box(pastY), {boxedPair, dist});
    int futureThesis = b.pc(box(futureY), {boxedPair, dist});
    b.pc(conj(box(past), box(future)), {pastThesis, futureThesis});
    b.set_goal(parse("([] E- ex x. G(x)) & ([] E+ ex x. G(x))"));
    return b.take();
}

// The exclusive-disjunction thesis. Distributing necessity over the exclusive
// disjunction is not an S5 validity, so the step is carried by the named
// premise TB-RIGIDITY rather than smuggled in; everything before it replays
// premise-free.
inline Formula tb_rigidity_formula() {
    return parse(
        "[]((E- ex x. G(x)) & ~(E+ ex x. G(x)) | (E+ ex x. G(x)) & ~(E- ex x. G(x)))"
        " -> ([](E- ex x. G(x)) & []~(E+ ex x. G(x)) | [](E+ ex x. G(x)) & []~(E- ex x. G(x)))");
}

inline Proof script_tb_theorem() {
    FormalSystem target = transform_system(system_O(), TransformKind::BreakTemporalize);
    ReplayResult r = replay_transformed(script_main_theorem(), TransformKind::BreakTemporalize, target);
    Proof base = std::move(r.transformed);
    base.premises.emplace_back("TB-RIGIDITY", tb_rigidity_formula());
    ProofBuilder b(target, std::move(base));
    int boxedXor = b.proof().steps.back().id;
    int rigidity = b.premise("TB-RIGIDITY");
    int final_ = b.mp(boxedXor, rigidity);
    b.set_goal(b.at(final_));
    return b.take();
}

// Death-of-god theorem: with no positivity in the future and the bridge to
// "no future God-like entity", the surviving disjunct is the past one.
inline Formula bridge_formula() {
    return parse("([] A+ ~Pos(G)) -> ([] ~ E+ ex x. G(x))");
}

inline Proof script_gods_death() {
    FormalSystem target = system_OTB_NFP();
    ReplayResult r = replay_transformed(script_main_theorem(), TransformKind::BreakTemporalize, target);
    Proof base = std::move(r.transformed);
    base.premises.emplace_back("BRIDGE", bridge_formula());
    ProofBuilder b(target, std::move(base));
    int boxedXor = b.proof().steps.back().id;

    Formula pastE = parse("E- ex y. G(y)");
    Formula futureE = parse("E+ ex y. G(y)");
    Formula xorBody = disj(conj(pastE, neg(futureE)), conj(futureE, neg(pastE)));

    int nfp = b.axiom("no-future-pos", scripts::bind({{"phi", Binding::of(pnamed("G"))}}));
    int bridge = b.premise("BRIDGE");
    int noFuture = b.mp(nfp, bridge);  // [] ~ E+ ex x. G(x)

    Formula noFutureBody = neg(parse("E+ ex x. G(x)"));
    int combine = b.axiom("box-and", scripts::bind({{"phi", Binding::of(xorBody)},
                                                    {"psi", Binding::of(noFutureBody)}}));
    int boxedBoth = b.pc(box(conj(xorBody, noFutureBody)), {combine, boxedXor, noFuture});
    int elim = b.taut(implies(conj(xorBody, noFutureBody), pastE));
    int necElim = b.nec(elim);
    int kd = b.axiom("k-dist", scripts::bind({{"phi", Binding::of(conj(xorBody, noFutureBody))},
                                              {"psi", Binding::of(pastE)}}));
    int kdm = b.mp(necElim, kd);
    int pastBoxed = b.mp(boxedBoth, kdm);  // [] E- ex y. G(y)
    b.pc(conj(b.at(pastBoxed), b.at(noFuture)), {pastBoxed, noFuture});
    b.set_goal(parse("([] E- ex x. G(x)) & ([] ~ E+ ex x. G(x))"));
    return b.take();
}

}  // namespace modalkit
