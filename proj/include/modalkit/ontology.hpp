#pragma once

#include <sstream>
#include <string>

#include "modalkit/defs.hpp"
#include "modalkit/proof_builder.hpp"
#include "modalkit/systems.hpp"
#include "modalkit/tableau.hpp"

// System O: S5 with the positivity axioms and the registered definitions of
// G, Ess, and NE, with the first- and second-order quantifier layer enabled.
// The shipped derivations live here as programmatic script constructors; the
// kernel re-checks every step, so these builders prove what they claim on
// every build.

namespace modalkit {

inline FormalSystem system_O() {
    FormalSystem sys = builtin_S5();
    sys.name = "O";
    sys.rules = {Rule::ModusPonens, Rule::Necessitation, Rule::GenIndividual, Rule::GenProperty,
                 Rule::Unfold};
    sys.quantifierLayer = true;

    sys.schemas.push_back(detail::pattern_schema("pos-neg", "Pos(~phi) <-> ~Pos(phi)",
                                                 {{"phi", MetaKind::PropertyMeta}}));
    sys.schemas.push_back(detail::pattern_schema(
        "pos-mono", "Pos(phi) & (all x. (phi(x) -> psi(x))) -> Pos(psi)",
        {{"phi", MetaKind::PropertyMeta}, {"psi", MetaKind::PropertyMeta}}));
    sys.schemas.push_back(detail::pattern_schema("pos-g", "Pos(G)", {}));
    sys.schemas.push_back(detail::pattern_schema("pos-stable", "Pos(phi) -> []Pos(phi)",
                                                 {{"phi", MetaKind::PropertyMeta}}));
    sys.schemas.push_back(detail::pattern_schema("pos-ne", "Pos(NE)", {}));

    Definition g;
    g.name = "G";
    g.head = Definition::Head::Godlike;
    g.indMeta = "xm";
    g.definiens = godlike_definiens(ivar("xm"));
    sys.definitions.push_back(std::move(g));

    Definition ess;
    ess.name = "ess";
    ess.head = Definition::Head::Essence;
    ess.propMeta = "fm";
    ess.indMeta = "xm";
    ess.definiens = essence_definiens(pvar("fm"), ivar("xm"));
    sys.definitions.push_back(std::move(ess));

    Definition ne;
    ne.name = "NE";
    ne.head = Definition::Head::NecExists;
    ne.indMeta = "xm";
    ne.definiens = ne_definiens(ivar("xm"));
    sys.definitions.push_back(std::move(ne));

    return sys;
}

namespace scripts {

inline Bindings bind(std::initializer_list<std::pair<const char*, Binding>> kv) {
    Bindings b;
    for (auto& p : kv) b[p.first] = p.second;
    return b;
}

// Possibility of instantiation: Pos(P) -> <> ex x. P(x). The derivation is
// the reductio: from ~<> ex x. P(x), everything P-like entails anything, so
// with psi := ~P the positivity axioms force ~Pos(P).
inline int append_possibility_block(ProofBuilder& b, const PropertyTerm& P) {
    IndividualTerm x = ivar("x");
    PropertyTerm psi = pvar("psi");
    Formula Px = apply(P, x);
    Formula psix = apply(psi, x);
    Formula E = iquant(QuantMode::Existential, x, Px);
    Formula allImp = iquant(QuantMode::Universal, x, implies(Px, psix));
    Formula allNeg = iquant(QuantMode::Universal, x, implies(Px, neg(Px)));

    int dd = b.axiom("dia-dual", bind({{"phi", Binding::of(E)}}));
    int toBox = b.pc(implies(neg(dia(E)), box(neg(E))), {dd});

    int a = b.taut(implies(neg(Px), implies(Px, psix)));
    int ga = b.geni(a, "x");
    int di = b.axiom("dist-i", bind({{"x", Binding::of(x)},
                                     {"phi", Binding::of(neg(Px))},
                                     {"psi", Binding::of(implies(Px, psix))}}));
    int dm = b.mp(ga, di);
    int dual = b.axiom("dual-i", bind({{"x", Binding::of(x)}, {"phi", Binding::of(Px)}}));
    int notE = b.pc(implies(neg(E), allImp), {dual, dm});
    int nec1 = b.nec(notE);
    int k1 = b.axiom("k-dist", bind({{"phi", Binding::of(neg(E))}, {"psi", Binding::of(allImp)}}));
    int boxed = b.mp(nec1, k1);
    int chain1 = b.pc(implies(neg(dia(E)), box(allImp)), {toBox, boxed});

    int gen = b.genp(chain1, "psi");
    int dp = b.axiom("dist-p", bind({{"F", Binding::of(psi)},
                                     {"phi", Binding::of(neg(dia(E)))},
                                     {"psi", Binding::of(box(allImp))}}));
    int dpm = b.mp(gen, dp);
    int vac = b.axiom("vac-p", bind({{"F", Binding::of(psi)}, {"phi", Binding::of(neg(dia(E)))}}));
    int all4 = b.pc(implies(neg(dia(E)), pquant(QuantMode::Universal, "psi", box(allImp))), {vac, dpm});

    // the psi := ~P instantiation
    int inst = b.axiom("inst-p", bind({{"F", Binding::of(psi)},
                                       {"phi", Binding::of(box(allImp))},
                                       {"P", Binding::of(pneg(P))}}));
    int chain2 = b.pc(implies(neg(dia(E)), box(allNeg)), {all4, inst});
    int bt = b.axiom("box-t", bind({{"phi", Binding::of(allNeg)}}));
    int chain3 = b.pc(implies(neg(dia(E)), allNeg), {chain2, bt});

    int mono = b.axiom("pos-mono", bind({{"phi", Binding::of(P)}, {"psi", Binding::of(pneg(P))}}));
    int flip = b.axiom("pos-neg", bind({{"phi", Binding::of(P)}}));
    return b.pc(implies(pos(P), dia(E)), {chain3, mono, flip});
}

// Under a hypothesis id for "(G(x) & psi(x)) -> Pos(psi)" derives
// "G(x) -> Ess(G,x)" by stabilizing positivity and folding the definition.
inline int append_essence_block(ProofBuilder& b, int lemma1) {
    IndividualTerm x = ivar("x");
    IndividualTerm y = ivar("y");
    PropertyTerm psi = pvar("psi");
    PropertyTerm fvar = pvar("F");
    Formula Gx = apply(pnamed("G"), x);
    Formula Gy = apply(pnamed("G"), y);
    Formula psix = apply(psi, x);
    Formula psiy = apply(psi, y);
    Formula allY = iquant(QuantMode::Universal, y, implies(Gy, psiy));

    int stable = b.axiom("pos-stable", bind({{"phi", Binding::of(psi)}}));

    int instG = b.axiom("inst-p", bind({{"F", Binding::of(fvar)},
                                        {"phi", Binding::of(implies(pos(fvar), apply(fvar, y)))},
                                        {"P", Binding::of(psi)}}));
    int foldG = b.unfold(instG, "G", 1);
    int curry = b.pc(implies(pos(psi), implies(Gy, psiy)), {foldG});
    int genY = b.geni(curry, "y");
    int distY = b.axiom("dist-i", bind({{"x", Binding::of(y)},
                                        {"phi", Binding::of(pos(psi))},
                                        {"psi", Binding::of(implies(Gy, psiy))}}));
    int distYm = b.mp(genY, distY);
    int vacY = b.axiom("vac-i", bind({{"x", Binding::of(y)}, {"phi", Binding::of(pos(psi))}}));
    int entail = b.pc(implies(pos(psi), allY), {vacY, distYm});
    int necE = b.nec(entail);
    int kdist = b.axiom("k-dist", bind({{"phi", Binding::of(pos(psi))}, {"psi", Binding::of(allY)}}));
    int boxed = b.mp(necE, kdist);

    int core = b.pc(implies(Gx, implies(psix, box(allY))), {lemma1, stable, boxed});
    int genPsi = b.genp(core, "psi");
    int distP = b.axiom("dist-p", bind({{"F", Binding::of(psi)},
                                        {"phi", Binding::of(Gx)},
                                        {"psi", Binding::of(implies(psix, box(allY)))}}));
    int distPm = b.mp(genPsi, distP);
    int vacP = b.axiom("vac-p", bind({{"F", Binding::of(psi)}, {"phi", Binding::of(Gx)}}));
    Formula essBody = pquant(QuantMode::Universal, "psi", implies(psix, box(allY)));
    int toAll = b.pc(implies(Gx, essBody), {vacP, distPm});
    int conjForm = b.pc(implies(Gx, conj(Gx, essBody)), {toAll});
    return b.unfold(conjForm, "ess", 1);
}

// Premise-free derivation of "(G(x) & psi(x)) -> Pos(psi)": anything a
// God-like entity has is positive, since otherwise its negation would be
// positive and hence held.
inline int append_lemma1_block(ProofBuilder& b) {
    IndividualTerm x = ivar("x");
    PropertyTerm psi = pvar("psi");
    PropertyTerm fvar = pvar("F");
    Formula Gx = apply(pnamed("G"), x);
    Formula psix = apply(psi, x);

    int inst = b.axiom("inst-p", bind({{"F", Binding::of(fvar)},
                                       {"phi", Binding::of(implies(pos(fvar), apply(fvar, x)))},
                                       {"P", Binding::of(pneg(psi))}}));
    int foldG = b.unfold(inst, "G", 1);
    int flip = b.axiom("pos-neg", bind({{"phi", Binding::of(psi)}}));
    return b.pc(implies(conj(Gx, psix), pos(psi)), {foldG, flip});
}

}  // namespace scripts

// --- shipped scripts --------------------------------------------------------

// Possibility theorem: Pos(phi) -> <> ex x. phi(x)
inline Proof script_theorem1() {
    FormalSystem sys = system_O();
    ProofBuilder b(sys);
    int last = scripts::append_possibility_block(b, pvar("phi"));
    b.set_goal(b.at(last));
    return b.take();
}

// Essence theorem: G(x) -> Ess(G,x), from the repaired lemma as a named
// premise so the strengthening over the unsound schema stays visible.
inline Formula lemma1_repaired_formula() {
    return parse("all x. allp psi. ((G(x) & psi(x)) -> Pos(psi))");
}

inline Proof script_theorem2() {
    FormalSystem sys = system_O();
    ProofBuilder b(sys);
    b.declare_premise("LEMMA1-REPAIRED", lemma1_repaired_formula());

    IndividualTerm x = ivar("x");
    int prem = b.premise("LEMMA1-REPAIRED");
    Formula inner = parse("allp psi. ((G(x) & psi(x)) -> Pos(psi))");
    int instX = b.axiom("inst-i", scripts::bind({{"x", Binding::of(x)},
                                                 {"phi", Binding::of(inner)},
                                                 {"t", Binding::of(x)}}));
    int opened = b.mp(prem, instX);
    int instPsi = b.axiom("inst-p",
                          scripts::bind({{"F", Binding::of(pvar("psi"))},
                                         {"phi", Binding::of(parse("(G(x) & psi(x)) -> Pos(psi)"))},
                                         {"P", Binding::of(pvar("psi"))}}));
    int lemma1 = b.mp(opened, instPsi);
    int last = scripts::append_essence_block(b, lemma1);
    b.set_goal(b.at(last));
    return b.take();
}

// Main theorem: [] ex x. G(x). The lemma chain runs premise-free: the
// repaired lemma is derivable from the positivity axioms, which keeps
// necessitation available downstream.
inline Proof script_main_theorem() {
    FormalSystem sys = system_O();
    ProofBuilder b(sys);

    IndividualTerm x = ivar("x");
    IndividualTerm y = ivar("y");
    PropertyTerm fvar = pvar("F");
    Formula Gx = apply(pnamed("G"), x);
    Formula Ey = iquant(QuantMode::Existential, y, apply(pnamed("G"), y));
    Formula Ex = iquant(QuantMode::Existential, x, Gx);

    int lemma1 = scripts::append_lemma1_block(b);
    int th2 = scripts::append_essence_block(b, lemma1);  // G(x) -> Ess(G,x)

    // G(x) -> NE(x), from Pos(NE) and the definition of G
    int instNE = b.axiom("inst-p", scripts::bind({{"F", Binding::of(fvar)},
                                                  {"phi", Binding::of(implies(pos(fvar), apply(fvar, x)))},
                                                  {"P", Binding::of(pnamed("NE"))}}));
    int foldG = b.unfold(instNE, "G", 1);
    int posNE = b.axiom("pos-ne");
    int gToNE = b.pc(implies(Gx, apply(pnamed("NE"), x)), {foldG, posNE});

    // unfold NE and discharge it against the essence
    int unfNE = b.unfold(gToNE, "NE", 1);
    Formula neBody = implies(essence(fvar, x), box(iquant(QuantMode::Existential, y, apply(fvar, y))));
    int instG = b.axiom("inst-p", scripts::bind({{"F", Binding::of(fvar)},
                                                 {"phi", Binding::of(neBody)},
                                                 {"P", Binding::of(pnamed("G"))}}));
    int anchored = b.pc(implies(Gx, box(Ey)), {unfNE, instG, th2});

    // existential elimination: ex x. G(x) -> [] ex y. G(y)
    int genX = b.geni(anchored, "x");
    int exElim = b.axiom("exelim-i", scripts::bind({{"x", Binding::of(x)},
                                                    {"phi", Binding::of(Gx)},
                                                    {"psi", Binding::of(box(Ey))}}));
    int l4 = b.mp(genX, exElim);

    // diamond monotonicity lifted from l4, then box-5 settles it
    int necL4 = b.nec(l4);
    int contra = b.taut(implies(implies(Ex, box(Ey)), implies(neg(box(Ey)), neg(Ex))));
    int necC = b.nec(contra);
    int kc = b.axiom("k-dist", scripts::bind({{"phi", Binding::of(implies(Ex, box(Ey)))},
                                              {"psi", Binding::of(implies(neg(box(Ey)), neg(Ex)))}}));
    int kcm = b.mp(necC, kc);
    int boxedContra = b.mp(necL4, kcm);
    int k2 = b.axiom("k-dist", scripts::bind({{"phi", Binding::of(neg(box(Ey)))},
                                              {"psi", Binding::of(neg(Ex))}}));
    int mono = b.mp(boxedContra, k2);
    int dual1 = b.axiom("dia-dual", scripts::bind({{"phi", Binding::of(box(Ey))}}));
    int dual2 = b.axiom("dia-dual", scripts::bind({{"phi", Binding::of(Ex)}}));
    int l5 = b.pc(implies(dia(Ex), dia(box(Ey))), {dual1, dual2, mono});
    int five = b.axiom("box-5", scripts::bind({{"phi", Binding::of(Ey)}}));
    int l6 = b.pc(implies(dia(Ex), box(Ey)), {l5, five});

    // possibility of a God-like entity
    int th1g = scripts::append_possibility_block(b, pnamed("G"));
    int posG = b.axiom("pos-g");
    int l7 = b.mp(posG, th1g);

    int last = b.mp(l7, l6);
    (void)last;
    b.set_goal(parse("[] ex x. G(x)"));
    return b.take();
}

// --- modal collapse demonstration -------------------------------------------

// The collapse schema <>p -> []p is not itself an S5 validity: the report
// carries a two-world countermodel, plus the instance-level entailment that
// collapse instances force p <-> []p. No internal derivation of the collapse
// within system O ships with the artifact.
inline std::string collapse_report() {
    std::ostringstream out;
    Formula claim = parse("<>p -> []p");
    ValidityVerdict v = decide_valid(claim, System::S5);
    out << "claim: " << render(claim) << "\n";
    out << "system: S5\n";
    out << "verdict: " << (v.valid ? "Valid" : "Countermodel") << "\n";
    if (!v.valid) {
        out << "countermodel-worlds: " << v.countermodel.worlds.size() << "\n";
        out << "countermodel-begin\n" << render_model(v.countermodel) << "countermodel-end\n";
        EvalEnv env;
        bool holds = eval(v.countermodel, v.world, claim, env);
        out << "countermodel-reevaluates: " << (holds ? "unexpected-true" : "false-at-"
            + v.countermodel.worlds[v.world]) << "\n";
    }
    Formula instanceLevel = parse("((<>p -> []p) & (<>~p -> []~p)) -> (p <-> []p)");
    ValidityVerdict inst = decide_valid(instanceLevel, System::S5);
    out << "instance-level-collapse: " << render(instanceLevel) << "\n";
    out << "instance-level-verdict: " << (inst.valid ? "Valid" : "Countermodel") << "\n";
    out << "derivation-status: not mechanized\n";
    out << "note: adopting the collapse schema on top of S5 is a genuine strengthening;"
           " the countermodel above shows it is not already valid.\n";
    return out.str();
}

}  // namespace modalkit
