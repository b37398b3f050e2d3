#include <catch2/catch_amalgamated.hpp>

#include "modalkit/ontology.hpp"
#include "modalkit/proof_io.hpp"

using namespace modalkit;

TEST_CASE("system O has the documented shape", "[ontology]") {
    FormalSystem o = system_O();
    CHECK(o.schemas.size() == builtin_S5().schemas.size() + 5);
    CHECK(o.definitions.size() == 3);
    CHECK(o.quantifierLayer);
    CHECK(o.rules.size() == 5);
    REQUIRE(o.find_schema("pos-stable") != nullptr);
    CHECK(render(o.find_schema("pos-stable")->pattern) == "Pos(phi) -> []Pos(phi)");
    REQUIRE(o.find_schema("pos-ne") != nullptr);
    CHECK(render(o.find_schema("pos-ne")->pattern) == "Pos(NE)");
    CHECK(o.find_schema("inst-p") != nullptr);  // quantifier layer visible
}

TEST_CASE("ontology axiom instantiation", "[ontology]") {
    FormalSystem o = system_O();
    Bindings b;
    b["phi"] = Binding::of(pnamed("G"));
    CHECK(instantiate_schema(*o.find_schema("pos-neg"), b) == parse("Pos(~G) <-> ~Pos(G)"));
    CHECK(instantiate_schema(*o.find_schema("pos-stable"), b) == parse("Pos(G) -> []Pos(G)"));

    Bindings two;
    two["phi"] = Binding::of(pvar("phi"));
    two["psi"] = Binding::of(pneg(pvar("phi")));
    CHECK(instantiate_schema(*o.find_schema("pos-mono"), two) ==
          parse("Pos(phi) & (all x. (phi(x) -> ~phi(x))) -> Pos(~phi)"));
}

TEST_CASE("definition unfolding works positionally in both directions", "[ontology]") {
    FormalSystem o = system_O();
    const Definition* g = o.find_definition("G");
    REQUIRE(g);
    Formula gx = parse("G(x)");
    auto unfolded = unfold_at(gx, *g, 1);
    REQUIRE(unfolded);
    CHECK(*unfolded == parse("allp F. (Pos(F) -> F(x))"));
    auto folded = unfold_at(*unfolded, *g, 1);
    REQUIRE(folded);
    CHECK(*folded == gx);
    CHECK_FALSE(unfold_at(gx, *g, 2).has_value());

    const Definition* ne = o.find_definition("NE");
    auto neBody = unfold_at(parse("NE(y)"), *ne, 1);
    REQUIRE(neBody);
    CHECK(alpha_equal(*neBody, parse("allp F. (Ess(F,y) -> [] ex z. F(z))")));

    const Definition* ess = o.find_definition("ess");
    auto essBody = unfold_at(parse("Ess(G,x)"), *ess, 1);
    REQUIRE(essBody);
    CHECK(alpha_equal(*essBody,
                      parse("G(x) & allp psi. (psi(x) -> [] all y. (G(y) -> psi(y)))")));
    // nested occurrence: the second candidate sits inside the box
    Formula nested = parse("G(x) & [] G(y)");
    auto first = unfold_at(nested, *g, 1);
    auto second = unfold_at(nested, *g, 2);
    REQUIRE(first);
    REQUIRE(second);
    CHECK(*first == parse("(allp F. (Pos(F) -> F(x))) & [] G(y)"));
    CHECK(*second == parse("G(x) & [] allp F. (Pos(F) -> F(y))"));
}

TEST_CASE("one-step proof of Pos(G)", "[ontology]") {
    FormalSystem o = system_O();
    Proof p;
    p.systemName = "O";
    p.goal = parse("Pos(G)");
    ProofStep s;
    s.id = 1;
    s.formula = parse("Pos(G)");
    s.just.kind = Justification::Kind::Axiom;
    s.just.name = "pos-g";
    p.steps.push_back(s);
    CHECK(check_proof(o, p).accepted);
}

TEST_CASE("possibility theorem script accepts", "[ontology]") {
    FormalSystem o = system_O();
    Proof p = script_theorem1();
    CHECK(p.goal == parse("Pos(phi) -> <> ex x. phi(x)"));
    CheckReport rep = check_proof(o, p);
    INFO(rep.reason << " at step " << rep.failingStep << ": " << rep.detail);
    REQUIRE(rep.accepted);
    CHECK(rep.premisesUsed.empty());

    // dropping the psi := ~phi instantiation step breaks the derivation
    Proof broken = p;
    bool removed = false;
    for (auto it = broken.steps.begin(); it != broken.steps.end(); ++it)
        if (it->just.kind == Justification::Kind::Axiom && it->just.name == "inst-p") {
            broken.steps.erase(it);
            removed = true;
            break;
        }
    REQUIRE(removed);
    CHECK_FALSE(check_proof(o, broken).accepted);

    // normalizing every step formula preserves acceptance
    Proof normed = p;
    for (auto& s : normed.steps) s.formula = normalize(s.formula);
    normed.goal = normalize(normed.goal);
    CHECK(check_proof(o, normed).accepted);
}

TEST_CASE("essence theorem script accepts with the repaired lemma", "[ontology]") {
    FormalSystem o = system_O();
    Proof p = script_theorem2();
    CHECK(p.goal == parse("G(x) -> Ess(G,x)"));
    CheckReport rep = check_proof(o, p);
    INFO(rep.reason << " at step " << rep.failingStep << ": " << rep.detail);
    REQUIRE(rep.accepted);
    CHECK(rep.premisesUsed == std::set<std::string>{"LEMMA1-REPAIRED"});

    // the essence definition is folded exactly once, at the final step
    int essUnfolds = 0;
    for (const auto& s : p.steps)
        if (s.just.kind == Justification::Kind::Unfold && s.just.name == "ess") ++essUnfolds;
    CHECK(essUnfolds == 1);
    CHECK(p.steps.back().just.kind == Justification::Kind::Unfold);
    CHECK(p.steps.back().just.name == "ess");
}

TEST_CASE("main theorem script accepts premise-free", "[ontology]") {
    FormalSystem o = system_O();
    Proof p = script_main_theorem();
    CHECK(p.goal == parse("[] ex x. G(x)"));
    CheckReport rep = check_proof(o, p);
    INFO(rep.reason << " at step " << rep.failingStep << ": " << rep.detail);
    REQUIRE(rep.accepted);
    CHECK(rep.premisesUsed.empty());

    // the S5 schema carries the final lift
    bool usesBox5 = false;
    for (const auto& s : p.steps)
        if (s.just.kind == Justification::Kind::Axiom && s.just.name == "box-5") usesBox5 = true;
    CHECK(usesBox5);

    // swapping the positivity-of-G citation for pos-ne must reject
    Proof broken = p;
    for (auto& s : broken.steps)
        if (s.just.kind == Justification::Kind::Axiom && s.just.name == "pos-g") s.just.name = "pos-ne";
    CheckReport bad = check_proof(o, broken);
    CHECK_FALSE(bad.accepted);
    CHECK(bad.reason == "bad-instantiation");
}

TEST_CASE("every positivity axiom and definition is cited by the shipped scripts", "[ontology]") {
    std::set<std::string> axioms;
    std::set<std::string> defs;
    for (const Proof& p : {script_theorem1(), script_theorem2(), script_main_theorem()}) {
        for (const auto& s : p.steps) {
            if (s.just.kind == Justification::Kind::Axiom) axioms.insert(s.just.name);
            if (s.just.kind == Justification::Kind::Unfold) defs.insert(s.just.name);
        }
    }
    for (const char* name : {"pos-neg", "pos-mono", "pos-g", "pos-stable", "pos-ne"})
        CHECK(axioms.count(name) == 1);
    for (const char* name : {"G", "ess", "NE"}) CHECK(defs.count(name) == 1);
}

TEST_CASE("scripts survive the file format round trip", "[ontology]") {
    FormalSystem o = system_O();
    for (const Proof& p : {script_theorem1(), script_theorem2(), script_main_theorem()}) {
        std::string text = render_proof_script(p);
        Proof back = parse_proof_script(text, o);
        CHECK(render_proof_script(back) == text);
        CHECK(check_proof(o, back).accepted);
    }
}

TEST_CASE("single-step deletions reject across the essence script", "[ontology][mutation]") {
    FormalSystem o = system_O();
    Proof p = script_theorem2();
    for (size_t k = 0; k < p.steps.size(); ++k) {
        Proof mutant = p;
        mutant.steps.erase(mutant.steps.begin() + static_cast<long>(k));
        INFO("deleted step index " << k);
        CHECK_FALSE(check_proof(o, mutant).accepted);
    }
}

TEST_CASE("collapse report", "[ontology]") {
    std::string rep = collapse_report();
    CHECK(rep.find("verdict: Countermodel") != std::string::npos);
    CHECK(rep.find("countermodel-worlds: 2") != std::string::npos);
    CHECK(rep.find("derivation-status: not mechanized") != std::string::npos);
    CHECK(rep.find("instance-level-verdict: Valid") != std::string::npos);
    CHECK(rep.find("countermodel-reevaluates: false-at-") != std::string::npos);
    // identical invocations produce identical reports
    CHECK(collapse_report() == rep);
}
