#include <catch2/catch_amalgamated.hpp>

#include "modalkit/systems.hpp"
#include "modalkit/tableau.hpp"
#include "modalkit/parser.hpp"
#include "testutil.hpp"

using namespace modalkit;

TEST_CASE("contradictions are unsatisfiable everywhere", "[tableau]") {
    for (System s : {System::K, System::T, System::S4, System::S5}) {
        CHECK_FALSE(decide_sat(parse("p & ~p"), s).sat);
        CHECK(decide_sat(parse("p | ~p"), s).sat);
    }
}

TEST_CASE("S5 separates box strengthening from T", "[tableau]") {
    // the S5 schema instance <>[]p -> []p is refutable in T but not in S5
    Formula f = parse("~(<>[]p -> []p)");
    CHECK_FALSE(decide_sat(f, System::S5).sat);
    TableauResult t = decide_sat(f, System::T);
    REQUIRE(t.sat);
    EvalEnv env;
    CHECK(eval(t.model, t.world, f, env));
    CHECK(frame_reflexive(t.model));
}

TEST_CASE("diamond pair needs two worlds in S5", "[tableau]") {
    TableauResult r = decide_sat(parse("<>p & <>~p"), System::S5);
    REQUIRE(r.sat);
    CHECK(r.model.worlds.size() == 2);
    // brute-force agrees at the completeness bound
    CHECK(bruteforce_sat(parse("<>p & <>~p"), FrameClass::Equivalence, 2).has_value());
}

TEST_CASE("validity spec examples", "[tableau]") {
    Formula k = parse("[](p->q) -> ([]p -> []q)");
    for (System s : {System::K, System::T, System::S4, System::S5})
        CHECK(decide_valid(k, s).valid);

    CHECK(decide_valid(parse("(<>p -> <>q) -> <>(p -> q)"), System::T).valid);
    CHECK(bruteforce_validity(parse("(<>p -> <>q) -> <>(p -> q)"), FrameClass::Reflexive, 3).valid);

    ValidityVerdict v = decide_valid(parse("p -> []p"), System::T);
    REQUIRE_FALSE(v.valid);
    EvalEnv env;
    CHECK_FALSE(eval(v.countermodel, v.world, parse("p -> []p"), env));
    CHECK(v.countermodel.worlds.size() == 2);
}

TEST_CASE("modal collapse is not an S5 validity", "[tableau]") {
    ValidityVerdict v = decide_valid(parse("<>p -> []p"), System::S5);
    REQUIRE_FALSE(v.valid);
    CHECK(v.countermodel.worlds.size() <= 2);
    EvalEnv env;
    CHECK_FALSE(eval(v.countermodel, v.world, parse("<>p -> []p"), env));
}

TEST_CASE("countermodel serialization round-trips through eval", "[tableau]") {
    TableauResult r = decide_sat(parse("<>p & ~p"), System::T);
    REQUIRE(r.sat);
    std::string text = extract_countermodel(r);
    KripkeModel back = parse_model(text);
    EvalEnv env;
    CHECK(eval(back, r.world, parse("<>p & ~p"), env));

    TableauResult single = decide_sat(parse("p"), System::K);
    REQUIRE(single.sat);
    CHECK(single.model.worlds.size() == 1);

    TableauResult bad = decide_sat(parse("p & ~p"), System::K);
    CHECK_THROWS_AS(extract_countermodel(bad), TableauError);
}

TEST_CASE("unsupported constructs are reported with the subformula", "[tableau]") {
    try {
        decide_sat(parse("[](p & ex x. G(x))"), System::S5);
        FAIL("expected UnsupportedConstruct");
    } catch (const UnsupportedConstruct& e) {
        CHECK(e.offending == "ex x. G(x)");
    }
    CHECK_THROWS_AS(decide_sat(parse("A- p"), System::K), UnsupportedConstruct);
    CHECK_THROWS_AS(decide_sat(parse("Pos(G)"), System::S5), UnsupportedConstruct);
}

TEST_CASE("determinism: identical runs give identical stats and models", "[tableau]") {
    Formula f = parse("<>(p & <>q) & [](p -> <>q) & ~q");
    for (System s : {System::K, System::T, System::S4, System::S5}) {
        TableauResult a = decide_sat(f, s);
        TableauResult b = decide_sat(f, s);
        CHECK(a.sat == b.sat);
        CHECK(a.stats == b.stats);
        if (a.sat) CHECK(render_model(a.model) == render_model(b.model));
    }
}

namespace {

// Upper bound on the diamonds of the negation normal form: every modal
// operator can turn into a diamond under negation, so count them all.
int modal_count(const Formula& f) {
    const Formula::Node& n = f.node();
    switch (n.op) {
        case Op::Dia:
        case Op::Box: return 1 + modal_count(n.lhs);
        case Op::Not: return modal_count(n.lhs);
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff: return modal_count(n.lhs) + modal_count(n.rhs);
        default: return 0;
    }
}

FrameClass frame_of(System s) {
    switch (s) {
        case System::K: return FrameClass::All;
        case System::T: return FrameClass::Reflexive;
        case System::S4: return FrameClass::Preorder;
        case System::S5: return FrameClass::Equivalence;
    }
    return FrameClass::All;
}

// Agreement between the tableau and the enumeration oracle, at bounds where
// the oracle is authoritative:
//  - a SAT verdict must come with an eval-verified witness model;
//  - an UNSAT verdict must leave enumeration empty at the probe bound;
//  - any enumerated witness forces a SAT verdict;
//  - in S5, SAT also forces an enumerated witness at the completeness bound
//    (#diamond subformulas + 1) whenever that bound is enumerable.
void check_agreement(const Formula& f, System s, int enumBound) {
    TableauResult t = decide_sat(f, s);
    auto witness = bruteforce_sat(f, frame_of(s), enumBound);
    INFO(system_name(s) << ": " << render(f));
    if (t.sat) {
        EvalEnv env;
        CHECK(eval(t.model, t.world, f, env));
    } else {
        CHECK_FALSE(witness.has_value());
    }
    if (witness.has_value()) CHECK(t.sat);
    if (s == System::S5 && t.sat && modal_count(f) + 1 <= 4) {
        int bound = modal_count(f) + 1;
        CHECK(bruteforce_sat(f, FrameClass::Equivalence, bound).has_value());
    }
}

}  // namespace

TEST_CASE("schema instances of each system are valid in it", "[tableau][oracle]") {
    std::mt19937 rng(1234);
    auto opts = testutil::GenOptions::propositional_modal(2, 2);
    auto check_schemas = [&](const modalkit::FormalSystem& sys, System s) {
        for (const auto& schema : sys.schemas) {
            if (schema.kind != modalkit::AxiomSchema::Kind::Pattern) continue;
            for (int i = 0; i < 10; ++i) {
                modalkit::Bindings b;
                for (const auto& m : schema.meta)
                    b[m.first] = modalkit::Binding::of(testutil::random_formula(rng, opts));
                Formula inst = instantiate_schema(schema, b);
                INFO(system_name(s) << " " << schema.name << ": " << render(inst));
                CHECK(decide_valid(inst, s).valid);
            }
        }
    };
    check_schemas(modalkit::builtin_T(), System::T);
    check_schemas(modalkit::builtin_S4(), System::S4);
    check_schemas(modalkit::builtin_S5(), System::S5);
}

TEST_CASE("oracle agreement on random formulas", "[tableau][oracle]") {
    std::mt19937 rng(321321);
    auto opts = testutil::GenOptions::propositional_modal(4, 3);
    for (int i = 0; i < 120; ++i) {
        Formula f = testutil::random_formula(rng, opts);
        for (System s : {System::K, System::T, System::S4, System::S5}) check_agreement(f, s, 3);
    }
}
