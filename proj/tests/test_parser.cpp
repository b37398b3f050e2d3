#include <catch2/catch_amalgamated.hpp>

#include "modalkit/parser.hpp"
#include "modalkit/printer.hpp"
#include "testutil.hpp"

using namespace modalkit;

TEST_CASE("parse basic shapes", "[parser]") {
    CHECK(parse("[]p -> p") == implies(box(atom("p")), atom("p")));
    CHECK(parse("p") == atom("p"));
    CHECK(parse("A-(Pos(G)) & E+ (ex x. G(x))") ==
          conj(temporal(TemporalTag::Past, QuantMode::Universal, pos(pnamed("G"))),
               temporal(TemporalTag::Future, QuantMode::Existential,
                        iquant(QuantMode::Existential, ivar("x"), apply(pnamed("G"), ivar("x"))))));
}

TEST_CASE("render basic shapes", "[parser]") {
    CHECK(render(box(atom("p"))) == "[]p");
    CHECK(render(implies(dia(box(atom("p"))), box(atom("p")))) == "<>[]p -> []p");
    CHECK(render(iquant(QuantMode::Existential, ivar("x"), apply(pnamed("G"), ivar("x")))) == "ex x. G(x)");
}

TEST_CASE("precedence and associativity", "[parser]") {
    CHECK(parse("p -> q -> r") == implies(atom("p"), implies(atom("q"), atom("r"))));
    CHECK(parse("~p & q") == conj(neg(atom("p")), atom("q")));
    CHECK(parse("p & q | r") == disj(conj(atom("p"), atom("q")), atom("r")));
    CHECK(parse("p | q -> r <-> s") == iff(implies(disj(atom("p"), atom("q")), atom("r")), atom("s")));
    CHECK(parse("A- p & q") == conj(temporal(TemporalTag::Past, QuantMode::Universal, atom("p")), atom("q")));
    // quantifiers bind to the longest formula on their right
    CHECK(parse("ex x. G(x) & p") ==
          iquant(QuantMode::Existential, ivar("x"), conj(apply(pnamed("G"), ivar("x")), atom("p"))));
    CHECK(parse("[] ex x. G(x)") ==
          box(iquant(QuantMode::Existential, ivar("x"), apply(pnamed("G"), ivar("x")))));
    CHECK(parse("p & (ex x. G(x)) & q").op() == Op::And);
}

TEST_CASE("temporal binder sugar", "[parser]") {
    CHECK(parse("E- x. G(x)") == parse("E- (ex x. G(x))"));
    CHECK(parse("A+ y. R(y,y)") == parse("A+ (all y. R(y,y))"));
    Formula f = parse("E- x. G(x)");
    CHECK(render_sugared(f) == "E- x. G(x)");
    CHECK(parse(render_sugared(f)) == f);
}

TEST_CASE("whitespace and comments are insignificant", "[parser]") {
    CHECK(parse("[]p->p") == parse("[] p  ->   p"));
    CHECK(parse("p # trailing words\n& q") == parse("p & q"));
}

TEST_CASE("parse errors carry position and expectations", "[parser]") {
    try {
        parse("p & & q");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 1);
        CHECK(e.col == 5);
        CHECK_FALSE(e.expected.empty());
    }
    try {
        parse("p &\n  (q | )");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
    CHECK_THROWS_AS(parse("(p"), ParseError);
    CHECK_THROWS_AS(parse("p q"), ParseError);
    CHECK_THROWS_AS(parse("[p]"), ParseError);
}

TEST_CASE("kind discipline is enforced while parsing", "[parser]") {
    CHECK_THROWS_AS(parse("ex X. p"), ParseError);           // bad individual name
    CHECK_THROWS_AS(parse("allp G. Pos(G)"), ParseError);    // registered name bound
    CHECK_THROWS_AS(parse("ex x. Pos(x)"), ParseError);      // individual used as property
    CHECK_THROWS_AS(parse("allp F. ex F. p"), ParseError);   // cross-kind rebind
    CHECK_THROWS_AS(parse("allp F. F"), ParseError);         // property variable as atom
    CHECK_THROWS_AS(parse("ex x. x"), ParseError);           // individual variable as atom
    CHECK_THROWS_AS(parse("ex x. x(y)"), ParseError);        // individual applied as property
}

TEST_CASE("one-argument applications are property applications", "[parser]") {
    Formula f = parse("phi(x)");
    REQUIRE(f.op() == Op::Apply);
    CHECK(f.node().prop == pvar("phi"));
    Formula g = parse("G(x)");
    REQUIRE(g.op() == Op::Apply);
    CHECK(g.node().prop == pnamed("G"));
    Formula h = parse("R(x,y)");
    CHECK(h.op() == Op::Atom);
}

TEST_CASE("essence and positivity forms", "[parser]") {
    CHECK(parse("Ess(G,x)") == essence(pnamed("G"), ivar("x")));
    CHECK(parse("Ess(~phi, y)") == essence(pneg(pvar("phi")), ivar("y")));
    CHECK(parse("Pos(~G)") == pos(pneg(pnamed("G"))));
    CHECK(parse("~phi(x)") == neg(apply(pvar("phi"), ivar("x"))));
    CHECK(render(parse("Ess(~phi, y)")) == "Ess(~phi,y)");
}

TEST_CASE("round trip: parse after render is the identity", "[parser][property]") {
    std::mt19937 rng(424242);
    testutil::GenOptions g;
    for (int i = 0; i < 1500; ++i) {
        Formula f = testutil::random_formula(rng, g);
        std::string text = render(f);
        INFO(text);
        Formula back = parse(text);
        CHECK(back == f);
    }
}

TEST_CASE("round trip through the sugared printer", "[parser][property]") {
    std::mt19937 rng(99);
    testutil::GenOptions g;
    for (int i = 0; i < 500; ++i) {
        Formula f = testutil::random_formula(rng, g);
        std::string text = render_sugared(f);
        INFO(text);
        CHECK(parse(text) == f);
    }
}
