#include <catch2/catch_amalgamated.hpp>

#include "modalkit/proof_io.hpp"
#include "modalkit/transform.hpp"
#include "testutil.hpp"

using namespace modalkit;

TEST_CASE("temporalization splits individual quantifiers", "[transform]") {
    CHECK(temporalize(parse("ex x. G(x)")) == parse("(E- ex x. G(x)) & (E+ ex x. G(x))"));
    CHECK(temporalize(parse("p -> q")) == parse("p -> q"));
    CHECK(temporalize(parse("[] ex x. G(x)")) ==
          parse("[]((E- ex x. G(x)) & (E+ ex x. G(x)))"));
    // property quantifiers are untouched
    CHECK(temporalize(parse("allp F. Pos(F)")) == parse("allp F. Pos(F)"));
    CHECK(temporalize(parse("all x. F(x)")) == parse("(A- all x. F(x)) & (A+ all x. F(x))"));
}

TEST_CASE("time reversal swaps temporal tags and is an involution", "[transform]") {
    CHECK(time_reverse(parse("A- p")) == parse("A+ p"));
    CHECK(time_reverse(parse("p & q")) == parse("p & q"));
    CHECK(time_reverse(parse("E+ p | A- q")) == parse("E- p | A+ q"));

    std::mt19937 rng(20250711);
    testutil::GenOptions g;
    for (int i = 0; i < 500; ++i) {
        Formula f = testutil::random_formula(rng, g);
        CHECK(time_reverse(time_reverse(f)) == f);
    }
}

TEST_CASE("symmetry breaking produces the exclusive-disjunction shape", "[transform]") {
    CHECK(break_temporalize(parse("ex x. G(x)")) ==
          parse("(E- ex x. G(x)) & ~(E+ ex x. G(x)) | (E+ ex x. G(x)) & ~(E- ex x. G(x))"));
    CHECK(break_temporalize(parse("all x. F(x)")) ==
          parse("(A- all x. F(x)) & ~(A+ all x. F(x)) | (A+ all x. F(x)) & ~(A- all x. F(x))"));
    CHECK(break_temporalize(parse("p | ~q")) == parse("p | ~q"));
}

namespace {

// every individual quantifier in a transformed output sits directly under a
// temporal operator introduced by the transform
bool quantifiers_wrapped(const Formula& f, bool underTemporal = false) {
    const Formula::Node& n = f.node();
    switch (n.op) {
        case Op::IQuant:
            return underTemporal && quantifiers_wrapped(n.lhs, false);
        case Op::Temporal:
            return quantifiers_wrapped(n.lhs, true);
        case Op::Not:
        case Op::Box:
        case Op::Dia:
            return quantifiers_wrapped(n.lhs, false);
        case Op::PQuant:
            return quantifiers_wrapped(n.lhs, false);
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff:
            return quantifiers_wrapped(n.lhs, false) && quantifiers_wrapped(n.rhs, false);
        default:
            return true;
    }
}

}  // namespace

TEST_CASE("transform outputs leave no bare individual quantifier", "[transform][property]") {
    std::mt19937 rng(8181);
    testutil::GenOptions g;
    g.temporalOps = false;  // start from atemporal formulas
    for (int i = 0; i < 300; ++i) {
        Formula f = testutil::random_formula(rng, g);
        CHECK(quantifiers_wrapped(temporalize(f)));
        CHECK(quantifiers_wrapped(break_temporalize(f)));
        // time-reversal invariance of temporalized formulas
        CHECK(render(normalize(time_reverse(temporalize(f)))) ==
              render(normalize(temporalize(f))));
    }
}

namespace {

int count_iquants(const Formula& f) {
    const Formula::Node& n = f.node();
    switch (n.op) {
        case Op::IQuant: return 1 + count_iquants(n.lhs);
        case Op::Not:
        case Op::Box:
        case Op::Dia:
        case Op::Temporal:
        case Op::PQuant: return count_iquants(n.lhs);
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff: return count_iquants(n.lhs) + count_iquants(n.rhs);
        default: return 0;
    }
}

// detects (X & ~Y) | (Y & ~X) where X and Y are past/future twins of one
// quantifier
bool is_xor_shell(const Formula& f) {
    if (f.op() != Op::Or) return false;
    const Formula::Node& n = f.node();
    auto side = [](const Formula& g) -> std::optional<std::pair<Formula, Formula>> {
        if (g.op() != Op::And) return std::nullopt;
        const Formula::Node& m = g.node();
        if (m.rhs.op() != Op::Not) return std::nullopt;
        return std::make_pair(m.lhs, m.rhs.node().lhs);
    };
    auto a = side(n.lhs);
    auto b = side(n.rhs);
    if (!a || !b) return false;
    if (!(a->first == b->second && a->second == b->first)) return false;
    if (a->first.op() != Op::Temporal || a->second.op() != Op::Temporal) return false;
    const Formula::Node& x = a->first.node();
    const Formula::Node& y = a->second.node();
    return x.tag != y.tag && x.mode == y.mode && x.lhs == y.lhs && x.lhs.op() == Op::IQuant;
}

// Starting from an atemporal formula, every temporal operator and every
// quantifier in the broken output must occur inside a well-formed shell;
// shell bodies are checked recursively.
bool shells_wellformed(const Formula& f) {
    if (is_xor_shell(f)) {
        const Formula::Node& n = f.node();
        Formula pastTwin = n.lhs.node().lhs;  // temporal over the quantifier
        return shells_wellformed(pastTwin.node().lhs.node().lhs);
    }
    const Formula::Node& n = f.node();
    switch (n.op) {
        case Op::Temporal:
        case Op::IQuant:
            return false;  // escaped the shell discipline
        case Op::Not:
        case Op::Box:
        case Op::Dia:
        case Op::PQuant:
            return shells_wellformed(n.lhs);
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff:
            return shells_wellformed(n.lhs) && shells_wellformed(n.rhs);
        default:
            return true;
    }
}

}  // namespace

TEST_CASE("every transformed quantifier becomes an exclusive-disjunction shell",
          "[transform][property]") {
    std::mt19937 rng(40404);
    testutil::GenOptions g;
    g.temporalOps = false;
    int withQuants = 0;
    for (int i = 0; i < 300; ++i) {
        Formula f = testutil::random_formula(rng, g);
        if (count_iquants(f) > 0) ++withQuants;
        Formula broken = break_temporalize(f);
        INFO(render(f));
        CHECK(shells_wellformed(broken));
    }
    CHECK(withQuants > 50);  // the generator actually exercises the transform
}

TEST_CASE("transform_system maps schemas and appends the temporal axioms", "[transform]") {
    FormalSystem ot = transform_system(system_O(), TransformKind::Temporalize);
    CHECK(ot.name == "O_T");
    CHECK(ot.transforms == std::vector<TransformKind>{TransformKind::Temporalize});
    // an axiom without quantifiers is a fixed point
    CHECK(render(ot.find_schema("pos-g")->pattern) == "Pos(G)");
    CHECK(render(ot.find_schema("pos-stable")->pattern) == "Pos(phi) -> []Pos(phi)");
    // the entailment axiom's quantifier is split
    CHECK(ot.find_schema("pos-mono")->pattern ==
          parse("Pos(phi) & ((A- all x. (phi(x) -> psi(x))) & (A+ all x. (phi(x) -> psi(x)))) "
                "-> Pos(psi)"));
    CHECK(ot.find_schema("past-weaken") != nullptr);
    CHECK(ot.find_schema("future-weaken") != nullptr);

    // time-reversing the temporalized system fixes the schema set modulo
    // normalization
    FormalSystem otr = transform_system(ot, TransformKind::TimeReverse);
    auto fingerprints = [](const FormalSystem& s) {
        std::multiset<std::string> out;
        for (const auto& sch : s.schemas)
            if (sch.kind == AxiomSchema::Kind::Pattern) out.insert(render(normalize(sch.pattern)));
        for (const auto& d : s.definitions) out.insert(render(normalize(d.definiens)));
        return out;
    };
    CHECK(fingerprints(otr) == fingerprints(ot));
}

namespace {

std::multiset<std::string> schema_fingerprints(const FormalSystem& s) {
    std::multiset<std::string> out;
    for (const auto& sch : s.schemas)
        if (sch.kind == AxiomSchema::Kind::Pattern) out.insert(render(normalize(sch.pattern)));
    for (const auto& d : s.definitions) out.insert(render(normalize(d.definiens)));
    return out;
}

}  // namespace

TEST_CASE("random atemporal systems are time-reversal invariant once temporalized",
          "[transform][property]") {
    std::mt19937 rng(6500);
    testutil::GenOptions g;
    g.temporalOps = false;
    for (int i = 0; i < 100; ++i) {
        FormalSystem s;
        s.name = "R" + std::to_string(i);
        s.rules = {Rule::ModusPonens};
        int n = 1 + (i % 4);
        for (int k = 0; k < n; ++k) {
            AxiomSchema a;
            a.name = "ax" + std::to_string(k);
            a.kind = AxiomSchema::Kind::Pattern;
            a.pattern = testutil::random_formula(rng, g);
            s.schemas.push_back(std::move(a));
        }
        FormalSystem ts = transform_system(s, TransformKind::Temporalize);
        FormalSystem rts = transform_system(ts, TransformKind::TimeReverse);
        CHECK(schema_fingerprints(rts) == schema_fingerprints(ts));
    }
}

TEST_CASE("replay of a propositional proof is the identity", "[transform]") {
    FormalSystem t = builtin_T();
    std::string script =
        "system T\n"
        "goal [](p & q) -> (p & q)\n"
        "1 [](p & q) -> (p & q) | axiom box-t phi=(p & q)\n";
    Proof p = parse_proof_script(script, t);
    FormalSystem tr = transform_system(t, TransformKind::TimeReverse);
    ReplayResult r = replay_transformed(p, TransformKind::TimeReverse, tr);
    REQUIRE(r.report.accepted);
    CHECK(r.transformed.steps[0].formula == p.steps[0].formula);
}

TEST_CASE("temporalized main theorem replays and distributes", "[transform]") {
    Proof p = script_temporalized();
    FormalSystem ot = transform_system(system_O(), TransformKind::Temporalize);
    CheckReport rep = check_proof(ot, p);
    INFO(rep.reason << " at step " << rep.failingStep << ": " << rep.detail);
    REQUIRE(rep.accepted);
    CHECK(rep.premisesUsed.empty());
    CHECK(p.goal == parse("([] E- ex x. G(x)) & ([] E+ ex x. G(x))"));
    // both theses appear as explicit steps
    bool past = false, future = false;
    for (const auto& s : p.steps) {
        if (kernel_eq(s.formula, parse("[] E- ex x. G(x)"))) past = true;
        if (kernel_eq(s.formula, parse("[] E+ ex x. G(x)"))) future = true;
    }
    CHECK(past);
    CHECK(future);
}

TEST_CASE("symmetry-broken theorem needs the rigidity premise", "[transform]") {
    Proof p = script_tb_theorem();
    FormalSystem otb = transform_system(system_O(), TransformKind::BreakTemporalize);
    CheckReport rep = check_proof(otb, p);
    INFO(rep.reason << " at step " << rep.failingStep << ": " << rep.detail);
    REQUIRE(rep.accepted);
    CHECK(rep.premisesUsed == std::set<std::string>{"TB-RIGIDITY"});
    CHECK(kernel_eq(p.goal,
                    parse("([](E- ex x. G(x)) & []~(E+ ex x. G(x))) | "
                          "([](E+ ex x. G(x)) & []~(E- ex x. G(x)))")));
}

TEST_CASE("gods-death script accepts exactly with the bridge premise", "[transform]") {
    Proof p = script_gods_death();
    FormalSystem sys = system_OTB_NFP();
    CheckReport rep = check_proof(sys, p);
    INFO(rep.reason << " at step " << rep.failingStep << ": " << rep.detail);
    REQUIRE(rep.accepted);
    CHECK(rep.premisesUsed == std::set<std::string>{"BRIDGE"});
    CHECK(p.goal == parse("([] E- ex x. G(x)) & ([] ~ E+ ex x. G(x))"));

    // without the no-future-positivity schema the script rejects
    FormalSystem bare = transform_system(system_O(), TransformKind::BreakTemporalize);
    CheckReport without = check_proof(bare, p);
    CHECK_FALSE(without.accepted);
    CHECK(without.reason == "unknown-schema");
}

TEST_CASE("temporal scripts survive the file format round trip", "[transform]") {
    for (const Proof& p : {script_temporalized(), script_tb_theorem(), script_gods_death()}) {
        auto sys = lookup_system(p.systemName);
        REQUIRE(sys.has_value());
        std::string text = render_proof_script(p);
        Proof back = parse_proof_script(text, *sys);
        CHECK(render_proof_script(back) == text);
        CHECK(check_proof(*sys, back).accepted);
    }
}

TEST_CASE("the rigidity premise is a genuine strengthening", "[transform]") {
    // distributing necessity over the exclusive disjunction, with the temporal
    // formulas stood in by atoms, is refutable in S5
    Formula shape = parse("[]((a & ~b) | (b & ~a)) -> ([]a & []~b) | ([]b & []~a)");
    ValidityVerdict v = decide_valid(shape, System::S5);
    REQUIRE_FALSE(v.valid);
    EvalEnv env;
    CHECK_FALSE(eval(v.countermodel, v.world, shape, env));
}

TEST_CASE("system registry resolves every shipped system", "[transform]") {
    for (const char* name : {"T", "S4", "S5", "TMP", "O", "S5+O", "O_T", "O_TB", "O_TB+NFP"}) {
        INFO(name);
        CHECK(lookup_system(name).has_value());
    }
    CHECK_FALSE(lookup_system("S6").has_value());
    CHECK(lookup_system("O_TB")->transforms ==
          std::vector<TransformKind>{TransformKind::BreakTemporalize});
}
