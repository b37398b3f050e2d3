#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "modalkit/enumerate.hpp"
#include "modalkit/proof_io.hpp"
#include "modalkit/tableau.hpp"
#include "modalkit/transform.hpp"

// Command-line front end. Subcommands: parse, valid, sat, eval, check-proof,
// transform, ontology. Reports are line-oriented key:value text; the exit
// status encodes the verdict (0 positive, 1 negative, 2 usage or input
// error), never the mere absence of a crash.

namespace modalkit {

struct CommandResult {
    int status = 0;
    std::string report;
};

struct ShippedScript {
    std::string name;
    Proof proof;
};

inline std::vector<ShippedScript> shipped_scripts() {
    std::vector<ShippedScript> out;
    out.push_back({"theorem1", script_theorem1()});
    out.push_back({"theorem2", script_theorem2()});
    out.push_back({"main-theorem", script_main_theorem()});
    out.push_back({"temporalized", script_temporalized()});
    out.push_back({"tb-theorem", script_tb_theorem()});
    out.push_back({"gods-death", script_gods_death()});
    return out;
}

namespace cli_detail {

struct Usage : std::runtime_error {
    explicit Usage(const std::string& what) : std::runtime_error(what) {}
};

inline std::string read_input(const std::string& pathOrDash, std::istream& stdinStream) {
    if (pathOrDash == "-") {
        std::ostringstream buf;
        buf << stdinStream.rdbuf();
        return buf.str();
    }
    std::ifstream in(pathOrDash);
    if (!in) throw Usage("cannot open file: " + pathOrDash);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline Formula formula_arg(const std::string& arg, std::istream& stdinStream) {
    return parse(arg == "-" ? read_input("-", stdinStream) : arg);
}

struct Args {
    std::vector<std::string> rest;
    std::map<std::string, std::string> options;
    std::set<std::string> flags;

    static Args scan(const std::vector<std::string>& argv, const std::set<std::string>& optNames,
                     const std::set<std::string>& flagNames) {
        Args a;
        for (size_t i = 0; i < argv.size(); ++i) {
            const std::string& s = argv[i];
            if (flagNames.count(s)) {
                a.flags.insert(s);
            } else if (optNames.count(s)) {
                if (i + 1 >= argv.size()) throw Usage("option " + s + " needs a value");
                a.options[s] = argv[++i];
            } else if (s.rfind("--", 0) == 0) {
                throw Usage("unknown option: " + s);
            } else {
                a.rest.push_back(s);
            }
        }
        return a;
    }

    std::string need(const std::string& key) const {
        auto it = options.find(key);
        if (it == options.end()) throw Usage("missing required option " + key);
        return it->second;
    }
};

inline System tableau_system(const std::string& name) {
    auto s = system_from_name(name);
    if (!s) throw Usage("unknown tableau system (want K, T, S4, S5): " + name);
    return *s;
}

inline FrameClass frame_of(System s) {
    switch (s) {
        case System::K: return FrameClass::All;
        case System::T: return FrameClass::Reflexive;
        case System::S4: return FrameClass::Preorder;
        case System::S5: return FrameClass::Equivalence;
    }
    return FrameClass::All;
}

inline void emit_model(std::ostream& out, const KripkeModel& m, const char* tag) {
    out << tag << "-begin\n" << render_model(m) << tag << "-end\n";
}

inline int cmd_parse(const Args& a, std::ostream& out, std::istream& in) {
    if (a.rest.size() != 1) throw Usage("parse needs exactly one FILE or -");
    std::string text = read_input(a.rest[0], in);
    try {
        Formula f = parse(text);
        out << "status: ok\n";
        out << "formula: " << render(f) << "\n";
        return 0;
    } catch (const ParseError& e) {
        out << "status: syntax-error\n";
        out << "line: " << e.line << "\n";
        out << "col: " << e.col << "\n";
        out << "message: " << e.what() << "\n";
        if (!e.expected.empty()) {
            out << "expected:";
            for (const auto& t : e.expected) out << " " << t;
            out << "\n";
        }
        return 2;
    }
}

inline int cmd_decide(bool validity, const Args& a, std::ostream& out, std::istream& in,
                      bool compact) {
    if (a.rest.size() != 1) throw Usage("expected exactly one FORMULA argument");
    System sys = tableau_system(a.need("--system"));
    Formula f = formula_arg(a.rest[0], in);
    out << "command: " << (validity ? "valid" : "sat") << "\n";
    out << "system: " << system_name(sys) << "\n";
    out << "formula: " << render(f) << "\n";
    bool positive;
    if (validity) {
        ValidityVerdict v = decide_valid(f, sys);
        out << "verdict: " << (v.valid ? "Valid" : "Countermodel") << "\n";
        positive = v.valid;
        if (!compact) {
            out << "stats-nodes: " << v.stats.nodesExpanded << "\n";
            out << "stats-worlds: " << v.stats.worldsCreated << "\n";
        }
        if (!v.valid) {
            out << "countermodel-world: " << v.countermodel.worlds[v.world] << "\n";
            if (!compact) emit_model(out, v.countermodel, "countermodel");
        }
        if (a.flags.count("--oracle")) {
            ValidityResult oracle = bruteforce_validity(f, frame_of(sys), 3);
            bool disagree = (v.valid && !oracle.valid) ||
                            (!v.valid && v.countermodel.worlds.size() <= 3 && oracle.valid);
            out << "oracle: " << (disagree ? "disagree" : "agree") << "\n";
            if (disagree) return 2;
        }
    } else {
        TableauResult r = decide_sat(f, sys);
        out << "verdict: " << (r.sat ? "SAT" : "UNSAT") << "\n";
        positive = r.sat;
        if (!compact) {
            out << "stats-nodes: " << r.stats.nodesExpanded << "\n";
            out << "stats-worlds: " << r.stats.worldsCreated << "\n";
        }
        if (r.sat) {
            out << "model-world: " << r.model.worlds[r.world] << "\n";
            if (!compact) emit_model(out, r.model, "model");
        }
        if (a.flags.count("--oracle")) {
            auto oracle = bruteforce_sat(f, frame_of(sys), 3);
            bool disagree = (!r.sat && oracle.has_value()) ||
                            (r.sat && r.model.worlds.size() <= 3 && !oracle.has_value() &&
                             sys == System::S5);
            out << "oracle: " << (disagree ? "disagree" : "agree") << "\n";
            if (disagree) return 2;
        }
    }
    return positive ? 0 : 1;
}

inline int cmd_eval(const Args& a, std::ostream& out, std::istream& in) {
    if (a.rest.size() != 1) throw Usage("eval needs exactly one FORMULA argument");
    KripkeModel m = parse_model(read_input(a.need("--model"), in));
    std::string world = a.need("--world");
    Formula f = formula_arg(a.rest[0], in);
    out << "command: eval\n";
    out << "world: " << world << "\n";
    out << "formula: " << render(f) << "\n";
    bool v = eval(m, world, f);
    out << "verdict: " << (v ? "true" : "false") << "\n";
    return v ? 0 : 1;
}

inline void emit_check_report(std::ostream& out, const CheckReport& rep, bool compact) {
    out << "verdict: " << (rep.accepted ? "Accept" : "Reject") << "\n";
    if (!rep.accepted) {
        out << "failing-step: " << rep.failingStep << "\n";
        out << "reason: " << rep.reason << "\n";
        if (!compact) out << "detail: " << rep.detail << "\n";
    }
    out << "premises-used:";
    if (rep.premisesUsed.empty()) out << " -";
    for (const auto& p : rep.premisesUsed) out << " " << p;
    out << "\n";
    out << "goal-matched: " << (rep.goalMatched ? "yes" : "no") << "\n";
}

inline int cmd_check_proof(const Args& a, std::ostream& out, std::istream& in, bool compact) {
    if (a.rest.size() != 1) throw Usage("check-proof needs exactly one SCRIPT file");
    std::string text = read_input(a.rest[0], in);
    std::string sysName = peek_script_system(text);
    if (a.options.count("--system")) {
        std::string forced = a.options.at("--system");
        if (forced != sysName)
            throw Usage("script declares system " + sysName + " but --system says " + forced);
    }
    auto sys = lookup_system(sysName);
    if (!sys) throw Usage("unknown system: " + sysName);
    Proof proof = parse_proof_script(text, *sys);
    out << "command: check-proof\n";
    out << "system: " << sysName << "\n";
    out << "goal: " << render(proof.goal) << "\n";
    CheckReport rep = check_proof(*sys, proof);
    emit_check_report(out, rep, compact);
    return rep.accepted ? 0 : 1;
}

inline TransformKind transform_arg(const std::string& op) {
    if (op == "temporalize") return TransformKind::Temporalize;
    if (op == "time-reverse") return TransformKind::TimeReverse;
    if (op == "break") return TransformKind::BreakTemporalize;
    throw Usage("unknown transform (want temporalize, time-reverse, break): " + op);
}

inline int cmd_transform(const Args& a, std::ostream& out, std::istream& in, bool compact) {
    TransformKind kind = transform_arg(a.need("--op"));
    out << "command: transform\n";
    out << "op: " << transform_name(kind) << "\n";
    int sources = int(a.options.count("--formula")) + int(a.options.count("--system")) +
                  int(a.options.count("--proof"));
    if (sources != 1) throw Usage("transform needs exactly one of --formula, --system, --proof");
    if (a.options.count("--formula")) {
        Formula f = formula_arg(a.options.at("--formula"), in);
        out << "input: " << render(f) << "\n";
        out << "result: " << render(apply_transform(kind, f)) << "\n";
        return 0;
    }
    if (a.options.count("--system")) {
        auto sys = lookup_system(a.options.at("--system"));
        if (!sys) throw Usage("unknown system: " + a.options.at("--system"));
        FormalSystem t = transform_system(*sys, kind);
        out << "name: " << t.name << "\n";
        for (const auto& s : t.schemas) {
            if (s.kind == AxiomSchema::Kind::Taut)
                out << "schema " << s.name << ": (propositional tautologies)\n";
            else if (s.kind == AxiomSchema::Kind::Computed)
                out << "schema " << s.name << ": (computed quantifier schema)\n";
            else
                out << "schema " << s.name << ": " << render(s.pattern) << "\n";
        }
        for (const auto& d : t.definitions)
            out << "definition " << d.name << ": " << render(d.definiens) << "\n";
        return 0;
    }
    std::string text = read_input(a.options.at("--proof"), in);
    std::string intoName = a.need("--into");
    auto target = lookup_system(intoName);
    if (!target) throw Usage("unknown target system: " + intoName);
    auto srcSys = lookup_system(peek_script_system(text));
    if (!srcSys) throw Usage("unknown source system: " + peek_script_system(text));
    Proof proof = parse_proof_script(text, *srcSys);
    ReplayResult r = replay_transformed(proof, kind, *target);
    out << "source-system: " << srcSys->name << "\n";
    out << "target-system: " << target->name << "\n";
    out << "goal: " << render(r.transformed.goal) << "\n";
    emit_check_report(out, r.report, compact);
    if (!compact) out << "transformed-begin\n" << render_proof_script(r.transformed) << "transformed-end\n";
    return r.report.accepted ? 0 : 1;
}

inline int cmd_ontology(const Args& a, std::ostream& out, bool compact) {
    if (a.rest.empty()) throw Usage("ontology needs an action: run-all, collapse-report, emit DIR");
    const std::string& action = a.rest[0];
    if (action == "collapse-report") {
        out << collapse_report();
        return 0;
    }
    if (action == "run-all") {
        out << "command: ontology-run-all\n";
        int accepted = 0;
        auto scripts = shipped_scripts();
        for (const auto& s : scripts) {
            auto sys = lookup_system(s.proof.systemName);
            if (!sys) throw Usage("script names unknown system " + s.proof.systemName);
            CheckReport rep = check_proof(*sys, s.proof);
            out << "script: " << s.name << "\n";
            out << "system: " << s.proof.systemName << "\n";
            out << "goal: " << render(s.proof.goal) << "\n";
            if (!compact) out << "steps: " << s.proof.steps.size() << "\n";
            emit_check_report(out, rep, compact);
            if (rep.accepted) ++accepted;
        }
        out << "summary: " << accepted << "/" << scripts.size() << " accepted\n";
        return accepted == static_cast<int>(scripts.size()) ? 0 : 1;
    }
    if (action == "emit") {
        if (a.rest.size() != 2) throw Usage("ontology emit needs a target directory");
        std::string dir = a.rest[1];
        std::ostringstream index;
        for (const auto& s : shipped_scripts()) {
            std::string file = s.name + ".proof";
            std::ofstream f(dir + "/" + file);
            if (!f) throw Usage("cannot write " + dir + "/" + file);
            f << render_proof_script(s.proof);
            index << s.name << "\t" << file << "\t" << s.proof.systemName << "\t"
                  << render(s.proof.goal) << "\t";
            if (s.proof.premises.empty()) {
                index << "-";
            } else {
                for (size_t i = 0; i < s.proof.premises.size(); ++i)
                    index << (i ? "," : "") << s.proof.premises[i].first;
            }
            index << "\tAccept\n";
            out << "written: " << dir << "/" << file << "\n";
        }
        std::ofstream idx(dir + "/index.tsv");
        if (!idx) throw Usage("cannot write " + dir + "/index.tsv");
        idx << index.str();
        out << "written: " << dir << "/index.tsv\n";
        return 0;
    }
    throw Usage("unknown ontology action: " + action);
}

}  // namespace cli_detail

inline CommandResult execute(const std::vector<std::string>& argv,
                             std::istream& stdinStream = std::cin) {
    using namespace cli_detail;
    std::ostringstream out;
    CommandResult result;
    try {
        if (argv.empty()) throw Usage("usage: modalkit SUBCOMMAND ... (parse, valid, sat, eval, check-proof, transform, ontology)");
        std::string cmd = argv[0];
        std::vector<std::string> rest(argv.begin() + 1, argv.end());
        Args a = Args::scan(rest,
                            {"--system", "--model", "--world", "--op", "--formula", "--proof",
                             "--into", "--format"},
                            {"--oracle"});
        bool compact = false;
        if (a.options.count("--format")) {
            std::string f = a.options.at("--format");
            if (f == "compact")
                compact = true;
            else if (f != "full")
                throw Usage("--format wants compact or full");
        }
        if (cmd == "parse")
            result.status = cmd_parse(a, out, stdinStream);
        else if (cmd == "valid")
            result.status = cmd_decide(true, a, out, stdinStream, compact);
        else if (cmd == "sat")
            result.status = cmd_decide(false, a, out, stdinStream, compact);
        else if (cmd == "eval")
            result.status = cmd_eval(a, out, stdinStream);
        else if (cmd == "check-proof")
            result.status = cmd_check_proof(a, out, stdinStream, compact);
        else if (cmd == "transform")
            result.status = cmd_transform(a, out, stdinStream, compact);
        else if (cmd == "ontology")
            result.status = cmd_ontology(a, out, compact);
        else
            throw Usage("unknown subcommand: " + cmd);
    } catch (const cli_detail::Usage& e) {
        out << "error: " << e.what() << "\n";
        result.status = 2;
    } catch (const ParseError& e) {
        out << "error: " << e.what() << "\n";
        result.status = 2;
    } catch (const ScriptError& e) {
        out << "error: " << e.what() << "\n";
        result.status = 2;
    } catch (const ModelParseError& e) {
        out << "error: " << e.what() << "\n";
        result.status = 2;
    } catch (const std::exception& e) {
        out << "error: " << e.what() << "\n";
        result.status = 2;
    }
    result.report = out.str();
    return result;
}

}  // namespace modalkit
