// cl15: command-line front end for the checker, compiler and harness.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cl15/calculus.hpp"
#include "cl15/error.hpp"
#include "cl15/harness.hpp"
#include "cl15/strategy.hpp"

namespace {

using json = nlohmann::json;
using namespace cl15;

enum Exit { kOk = 0, kFail = 1, kUsage = 2, kCap = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

GameLibrary load_library(const std::string& path) {
    return path.empty() ? standard_library() : parse_game_library(read_file(path));
}

const AtomGame& pick_game(const GameLibrary& lib, const std::string& name) {
    auto it = lib.find(name);
    if (it == lib.end()) throw UsageError("no game named '" + name + "' in the atom library");
    return it->second;
}

json run_json(const Run& r) {
    json a = json::array();
    for (const auto& lm : r) a.push_back({{"player", std::string(1, player_letter(lm.player))}, {"move", lm.move}});
    return a;
}

std::string letter(Player p) { return std::string(1, player_letter(p)); }

// check

struct CheckOpts {
    std::string proof;
    bool json = false;
};

int cmd_check(const CheckOpts& o) {
    Proof p;
    try {
        p = parse_proof(read_file(o.proof));
    } catch (const ParseError& e) {
        if (o.json)
            std::cout << json{{"ok", false}, {"step", 0}, {"message", e.what()}, {"steps", 0}}.dump(2) << "\n";
        else
            std::cout << "FAIL parse: " << e.what() << "\n";
        return kFail;
    }
    const CheckResult r = check_proof(p);
    std::optional<std::string> formula;
    if (r.ok) {
        try {
            formula = print_formula(proved_formula(p));
        } catch (const RuleError&) {
        }
    }
    if (o.json) {
        json j = {{"ok", r.ok}, {"step", r.step}, {"message", r.message}, {"steps", p.steps.size()}};
        if (formula) j["formula"] = *formula;
        std::cout << j.dump(2) << "\n";
    } else if (r.ok) {
        std::cout << "OK " << p.steps.size() << " steps";
        if (formula) std::cout << ", proves " << *formula;
        std::cout << "\n";
    } else {
        std::cout << "FAIL step " << r.step << ": " << r.message << "\n";
    }
    return r.ok ? kOk : kFail;
}

// compile

struct CompileOpts {
    std::string proof;
    bool json = false;
};

int cmd_compile(const CompileOpts& o) {
    const Proof p = parse_proof(read_file(o.proof));
    const CheckResult r = check_proof(p);
    if (!r.ok) {
        std::cerr << "proof does not check: step " << r.step << ": " << r.message << "\n";
        return kFail;
    }
    const Formula f = proved_formula(p);
    const TransducerPtr t = compile(p);
    if (o.json) {
        json rules = json::array();
        for (const auto& s : p.steps) rules.push_back(rule_name(s.app.rule));
        std::cout << json{{"formula", print_formula(f)}, {"steps", p.steps.size()}, {"rules", rules},
                          {"strategy", t->describe()}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "formula: " << print_formula(f) << "\n" << t->describe() << "\n";
    }
    return kOk;
}

// play

struct PlayOpts {
    std::string proof;
    std::string atoms;
    std::string game = "Give";
    std::string env = "random";
    std::uint64_t seed = 1;
    std::size_t budget = kDefaultBudget;
    std::size_t env_moves = 6;
    std::size_t depth = 2;
    bool json = false;
};

int cmd_play(const PlayOpts& o) {
    const Proof p = parse_proof(read_file(o.proof));
    const Formula f = proved_formula(p);
    const TransducerPtr t = compile(p);
    const GameLibrary lib = load_library(o.atoms);
    const Arena arena = Arena::of_formula(f, uniform_interpretation(f, pick_game(lib, o.game)));
    const EnvPolicy env = o.env == "spoiler" ? EnvPolicy::spoiler(o.seed, o.depth, o.env_moves)
                                             : EnvPolicy::random(o.seed, o.env_moves);
    const PlayReport rep = play(*t, env, arena, o.budget);
    if (o.json) {
        json j = {{"formula", print_formula(f)},
                  {"game", o.game},
                  {"env", o.env},
                  {"seed", o.seed},
                  {"run", run_json(rep.run)},
                  {"verdict", letter(rep.verdict)},
                  {"offender", rep.offender ? json(letter(*rep.offender)) : json(nullptr)},
                  {"steps", rep.steps},
                  {"inconclusive", rep.inconclusive}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "run: " << print_run(rep.run) << "\n"
                  << "verdict: " << letter(rep.verdict) << (rep.inconclusive ? " (inconclusive)" : "") << "\n";
        if (rep.offender) std::cout << "offender: " << letter(*rep.offender) << "\n";
    }
    return !rep.inconclusive && rep.verdict == Player::Top ? kOk : kFail;
}

// eval

struct EvalOpts {
    std::string game;
    std::string run;
    std::string atoms;
    std::string uniform = "Give";
    std::vector<std::string> binds;
    bool json = false;
};

// Both the formula and the run come from the command line, so a malformed
// one is a usage error rather than a failed evaluation.
template <class F>
auto parse_arg(const char* what, F&& parse) {
    try {
        return parse();
    } catch (const ParseError& e) {
        throw UsageError(std::string("bad ") + what + ": " + e.what());
    }
}

int cmd_eval(const EvalOpts& o) {
    const Formula f = parse_arg("--game", [&] { return parse_formula(o.game); });
    const GameLibrary lib = load_library(o.atoms);
    Interpretation interp = uniform_interpretation(f, pick_game(lib, o.uniform));
    for (const auto& b : o.binds) {
        const auto eq = b.find('=');
        if (eq == std::string::npos) throw UsageError("--bind expects ATOM=Game, got '" + b + "'");
        interp.insert_or_assign(b.substr(0, eq), pick_game(lib, b.substr(eq + 1)));
    }
    const Run r = parse_arg("--run", [&] { return parse_run(o.run); });
    const GameExpr g = game_of(f);
    const auto off = first_offender(g, interp, r);
    const Player w = winner(g, interp, r);
    if (o.json) {
        std::cout << json{{"game", print_formula(f)},
                          {"run", run_json(r)},
                          {"legal", !off.has_value()},
                          {"offender", off ? json(letter(*off)) : json(nullptr)},
                          {"winner", letter(w)}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "legal: " << (off ? "no" : "yes") << "\n";
        if (off) std::cout << "offender: " << letter(*off) << "\n";
        std::cout << "winner: " << letter(w) << "\n";
    }
    return kOk;
}

// fuse / defuse

struct FuseOpts {
    std::vector<std::string> parts;
    bool json = false;
};

int cmd_fuse(const FuseOpts& o) {
    std::vector<Bitstring> xs;
    for (const auto& s : o.parts) {
        if (!Bitstring::valid(s)) throw UsageError("not a bitstring: '" + s + "'");
        xs.emplace_back(s);
    }
    const auto out = fuse_n(xs);
    if (o.json) {
        json a = json::array();
        for (const auto& z : out) a.push_back(z.str());
        std::cout << json{{"fusions", a}}.dump(2) << "\n";
    } else {
        for (std::size_t i = 0; i < out.size(); ++i) std::cout << (i ? " " : "") << out[i].pretty();
        std::cout << "\n";
    }
    return kOk;
}

struct DefuseOpts {
    std::string z;
    std::size_t n = 2;
    bool json = false;
};

int cmd_defuse(const DefuseOpts& o) {
    if (!Bitstring::valid(o.z)) throw UsageError("not a bitstring: '" + o.z + "'");
    const auto out = defuse_n(Bitstring(o.z), o.n);
    if (o.json) {
        json a = json::array();
        for (const auto& x : out) a.push_back(x.str());
        std::cout << json{{"parts", a}}.dump(2) << "\n";
    } else {
        for (std::size_t i = 0; i < out.size(); ++i) std::cout << (i ? " " : "") << out[i].pretty();
        std::cout << "\n";
    }
    return kOk;
}

// corpus

struct CorpusOpts {
    std::string dir;
    CorpusOptions run;
    bool json = false;
};

int cmd_corpus(CorpusOpts o) {
    if (o.dir.empty()) {
        const char* env = std::getenv("CL15_CORPUS");
        o.dir = env && *env ? env : "corpus";
    }
    const CorpusReport r = run_corpus(o.dir, o.run);
    std::cout << (o.json ? corpus_report_json(r) : corpus_report_text(r));
    return r.all_pass() ? kOk : kFail;
}

// repl

struct ReplOpts {
    std::string proof;
    std::string atoms;
    std::string game = "Give";
    std::size_t budget = kDefaultBudget;
};

void show_position(const Arena& arena, const Run& run) {
    std::cout << "position: " << (run.empty() ? "<>" : print_run(run)) << "\n";
    std::cout << "currently won by " << letter(arena.winner(run)) << "\n";
}

int cmd_repl(const ReplOpts& o) {
    const Proof p = parse_proof(read_file(o.proof));
    const Formula f = proved_formula(p);
    TransducerPtr t = compile(p);
    const GameLibrary lib = load_library(o.atoms);
    const Arena arena = Arena::of_formula(f, uniform_interpretation(f, pick_game(lib, o.game)));

    std::cout << "playing " << print_formula(f) << " with every atom as " << o.game << "\n"
              << "enter your moves (you are B); blank line to pass, 'quit' to stop\n";
    Run run;
    auto machine_turn = [&] {
        while (run.size() < o.budget) {
            const Block b = t->step(run);
            if (b.empty()) return;
            for (const auto& m : b) {
                run.push_back({Player::Top, m});
                std::cout << "T: " << m << "\n";
            }
        }
    };
    machine_turn();
    show_position(arena, run);
    std::string line;
    while (run.size() < o.budget && std::cout << "B> " << std::flush && std::getline(std::cin, line)) {
        if (line == "quit" || line == "exit") break;
        if (!line.empty()) {
            Run trial = run;
            trial.push_back({Player::Bot, line});
            if (const auto off = arena.first_offender(trial)) {
                std::cout << "rejected: B:" << line << " would make the run illegal (offender "
                          << letter(*off) << ")\n";
                continue;
            }
            run = std::move(trial);
        }
        machine_turn();
        show_position(arena, run);
    }
    std::cout << "final: " << (run.empty() ? "<>" : print_run(run)) << "\nwinner: " << letter(arena.winner(run)) << "\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cl15: cirquent calculus checker, strategy compiler and game harness"};
    app.require_subcommand(1);

    CheckOpts check;
    auto* sc = app.add_subcommand("check", "Check a proof file");
    sc->add_option("proof", check.proof, "proof file")->required();
    sc->add_flag("--json", check.json, "machine-readable output");

    CompileOpts comp;
    auto* scomp = app.add_subcommand("compile", "Check a proof and print its strategy");
    scomp->add_option("proof", comp.proof, "proof file")->required();
    scomp->add_flag("--json", comp.json, "machine-readable output");

    PlayOpts pl;
    auto* sp = app.add_subcommand("play", "Play the compiled strategy against an environment");
    sp->add_option("proof", pl.proof, "proof file")->required();
    sp->add_option("--atoms", pl.atoms, "atom game library (default: built-in library)");
    sp->add_option("--game", pl.game, "library game interpreting every atom")->capture_default_str();
    sp->add_option("--env", pl.env, "environment policy")
        ->check(CLI::IsMember({"random", "spoiler"}))
        ->capture_default_str();
    sp->add_option("--seed", pl.seed, "environment seed")->capture_default_str();
    sp->add_option("--budget", pl.budget, "labmove budget")->check(CLI::PositiveNumber)->capture_default_str();
    sp->add_option("--env-moves", pl.env_moves, "maximum environment moves")->capture_default_str();
    sp->add_option("--depth", pl.depth, "spoiler lookahead")->check(CLI::PositiveNumber)->capture_default_str();
    sp->add_flag("--json", pl.json, "machine-readable output");

    EvalOpts ev;
    auto* se = app.add_subcommand("eval", "Legality and winner of a run of a formula's game");
    se->add_option("--game", ev.game, "formula")->required();
    se->add_option("--run", ev.run, "run, e.g. \"B:1.m, T:0.m\"")->required();
    se->add_option("--atoms", ev.atoms, "atom game library (default: built-in library)");
    se->add_option("--uniform", ev.uniform, "game interpreting unbound atoms")->capture_default_str();
    se->add_option("--bind", ev.binds, "ATOM=Game, repeatable");
    se->add_flag("--json", ev.json, "machine-readable output");

    FuseOpts fu;
    auto* sf = app.add_subcommand("fuse", "All fusions of the given bitstrings");
    sf->add_option("parts", fu.parts, "bitstrings (use \"\" for the empty one)")->required();
    sf->add_flag("--json", fu.json, "machine-readable output");

    DefuseOpts df;
    auto* sd = app.add_subcommand("defuse", "Split a bitstring into n interleaved parts");
    sd->add_option("bitstring", df.z, "bitstring")->required();
    sd->add_option("--n", df.n, "number of parts")->check(CLI::PositiveNumber)->capture_default_str();
    sd->add_flag("--json", df.json, "machine-readable output");

    CorpusOpts co;
    auto* sco = app.add_subcommand("corpus", "Check, compile and roll out every corpus case");
    sco->add_option("dir", co.dir, "corpus directory (default: $CL15_CORPUS, then ./corpus)");
    sco->add_option("--rollouts", co.run.random_rollouts, "random rollouts per game")->capture_default_str();
    sco->add_option("--spoiler", co.run.spoiler_rollouts, "spoiler rollouts per game")->capture_default_str();
    sco->add_option("--seed", co.run.seed, "first seed")->capture_default_str();
    sco->add_option("--budget", co.run.budget, "labmove budget")->check(CLI::PositiveNumber)->capture_default_str();
    sco->add_flag("--json", co.json, "machine-readable output");

    ReplOpts re;
    auto* sr = app.add_subcommand("repl", "Play against the compiled strategy from the terminal");
    sr->add_option("proof", re.proof, "proof file")->required();
    sr->add_option("--atoms", re.atoms, "atom game library (default: built-in library)");
    sr->add_option("--game", re.game, "library game interpreting every atom")->capture_default_str();
    sr->add_option("--budget", re.budget, "labmove budget")->check(CLI::PositiveNumber)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*sc) return cmd_check(check);
        if (*scomp) return cmd_compile(comp);
        if (*sp) return cmd_play(pl);
        if (*se) return cmd_eval(ev);
        if (*sf) return cmd_fuse(fu);
        if (*sd) return cmd_defuse(df);
        if (*sco) return cmd_corpus(co);
        if (*sr) return cmd_repl(re);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return kCap;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
    return kUsage;
}
