#include "cl15/harness.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cl15/atom_game.hpp"
#include "cl15/error.hpp"

namespace cl15 {

namespace {

std::vector<std::string> bitstrings_upto(std::size_t max_bits) {
    std::vector<std::string> out{""};
    for (std::size_t k = 0; k < out.size(); ++k)
        if (out[k].size() < max_bits) {
            out.push_back(out[k] + '0');
            out.push_back(out[k] + '1');
        }
    return out;
}

void expr_moves(const GameExpr& g, Player p, const std::vector<std::string>& bits, const Interpretation& interp,
                std::vector<std::string>& out) {
    switch (g.kind()) {
    case GameExpr::Kind::Atom:
        for (auto& m : interp.at(g.name()).moves_of(p)) out.push_back(m);
        return;
    case GameExpr::Kind::Neg: expr_moves(g.body(), opposite(p), bits, interp, out); return;
    case GameExpr::Kind::And:
    case GameExpr::Kind::Or: {
        std::vector<std::string> l, r;
        expr_moves(g.left(), p, bits, interp, l);
        expr_moves(g.right(), p, bits, interp, r);
        for (auto& m : l) out.push_back("0." + m);
        for (auto& m : r) out.push_back("1." + m);
        return;
    }
    case GameExpr::Kind::Brec:
    case GameExpr::Kind::Cobrec: {
        std::vector<std::string> sub;
        expr_moves(g.body(), p, bits, interp, sub);
        for (const auto& w : bits)
            for (const auto& m : sub) out.push_back(w + "." + m);
        return;
    }
    }
}

double blend_all(const std::vector<double>& xs) {
    if (xs.empty()) return 1.0;
    double lo = xs[0], sum = 0;
    for (double x : xs) {
        lo = std::min(lo, x);
        sum += x;
    }
    return 0.5 * lo + 0.5 * sum / static_cast<double>(xs.size());
}

double blend_some(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double hi = xs[0], sum = 0;
    for (double x : xs) {
        hi = std::max(hi, x);
        sum += x;
    }
    return 0.5 * hi + 0.5 * sum / static_cast<double>(xs.size());
}

// Graded ⊤-strength of a legal run, in [0, 1].
double margin(const GameExpr& g, const Interpretation& interp, const Run& r) {
    switch (g.kind()) {
    case GameExpr::Kind::Atom: return interp.at(g.name()).winner_of_legal(r) == Player::Top ? 1.0 : 0.0;
    case GameExpr::Kind::Neg: return 1.0 - margin(g.body(), interp, negate_run(r));
    case GameExpr::Kind::And:
        return blend_all({margin(g.left(), interp, project_prefix(r, "0.")),
                          margin(g.right(), interp, project_prefix(r, "1."))});
    case GameExpr::Kind::Or:
        return blend_some({margin(g.left(), interp, project_prefix(r, "0.")),
                           margin(g.right(), interp, project_prefix(r, "1."))});
    case GameExpr::Kind::Brec:
    case GameExpr::Kind::Cobrec: {
        std::vector<double> xs;
        for (const auto& x : enumerate_thread_classes(used_thread_prefixes(r)))
            xs.push_back(margin(g.body(), interp, project_thread(r, x)));
        return g.kind() == GameExpr::Kind::Brec ? blend_all(xs) : blend_some(xs);
    }
    }
    return 0.0;
}

double cirquent_margin(const Cirquent& c, const Interpretation& interp, const Run& r) {
    std::vector<GameExpr> games;
    for (const auto& f : c.oformulas) games.push_back(game_of(f));
    std::vector<double> groups;
    for (const auto& u : c.under) {
        std::vector<double> vectors;
        try {
            for_each_projection(c, r, u, 4096, [&](const std::vector<Run>& projs) {
                std::vector<double> members;
                for (std::size_t i = 0; i < u.size(); ++i) members.push_back(margin(games[u[i] - 1], interp, projs[i]));
                vectors.push_back(blend_some(members));
            });
        } catch (const CapExceeded&) {
            groups.push_back(0.5);
            continue;
        }
        groups.push_back(blend_all(vectors));
    }
    return blend_all(groups);
}

} // namespace

Arena Arena::of_formula(const Formula& f, Interpretation interp) { return of_expr(game_of(f), std::move(interp)); }

Arena Arena::of_expr(GameExpr g, Interpretation interp) { return Arena(FormulaGame{std::move(g)}, std::move(interp)); }

Arena Arena::of_cirquent(Cirquent c, Interpretation interp) {
    c.validate();
    return Arena(CirquentGame{std::move(c)}, std::move(interp));
}

bool Arena::legal(const Run& r) const {
    if (auto* f = std::get_if<FormulaGame>(&game_)) return cl15::legal(f->g, interp_, r);
    return cirquent_legal(std::get<CirquentGame>(game_).c, interp_, r);
}

std::optional<Player> Arena::first_offender(const Run& r) const {
    if (auto* f = std::get_if<FormulaGame>(&game_)) return cl15::first_offender(f->g, interp_, r);
    return cirquent_first_offender(std::get<CirquentGame>(game_).c, interp_, r);
}

Player Arena::winner(const Run& r) const {
    if (auto* f = std::get_if<FormulaGame>(&game_)) return cl15::winner(f->g, interp_, r);
    return cirquent_winner(std::get<CirquentGame>(game_).c, interp_, r);
}

double Arena::score(const Run& r) const {
    if (auto off = first_offender(r)) return *off == Player::Bot ? 1.5 : 0.0;
    const double won = winner(r) == Player::Top ? 1.0 : 0.0;
    if (auto* f = std::get_if<FormulaGame>(&game_)) return won + 0.5 * margin(f->g, interp_, r);
    return won + 0.5 * cirquent_margin(std::get<CirquentGame>(game_).c, interp_, r);
}

std::vector<std::string> Arena::candidate_moves(Player p, std::size_t max_bits) const {
    const auto bits = bitstrings_upto(max_bits);
    std::vector<std::string> out;
    if (auto* f = std::get_if<FormulaGame>(&game_)) {
        expr_moves(f->g, p, bits, interp_, out);
        return out;
    }
    const Cirquent& c = std::get<CirquentGame>(game_).c;
    for (std::size_t a = 1; a <= c.size(); ++a) {
        std::vector<std::string> inner;
        expr_moves(game_of(c.oformulas[a - 1]), p, bits, interp_, inner);
        // Slot vectors: every combination of short bitstrings in member slots.
        std::vector<std::string> prefixes{std::to_string(a) + ";"};
        for (std::size_t j = 0; j < c.over.size(); ++j) {
            const char* sep = j + 1 < c.over.size() ? "," : ".";
            std::vector<std::string> next;
            for (const auto& pre : prefixes) {
                if (c.in_over(j, a))
                    for (const auto& w : bits) next.push_back(pre + w + sep);
                else
                    next.push_back(pre + sep);
            }
            prefixes = std::move(next);
        }
        for (const auto& pre : prefixes)
            for (const auto& m : inner) out.push_back(pre + m);
    }
    return out;
}

std::string Arena::describe() const {
    if (auto* f = std::get_if<FormulaGame>(&game_)) return f->g.print();
    return print_cirquent(std::get<CirquentGame>(game_).c);
}

EnvPolicy EnvPolicy::random(std::uint64_t seed, std::size_t move_budget) {
    EnvPolicy p;
    p.kind = Kind::Random;
    p.seed = seed;
    p.move_budget = move_budget;
    return p;
}

EnvPolicy EnvPolicy::spoiler(std::uint64_t seed, std::size_t depth, std::size_t move_budget) {
    EnvPolicy p;
    p.kind = Kind::Spoiler;
    p.seed = seed;
    p.depth = depth;
    p.move_budget = move_budget;
    return p;
}

EnvPolicy EnvPolicy::scripted(std::vector<std::string> moves) {
    EnvPolicy p;
    p.kind = Kind::Scripted;
    p.script = std::move(moves);
    p.move_budget = p.script.size();
    return p;
}

namespace {

// Lets the strategy move until it is quiet. Returns false if the budget ran
// out while it was still moving.
bool respond(Transducer& t, Run& run, std::size_t budget, std::size_t* steps = nullptr) {
    while (true) {
        Block b = t.step(run);
        if (steps) ++*steps;
        if (b.empty()) return true;
        for (auto& m : b) {
            if (run.size() >= budget) return false;
            run.push_back({Player::Top, std::move(m)});
        }
    }
}

class EnvDriver {
public:
    EnvDriver(const EnvPolicy& policy, const Arena& arena, std::size_t budget)
        : p_(policy), arena_(arena), budget_(budget), rng_(policy.seed) {}

    std::optional<std::string> next(const Run& run, const Transducer& t) {
        if (made_ >= p_.move_budget || run.size() >= budget_) return std::nullopt;
        std::optional<std::string> m;
        switch (p_.kind) {
        case EnvPolicy::Kind::Scripted:
            if (made_ < p_.script.size()) m = p_.script[made_];
            break;
        case EnvPolicy::Kind::Random: m = random_move(run); break;
        case EnvPolicy::Kind::Spoiler: m = spoiler_move(run, t); break;
        }
        if (m) ++made_;
        return m;
    }

private:
    const std::vector<std::string>& candidates() {
        if (!cands_) cands_ = arena_.candidate_moves(Player::Bot, p_.max_bits);
        return *cands_;
    }

    bool legal_after(const Run& run, const std::string& m) {
        Run r = run;
        r.push_back({Player::Bot, m});
        return arena_.legal(r);
    }

    std::optional<std::string> random_move(const Run& run) {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        // Leave room for the strategy's answers.
        if (run.size() >= budget_ / 2) return std::nullopt;
        if (made_ > 0 && unit(rng_) < p_.stop_probability) return std::nullopt;
        if (p_.junk_probability > 0 && unit(rng_) < p_.junk_probability) return std::string("#junk");
        const auto& cs = candidates();
        if (cs.empty()) return std::nullopt;
        std::uniform_int_distribution<std::size_t> pick(0, cs.size() - 1);
        for (std::size_t k = 0; k < p_.retries; ++k) {
            const auto& m = cs[pick(rng_)];
            if (legal_after(run, m)) return m;
        }
        std::vector<std::size_t> order(cs.size());
        for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
        std::shuffle(order.begin(), order.end(), rng_);
        for (std::size_t k : order)
            if (legal_after(run, cs[k])) return cs[k];
        return std::nullopt;
    }

    // Up to `width` legal candidates, uniformly among all legal ones.
    std::vector<std::string> sample_legal(const Run& run, std::size_t width) {
        std::vector<std::string> order = candidates();
        std::shuffle(order.begin(), order.end(), rng_);
        std::vector<std::string> legal;
        for (auto& m : order) {
            if (legal.size() == width) break;
            if (legal_after(run, m)) legal.push_back(std::move(m));
        }
        return legal;
    }

    // Lowest score the environment can force within `depth` more moves.
    double value(const Transducer& t, const Run& run, std::size_t depth, std::size_t moves_left) {
        double best = arena_.score(run);
        if (depth == 0 || moves_left == 0 || run.size() >= budget_ / 2) return best;
        for (const auto& m : sample_legal(run, std::max<std::size_t>(2, p_.width / 2))) {
            auto t2 = t.clone();
            Run r2 = run;
            r2.push_back({Player::Bot, m});
            if (!respond(*t2, r2, budget_)) continue;
            best = std::min(best, value(*t2, r2, depth - 1, moves_left - 1));
        }
        return best;
    }

    std::optional<std::string> spoiler_move(const Run& run, const Transducer& t) {
        if (run.size() >= budget_ / 2) return std::nullopt;
        const double stay = arena_.score(run);
        std::optional<std::string> best;
        double best_value = 0;
        for (const auto& m : sample_legal(run, p_.width)) {
            auto t2 = t.clone();
            Run r2 = run;
            r2.push_back({Player::Bot, m});
            if (!respond(*t2, r2, budget_)) return m; // drive the strategy into its budget
            const double v = value(*t2, r2, p_.depth - 1, p_.move_budget - made_ - 1);
            if (!best || v < best_value) {
                best = m;
                best_value = v;
            }
        }
        if (best && best_value <= stay) return best;
        return std::nullopt;
    }

    const EnvPolicy& p_;
    const Arena& arena_;
    std::size_t budget_;
    std::mt19937_64 rng_;
    std::size_t made_ = 0;
    std::optional<std::vector<std::string>> cands_;
};

} // namespace

PlayReport play(Transducer& t, const EnvPolicy& env, const Arena& arena, std::size_t budget) {
    PlayReport rep;
    EnvDriver driver(env, arena, budget);
    bool ok = respond(t, rep.run, budget, &rep.steps);
    while (ok) {
        auto m = driver.next(rep.run, t);
        if (!m) break;
        rep.run.push_back({Player::Bot, std::move(*m)});
        ok = respond(t, rep.run, budget, &rep.steps);
    }
    rep.inconclusive = !ok;
    rep.offender = arena.first_offender(rep.run);
    rep.verdict = arena.winner(rep.run);
    return rep;
}

namespace {

struct Explorer {
    const Arena& arena;
    std::size_t max_bits;
    std::size_t budget;
    std::size_t cap;
    std::vector<std::string> cands;
    ExhaustiveResult result;

    bool dfs(const Transducer& t, const Run& run, std::size_t depth) {
        if (++result.nodes > cap) throw CapExceeded("exhaustive check exceeded " + std::to_string(cap) + " nodes");
        if (arena.winner(run) != Player::Top) {
            result.top_wins = false;
            result.counterexample = run;
            return false;
        }
        if (depth == 0) return true;
        for (const auto& m : cands) {
            Run r2 = run;
            r2.push_back({Player::Bot, m});
            if (!arena.legal(r2)) continue;
            auto t2 = t.clone();
            if (!respond(*t2, r2, budget)) {
                result.top_wins = false;
                result.counterexample = r2;
                return false;
            }
            if (!dfs(*t2, r2, depth - 1)) return false;
        }
        return true;
    }
};

} // namespace

ExhaustiveResult exhaustive_env_check(const Transducer& t, const Arena& arena, std::size_t depth, std::size_t max_bits,
                                      std::size_t budget, std::size_t node_cap) {
    Explorer ex{arena, max_bits, budget, node_cap, arena.candidate_moves(Player::Bot, max_bits), {}};
    auto t0 = t.clone();
    Run run;
    if (!respond(*t0, run, budget)) {
        ex.result.top_wins = false;
        ex.result.counterexample = run;
        return ex.result;
    }
    ex.dfs(*t0, run, depth);
    return ex.result;
}

namespace {

struct Oracle {
    const Arena& arena;
    std::size_t bound;
    std::size_t cap;
    std::vector<std::string> top_moves;
    std::vector<std::string> bot_moves;
    std::size_t nodes = 0;

    bool top_wins(Run& run, Player turn, int passes) {
        if (++nodes > cap) throw CapExceeded("winnability oracle exceeded " + std::to_string(cap) + " nodes");
        if (passes >= 2 || run.size() >= bound) return arena.winner(run) == Player::Top;
        const bool top = turn == Player::Top;
        // ⊤ needs one winning option, ⊥ one refuting option; passing is always an option.
        if (top_wins(run, opposite(turn), passes + 1) == top) return top;
        for (const auto& m : top ? top_moves : bot_moves) {
            run.push_back({turn, m});
            const bool decided = arena.legal(run) && top_wins(run, opposite(turn), 0) == top;
            run.pop_back();
            if (decided) return top;
        }
        return !top;
    }
};

} // namespace

bool winnability_oracle(const Arena& arena, std::size_t bound, std::size_t max_bits, std::size_t node_cap) {
    Oracle o{arena, bound, node_cap, arena.candidate_moves(Player::Top, max_bits),
             arena.candidate_moves(Player::Bot, max_bits)};
    Run run;
    return o.top_wins(run, Player::Top, 0);
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool CorpusReport::all_pass() const {
    return std::all_of(cases.begin(), cases.end(), [](const CorpusCase& c) { return c.pass; });
}

CorpusReport run_corpus(const std::filesystem::path& dir, const CorpusOptions& opts) {
    namespace fs = std::filesystem;
    CorpusReport report;
    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_directory() && fs::exists(e.path() / "proof.cl15")) dirs.push_back(e.path());
    std::sort(dirs.begin(), dirs.end());

    for (const auto& d : dirs) {
        CorpusCase cc;
        cc.name = d.filename().string();
        std::optional<std::string> expected_formula;
        try {
            if (fs::exists(d / "expect.json")) {
                const auto j = nlohmann::json::parse(read_file(d / "expect.json"));
                cc.expected_check = j.value("check", true);
                cc.expected_wins = j.value("wins", true);
                if (j.contains("formula")) expected_formula = j["formula"].get<std::string>();
            }
            const Proof proof = parse_proof(read_file(d / "proof.cl15"));
            const CheckResult check = check_proof(proof);
            cc.checked = check.ok;
            if (!check.ok) {
                cc.message = "step " + std::to_string(check.step) + ": " + check.message;
            } else {
                const Formula f = proved_formula(proof);
                cc.formula = print_formula(f);
                if (expected_formula && parse_formula(*expected_formula) != f)
                    cc.message = "proves " + cc.formula + ", expected " + *expected_formula;
                auto strategy = compile(proof);
                cc.compiled = true;
                GameLibrary lib = fs::exists(d / "atoms.game") ? parse_game_library(read_file(d / "atoms.game"))
                                                               : standard_library();
                std::uint64_t seed = opts.seed;
                for (const auto& [name, game] : lib) {
                    const Arena arena = Arena::of_formula(f, uniform_interpretation(f, game));
                    auto run_one = [&](const EnvPolicy& env) {
                        auto t = strategy->clone();
                        const PlayReport rep = play(*t, env, arena, opts.budget);
                        ++cc.rollouts;
                        if (rep.inconclusive) ++cc.inconclusive;
                        else if (rep.verdict == Player::Top) ++cc.wins;
                    };
                    for (std::size_t k = 0; k < opts.random_rollouts; ++k) run_one(EnvPolicy::random(seed++));
                    for (std::size_t k = 0; k < opts.spoiler_rollouts; ++k) run_one(EnvPolicy::spoiler(seed++));
                }
            }
        } catch (const std::exception& e) {
            cc.message = e.what();
        }
        const bool all_won = cc.compiled && cc.wins == cc.rollouts;
        cc.pass = cc.checked == cc.expected_check && (!cc.checked || all_won == cc.expected_wins) &&
                  (cc.message.empty() || !cc.checked);
        if (cc.checked && !cc.compiled && cc.message.empty()) cc.message = "compilation failed";
        report.cases.push_back(std::move(cc));
    }
    return report;
}

std::string corpus_report_text(const CorpusReport& r) {
    std::ostringstream out;
    for (const auto& c : r.cases) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name << "  check=" << (c.checked ? "ok" : "error");
        if (c.checked) out << "  wins=" << c.wins << "/" << c.rollouts << "  inconclusive=" << c.inconclusive;
        if (!c.formula.empty()) out << "  formula=" << c.formula;
        if (!c.message.empty()) out << "  (" << c.message << ")";
        out << "\n";
    }
    const auto passed = std::count_if(r.cases.begin(), r.cases.end(), [](const CorpusCase& c) { return c.pass; });
    out << passed << "/" << r.cases.size() << " cases passed\n";
    return out.str();
}

std::string corpus_report_json(const CorpusReport& r) {
    nlohmann::json cases = nlohmann::json::array();
    for (const auto& c : r.cases)
        cases.push_back({{"name", c.name},
                         {"pass", c.pass},
                         {"checked", c.checked},
                         {"compiled", c.compiled},
                         {"formula", c.formula},
                         {"rollouts", c.rollouts},
                         {"wins", c.wins},
                         {"inconclusive", c.inconclusive},
                         {"message", c.message}});
    nlohmann::json j = {{"cases", cases}, {"all_pass", r.all_pass()}};
    return j.dump(2) + "\n";
}

} // namespace cl15
