#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "cl15/cirquent.hpp"
#include "cl15/game.hpp"
#include "cl15/strategy.hpp"

namespace cl15 {

/// A game the harness can referee: a formula (or game expression) or a
/// cirquent, together with an interpretation of its atoms.
class Arena {
public:
    static Arena of_formula(const Formula& f, Interpretation interp);
    static Arena of_expr(GameExpr g, Interpretation interp);
    static Arena of_cirquent(Cirquent c, Interpretation interp);

    bool legal(const Run& r) const;
    std::optional<Player> first_offender(const Run& r) const;
    Player winner(const Run& r) const;

    /// Graded outcome in [0, 1.5]: 1 for a ⊤-won run plus half of a margin
    /// that grows with the share of ⊤-won components and threads. Only used to
    /// rank positions.
    double score(const Run& r) const;

    /// Moves shaped for player `p`: inner moves drawn from the atom trees,
    /// thread and slot bitstrings of length at most `max_bits`.
    std::vector<std::string> candidate_moves(Player p, std::size_t max_bits) const;

    std::string describe() const;

private:
    struct FormulaGame {
        GameExpr g;
    };
    struct CirquentGame {
        Cirquent c;
    };
    Arena(std::variant<FormulaGame, CirquentGame> game, Interpretation interp)
        : game_(std::move(game)), interp_(std::move(interp)) {}

    std::variant<FormulaGame, CirquentGame> game_;
    Interpretation interp_;
};

/// Environment behaviour in play().
struct EnvPolicy {
    enum class Kind { Random, Scripted, Spoiler };
    Kind kind = Kind::Random;
    std::uint64_t seed = 1;
    /// Maximum number of environment moves.
    std::size_t move_budget = 6;
    /// Thread and slot bitstrings are drawn up to this length.
    std::size_t max_bits = 2;
    /// Probability of ending the environment's play after each move (Random).
    double stop_probability = 0.15;
    /// Probability of sending a junk move instead of a shaped one (Random).
    double junk_probability = 0.0;
    /// Random: candidate draws per move before falling back to a full scan.
    std::size_t retries = 16;
    /// Spoiler lookahead depth (≥ 1) and candidates examined per level.
    std::size_t depth = 2;
    std::size_t width = 10;
    /// Scripted: env moves sent one per turn, each after the strategy has answered the previous one.
    std::vector<std::string> script;

    static EnvPolicy random(std::uint64_t seed, std::size_t move_budget = 6);
    static EnvPolicy spoiler(std::uint64_t seed, std::size_t depth = 2, std::size_t move_budget = 6);
    static EnvPolicy scripted(std::vector<std::string> moves);
};

struct PlayReport {
    Run run;
    Player verdict = Player::Bot;
    std::optional<Player> offender;
    std::size_t steps = 0;      ///< strategy activations
    bool inconclusive = false;  ///< budget ran out while the strategy was still moving
};

inline constexpr std::size_t kDefaultBudget = 64;

/// Alternates environment moves with strategy activations until the
/// environment stops and the strategy is quiet, or the labmove budget runs out.
PlayReport play(Transducer& t, const EnvPolicy& env, const Arena& arena, std::size_t budget = kDefaultBudget);

struct ExhaustiveResult {
    bool top_wins = true;
    std::size_t nodes = 0;
    std::optional<Run> counterexample;
};

/// Every environment behaviour of up to `depth` legal moves (bitstrings of at
/// most `max_bits` bits), with the strategy answering after each one; every
/// reached position must be ⊤-won. Throws CapExceeded beyond `node_cap` nodes.
ExhaustiveResult exhaustive_env_check(const Transducer& t, const Arena& arena, std::size_t depth,
                                      std::size_t max_bits = 2, std::size_t budget = kDefaultBudget,
                                      std::size_t node_cap = 2000000);

/// Whether ⊤ has a winning strategy in the bounded game where the players
/// alternately make one legal move or pass, ending after two consecutive
/// passes or `bound` moves. Throws CapExceeded beyond `node_cap` nodes.
bool winnability_oracle(const Arena& arena, std::size_t bound, std::size_t max_bits = 1,
                        std::size_t node_cap = 2000000);

struct CorpusCase {
    std::string name;
    bool checked = false;
    bool compiled = false;
    std::string formula;
    std::size_t rollouts = 0;
    std::size_t wins = 0;
    std::size_t inconclusive = 0;
    bool expected_check = true;
    bool expected_wins = true;
    bool pass = false;
    std::string message;
};

struct CorpusOptions {
    std::size_t random_rollouts = 20;
    std::size_t spoiler_rollouts = 2;
    std::uint64_t seed = 1;
    std::size_t budget = kDefaultBudget;
};

struct CorpusReport {
    std::vector<CorpusCase> cases;
    bool all_pass() const;
};

/// Each subdirectory holding proof.cl15 is a case; atoms.game (optional)
/// lists the games used as uniform interpretations and expect.json holds
/// {"check": bool, "wins": bool, "formula": "..."} (all optional).
CorpusReport run_corpus(const std::filesystem::path& dir, const CorpusOptions& opts = {});
std::string corpus_report_text(const CorpusReport& r);
std::string corpus_report_json(const CorpusReport& r);

std::string read_file(const std::filesystem::path& p);

} // namespace cl15
