#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cl15/atom_game.hpp"
#include "cl15/formula.hpp"
#include "cl15/run.hpp"

namespace cl15 {

/// A game term. Unlike Formula, negation may sit anywhere, so dualities such
/// as ¬(A∧B) = ¬A∨¬B can be evaluated on both sides.
class GameExpr {
public:
    enum class Kind { Atom, Neg, And, Or, Brec, Cobrec };

    static GameExpr atom(std::string name);
    static GameExpr neg(GameExpr e);
    static GameExpr conj(GameExpr l, GameExpr r);
    static GameExpr disj(GameExpr l, GameExpr r);
    static GameExpr brec(GameExpr e);
    static GameExpr cobrec(GameExpr e);

    Kind kind() const noexcept { return node_->kind; }
    const std::string& name() const noexcept { return node_->name; }
    const GameExpr& left() const noexcept { return node_->children[0]; }
    const GameExpr& right() const noexcept { return node_->children[1]; }
    const GameExpr& body() const noexcept { return node_->children[0]; }

    std::string print() const;

private:
    struct Node {
        Kind kind;
        std::string name;
        std::vector<GameExpr> children;
    };
    explicit GameExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static GameExpr make(Kind k, std::string name, std::vector<GameExpr> children);
    std::shared_ptr<const Node> node_;
};

/// Atom name → constant atom game.
using Interpretation = std::map<std::string, AtomGame>;

GameExpr game_of(const Formula& f);

/// Every atom of `f` mapped to `g`.
Interpretation uniform_interpretation(const Formula& f, const AtomGame& g);

/// r ∈ Lr. Throws std::out_of_range if an atom is not interpreted.
bool legal(const GameExpr& g, const Interpretation& interp, const Run& r);
/// Label of the last move of the shortest illegal prefix.
std::optional<Player> first_offender(const GameExpr& g, const Interpretation& interp, const Run& r);
/// Wn, with illegal runs lost by their first offender.
Player winner(const GameExpr& g, const Interpretation& interp, const Run& r);

/// Bitstrings w of all moves "w.α" in r (moves of other shapes are skipped).
std::set<Bitstring> used_thread_prefixes(const Run& r);

} // namespace cl15
