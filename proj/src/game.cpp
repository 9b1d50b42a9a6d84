#include "cl15/game.hpp"

namespace cl15 {

GameExpr GameExpr::make(Kind k, std::string name, std::vector<GameExpr> children) {
    return GameExpr(std::make_shared<const Node>(Node{k, std::move(name), std::move(children)}));
}

GameExpr GameExpr::atom(std::string name) { return make(Kind::Atom, std::move(name), {}); }
GameExpr GameExpr::neg(GameExpr e) { return make(Kind::Neg, {}, {std::move(e)}); }
GameExpr GameExpr::conj(GameExpr l, GameExpr r) { return make(Kind::And, {}, {std::move(l), std::move(r)}); }
GameExpr GameExpr::disj(GameExpr l, GameExpr r) { return make(Kind::Or, {}, {std::move(l), std::move(r)}); }
GameExpr GameExpr::brec(GameExpr e) { return make(Kind::Brec, {}, {std::move(e)}); }
GameExpr GameExpr::cobrec(GameExpr e) { return make(Kind::Cobrec, {}, {std::move(e)}); }

std::string GameExpr::print() const {
    switch (kind()) {
    case Kind::Atom: return name();
    case Kind::Neg: return "~(" + body().print() + ")";
    case Kind::And: return "(" + left().print() + " & " + right().print() + ")";
    case Kind::Or: return "(" + left().print() + " | " + right().print() + ")";
    case Kind::Brec: return "!(" + body().print() + ")";
    case Kind::Cobrec: return "?(" + body().print() + ")";
    }
    return {};
}

GameExpr game_of(const Formula& f) {
    switch (f.kind()) {
    case Formula::Kind::PosLiteral: return GameExpr::atom(f.atom());
    case Formula::Kind::NegLiteral: return GameExpr::neg(GameExpr::atom(f.atom()));
    case Formula::Kind::And: return GameExpr::conj(game_of(f.left()), game_of(f.right()));
    case Formula::Kind::Or: return GameExpr::disj(game_of(f.left()), game_of(f.right()));
    case Formula::Kind::Brec: return GameExpr::brec(game_of(f.body()));
    case Formula::Kind::Cobrec: return GameExpr::cobrec(game_of(f.body()));
    }
    return GameExpr::atom(f.atom());
}

Interpretation uniform_interpretation(const Formula& f, const AtomGame& g) {
    Interpretation out;
    for (const auto& a : atoms_of(f)) out.emplace(a, g);
    return out;
}

std::set<Bitstring> used_thread_prefixes(const Run& r) {
    std::set<Bitstring> used;
    for (const auto& m : r)
        if (auto s = split_thread_move(m.move)) used.insert(Bitstring(std::string(s->first)));
    return used;
}

namespace {

bool all_component_moves(const Run& r) {
    for (const auto& m : r)
        if (m.move.size() < 2 || (m.move[0] != '0' && m.move[0] != '1') || m.move[1] != '.') return false;
    return true;
}

bool all_thread_moves(const Run& r) {
    for (const auto& m : r)
        if (!split_thread_move(m.move)) return false;
    return true;
}

bool legal_rec(const GameExpr& g, const Interpretation& interp, const Run& r) {
    switch (g.kind()) {
    case GameExpr::Kind::Atom: return interp.at(g.name()).legal(r);
    case GameExpr::Kind::Neg: return legal_rec(g.body(), interp, negate_run(r));
    case GameExpr::Kind::And:
    case GameExpr::Kind::Or:
        return all_component_moves(r) && legal_rec(g.left(), interp, project_prefix(r, "0.")) &&
               legal_rec(g.right(), interp, project_prefix(r, "1."));
    case GameExpr::Kind::Brec:
    case GameExpr::Kind::Cobrec:
        if (!all_thread_moves(r)) return false;
        for (const auto& x : enumerate_thread_classes(used_thread_prefixes(r)))
            if (!legal_rec(g.body(), interp, project_thread(r, x))) return false;
        return true;
    }
    return false;
}

// Winner of a run already known to be legal.
Player winner_legal(const GameExpr& g, const Interpretation& interp, const Run& r) {
    switch (g.kind()) {
    case GameExpr::Kind::Atom: return interp.at(g.name()).winner_of_legal(r);
    case GameExpr::Kind::Neg:
        return winner_legal(g.body(), interp, negate_run(r)) == Player::Bot ? Player::Top : Player::Bot;
    case GameExpr::Kind::And:
    case GameExpr::Kind::Or: {
        const bool l = winner_legal(g.left(), interp, project_prefix(r, "0.")) == Player::Top;
        const bool rr = winner_legal(g.right(), interp, project_prefix(r, "1.")) == Player::Top;
        const bool top = g.kind() == GameExpr::Kind::And ? (l && rr) : (l || rr);
        return top ? Player::Top : Player::Bot;
    }
    case GameExpr::Kind::Brec:
    case GameExpr::Kind::Cobrec: {
        const bool all = g.kind() == GameExpr::Kind::Brec;
        for (const auto& x : enumerate_thread_classes(used_thread_prefixes(r))) {
            const bool top = winner_legal(g.body(), interp, project_thread(r, x)) == Player::Top;
            if (all && !top) return Player::Bot;
            if (!all && top) return Player::Top;
        }
        return all ? Player::Top : Player::Bot;
    }
    }
    return Player::Bot;
}

} // namespace

bool legal(const GameExpr& g, const Interpretation& interp, const Run& r) { return legal_rec(g, interp, r); }

std::optional<Player> first_offender(const GameExpr& g, const Interpretation& interp, const Run& r) {
    if (legal_rec(g, interp, r)) return std::nullopt;
    // Legality is prefix-closed: binary search for the shortest illegal prefix.
    std::size_t lo = 0, hi = r.size(); // prefix lo legal, prefix hi illegal
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (legal_rec(g, interp, Run(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(mid)))) lo = mid;
        else hi = mid;
    }
    return r[hi - 1].player;
}

Player winner(const GameExpr& g, const Interpretation& interp, const Run& r) {
    if (auto off = first_offender(g, interp, r)) return opposite(*off);
    return winner_legal(g, interp, r);
}

} // namespace cl15
