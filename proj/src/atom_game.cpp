#include "cl15/atom_game.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <stdexcept>

#include "cl15/error.hpp"

namespace cl15 {

AtomGame::AtomGame(Player winner) { nodes_.push_back({winner, {}}); }

std::size_t AtomGame::add_child(std::size_t parent, Labmove move, Player winner) {
    for (const auto& e : nodes_.at(parent).edges)
        if (e.move == move) throw std::invalid_argument("duplicate edge '" + move.move + "'");
    nodes_.push_back({winner, {}});
    const std::size_t id = nodes_.size() - 1;
    nodes_[parent].edges.push_back({std::move(move), id});
    return id;
}

std::optional<std::size_t> AtomGame::walk(const Run& r) const {
    std::size_t at = 0;
    for (const auto& m : r) {
        const auto& edges = nodes_[at].edges;
        auto it = std::find_if(edges.begin(), edges.end(), [&](const Edge& e) { return e.move == m; });
        if (it == edges.end()) return std::nullopt;
        at = it->child;
    }
    return at;
}

std::size_t AtomGame::depth() const {
    std::function<std::size_t(std::size_t)> go = [&](std::size_t id) -> std::size_t {
        std::size_t d = 0;
        for (const auto& e : nodes_[id].edges) d = std::max(d, 1 + go(e.child));
        return d;
    };
    return go(0);
}

std::vector<std::string> AtomGame::moves_of(Player p) const {
    std::vector<std::string> out;
    for (const auto& n : nodes_)
        for (const auto& e : n.edges)
            if (e.move.player == p && std::find(out.begin(), out.end(), e.move.move) == out.end())
                out.push_back(e.move.move);
    return out;
}

std::vector<Labmove> AtomGame::alphabet() const {
    std::vector<Labmove> out;
    for (const auto& n : nodes_)
        for (const auto& e : n.edges)
            if (std::find(out.begin(), out.end(), e.move) == out.end()) out.push_back(e.move);
    return out;
}

std::vector<Run> AtomGame::legal_runs() const {
    std::vector<Run> out{{}};
    std::vector<std::size_t> at{0};
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (const auto& e : nodes_[at[i]].edges) {
            Run r = out[i];
            r.push_back(e.move);
            out.push_back(std::move(r));
            at.push_back(e.child);
        }
    }
    return out;
}

bool operator==(const AtomGame& a, const AtomGame& b) {
    if (a.nodes_.size() != b.nodes_.size()) return false;
    for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
        const auto& x = a.nodes_[i];
        const auto& y = b.nodes_[i];
        if (x.winner != y.winner || x.edges.size() != y.edges.size()) return false;
        for (std::size_t k = 0; k < x.edges.size(); ++k)
            if (!(x.edges[k].move == y.edges[k].move) || x.edges[k].child != y.edges[k].child) return false;
    }
    return true;
}

namespace {

class GameParser {
public:
    explicit GameParser(std::string_view text) : text_(text) {}

    GameLibrary parse() {
        GameLibrary lib;
        while (true) {
            skip();
            if (pos_ >= text_.size()) break;
            expect_word("game");
            std::string name = identifier();
            expect("=");
            AtomGame g;
            parse_node(g, std::nullopt);
            if (!lib.emplace(name, std::move(g)).second)
                throw ParseError("duplicate game '" + name + "'", pos_);
        }
        return lib;
    }

private:
    void skip() {
        while (pos_ < text_.size()) {
            if (std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            else if (text_[pos_] == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else break;
        }
    }
    bool eat(std::string_view tok) {
        skip();
        if (text_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }
    void expect(std::string_view tok) {
        if (!eat(tok)) throw ParseError("expected '" + std::string(tok) + "'", pos_);
    }
    void expect_word(std::string_view w) {
        skip();
        if (identifier() != w) throw ParseError("expected '" + std::string(w) + "'", pos_);
    }
    std::string identifier() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '\''))
            ++pos_;
        if (start == pos_) throw ParseError("expected identifier", pos_);
        return std::string(text_.substr(start, pos_ - start));
    }
    Player player() {
        skip();
        if (eat("T") || eat("⊤")) return Player::Top;
        if (eat("B") || eat("⊥")) return Player::Bot;
        throw ParseError("expected player T or B", pos_);
    }
    std::string quoted() {
        skip();
        if (pos_ >= text_.size() || text_[pos_] != '"') throw ParseError("expected quoted move", pos_);
        ++pos_;
        std::string out;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
            out += text_[pos_++];
        }
        if (pos_ >= text_.size()) throw ParseError("unterminated move", pos_);
        ++pos_;
        return out;
    }

    // node winner=P { edge* }
    void parse_node(AtomGame& g, std::optional<std::pair<std::size_t, Labmove>> parent_edge) {
        expect_word("node");
        expect_word("winner");
        expect("=");
        const Player w = player();
        std::size_t id = 0;
        if (parent_edge) {
            try {
                id = g.add_child(parent_edge->first, parent_edge->second, w);
            } catch (const std::invalid_argument& e) {
                throw ParseError(e.what(), pos_);
            }
        } else {
            g = AtomGame(w);
        }
        expect("{");
        while (!eat("}")) {
            const Player p = player();
            std::string m = quoted();
            expect("->");
            parse_node(g, std::make_pair(id, Labmove{p, std::move(m)}));
            eat(",");
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

void print_node(const AtomGame& g, std::size_t id, std::string& out) {
    const auto& n = g.node(id);
    out += "node winner=";
    out += player_letter(n.winner);
    out += " {";
    for (std::size_t k = 0; k < n.edges.size(); ++k) {
        out += k ? ", " : " ";
        out += player_letter(n.edges[k].move.player);
        out += '"';
        for (char c : n.edges[k].move.move) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        out += "\" -> ";
        print_node(g, n.edges[k].child, out);
    }
    out += n.edges.empty() ? "}" : " }";
}

} // namespace

GameLibrary parse_game_library(std::string_view text) { return GameParser(text).parse(); }

std::string print_game(const AtomGame& g) {
    std::string out;
    print_node(g, 0, out);
    return out;
}

std::string print_game_library(const GameLibrary& lib) {
    std::string out;
    for (const auto& [name, g] : lib) out += "game " + name + " = " + print_game(g) + "\n";
    return out;
}

bool is_delay(const Run& gamma, const Run& upsilon, Player p) {
    if (gamma.size() != upsilon.size()) return false;
    auto moves_of = [](const Run& r, Player q) {
        std::vector<std::string> out;
        for (const auto& m : r)
            if (m.player == q) out.push_back(m.move);
        return out;
    };
    if (moves_of(gamma, Player::Top) != moves_of(upsilon, Player::Top)) return false;
    if (moves_of(gamma, Player::Bot) != moves_of(upsilon, Player::Bot)) return false;
    // For the n'th p-move, the number of opponent moves preceding it may only grow.
    auto preceding = [&](const Run& r) {
        std::vector<std::size_t> out;
        std::size_t seen = 0;
        for (const auto& m : r) {
            if (m.player == p) out.push_back(seen);
            else ++seen;
        }
        return out;
    };
    const auto before = preceding(gamma);
    const auto after = preceding(upsilon);
    for (std::size_t n = 0; n < before.size(); ++n)
        if (after[n] < before[n]) return false;
    return true;
}

namespace {

// Label of the last move in the shortest illegal prefix.
std::optional<Player> atom_offender(const AtomGame& g, const Run& r) {
    std::size_t at = g.root();
    for (const auto& m : r) {
        const auto& edges = g.node(at).edges;
        auto it = std::find_if(edges.begin(), edges.end(), [&](const AtomGame::Edge& e) { return e.move == m; });
        if (it == edges.end()) return m.player;
        at = it->child;
    }
    return std::nullopt;
}

// All p-delays of gamma: interleavings of the two per-player sequences where
// the n'th p-move keeps at least its original count of preceding opponent moves.
void delays_of(const Run& gamma, Player p, std::vector<Run>& out) {
    std::vector<Labmove> mine, theirs;
    std::vector<std::size_t> min_before;
    std::size_t seen = 0;
    for (const auto& m : gamma) {
        if (m.player == p) {
            mine.push_back(m);
            min_before.push_back(seen);
        } else {
            theirs.push_back(m);
            ++seen;
        }
    }
    Run cur;
    std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) {
        if (i == mine.size() && j == theirs.size()) {
            out.push_back(cur);
            return;
        }
        if (i < mine.size() && j >= min_before[i]) {
            cur.push_back(mine[i]);
            go(i + 1, j);
            cur.pop_back();
        }
        if (j < theirs.size()) {
            cur.push_back(theirs[j]);
            go(i, j + 1);
            cur.pop_back();
        }
    };
    go(0, 0);
}

} // namespace

bool is_p_legal(const AtomGame& g, const Run& r, Player p) {
    auto off = atom_offender(g, r);
    return !off || *off != p;
}

Player atom_winner(const AtomGame& g, const Run& r) {
    if (auto off = atom_offender(g, r)) return opposite(*off);
    return g.winner_of_legal(r);
}

std::optional<StaticViolation> find_static_violation(const AtomGame& g, std::size_t maxlen) {
    std::vector<Labmove> alphabet = g.alphabet();
    alphabet.push_back({Player::Top, "#junk"});
    alphabet.push_back({Player::Bot, "#junk"});

    auto check = [&](const Run& gamma) -> std::optional<StaticViolation> {
        for (Player p : {Player::Top, Player::Bot}) {
            const bool legal_g = is_p_legal(g, gamma, p);
            const bool won_g = atom_winner(g, gamma) == p;
            if (!legal_g && !won_g) continue;
            std::vector<Run> delays;
            delays_of(gamma, p, delays);
            for (const auto& ups : delays) {
                if (legal_g && !is_p_legal(g, ups, p))
                    return StaticViolation{gamma, ups, p, std::string(player_symbol(p)) + "-legality lost by delay"};
                if (won_g && atom_winner(g, ups) != p)
                    return StaticViolation{gamma, ups, p, std::string(player_symbol(p)) + "-win lost by delay"};
            }
        }
        return std::nullopt;
    };

    std::vector<Run> legal = g.legal_runs();
    std::stable_sort(legal.begin(), legal.end(), [](const Run& a, const Run& b) { return a.size() < b.size(); });
    for (const auto& r : legal) {
        if (r.size() > maxlen) continue;
        if (auto v = check(r)) return v;
    }
    for (const auto& r : legal) {
        for (const auto& m1 : alphabet) {
            Run r1 = r;
            r1.push_back(m1);
            if (r1.size() > maxlen || g.legal(r1)) continue;
            if (auto v = check(r1)) return v;
            for (const auto& m2 : alphabet) {
                Run r2 = r1;
                r2.push_back(m2);
                if (r2.size() > maxlen) continue;
                if (auto v = check(r2)) return v;
            }
        }
    }
    return std::nullopt;
}

bool is_static_bounded(const AtomGame& g, std::size_t maxlen) { return !find_static_violation(g, maxlen); }

GameLibrary standard_library() {
    static const char* text = R"(
# Moveless games.
game Truth = node winner=T {}
game Falsity = node winner=B {}
# The machine wins iff it makes its single move.
game Give = node winner=B { T"m" -> node winner=T {} }
# The environment wins iff it makes its single move.
game Take = node winner=T { B"m" -> node winner=B {} }
# The machine picks one of two answers; only "a" wins.
game Pick = node winner=B { T"a" -> node winner=T {}, T"b" -> node winner=B {} }
# The environment asks "a" or "b"; the machine must echo the question.
game Echo = node winner=T {
  B"a" -> node winner=B { T"a" -> node winner=T {}, T"b" -> node winner=B {} },
  B"b" -> node winner=B { T"a" -> node winner=B {}, T"b" -> node winner=T {} }
}
# Question, answer, and a challenge the environment may raise afterwards.
game Dialog = node winner=T {
  B"q" -> node winner=B {
    T"r" -> node winner=T { B"c" -> node winner=B {} },
    T"s" -> node winner=B {}
  }
}
)";
    return parse_game_library(text);
}

AtomGame race_game() {
    static const char* text = R"(
game Race = node winner=B {
  B"a" -> node winner=B {
    T"b" -> node winner=T { B"d" -> node winner=T {} },
    B"d" -> node winner=B { T"b" -> node winner=B {} }
  }
}
)";
    return parse_game_library(text).at("Race");
}

} // namespace cl15
