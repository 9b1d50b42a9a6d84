#include "cl15/cirquent.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>

#include "cl15/error.hpp"
#include "text.hpp"

namespace cl15 {

void Cirquent::validate() const {
    const std::size_t k = oformulas.size();
    if (k == 0) throw CirquentError("a cirquent needs at least one oformula");
    if (under.empty()) throw CirquentError("a cirquent needs at least one undergroup");
    if (over.empty()) throw CirquentError("a cirquent needs at least one overgroup");
    auto check = [&](const std::vector<Group>& gs, const char* what) {
        std::vector<bool> seen(k + 1, false);
        for (std::size_t g = 0; g < gs.size(); ++g) {
            const std::string where = std::string(what) + " " + std::to_string(g + 1);
            if (gs[g].empty()) throw CirquentError(where + " is empty");
            for (std::size_t i = 0; i < gs[g].size(); ++i) {
                const std::size_t a = gs[g][i];
                if (a < 1 || a > k) throw CirquentError(where + ": index " + std::to_string(a) + " out of range");
                if (i > 0 && gs[g][i - 1] >= a) throw CirquentError(where + " is not a strictly increasing index set");
                seen[a] = true;
            }
        }
        for (std::size_t a = 1; a <= k; ++a)
            if (!seen[a]) throw CirquentError("oformula " + std::to_string(a) + " is in no " + what);
    };
    check(under, "undergroup");
    check(over, "overgroup");
}

std::vector<std::size_t> Cirquent::overgroups_of(std::size_t a) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < over.size(); ++j)
        if (in_over(j, a)) out.push_back(j);
    return out;
}

bool Cirquent::in_over(std::size_t j, std::size_t a) const {
    return std::binary_search(over[j].begin(), over[j].end(), a);
}

bool operator==(const Cirquent& x, const Cirquent& y) {
    return x.oformulas == y.oformulas && x.under == y.under && x.over == y.over;
}

Cirquent club(const Formula& f) { return Cirquent{{f}, {{1}}, {{1}}}; }

namespace {

std::vector<Group> normalize(std::vector<Group> gs) {
    for (auto& g : gs) std::sort(g.begin(), g.end());
    return gs;
}

} // namespace

Cirquent parse_cirquent(std::string_view src) {
    text::Cursor in(src);
    in.eat("cirquent");
    in.expect("{");
    Cirquent c;
    bool have_o = false, have_u = false, have_v = false;
    while (!in.eat("}")) {
        const std::string key = in.word();
        in.expect(":");
        if (key == "oformulas") {
            in.expect("[");
            if (!in.eat("]")) {
                do {
                    const std::size_t at = in.pos();
                    const std::string f = in.until_any(",]");
                    try {
                        c.oformulas.push_back(parse_formula(f));
                    } catch (const ParseError& e) {
                        throw ParseError(std::string("bad oformula: ") + e.what(), at + e.position());
                    }
                } while (in.eat(","));
                in.expect("]");
            }
            have_o = true;
        } else if (key == "under") {
            c.under = normalize(in.number_lists());
            have_u = true;
        } else if (key == "over") {
            c.over = normalize(in.number_lists());
            have_v = true;
        } else {
            in.fail("unknown cirquent field '" + key + "'");
        }
        if (!in.eat(";") && in.peek() != '}') in.fail("expected ';' or '}'");
    }
    if (!have_o || !have_u || !have_v) in.fail("cirquent needs oformulas, under and over");
    if (!in.at_end()) in.fail("trailing text after cirquent");
    c.validate();
    return c;
}

std::string print_cirquent(const Cirquent& c) {
    std::string out = "cirquent { oformulas: [";
    for (std::size_t a = 0; a < c.oformulas.size(); ++a) {
        if (a) out += ", ";
        out += print_formula(c.oformulas[a]);
    }
    out += "]; under: " + text::join_groups(c.under) + "; over: " + text::join_groups(c.over) + " }";
    return out;
}

std::string cirquent_diagram(const Cirquent& c) {
    std::vector<std::string> names;
    std::size_t width = 3;
    for (const auto& f : c.oformulas) {
        names.push_back(print_formula(f));
        width = std::max(width, names.back().size() + 2);
    }
    auto cell = [&](const std::string& s) {
        // Column width counts bytes; bullets are multi-byte so pad by display width.
        const std::size_t shown = s == "•" ? 1 : s.size();
        return s + std::string(width > shown ? width - shown : 1, ' ');
    };
    auto row = [&](const std::string& label, const Group& g) {
        std::string line = label + std::string(label.size() < 5 ? 5 - label.size() : 1, ' ');
        for (std::size_t a = 1; a <= c.size(); ++a)
            line += cell(std::binary_search(g.begin(), g.end(), a) ? "•" : "·");
        while (!line.empty() && line.back() == ' ') line.pop_back();
        return line + "\n";
    };
    std::string out;
    for (std::size_t j = 0; j < c.over.size(); ++j) out += row("O" + std::to_string(j + 1), c.over[j]);
    std::string mid = "     ";
    for (const auto& n : names) mid += cell(n);
    while (!mid.empty() && mid.back() == ' ') mid.pop_back();
    out += mid + "\n";
    for (std::size_t i = 0; i < c.under.size(); ++i) out += row("U" + std::to_string(i + 1), c.under[i]);
    return out;
}

std::optional<CirquentMove> split_cirquent_move(std::string_view s, std::size_t n) {
    std::size_t i = 0;
    std::size_t a = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
        if (a > 1000000) return std::nullopt;
        a = a * 10 + static_cast<std::size_t>(s[i] - '0');
        ++i;
    }
    if (i == 0 || i >= s.size() || s[i] != ';') return std::nullopt;
    ++i;
    CirquentMove m;
    m.a = a;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t start = i;
        while (i < s.size() && (s[i] == '0' || s[i] == '1')) ++i;
        m.us.emplace_back(std::string(s.substr(start, i - start)));
        const char sep = j + 1 < n ? ',' : '.';
        if (i >= s.size() || s[i] != sep) return std::nullopt;
        ++i;
    }
    m.alpha = std::string(s.substr(i));
    return m;
}

std::optional<CirquentMove> try_parse_cirquent_move(const Cirquent& c, std::string_view s) {
    auto m = split_cirquent_move(s, c.over.size());
    if (!m || m->a < 1 || m->a > c.size()) return std::nullopt;
    for (std::size_t j = 0; j < c.over.size(); ++j)
        if (!m->us[j].empty() && !c.in_over(j, m->a)) return std::nullopt;
    return m;
}

CirquentMove parse_cirquent_move(const Cirquent& c, std::string_view s) {
    auto m = split_cirquent_move(s, c.over.size());
    if (!m)
        throw ParseError("move '" + std::string(s) + "' is not of the form a;u1,...,u" +
                             std::to_string(c.over.size()) + ".alpha",
                         0);
    if (m->a < 1 || m->a > c.size())
        throw ParseError("oformula index " + std::to_string(m->a) + " out of range", 0);
    for (std::size_t j = 0; j < c.over.size(); ++j)
        if (!m->us[j].empty() && !c.in_over(j, m->a))
            throw ParseError("overgroup " + std::to_string(j + 1) + " does not contain oformula " +
                                 std::to_string(m->a) + ", so its bitstring must be empty",
                             0);
    return *m;
}

std::string print_cirquent_move(const CirquentMove& m) {
    std::string out = std::to_string(m.a) + ";";
    for (std::size_t j = 0; j < m.us.size(); ++j) {
        if (j) out += ",";
        out += m.us[j].str();
    }
    return out + "." + m.alpha;
}

Run project_cirquent(const Run& r, const Cirquent& c, std::size_t a, const std::vector<ThreadRep>& xs) {
    Run out;
    for (const auto& lm : r) {
        auto m = split_cirquent_move(lm.move, c.over.size());
        if (!m || m->a != a) continue;
        bool keep = true;
        for (std::size_t j = 0; j < m->us.size() && keep; ++j) keep = xs[j].has_prefix(m->us[j].str());
        if (keep) out.push_back({lm.player, std::move(m->alpha)});
    }
    return out;
}

namespace {

struct Parsed {
    std::vector<CirquentMove> moves; // aligned with the run
    std::vector<Player> players;
};

// A set of run positions.
using MoveSet = std::vector<std::uint64_t>;

MoveSet empty_set(std::size_t n) { return MoveSet((n + 63) / 64, 0); }
void add(MoveSet& s, std::size_t k) { s[k / 64] |= std::uint64_t{1} << (k % 64); }
bool contains(const MoveSet& s, std::size_t k) { return (s[k / 64] >> (k % 64)) & 1; }

// Per-slot thread classes for the given oformulas, restricted to the slots
// those oformulas belong to. For each slot and class it keeps the set of
// moves whose bitstring in that slot prefixes the class, so the moves of a
// projection are an intersection of precomputed sets.
class VectorSpace {
public:
    VectorSpace(const Cirquent& c, const Parsed& p, const std::vector<std::size_t>& oformulas, std::size_t cap) {
        std::vector<bool> relevant(c.over.size(), false);
        for (std::size_t a : oformulas)
            for (std::size_t j : c.overgroups_of(a)) relevant[j] = true;
        std::size_t total = 1;
        for (std::size_t j = 0; j < c.over.size(); ++j) {
            if (!relevant[j]) continue;
            std::set<Bitstring> used;
            for (const auto& m : p.moves)
                if (std::find(oformulas.begin(), oformulas.end(), m.a) != oformulas.end()) used.insert(m.us[j]);
            std::vector<MoveSet> sets;
            for (const auto& x : enumerate_thread_classes(used)) {
                MoveSet s = empty_set(p.moves.size());
                for (std::size_t k = 0; k < p.moves.size(); ++k)
                    if (x.has_prefix(p.moves[k].us[j].str())) add(s, k);
                sets.push_back(std::move(s));
            }
            total *= sets.size();
            if (total > cap)
                throw CapExceeded("more than " + std::to_string(cap) + " thread-class vectors needed");
            slots_.push_back(j);
            sets_.push_back(std::move(sets));
        }
        idx_.assign(slots_.size(), 0);
    }

    /// Moves of `base` kept by the current vector.
    MoveSet select(const MoveSet& base) const {
        MoveSet out = base;
        for (std::size_t t = 0; t < slots_.size(); ++t) {
            const MoveSet& s = sets_[t][idx_[t]];
            for (std::size_t w = 0; w < out.size(); ++w) out[w] &= s[w];
        }
        return out;
    }

    bool next() {
        for (std::size_t t = 0; t < idx_.size(); ++t) {
            if (++idx_[t] < sets_[t].size()) return true;
            idx_[t] = 0;
        }
        return false;
    }

private:
    std::vector<std::size_t> slots_;
    std::vector<std::vector<MoveSet>> sets_; // per relevant slot, per class
    std::vector<std::size_t> idx_;
};

std::optional<Parsed> parse_all(const Cirquent& c, const Run& r) {
    Parsed p;
    for (const auto& lm : r) {
        auto m = try_parse_cirquent_move(c, lm.move);
        if (!m) return std::nullopt;
        p.moves.push_back(std::move(*m));
        p.players.push_back(lm.player);
    }
    return p;
}

MoveSet moves_at(const Parsed& p, std::size_t a) {
    MoveSet s = empty_set(p.moves.size());
    for (std::size_t k = 0; k < p.moves.size(); ++k)
        if (p.moves[k].a == a) add(s, k);
    return s;
}

Run project_set(const Parsed& p, const MoveSet& s) {
    Run out;
    for (std::size_t k = 0; k < p.moves.size(); ++k)
        if (contains(s, k)) out.push_back({p.players[k], p.moves[k].alpha});
    return out;
}

bool legal_parsed(const Cirquent& c, const Interpretation& interp, const Parsed& p, std::size_t cap) {
    for (std::size_t a = 1; a <= c.size(); ++a) {
        const GameExpr g = game_of(c.oformulas[a - 1]);
        const MoveSet base = moves_at(p, a);
        std::set<MoveSet> seen;
        VectorSpace space(c, p, {a}, cap);
        do {
            MoveSet sel = space.select(base);
            if (!seen.insert(sel).second) continue;
            if (!legal(g, interp, project_set(p, sel))) return false;
        } while (space.next());
    }
    return true;
}

} // namespace

void for_each_projection(const Cirquent& c, const Run& r, const Group& oformulas, std::size_t cap,
                         const std::function<void(const std::vector<Run>&)>& visit) {
    const auto p = parse_all(c, r);
    if (!p) throw std::invalid_argument("run does not consist of moves of the cirquent");
    std::vector<MoveSet> bases;
    for (std::size_t a : oformulas) bases.push_back(moves_at(*p, a));
    VectorSpace space(c, *p, oformulas, cap);
    std::vector<Run> projs(oformulas.size());
    do {
        for (std::size_t i = 0; i < oformulas.size(); ++i) projs[i] = project_set(*p, space.select(bases[i]));
        visit(projs);
    } while (space.next());
}

bool cirquent_legal(const Cirquent& c, const Interpretation& interp, const Run& r, std::size_t cap) {
    auto p = parse_all(c, r);
    return p && legal_parsed(c, interp, *p, cap);
}

std::optional<Player> cirquent_first_offender(const Cirquent& c, const Interpretation& interp, const Run& r,
                                              std::size_t cap) {
    if (cirquent_legal(c, interp, r, cap)) return std::nullopt;
    std::size_t lo = 0, hi = r.size();
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (cirquent_legal(c, interp, Run(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(mid)), cap)) lo = mid;
        else hi = mid;
    }
    return r[hi - 1].player;
}

Player cirquent_winner(const Cirquent& c, const Interpretation& interp, const Run& r, std::size_t cap) {
    if (auto off = cirquent_first_offender(c, interp, r, cap)) return opposite(*off);
    const Parsed p = *parse_all(c, r);
    std::vector<GameExpr> games;
    std::vector<MoveSet> bases;
    for (std::size_t a = 1; a <= c.size(); ++a) {
        games.push_back(game_of(c.oformulas[a - 1]));
        bases.push_back(moves_at(p, a));
    }
    std::vector<std::map<MoveSet, Player>> memo(c.size());
    for (const auto& u : c.under) {
        VectorSpace space(c, p, u, cap);
        do {
            bool some = false;
            for (std::size_t a : u) {
                MoveSet sel = space.select(bases[a - 1]);
                auto it = memo[a - 1].find(sel);
                if (it == memo[a - 1].end())
                    it = memo[a - 1].emplace(sel, winner(games[a - 1], interp, project_set(p, sel))).first;
                if (it->second == Player::Top) {
                    some = true;
                    break;
                }
            }
            if (!some) return Player::Bot;
        } while (space.next());
    }
    return Player::Top;
}

} // namespace cl15
