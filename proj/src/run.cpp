#include "cl15/run.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

#include "cl15/error.hpp"

namespace cl15 {

char player_letter(Player p) noexcept { return p == Player::Top ? 'T' : 'B'; }
const char* player_symbol(Player p) noexcept { return p == Player::Top ? "⊤" : "⊥"; }

bool Bitstring::valid(std::string_view bits) noexcept {
    return std::all_of(bits.begin(), bits.end(), [](char c) { return c == '0' || c == '1'; });
}

Bitstring::Bitstring(std::string bits) : bits_(std::move(bits)) {
    if (!valid(bits_)) throw std::invalid_argument("not a bitstring: " + bits_);
}

bool Bitstring::is_prefix_of(const Bitstring& other) const noexcept {
    return bits_.size() <= other.bits_.size() && other.bits_.compare(0, bits_.size(), bits_) == 0;
}

bool ThreadRep::has_prefix(std::string_view u) const noexcept {
    const std::string& s = stem_.str();
    for (std::size_t i = 0; i < u.size(); ++i) {
        const char bit = i < s.size() ? s[i] : '0';
        if (u[i] != bit) return false;
    }
    return true;
}

bool operator==(const ThreadRep& a, const ThreadRep& b) noexcept {
    const std::string& x = a.stem_.str();
    const std::string& y = b.stem_.str();
    const std::size_t n = std::max(x.size(), y.size());
    for (std::size_t i = 0; i < n; ++i) {
        const char cx = i < x.size() ? x[i] : '0';
        const char cy = i < y.size() ? y[i] : '0';
        if (cx != cy) return false;
    }
    return true;
}

Run negate_run(const Run& r) {
    Run out;
    out.reserve(r.size());
    for (const auto& m : r) out.push_back({opposite(m.player), m.move});
    return out;
}

Run project_prefix(const Run& r, std::string_view prefix) {
    Run out;
    for (const auto& m : r)
        if (std::string_view(m.move).substr(0, prefix.size()) == prefix)
            out.push_back({m.player, m.move.substr(prefix.size())});
    return out;
}

std::optional<std::pair<std::string_view, std::string_view>> split_thread_move(std::string_view move) {
    std::size_t i = 0;
    while (i < move.size() && (move[i] == '0' || move[i] == '1')) ++i;
    if (i >= move.size() || move[i] != '.') return std::nullopt;
    return std::make_pair(move.substr(0, i), move.substr(i + 1));
}

Run project_thread(const Run& r, const ThreadRep& x) {
    Run out;
    for (const auto& m : r) {
        auto split = split_thread_move(m.move);
        if (split && x.has_prefix(split->first)) out.push_back({m.player, std::string(split->second)});
    }
    return out;
}

std::vector<Bitstring> prefix_chain(const std::set<Bitstring>& used, const ThreadRep& x) {
    std::vector<Bitstring> chain;
    for (const auto& u : used)
        if (x.has_prefix(u.str())) chain.push_back(u);
    std::sort(chain.begin(), chain.end(),
              [](const Bitstring& a, const Bitstring& b) { return a.size() < b.size(); });
    return chain;
}

std::vector<ThreadRep> enumerate_thread_classes(const std::set<Bitstring>& used) {
    std::set<std::string> closure{""};
    for (const auto& u : used)
        for (std::size_t k = 0; k <= u.size(); ++k) closure.insert(u.str().substr(0, k));

    std::vector<ThreadRep> candidates{ThreadRep()};
    for (const auto& v : closure)
        for (char b : {'0', '1'})
            if (!closure.count(v + b)) candidates.emplace_back(Bitstring(v + b));

    std::vector<ThreadRep> reps;
    std::set<std::vector<Bitstring>> seen;
    for (const auto& c : candidates)
        if (seen.insert(prefix_chain(used, c)).second) reps.push_back(c);
    return reps;
}

namespace {

bool starts_labmove(std::string_view text, std::size_t i) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (text.substr(i, 2) == "T:" || text.substr(i, 2) == "B:") return true;
    return text.substr(i, 4) == "⊤:" || text.substr(i, 4) == "⊥:";
}

} // namespace

Run parse_run(std::string_view text) {
    Run out;
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    if (i == text.size()) return out;
    while (true) {
        skip_ws();
        Player p;
        if (text.substr(i, 2) == "T:") { p = Player::Top; i += 2; }
        else if (text.substr(i, 2) == "B:") { p = Player::Bot; i += 2; }
        else if (text.substr(i, 4) == "⊤:") { p = Player::Top; i += 4; }
        else if (text.substr(i, 4) == "⊥:") { p = Player::Bot; i += 4; }
        else throw ParseError("expected 'T:' or 'B:'", i);

        std::string move;
        if (i < text.size() && text[i] == '"') {
            ++i;
            while (i < text.size() && text[i] != '"') {
                if (text[i] == '\\' && i + 1 < text.size()) ++i;
                move += text[i++];
            }
            if (i >= text.size()) throw ParseError("unterminated quoted move", i);
            ++i;
            skip_ws();
            if (i < text.size() && text[i] != ',') throw ParseError("expected ','", i);
        } else {
            const std::size_t start = i;
            while (i < text.size() && !(text[i] == ',' && starts_labmove(text, i + 1))) ++i;
            move = std::string(text.substr(start, i - start));
            while (!move.empty() && std::isspace(static_cast<unsigned char>(move.back()))) move.pop_back();
        }
        out.push_back({p, std::move(move)});
        if (i >= text.size()) break;
        ++i; // ','
    }
    return out;
}

std::string print_run(const Run& r) {
    std::string out;
    for (std::size_t k = 0; k < r.size(); ++k) {
        if (k) out += ", ";
        out += player_letter(r[k].player);
        out += ':';
        const std::string& m = r[k].move;
        const bool quote = m.find_first_of(",\"") != std::string::npos || m.empty() ||
                           std::isspace(static_cast<unsigned char>(m.front())) ||
                           std::isspace(static_cast<unsigned char>(m.back()));
        if (!quote) {
            out += m;
            continue;
        }
        out += '"';
        for (char c : m) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        out += '"';
    }
    return out;
}

std::string pretty_run(const Run& r) {
    std::string out = "⟨";
    for (std::size_t k = 0; k < r.size(); ++k) {
        if (k) out += ", ";
        out += player_symbol(r[k].player);
        out += r[k].move;
    }
    return out + "⟩";
}

} // namespace cl15
