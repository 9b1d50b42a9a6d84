#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cl15 {

/// Top is the machine, Bot the environment.
enum class Player { Top, Bot };

constexpr Player opposite(Player p) noexcept { return p == Player::Top ? Player::Bot : Player::Top; }

/// "T" / "B".
char player_letter(Player p) noexcept;
/// "⊤" / "⊥".
const char* player_symbol(Player p) noexcept;

struct Labmove {
    Player player;
    std::string move;

    friend bool operator==(const Labmove&, const Labmove&) = default;
};

using Run = std::vector<Labmove>;

/// A finite bitstring; the empty bitstring renders as "" inside moves and "ε"
/// in human-facing output.
class Bitstring {
public:
    Bitstring() = default;
    /// Throws std::invalid_argument unless `bits` is over {0,1}.
    explicit Bitstring(std::string bits);

    static bool valid(std::string_view bits) noexcept;

    const std::string& str() const noexcept { return bits_; }
    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }
    char operator[](std::size_t i) const noexcept { return bits_[i]; }

    bool is_prefix_of(const Bitstring& other) const noexcept;
    Bitstring append(char bit) const { return Bitstring(bits_ + bit); }

    std::string pretty() const { return bits_.empty() ? "ε" : bits_; }

    friend auto operator<=>(const Bitstring&, const Bitstring&) = default;

private:
    std::string bits_;
};

/// The infinite bitstring stem·000…
class ThreadRep {
public:
    ThreadRep() = default;
    explicit ThreadRep(Bitstring stem) : stem_(std::move(stem)) {}

    const Bitstring& stem() const noexcept { return stem_; }

    /// u ≼ stem·0^ω
    bool has_prefix(std::string_view u) const noexcept;

    /// Two representatives denote the same thread iff their stems agree up to
    /// trailing zeros.
    friend bool operator==(const ThreadRep& a, const ThreadRep& b) noexcept;

private:
    Bitstring stem_;
};

Run negate_run(const Run& r);

/// Keeps moves of the form prefix·β and strips the prefix.
Run project_prefix(const Run& r, std::string_view prefix);

/// Splits "w.α" into (w, α) where w is the maximal [01]* prefix, which must be
/// followed by '.'.
std::optional<std::pair<std::string_view, std::string_view>> split_thread_move(std::string_view move);

/// Keeps moves u.β with u ≼ x and strips "u.". Moves not of that shape are dropped.
Run project_thread(const Run& r, const ThreadRep& x);

/// Thread-quantifier finitization: representatives of every class of infinite
/// bitstrings, where two bitstrings are in the same class iff the same members
/// of `used` are prefixes of both. The first representative is always the one
/// for 000… (stem ε).
std::vector<ThreadRep> enumerate_thread_classes(const std::set<Bitstring>& used);

/// Members of `used` that are prefixes of x, in increasing length.
std::vector<Bitstring> prefix_chain(const std::set<Bitstring>& used, const ThreadRep& x);

/// Run literal: "T:move, B:move". A move may be written in double quotes to
/// carry commas; otherwise a comma only separates when followed by "T:" or "B:".
Run parse_run(std::string_view text);
/// Inverse of parse_run (quotes moves when needed).
std::string print_run(const Run& r);
/// "⟨⊤α, ⊥β⟩"
std::string pretty_run(const Run& r);

} // namespace cl15
