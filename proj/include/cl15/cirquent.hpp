#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cl15/formula.hpp"
#include "cl15/game.hpp"
#include "cl15/run.hpp"

namespace cl15 {

/// A group is a sorted set of 1-based oformula indices.
using Group = std::vector<std::size_t>;

/// Oformulas with undergroups and overgroups. Groups are told apart by
/// position, so two groups with the same contents are still two groups.
struct Cirquent {
    std::vector<Formula> oformulas;
    std::vector<Group> under;
    std::vector<Group> over;

    std::size_t size() const noexcept { return oformulas.size(); }

    /// Throws CirquentError on an empty sequence, an empty group, an index out
    /// of range, a repeated index inside a group, or an oformula missing from
    /// every undergroup or every overgroup.
    void validate() const;

    /// Overgroup positions (0-based) containing oformula `a` (1-based).
    std::vector<std::size_t> overgroups_of(std::size_t a) const;
    bool in_over(std::size_t j, std::size_t a) const;

    friend bool operator==(const Cirquent& x, const Cirquent& y);
    friend bool operator!=(const Cirquent& x, const Cirquent& y) { return !(x == y); }
};

/// F♣: ⟨F⟩ with one undergroup and one overgroup.
Cirquent club(const Formula& f);

/// `cirquent { oformulas: [F, ...]; under: [[1,2], ...]; over: [[1], ...] }`
/// The leading keyword is optional. Throws ParseError or CirquentError.
Cirquent parse_cirquent(std::string_view text);
std::string print_cirquent(const Cirquent& c);
/// Group/arc picture: one column per oformula, a bullet where it belongs.
std::string cirquent_diagram(const Cirquent& c);

/// a;u1,…,un.α
struct CirquentMove {
    std::size_t a = 0;
    std::vector<Bitstring> us;
    std::string alpha;

    friend bool operator==(const CirquentMove&, const CirquentMove&) = default;
};

/// Shape only: index, n bitstrings, '.', rest. No range or membership checks.
std::optional<CirquentMove> split_cirquent_move(std::string_view s, std::size_t n);
/// Full parse against `c`: arity, index range and condition (1). Throws ParseError.
CirquentMove parse_cirquent_move(const Cirquent& c, std::string_view s);
/// Like parse_cirquent_move but returns nullopt instead of throwing.
std::optional<CirquentMove> try_parse_cirquent_move(const Cirquent& c, std::string_view s);
std::string print_cirquent_move(const CirquentMove& m);

/// Ω^{≼a;x⃗}: moves at oformula `a` (1-based) whose every u_j is a prefix of
/// x_j, with the "a;u⃗." prefix stripped. Moves of any other shape are dropped.
Run project_cirquent(const Run& r, const Cirquent& c, std::size_t a, const std::vector<ThreadRep>& xs);

/// Default cap on enumerated thread-class vectors.
inline constexpr std::size_t kDefaultVectorCap = 100000;

/// Calls `visit` once per thread-class vector over the overgroups of
/// `oformulas`, with the projections of `r` onto each of them (aligned with
/// `oformulas`). Moves of `r` must all parse against `c`. Throws CapExceeded
/// beyond `cap` vectors and std::invalid_argument on an unparseable move.
void for_each_projection(const Cirquent& c, const Run& r, const Group& oformulas, std::size_t cap,
                         const std::function<void(const std::vector<Run>&)>& visit);

/// Def 8.2 legality. Throws CapExceeded when more than `cap` class vectors
/// would be needed for one oformula.
bool cirquent_legal(const Cirquent& c, const Interpretation& interp, const Run& r,
                    std::size_t cap = kDefaultVectorCap);
std::optional<Player> cirquent_first_offender(const Cirquent& c, const Interpretation& interp,
                                              const Run& r, std::size_t cap = kDefaultVectorCap);
Player cirquent_winner(const Cirquent& c, const Interpretation& interp, const Run& r,
                       std::size_t cap = kDefaultVectorCap);

} // namespace cl15
