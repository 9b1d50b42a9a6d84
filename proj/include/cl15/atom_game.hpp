#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cl15/run.hpp"

namespace cl15 {

/// A finite constant game given as a tree: edges are labmoves, every node
/// carries the winner of the run that ends there. Legal runs are exactly the
/// root-to-node paths.
class AtomGame {
public:
    struct Edge {
        Labmove move;
        std::size_t child;
    };
    struct Node {
        Player winner;
        std::vector<Edge> edges;
    };

    /// A moveless game won by `winner`.
    explicit AtomGame(Player winner = Player::Top);

    std::size_t root() const noexcept { return 0; }
    const Node& node(std::size_t id) const { return nodes_.at(id); }
    std::size_t node_count() const noexcept { return nodes_.size(); }

    /// Adds a child under `parent`; throws std::invalid_argument if `parent`
    /// already has an edge with the same labmove.
    std::size_t add_child(std::size_t parent, Labmove move, Player winner);

    /// Node reached by walking `r`, or nullopt if some move has no edge.
    std::optional<std::size_t> walk(const Run& r) const;

    bool legal(const Run& r) const { return walk(r).has_value(); }
    /// Winner of a legal run.
    Player winner_of_legal(const Run& r) const { return nodes_[*walk(r)].winner; }

    /// Longest root-to-leaf path length.
    std::size_t depth() const;
    /// Total number of edges (legal moves across all positions).
    std::size_t edge_count() const noexcept { return nodes_.size() - 1; }

    /// Distinct move strings on edges labelled `p`.
    std::vector<std::string> moves_of(Player p) const;
    /// Distinct labmoves appearing on edges.
    std::vector<Labmove> alphabet() const;

    /// All legal runs (every root-to-node path), shortest first.
    std::vector<Run> legal_runs() const;

    friend bool operator==(const AtomGame&, const AtomGame&);

private:
    std::vector<Node> nodes_;
};

using GameLibrary = std::map<std::string, AtomGame>;

/// Parses named games:
///
///   game Name = node winner=T { B"m1" -> node winner=B { ... }, T"m2" -> node winner=T {} }
///
/// ⊤/⊥ are accepted in place of T/B; commas between edges are optional;
/// '#' starts a line comment. Throws ParseError.
GameLibrary parse_game_library(std::string_view text);
std::string print_game(const AtomGame& g);
std::string print_game_library(const GameLibrary& lib);

/// Υ is a p-delay of Γ: the same per-player move sequences, and every
/// p-labelled move of Γ that follows the k'th opponent move still follows it in Υ.
bool is_delay(const Run& gamma, const Run& upsilon, Player p);

/// A run is p-legal iff it is legal or the first illegal move was made by the opponent.
bool is_p_legal(const AtomGame& g, const Run& r, Player p);
/// Winner with the illegal-loser rule applied.
Player atom_winner(const AtomGame& g, const Run& r);

struct StaticViolation {
    Run gamma;
    Run upsilon;
    Player delayer;
    std::string reason;
};

/// Bounded staticness check over all runs up to `maxlen`: legal runs plus
/// excursions of up to two moves past the first illegal move (drawn from the
/// tree alphabet and one junk move per player). Legal runs are searched first
/// and by increasing length, so the first witness is a shortest legal one.
std::optional<StaticViolation> find_static_violation(const AtomGame& g, std::size_t maxlen);
bool is_static_bounded(const AtomGame& g, std::size_t maxlen);

/// The library shipped with the project (all static) and the race game used
/// as the non-static counterexample.
GameLibrary standard_library();
AtomGame race_game();

} // namespace cl15
