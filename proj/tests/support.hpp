#pragma once

// Shared fixtures for the test binaries: corpus access and hand-rolled
// random generators for formulas, game terms and runs.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "cl15/calculus.hpp"
#include "cl15/harness.hpp"
#include "cl15/strategy.hpp"

namespace cl15::testing {

inline std::filesystem::path corpus_dir() { return CL15_CORPUS_DIR; }

struct CorpusEntry {
    std::string name;
    Proof proof;
    GameLibrary atoms;
};

inline std::vector<CorpusEntry> load_corpus() {
    namespace fs = std::filesystem;
    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(corpus_dir()))
        if (fs::exists(e.path() / "proof.cl15")) dirs.push_back(e.path());
    std::sort(dirs.begin(), dirs.end());
    std::vector<CorpusEntry> out;
    for (const auto& d : dirs) {
        CorpusEntry c{d.filename().string(), parse_proof(read_file(d / "proof.cl15")), standard_library()};
        if (fs::exists(d / "atoms.game")) c.atoms = parse_game_library(read_file(d / "atoms.game"));
        out.push_back(std::move(c));
    }
    return out;
}

/// Every atom of `c` interpreted as `g`.
inline Interpretation uniform_interpretation(const Cirquent& c, const AtomGame& g) {
    Interpretation out;
    for (const auto& f : c.oformulas)
        for (const auto& a : atoms_of(f)) out.insert_or_assign(a, g);
    return out;
}

/// Atom games with at most two edges.
inline bool is_small(const AtomGame& g) { return g.edge_count() <= 2; }

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

inline Formula random_formula(Rng& rng, int depth, const std::vector<std::string>& atoms) {
    const std::size_t k = depth <= 0 ? pick(rng, 2) : pick(rng, 6);
    switch (k) {
    case 0: return Formula::pos(atoms[pick(rng, atoms.size())]);
    case 1: return Formula::neg(atoms[pick(rng, atoms.size())]);
    case 2: return Formula::conj(random_formula(rng, depth - 1, atoms), random_formula(rng, depth - 1, atoms));
    case 3: return Formula::disj(random_formula(rng, depth - 1, atoms), random_formula(rng, depth - 1, atoms));
    case 4: return Formula::brec(random_formula(rng, depth - 1, atoms));
    default: return Formula::cobrec(random_formula(rng, depth - 1, atoms));
    }
}

inline GameExpr random_expr(Rng& rng, int depth, const std::vector<std::string>& atoms) {
    const std::size_t k = depth <= 0 ? 0 : pick(rng, 6);
    switch (k) {
    case 0: return GameExpr::atom(atoms[pick(rng, atoms.size())]);
    case 1: return GameExpr::neg(random_expr(rng, depth - 1, atoms));
    case 2: return GameExpr::conj(random_expr(rng, depth - 1, atoms), random_expr(rng, depth - 1, atoms));
    case 3: return GameExpr::disj(random_expr(rng, depth - 1, atoms), random_expr(rng, depth - 1, atoms));
    case 4: return GameExpr::brec(random_expr(rng, depth - 1, atoms));
    default: return GameExpr::cobrec(random_expr(rng, depth - 1, atoms));
    }
}

/// A run built from shaped moves of both players, mostly legal-looking, with
/// an occasional junk move.
inline Run random_run(Rng& rng, const Arena& arena, std::size_t max_len) {
    const auto top = arena.candidate_moves(Player::Top, 2);
    const auto bot = arena.candidate_moves(Player::Bot, 2);
    Run r;
    const std::size_t len = pick(rng, max_len + 1);
    for (std::size_t i = 0; i < len; ++i) {
        const Player p = pick(rng, 2) ? Player::Top : Player::Bot;
        const auto& pool = p == Player::Top ? top : bot;
        if (pool.empty() || pick(rng, 12) == 0) r.push_back({p, pick(rng, 2) ? "junk" : "0.zz"});
        else r.push_back({p, pool[pick(rng, pool.size())]});
    }
    return r;
}

/// Shortest length with room for bit j of x_i at position jn−n+i.
inline std::size_t fusion_length(const std::vector<Bitstring>& xs) {
    const std::size_t n = xs.size();
    std::size_t len = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (!xs[i - 1].empty()) len = std::max(len, xs[i - 1].size() * n - n + i);
    return len;
}

/// The positions a fusion must fix, as a bitmask over z read left to right
/// (bit len−1 is position 1), with the values they must hold.
struct FusionConstraint {
    std::size_t len = 0;
    std::uint64_t mask = 0;
    std::uint64_t value = 0;
};

inline FusionConstraint fusion_constraint(const std::vector<Bitstring>& xs) {
    const std::size_t n = xs.size();
    FusionConstraint fc{fusion_length(xs)};
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= xs[i - 1].size(); ++j) {
            const std::uint64_t bit = std::uint64_t{1} << (fc.len - (j * n - n + i));
            fc.mask |= bit;
            if (xs[i - 1][j - 1] == '1') fc.value |= bit;
        }
    return fc;
}

inline std::uint64_t to_word(const Bitstring& z) {
    std::uint64_t w = 0;
    for (std::size_t p = 0; p < z.size(); ++p) w = w << 1 | (z[p] == '1');
    return w;
}

/// Straight from the definition of a fusion.
inline bool is_fusion(const Bitstring& z, const std::vector<Bitstring>& xs) {
    const FusionConstraint fc = fusion_constraint(xs);
    return z.size() == fc.len && (to_word(z) & fc.mask) == fc.value;
}

/// Every bitstring of the fusion length that meets the constraint, in
/// increasing order. Adding 1 with the fixed positions forced to 1 carries
/// straight through them, so each step lands on the next word that agrees
/// with `value` there.
inline std::vector<std::uint64_t> brute_fusions(const std::vector<Bitstring>& xs) {
    const FusionConstraint fc = fusion_constraint(xs);
    const std::uint64_t top = std::uint64_t{1} << fc.len;
    std::vector<std::uint64_t> out;
    for (std::uint64_t z = fc.value; z < top; z = (((z | fc.mask) + 1) & ~fc.mask) | fc.value) {
        out.push_back(z);
        if ((z | fc.mask) == top - 1) break;
    }
    return out;
}

/// The fusions `got` computed for xs agree with the definition: right length,
/// strictly increasing, every one meets the constraint, and there are
/// 2^(unconstrained positions) of them. With brute = true they are also
/// compared one by one against brute_fusions.
inline bool fusions_match(const std::vector<Bitstring>& got, const std::vector<Bitstring>& xs, bool brute) {
    const FusionConstraint fc = fusion_constraint(xs);
    std::size_t fixed = 0;
    for (const auto& x : xs) fixed += x.size();
    if (got.size() != (std::uint64_t{1} << (fc.len - fixed))) return false;
    std::vector<std::uint64_t> words;
    words.reserve(got.size());
    for (const auto& z : got) {
        if (z.size() != fc.len) return false;
        const std::uint64_t w = to_word(z);
        if ((w & fc.mask) != fc.value || (!words.empty() && words.back() >= w)) return false;
        words.push_back(w);
    }
    return !brute || words == brute_fusions(xs);
}

/// Every bitstring of length exactly `len`, in lexicographic order.
inline std::vector<Bitstring> all_bitstrings(std::size_t len) {
    std::vector<Bitstring> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << len); ++mask) {
        std::string z(len, '0');
        for (std::size_t p = 0; p < len; ++p)
            if ((mask >> (len - 1 - p)) & 1) z[p] = '1';
        out.emplace_back(z);
    }
    return out;
}

/// One-step perturbations of a proof: each toggles a single group arc in
/// one step's cirquent (keeping the cirquent well formed) or shifts one
/// index parameter of one step by one so that it names a different inference.
inline std::vector<Proof> proof_mutants(const Proof& p) {
    std::vector<Proof> out;
    auto toggle = [](Group& g, std::size_t a) {
        auto it = std::lower_bound(g.begin(), g.end(), a);
        if (it != g.end() && *it == a) g.erase(it);
        else g.insert(it, a);
    };
    for (std::size_t s = 0; s < p.steps.size(); ++s) {
        const Cirquent& c = p.steps[s].cirquent;
        for (int layer = 0; layer < 2; ++layer) {
            const auto& groups = layer == 0 ? c.under : c.over;
            for (std::size_t i = 0; i < groups.size(); ++i)
                for (std::size_t a = 1; a <= c.size(); ++a) {
                    Proof m = p;
                    auto& target = layer == 0 ? m.steps[s].cirquent.under : m.steps[s].cirquent.over;
                    toggle(target[i], a);
                    try {
                        m.steps[s].cirquent.validate();
                    } catch (const std::exception&) {
                        continue;
                    }
                    out.push_back(std::move(m));
                }
        }
        for (int delta : {-1, 1}) {
            Proof m = p;
            RuleApp& app = m.steps[s].app;
            std::size_t* field = nullptr;
            switch (app.rule) {
            case Rule::UnderExchange:
            case Rule::UnderDuplication:
            case Rule::Weakening: field = &app.undergroup; break;
            case Rule::OverExchange:
            case Rule::OverDuplication:
            case Rule::Merging: field = &app.overgroup; break;
            case Rule::OformulaExchange:
            case Rule::Contraction:
            case Rule::DisjIntro:
            case Rule::ConjIntro:
            case Rule::RecIntro:
            case Rule::CorecIntro: field = &app.oformula; break;
            case Rule::Axiom: break;
            }
            if (!field || (delta < 0 && *field <= 1)) continue;
            *field = static_cast<std::size_t>(static_cast<long>(*field) + delta);
            // Among identical neighbouring groups a shifted index can name the
            // very same inference; that is no perturbation.
            try {
                if (premise_of(c, app) == premise_of(c, p.steps[s].app)) continue;
            } catch (const std::exception&) {
            }
            out.push_back(std::move(m));
        }
    }
    return out;
}

} // namespace cl15::testing
