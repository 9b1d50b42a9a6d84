#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "cl15/calculus.hpp"
#include "cl15/cirquent.hpp"
#include "cl15/run.hpp"

namespace cl15 {

// Bitstring algebra. Positions count from 1; the (jn−n+i)'th bit of a fusion
// is the j'th bit of x_i, and any position not forced that way is free.

/// All fusions of x and y.
std::vector<Bitstring> fuse2(const Bitstring& x, const Bitstring& y);
/// (odd-position bits, even-position bits)
std::pair<Bitstring, Bitstring> defuse2(const Bitstring& z);
/// All fusions of xs, in increasing order. Throws std::invalid_argument if xs is empty.
std::vector<Bitstring> fuse_n(const std::vector<Bitstring>& xs);
/// x_i keeps the bits at positions j with j mod n = i (mod value 0 meaning i = n).
/// Throws std::invalid_argument on n = 0.
std::vector<Bitstring> defuse_n(const Bitstring& z, std::size_t n);

using Block = std::vector<std::string>;

/// A deterministic reactive strategy. `step` receives the whole run so far;
/// only the labmoves appended since the previous call are new (the
/// transducer's own earlier moves show up as ⊤ moves and are skipped). It
/// returns the block of moves to make now, possibly empty.
class Transducer {
public:
    virtual ~Transducer() = default;

    virtual Block step(const Run& run) = 0;
    virtual std::unique_ptr<Transducer> clone() const = 0;
    /// Canonical description of the construction, innermost last.
    virtual std::string describe() const = 0;
};

using TransducerPtr = std::unique_ptr<Transducer>;

/// Copycat for axiom(fs): answers a;w⃗.α by b;w⃗.α with b = a+1 for odd a and
/// a−1 for even a. Ill-shaped moves are ignored.
TransducerPtr axiom_strategy(const Cirquent& axiom_cirquent);

/// The deliberately unsound copycat with the parity test reversed
/// (b = a+1 for even a, a−1 for odd a). Used as a negative control.
TransducerPtr broken_axiom_strategy(const Cirquent& axiom_cirquent);

/// Wraps a strategy for `premise` into one for `conclusion`, where
/// premise_of(conclusion, app) == premise. Throws RuleError otherwise.
TransducerPtr transform(const RuleApp& app, const Cirquent& conclusion, const Cirquent& premise,
                        TransducerPtr premise_strategy);

/// F♣ strategy → ⫰F strategy: "1;w.α" ↔ "w.α".
TransducerPtr club_to_brec(TransducerPtr club_strategy);

/// ⫰F strategy → F strategy by playing the thread 000… only.
TransducerPtr brec_to_plain(TransducerPtr brec_strategy);

/// Strategies for every cirquent of the proof: result[s] plays steps[s].cirquent.
/// Throws RuleError if the proof does not check.
std::vector<TransducerPtr> compile_steps(const Proof& p);

/// Strategy for F where the proof ends in F♣. Never consults any interpretation.
/// Throws RuleError if the proof does not check or does not end in a
/// single-oformula cirquent with one undergroup and one overgroup.
TransducerPtr compile(const Proof& p);

/// The formula F of a proof ending in F♣. Throws RuleError otherwise.
Formula proved_formula(const Proof& p);

} // namespace cl15
