#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cl15/cirquent.hpp"
#include "cl15/formula.hpp"

namespace cl15 {

enum class Rule {
    Axiom,
    UnderExchange,
    OformulaExchange,
    OverExchange,
    Weakening,
    Contraction,
    UnderDuplication,
    OverDuplication,
    Merging,
    DisjIntro,
    ConjIntro,
    RecIntro,
    CorecIntro,
};

std::string rule_name(Rule r);
std::optional<Rule> rule_from_name(std::string_view name);
const std::vector<Rule>& all_rules();

/// A rule application. All indices are 1-based and refer to the conclusion,
/// except `position`, which is where RecIntro's new overgroup sits in the premise.
///
///   Axiom             formulas
///   UnderExchange     undergroup        (swaps it with the next one)
///   OformulaExchange  oformula          (swaps it with the next one)
///   OverExchange      overgroup         (swaps it with the next one)
///   Weakening         undergroup, oformula   (the deleted arc)
///   Contraction       oformula          (a ⫯-formula, split into two copies)
///   UnderDuplication  undergroup        (it and the next one are identical)
///   OverDuplication   overgroup         (it and the next one are identical)
///   Merging           overgroup, left, right (left ∪ right = the overgroup)
///   DisjIntro         oformula
///   ConjIntro         oformula
///   RecIntro          oformula, position
///   CorecIntro        oformula, overgroups   (extra overgroups in the premise)
struct RuleApp {
    Rule rule = Rule::Axiom;
    std::vector<Formula> formulas;
    std::size_t undergroup = 0;
    std::size_t overgroup = 0;
    std::size_t oformula = 0;
    std::size_t position = 0;
    Group left;
    Group right;
    Group overgroups;

    static RuleApp axiom(std::vector<Formula> fs);
    static RuleApp under_exchange(std::size_t i);
    static RuleApp oformula_exchange(std::size_t a);
    static RuleApp over_exchange(std::size_t j);
    static RuleApp weakening(std::size_t i, std::size_t a);
    static RuleApp contraction(std::size_t a);
    static RuleApp under_duplication(std::size_t i);
    static RuleApp over_duplication(std::size_t j);
    static RuleApp merging(std::size_t j, Group left, Group right);
    static RuleApp disj_intro(std::size_t a);
    static RuleApp conj_intro(std::size_t a);
    static RuleApp rec_intro(std::size_t a, std::size_t position);
    static RuleApp corec_intro(std::size_t a, Group overgroups);

    friend bool operator==(const RuleApp& x, const RuleApp& y);
};

/// "{ oformula: 2, position: 1 }" style text of the parameters.
std::string print_params(const RuleApp& app);
std::string print_rule_app(const RuleApp& app);

/// ⟨¬F1,F1,…,¬Fn,Fn⟩ with diamond undergroups and overgroups. Throws RuleError on n = 0.
Cirquent axiom(const std::vector<Formula>& fs);

/// The premise the rule derives `conclusion` from. Throws RuleError with a
/// rule-specific diagnostic when the parameters do not fit.
Cirquent premise_of(const Cirquent& conclusion, const RuleApp& app);

struct ProofStep {
    RuleApp app;
    Cirquent cirquent;
};

struct Proof {
    std::vector<ProofStep> steps;

    const Cirquent& conclusion() const { return steps.back().cirquent; }
};

struct CheckResult {
    bool ok = true;
    std::size_t step = 0; ///< 1-based failing step when !ok
    std::string message;
};

CheckResult check_proof(const Proof& p);

/// Every RuleApp turning `next` into `prev` via premise_of, by enumerating
/// parameters. Axiom is never returned.
std::vector<RuleApp> infer_rule(const Cirquent& prev, const Cirquent& next);

/// Proof file: a sequence of
///
///   step 1 { rule: Axiom; params: { formulas: [F] }; cirquent: { oformulas: [~F, F]; under: [[1,2]]; over: [[1,2]] } }
///
/// Steps must be numbered 1, 2, … in order. '#' starts a comment. Throws ParseError.
Proof parse_proof(std::string_view text);
std::string print_proof(const Proof& p);

} // namespace cl15
