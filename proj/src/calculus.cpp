#include "cl15/calculus.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "cl15/error.hpp"
#include "text.hpp"

namespace cl15 {

namespace {

struct RuleInfo {
    Rule rule;
    const char* name;
};

constexpr std::array<RuleInfo, 13> kRules{{
    {Rule::Axiom, "Axiom"},
    {Rule::UnderExchange, "UnderExchange"},
    {Rule::OformulaExchange, "OformulaExchange"},
    {Rule::OverExchange, "OverExchange"},
    {Rule::Weakening, "Weakening"},
    {Rule::Contraction, "Contraction"},
    {Rule::UnderDuplication, "UnderDuplication"},
    {Rule::OverDuplication, "OverDuplication"},
    {Rule::Merging, "Merging"},
    {Rule::DisjIntro, "DisjIntro"},
    {Rule::ConjIntro, "ConjIntro"},
    {Rule::RecIntro, "RecIntro"},
    {Rule::CorecIntro, "CorecIntro"},
}};

} // namespace

std::string rule_name(Rule r) {
    for (const auto& info : kRules)
        if (info.rule == r) return info.name;
    return "?";
}

std::optional<Rule> rule_from_name(std::string_view name) {
    for (const auto& info : kRules)
        if (name == info.name) return info.rule;
    return std::nullopt;
}

const std::vector<Rule>& all_rules() {
    static const std::vector<Rule> rules = [] {
        std::vector<Rule> out;
        for (const auto& info : kRules) out.push_back(info.rule);
        return out;
    }();
    return rules;
}

RuleApp RuleApp::axiom(std::vector<Formula> fs) {
    RuleApp r;
    r.rule = Rule::Axiom;
    r.formulas = std::move(fs);
    return r;
}
RuleApp RuleApp::under_exchange(std::size_t i) {
    RuleApp r;
    r.rule = Rule::UnderExchange;
    r.undergroup = i;
    return r;
}
RuleApp RuleApp::oformula_exchange(std::size_t a) {
    RuleApp r;
    r.rule = Rule::OformulaExchange;
    r.oformula = a;
    return r;
}
RuleApp RuleApp::over_exchange(std::size_t j) {
    RuleApp r;
    r.rule = Rule::OverExchange;
    r.overgroup = j;
    return r;
}
RuleApp RuleApp::weakening(std::size_t i, std::size_t a) {
    RuleApp r;
    r.rule = Rule::Weakening;
    r.undergroup = i;
    r.oformula = a;
    return r;
}
RuleApp RuleApp::contraction(std::size_t a) {
    RuleApp r;
    r.rule = Rule::Contraction;
    r.oformula = a;
    return r;
}
RuleApp RuleApp::under_duplication(std::size_t i) {
    RuleApp r;
    r.rule = Rule::UnderDuplication;
    r.undergroup = i;
    return r;
}
RuleApp RuleApp::over_duplication(std::size_t j) {
    RuleApp r;
    r.rule = Rule::OverDuplication;
    r.overgroup = j;
    return r;
}
RuleApp RuleApp::merging(std::size_t j, Group left, Group right) {
    RuleApp r;
    r.rule = Rule::Merging;
    r.overgroup = j;
    r.left = std::move(left);
    r.right = std::move(right);
    return r;
}
RuleApp RuleApp::disj_intro(std::size_t a) {
    RuleApp r;
    r.rule = Rule::DisjIntro;
    r.oformula = a;
    return r;
}
RuleApp RuleApp::conj_intro(std::size_t a) {
    RuleApp r;
    r.rule = Rule::ConjIntro;
    r.oformula = a;
    return r;
}
RuleApp RuleApp::rec_intro(std::size_t a, std::size_t position) {
    RuleApp r;
    r.rule = Rule::RecIntro;
    r.oformula = a;
    r.position = position;
    return r;
}
RuleApp RuleApp::corec_intro(std::size_t a, Group overgroups) {
    RuleApp r;
    r.rule = Rule::CorecIntro;
    r.oformula = a;
    r.overgroups = std::move(overgroups);
    return r;
}

bool operator==(const RuleApp& x, const RuleApp& y) {
    return x.rule == y.rule && x.formulas == y.formulas && x.undergroup == y.undergroup &&
           x.overgroup == y.overgroup && x.oformula == y.oformula && x.position == y.position &&
           x.left == y.left && x.right == y.right && x.overgroups == y.overgroups;
}

std::string print_params(const RuleApp& app) {
    const std::string u = "undergroup: " + std::to_string(app.undergroup);
    const std::string o = "oformula: " + std::to_string(app.oformula);
    const std::string v = "overgroup: " + std::to_string(app.overgroup);
    switch (app.rule) {
    case Rule::Axiom: {
        std::string fs;
        for (std::size_t k = 0; k < app.formulas.size(); ++k) {
            if (k) fs += ", ";
            fs += print_formula(app.formulas[k]);
        }
        return "{ formulas: [" + fs + "] }";
    }
    case Rule::UnderExchange:
    case Rule::UnderDuplication: return "{ " + u + " }";
    case Rule::OverExchange:
    case Rule::OverDuplication: return "{ " + v + " }";
    case Rule::OformulaExchange:
    case Rule::Contraction:
    case Rule::DisjIntro:
    case Rule::ConjIntro: return "{ " + o + " }";
    case Rule::Weakening: return "{ " + u + ", " + o + " }";
    case Rule::Merging:
        return "{ " + v + ", left: " + text::join_numbers(app.left) + ", right: " + text::join_numbers(app.right) +
               " }";
    case Rule::RecIntro: return "{ " + o + ", position: " + std::to_string(app.position) + " }";
    case Rule::CorecIntro: return "{ " + o + ", overgroups: " + text::join_numbers(app.overgroups) + " }";
    }
    return "{}";
}

std::string print_rule_app(const RuleApp& app) { return rule_name(app.rule) + " " + print_params(app); }

Cirquent axiom(const std::vector<Formula>& fs) {
    if (fs.empty()) throw RuleError("Axiom: needs at least one formula");
    Cirquent c;
    for (std::size_t k = 0; k < fs.size(); ++k) {
        c.oformulas.push_back(negate(fs[k]));
        c.oformulas.push_back(fs[k]);
        c.under.push_back({2 * k + 1, 2 * k + 2});
        c.over.push_back({2 * k + 1, 2 * k + 2});
    }
    return c;
}

namespace {

[[noreturn]] void fail(Rule r, const std::string& what) { throw RuleError(rule_name(r) + ": " + what); }

bool contains(const Group& g, std::size_t a) { return std::binary_search(g.begin(), g.end(), a); }

// Index map b ↦ b+1 for b > a; members of groups containing a also get a+1.
Group split_after(const Group& g, std::size_t a, bool add_copy) {
    Group out;
    for (std::size_t b : g) {
        if (b < a) out.push_back(b);
        else if (b == a) {
            out.push_back(a);
            if (add_copy) out.push_back(a + 1);
        } else out.push_back(b + 1);
    }
    return out;
}

void check_oformula(Rule r, const Cirquent& c, std::size_t a) {
    if (a < 1 || a > c.size()) fail(r, "oformula " + std::to_string(a) + " out of range 1.." + std::to_string(c.size()));
}

Cirquent insert_after(const Cirquent& c, std::size_t a, const Formula& first, const Formula& second) {
    Cirquent p;
    for (std::size_t b = 1; b <= c.size(); ++b) {
        if (b == a) {
            p.oformulas.push_back(first);
            p.oformulas.push_back(second);
        } else {
            p.oformulas.push_back(c.oformulas[b - 1]);
        }
    }
    for (const auto& u : c.under) p.under.push_back(split_after(u, a, contains(u, a)));
    for (const auto& o : c.over) p.over.push_back(split_after(o, a, contains(o, a)));
    return p;
}

Group swap_members(Group g, std::size_t a) {
    for (auto& b : g) {
        if (b == a) b = a + 1;
        else if (b == a + 1) b = a;
    }
    std::sort(g.begin(), g.end());
    return g;
}

Group drop_member(const Group& g, std::size_t a) {
    Group out;
    for (std::size_t b : g)
        if (b != a) out.push_back(b > a ? b - 1 : b);
    return out;
}

bool sorted_set(const Group& g) {
    for (std::size_t k = 1; k < g.size(); ++k)
        if (g[k - 1] >= g[k]) return false;
    return true;
}

} // namespace

Cirquent premise_of(const Cirquent& c, const RuleApp& app) {
    const Rule r = app.rule;
    try {
        c.validate();
    } catch (const CirquentError& e) {
        fail(r, std::string("conclusion is not a cirquent: ") + e.what());
    }
    const std::size_t k = c.size();
    const std::size_t m = c.under.size();
    const std::size_t n = c.over.size();
    const std::size_t a = app.oformula;
    switch (r) {
    case Rule::Axiom: fail(r, "an axiom has no premise");

    case Rule::UnderExchange: {
        const std::size_t i = app.undergroup;
        if (i < 1 || i >= m) fail(r, "undergroup " + std::to_string(i) + " has no right neighbour");
        Cirquent p = c;
        std::swap(p.under[i - 1], p.under[i]);
        return p;
    }
    case Rule::OformulaExchange: {
        if (a < 1 || a >= k) fail(r, "oformula " + std::to_string(a) + " has no right neighbour");
        Cirquent p = c;
        std::swap(p.oformulas[a - 1], p.oformulas[a]);
        for (auto& u : p.under) u = swap_members(u, a);
        for (auto& o : p.over) o = swap_members(o, a);
        return p;
    }
    case Rule::OverExchange: {
        const std::size_t j = app.overgroup;
        if (j < 1 || j >= n) fail(r, "overgroup " + std::to_string(j) + " has no right neighbour");
        Cirquent p = c;
        std::swap(p.over[j - 1], p.over[j]);
        return p;
    }
    case Rule::Weakening: {
        const std::size_t i = app.undergroup;
        if (i < 1 || i > m) fail(r, "undergroup " + std::to_string(i) + " out of range");
        check_oformula(r, c, a);
        const Group& u = c.under[i - 1];
        if (!contains(u, a)) fail(r, "no arc between undergroup " + std::to_string(i) + " and oformula " + std::to_string(a));
        if (u.size() < 2) fail(r, "undergroup " + std::to_string(i) + " has fewer than 2 elements");
        Cirquent p = c;
        p.under[i - 1].erase(std::find(p.under[i - 1].begin(), p.under[i - 1].end(), a));
        const bool orphan = std::none_of(p.under.begin(), p.under.end(), [&](const Group& g) { return contains(g, a); });
        if (!orphan) return p;
        Cirquent q;
        for (std::size_t b = 1; b <= k; ++b)
            if (b != a) q.oformulas.push_back(c.oformulas[b - 1]);
        for (const auto& g : p.under) q.under.push_back(drop_member(g, a));
        for (const auto& g : p.over) {
            Group h = drop_member(g, a);
            if (!h.empty()) q.over.push_back(std::move(h));
        }
        return q;
    }
    case Rule::Contraction: {
        check_oformula(r, c, a);
        const Formula& f = c.oformulas[a - 1];
        if (f.kind() != Formula::Kind::Cobrec) fail(r, "oformula " + std::to_string(a) + " is not of the form ?F");
        return insert_after(c, a, f, f);
    }
    case Rule::UnderDuplication: {
        const std::size_t i = app.undergroup;
        if (i < 1 || i >= m) fail(r, "undergroup " + std::to_string(i) + " has no right neighbour");
        if (c.under[i - 1] != c.under[i]) fail(r, "undergroups " + std::to_string(i) + " and " + std::to_string(i + 1) + " differ");
        Cirquent p = c;
        p.under.erase(p.under.begin() + static_cast<std::ptrdiff_t>(i));
        return p;
    }
    case Rule::OverDuplication: {
        const std::size_t j = app.overgroup;
        if (j < 1 || j >= n) fail(r, "overgroup " + std::to_string(j) + " has no right neighbour");
        if (c.over[j - 1] != c.over[j]) fail(r, "overgroups " + std::to_string(j) + " and " + std::to_string(j + 1) + " differ");
        Cirquent p = c;
        p.over.erase(p.over.begin() + static_cast<std::ptrdiff_t>(j));
        return p;
    }
    case Rule::Merging: {
        const std::size_t j = app.overgroup;
        if (j < 1 || j > n) fail(r, "overgroup " + std::to_string(j) + " out of range");
        if (app.left.empty() || app.right.empty()) fail(r, "both parts must be nonempty");
        if (!sorted_set(app.left) || !sorted_set(app.right)) fail(r, "parts must be increasing index lists");
        std::set<std::size_t> all(app.left.begin(), app.left.end());
        all.insert(app.right.begin(), app.right.end());
        if (Group(all.begin(), all.end()) != c.over[j - 1])
            fail(r, "left and right do not cover exactly overgroup " + std::to_string(j));
        Cirquent p = c;
        p.over[j - 1] = app.left;
        p.over.insert(p.over.begin() + static_cast<std::ptrdiff_t>(j), app.right);
        return p;
    }
    case Rule::DisjIntro: {
        check_oformula(r, c, a);
        const Formula& f = c.oformulas[a - 1];
        if (f.kind() != Formula::Kind::Or) fail(r, "oformula " + std::to_string(a) + " is not a disjunction");
        return insert_after(c, a, f.left(), f.right());
    }
    case Rule::ConjIntro: {
        check_oformula(r, c, a);
        const Formula& f = c.oformulas[a - 1];
        if (f.kind() != Formula::Kind::And) fail(r, "oformula " + std::to_string(a) + " is not a conjunction");
        Cirquent p = insert_after(c, a, f.left(), f.right());
        p.under.clear();
        for (const auto& u : c.under) {
            if (!contains(u, a)) {
                p.under.push_back(split_after(u, a, false));
                continue;
            }
            Group with_left = split_after(u, a, false);
            Group with_right = with_left;
            std::replace(with_right.begin(), with_right.end(), a, a + 1);
            p.under.push_back(std::move(with_left));
            p.under.push_back(std::move(with_right));
        }
        return p;
    }
    case Rule::RecIntro: {
        check_oformula(r, c, a);
        const Formula& f = c.oformulas[a - 1];
        if (f.kind() != Formula::Kind::Brec) fail(r, "oformula " + std::to_string(a) + " is not of the form !F");
        if (app.position < 1 || app.position > n + 1)
            fail(r, "position " + std::to_string(app.position) + " out of range 1.." + std::to_string(n + 1));
        Cirquent p = c;
        p.oformulas[a - 1] = f.body();
        p.over.insert(p.over.begin() + static_cast<std::ptrdiff_t>(app.position - 1), Group{a});
        return p;
    }
    case Rule::CorecIntro: {
        check_oformula(r, c, a);
        const Formula& f = c.oformulas[a - 1];
        if (f.kind() != Formula::Kind::Cobrec) fail(r, "oformula " + std::to_string(a) + " is not of the form ?F");
        if (!sorted_set(app.overgroups)) fail(r, "overgroups must be an increasing index list");
        Cirquent p = c;
        p.oformulas[a - 1] = f.body();
        for (std::size_t j : app.overgroups) {
            if (j < 1 || j > n) fail(r, "overgroup " + std::to_string(j) + " out of range");
            if (contains(c.over[j - 1], a))
                fail(r, "overgroup " + std::to_string(j) + " already contains oformula " + std::to_string(a));
            p.over[j - 1].push_back(a);
            std::sort(p.over[j - 1].begin(), p.over[j - 1].end());
        }
        return p;
    }
    }
    fail(r, "unknown rule");
}

CheckResult check_proof(const Proof& p) {
    if (p.steps.empty()) return {false, 0, "empty proof"};
    for (std::size_t s = 0; s < p.steps.size(); ++s) {
        const auto& step = p.steps[s];
        try {
            step.cirquent.validate();
        } catch (const CirquentError& e) {
            return {false, s + 1, e.what()};
        }
        if (s == 0) {
            if (step.app.rule != Rule::Axiom) return {false, 1, "the first step must be an Axiom"};
            Cirquent expected;
            try {
                expected = axiom(step.app.formulas);
            } catch (const RuleError& e) {
                return {false, 1, e.what()};
            }
            if (expected != step.cirquent)
                return {false, 1, "Axiom: expected " + print_cirquent(expected) + ", got " + print_cirquent(step.cirquent)};
            continue;
        }
        if (step.app.rule == Rule::Axiom) return {false, s + 1, "Axiom may only be the first step"};
        try {
            const Cirquent premise = premise_of(step.cirquent, step.app);
            if (premise != p.steps[s - 1].cirquent)
                return {false, s + 1,
                        rule_name(step.app.rule) + ": premise would be " + print_cirquent(premise) +
                            " but the previous step is " + print_cirquent(p.steps[s - 1].cirquent)};
        } catch (const RuleError& e) {
            return {false, s + 1, e.what()};
        }
    }
    return {};
}

namespace {

// All (left, right) pairs covering g with both parts nonempty.
std::vector<std::pair<Group, Group>> covers(const Group& g) {
    std::vector<std::pair<Group, Group>> out;
    std::size_t total = 1;
    for (std::size_t k = 0; k < g.size(); ++k) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
        Group l, r;
        std::size_t c = code;
        for (std::size_t b : g) {
            const std::size_t d = c % 3;
            c /= 3;
            if (d != 1) l.push_back(b);
            if (d != 0) r.push_back(b);
        }
        if (!l.empty() && !r.empty()) out.emplace_back(std::move(l), std::move(r));
    }
    return out;
}

} // namespace

std::vector<RuleApp> infer_rule(const Cirquent& prev, const Cirquent& next) {
    std::vector<RuleApp> candidates;
    const std::size_t k = next.size();
    const std::size_t m = next.under.size();
    const std::size_t n = next.over.size();
    for (std::size_t i = 1; i <= m; ++i) {
        candidates.push_back(RuleApp::under_exchange(i));
        candidates.push_back(RuleApp::under_duplication(i));
        for (std::size_t a = 1; a <= k; ++a) candidates.push_back(RuleApp::weakening(i, a));
    }
    for (std::size_t j = 1; j <= n; ++j) {
        candidates.push_back(RuleApp::over_exchange(j));
        candidates.push_back(RuleApp::over_duplication(j));
        if (next.over[j - 1].size() <= 10)
            for (auto& [l, r] : covers(next.over[j - 1])) candidates.push_back(RuleApp::merging(j, l, r));
    }
    for (std::size_t a = 1; a <= k; ++a) {
        candidates.push_back(RuleApp::oformula_exchange(a));
        candidates.push_back(RuleApp::contraction(a));
        candidates.push_back(RuleApp::disj_intro(a));
        candidates.push_back(RuleApp::conj_intro(a));
        for (std::size_t p = 1; p <= n + 1; ++p) candidates.push_back(RuleApp::rec_intro(a, p));
        Group free;
        for (std::size_t j = 1; j <= n; ++j)
            if (!next.in_over(j - 1, a)) free.push_back(j);
        if (free.size() <= 12) {
            for (std::size_t mask = 0; mask < (std::size_t{1} << free.size()); ++mask) {
                Group s;
                for (std::size_t t = 0; t < free.size(); ++t)
                    if (mask >> t & 1) s.push_back(free[t]);
                candidates.push_back(RuleApp::corec_intro(a, s));
            }
        }
    }
    std::vector<RuleApp> out;
    for (const auto& app : candidates) {
        try {
            if (premise_of(next, app) == prev) out.push_back(app);
        } catch (const RuleError&) {
        }
    }
    return out;
}

namespace {

RuleApp parse_params(text::Cursor& in, Rule rule) {
    RuleApp app;
    app.rule = rule;
    std::set<std::string> seen;
    in.expect("{");
    if (!in.eat("}")) {
        do {
            const std::size_t at = in.pos();
            const std::string key = in.word();
            in.expect(":");
            if (!seen.insert(key).second) in.fail("duplicate parameter '" + key + "'");
            if (key == "formulas") {
                in.expect("[");
                if (!in.eat("]")) {
                    do {
                        const std::size_t fat = in.pos();
                        const std::string f = in.until_any(",]");
                        try {
                            app.formulas.push_back(parse_formula(f));
                        } catch (const ParseError& e) {
                            throw ParseError(std::string("bad formula: ") + e.what(), fat + e.position());
                        }
                    } while (in.eat(","));
                    in.expect("]");
                }
            } else if (key == "undergroup") app.undergroup = in.number();
            else if (key == "overgroup") app.overgroup = in.number();
            else if (key == "oformula") app.oformula = in.number();
            else if (key == "position") app.position = in.number();
            else if (key == "left") app.left = in.number_list();
            else if (key == "right") app.right = in.number_list();
            else if (key == "overgroups") app.overgroups = in.number_list();
            else throw ParseError("unknown parameter '" + key + "'", at);
        } while (in.eat(","));
        in.expect("}");
    }

    std::set<std::string> want;
    switch (rule) {
    case Rule::Axiom: want = {"formulas"}; break;
    case Rule::UnderExchange:
    case Rule::UnderDuplication: want = {"undergroup"}; break;
    case Rule::OverExchange:
    case Rule::OverDuplication: want = {"overgroup"}; break;
    case Rule::OformulaExchange:
    case Rule::Contraction:
    case Rule::DisjIntro:
    case Rule::ConjIntro: want = {"oformula"}; break;
    case Rule::Weakening: want = {"undergroup", "oformula"}; break;
    case Rule::Merging: want = {"overgroup", "left", "right"}; break;
    case Rule::RecIntro: want = {"oformula", "position"}; break;
    case Rule::CorecIntro: want = {"oformula", "overgroups"}; break;
    }
    if (seen != want) {
        std::string list;
        for (const auto& w : want) list += (list.empty() ? "" : ", ") + w;
        in.fail(rule_name(rule) + " takes exactly the parameters: " + list);
    }
    return app;
}

} // namespace

Proof parse_proof(std::string_view src) {
    text::Cursor in(src);
    Proof proof;
    while (!in.at_end()) {
        if (in.word() != "step") in.fail("expected 'step'");
        const std::size_t number = in.number();
        if (number != proof.steps.size() + 1) in.fail("steps must be numbered consecutively from 1");
        in.expect("{");
        std::optional<Rule> rule;
        std::optional<RuleApp> app;
        std::optional<Cirquent> cirquent;
        while (!in.eat("}")) {
            const std::string key = in.word();
            in.expect(":");
            if (key == "rule") {
                const std::size_t at = in.pos();
                const std::string name = in.word();
                rule = rule_from_name(name);
                if (!rule) throw ParseError("unknown rule '" + name + "'", at);
            } else if (key == "params") {
                if (!rule) in.fail("'rule' must come before 'params'");
                app = parse_params(in, *rule);
            } else if (key == "cirquent") {
                in.eat("cirquent");
                const std::size_t at = in.pos();
                if (in.peek() != '{') in.fail("expected '{'");
                const std::string body = in.until_any(";}");
                try {
                    cirquent = parse_cirquent(body);
                } catch (const ParseError& e) {
                    throw ParseError(std::string("bad cirquent: ") + e.what(), at + e.position());
                } catch (const CirquentError& e) {
                    throw ParseError(std::string("bad cirquent: ") + e.what(), at);
                }
            } else {
                in.fail("unknown step field '" + key + "'");
            }
            if (!in.eat(";") && in.peek() != '}') in.fail("expected ';' or '}'");
        }
        if (!rule || !app || !cirquent) in.fail("step " + std::to_string(number) + " needs rule, params and cirquent");
        proof.steps.push_back({*app, *cirquent});
    }
    return proof;
}

std::string print_proof(const Proof& p) {
    std::string out;
    for (std::size_t s = 0; s < p.steps.size(); ++s) {
        const auto& step = p.steps[s];
        out += "step " + std::to_string(s + 1) + " {\n";
        out += "  rule: " + rule_name(step.app.rule) + ";\n";
        out += "  params: " + print_params(step.app) + ";\n";
        out += "  cirquent: " + print_cirquent(step.cirquent).substr(std::string("cirquent ").size()) + ";\n";
        out += "}\n";
    }
    return out;
}

} // namespace cl15
