#include "cl15/strategy.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "cl15/error.hpp"

namespace cl15 {

std::vector<Bitstring> fuse_n(const std::vector<Bitstring>& xs) {
    const std::size_t n = xs.size();
    if (n == 0) throw std::invalid_argument("fuse_n needs at least one bitstring");
    std::size_t len = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (!xs[i - 1].empty()) len = std::max(len, xs[i - 1].size() * n - n + i);
    std::string forced(len, '?');
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= xs[i - 1].size(); ++j) forced[j * n - n + i - 1] = xs[i - 1][j - 1];
    std::vector<std::size_t> free;
    for (std::size_t p = 0; p < len; ++p)
        if (forced[p] == '?') free.push_back(p);
    if (free.size() > 20) throw CapExceeded("too many fusions");
    std::vector<Bitstring> out;
    out.reserve(std::size_t{1} << free.size());
    // Count upward over the free positions, last one least significant, so
    // the output comes out in lexicographic order.
    std::string z = forced;
    for (std::size_t p : free) z[p] = '0';
    for (;;) {
        out.emplace_back(z);
        std::size_t t = free.size();
        while (t > 0 && z[free[t - 1]] == '1') z[free[--t]] = '0';
        if (t == 0) break;
        z[free[t - 1]] = '1';
    }
    return out;
}

std::vector<Bitstring> fuse2(const Bitstring& x, const Bitstring& y) { return fuse_n({x, y}); }

std::vector<Bitstring> defuse_n(const Bitstring& z, std::size_t n) {
    if (n == 0) throw std::invalid_argument("defuse_n needs n >= 1");
    std::vector<std::string> parts(n);
    for (std::size_t p = 1; p <= z.size(); ++p) {
        const std::size_t i = p % n == 0 ? n : p % n;
        parts[i - 1] += z[p - 1];
    }
    std::vector<Bitstring> out;
    for (auto& s : parts) out.emplace_back(std::move(s));
    return out;
}

std::pair<Bitstring, Bitstring> defuse2(const Bitstring& z) {
    auto parts = defuse_n(z, 2);
    return {parts[0], parts[1]};
}

namespace {

std::string describe_cirquent(const Cirquent& c) {
    return print_cirquent(c).substr(std::string("cirquent ").size());
}

bool all_zero(std::string_view v) {
    return std::all_of(v.begin(), v.end(), [](char c) { return c == '0'; });
}

class Copycat final : public Transducer {
public:
    Copycat(Cirquent c, bool broken) : c_(std::move(c)), broken_(broken) {}

    Block step(const Run& run) override {
        Block out;
        for (; seen_ < run.size(); ++seen_) {
            if (run[seen_].player != Player::Bot) continue;
            auto m = try_parse_cirquent_move(c_, run[seen_].move);
            if (!m) continue;
            const bool odd = m->a % 2 == 1;
            m->a = (odd != broken_) ? m->a + 1 : m->a - 1;
            out.push_back(print_cirquent_move(*m));
        }
        return out;
    }

    TransducerPtr clone() const override { return std::make_unique<Copycat>(*this); }

    std::string describe() const override {
        return std::string(broken_ ? "BrokenCopycat" : "Copycat") + " " + describe_cirquent(c_);
    }

private:
    Cirquent c_;
    bool broken_;
    std::size_t seen_ = 0;
};

/// Simulates an inner strategy on an imaginary run, translating real
/// environment moves in and the inner strategy's moves out.
class Simulation : public Transducer {
public:
    explicit Simulation(TransducerPtr inner) : inner_(std::move(inner)) {}
    Simulation(const Simulation& o) : Transducer(o), inner_(o.inner_->clone()), sim_(o.sim_), seen_(o.seen_) {}
    Simulation& operator=(const Simulation&) = delete;

    Block step(const Run& run) override {
        for (; seen_ < run.size(); ++seen_)
            if (run[seen_].player == Player::Bot)
                for (auto& m : env_in(run[seen_].move)) sim_.push_back({Player::Bot, std::move(m)});
        Block out;
        while (true) {
            Block b = inner_->step(sim_);
            if (b.empty()) break;
            for (auto& m : b) {
                for (auto& r : top_out(m)) out.push_back(std::move(r));
                sim_.push_back({Player::Top, std::move(m)});
            }
        }
        return out;
    }

protected:
    virtual std::vector<std::string> env_in(const std::string& real) = 0;
    virtual std::vector<std::string> top_out(const std::string& imaginary) = 0;
    const Transducer& inner() const { return *inner_; }

private:
    TransducerPtr inner_;
    Run sim_;
    std::size_t seen_ = 0;
};

class RuleSimulation final : public Simulation {
public:
    RuleSimulation(RuleApp app, Cirquent conclusion, Cirquent premise, TransducerPtr inner)
        : Simulation(std::move(inner)), app_(std::move(app)), c_(std::move(conclusion)), p_(std::move(premise)) {
        if (app_.rule == Rule::Weakening && p_.size() < c_.size())
            for (std::size_t j = 0; j < c_.over.size(); ++j)
                if (c_.over[j] == Group{app_.oformula}) dropped_.push_back(j);
    }

    TransducerPtr clone() const override { return std::make_unique<RuleSimulation>(*this); }

    std::string describe() const override {
        return print_rule_app(app_) + " => " + describe_cirquent(c_) + "\n" + inner().describe();
    }

protected:
    std::vector<std::string> env_in(const std::string& real) override {
        auto m = try_parse_cirquent_move(c_, real);
        if (!m) return {};
        std::vector<CirquentMove> out = to_premise(std::move(*m));
        std::vector<std::string> text;
        for (const auto& x : out) text.push_back(print_cirquent_move(x));
        return text;
    }

    std::vector<std::string> top_out(const std::string& imaginary) override {
        auto m = split_cirquent_move(imaginary, p_.over.size());
        if (!m) return {imaginary};
        std::vector<CirquentMove> out = to_conclusion(std::move(*m));
        std::vector<std::string> text;
        for (const auto& x : out) text.push_back(print_cirquent_move(x));
        return text;
    }

private:
    // Real environment move (already checked against the conclusion) to
    // imaginary environment moves.
    std::vector<CirquentMove> to_premise(CirquentMove m) {
        const std::size_t a = app_.oformula;
        switch (app_.rule) {
        case Rule::Axiom:
        case Rule::UnderExchange:
        case Rule::UnderDuplication: return {m};
        case Rule::OformulaExchange:
            if (m.a == a) m.a = a + 1;
            else if (m.a == a + 1) m.a = a;
            return {m};
        case Rule::OverExchange: std::swap(m.us[app_.overgroup - 1], m.us[app_.overgroup]); return {m};
        case Rule::Weakening: {
            if (p_.size() == c_.size()) return {m};
            if (m.a == a) return {};
            if (m.a > a) --m.a;
            for (auto it = dropped_.rbegin(); it != dropped_.rend(); ++it)
                m.us.erase(m.us.begin() + static_cast<std::ptrdiff_t>(*it));
            return {m};
        }
        case Rule::Contraction: {
            if (m.a < a) return {m};
            if (m.a > a) {
                ++m.a;
                return {m};
            }
            auto split = split_thread_move(m.alpha);
            if (!split) return {};
            const std::string v(split->first);
            if (v.empty()) {
                CirquentMove second = m;
                second.a = a + 1;
                return {m, second};
            }
            m.a = v[0] == '0' ? a : a + 1;
            m.alpha = m.alpha.substr(1);
            return {m};
        }
        case Rule::OverDuplication: {
            const std::size_t j = app_.overgroup - 1;
            const Bitstring u1 = m.us[j], u2 = m.us[j + 1];
            m.us.erase(m.us.begin() + static_cast<std::ptrdiff_t>(j) + 1);
            std::vector<CirquentMove> out;
            for (const auto& v : fuse2(u1, u2)) {
                m.us[j] = v;
                out.push_back(m);
            }
            return out;
        }
        case Rule::Merging: {
            const std::size_t j = app_.overgroup - 1;
            const bool l = std::binary_search(app_.left.begin(), app_.left.end(), m.a);
            const bool r = std::binary_search(app_.right.begin(), app_.right.end(), m.a);
            const Bitstring u = m.us[j];
            Bitstring u1, u2;
            if (l && r) std::tie(u1, u2) = defuse2(u);
            else if (l) u1 = u;
            else if (r) u2 = u;
            m.us[j] = u1;
            m.us.insert(m.us.begin() + static_cast<std::ptrdiff_t>(j) + 1, u2);
            return {m};
        }
        case Rule::DisjIntro:
        case Rule::ConjIntro: {
            if (m.a < a) return {m};
            if (m.a > a) {
                ++m.a;
                return {m};
            }
            if (m.alpha.size() < 2 || m.alpha[1] != '.' || (m.alpha[0] != '0' && m.alpha[0] != '1')) return {};
            if (m.alpha[0] == '1') m.a = a + 1;
            m.alpha = m.alpha.substr(2);
            return {m};
        }
        case Rule::RecIntro: {
            const auto pos = m.us.begin() + static_cast<std::ptrdiff_t>(app_.position - 1);
            if (m.a != a) {
                m.us.insert(pos, Bitstring());
                return {m};
            }
            auto split = split_thread_move(m.alpha);
            if (!split) return {};
            Bitstring u{std::string(split->first)};
            m.alpha = std::string(split->second);
            m.us.insert(pos, std::move(u));
            return {m};
        }
        case Rule::CorecIntro: {
            if (m.a != a) return {m};
            auto split = split_thread_move(m.alpha);
            if (!split) return {};
            const std::string v(split->first);
            const std::string rest(split->second);
            if (app_.overgroups.empty()) {
                used_.insert(v);
                if (!all_zero(v)) return {};
                m.alpha = rest;
                return {m};
            }
            const auto parts = defuse_n(Bitstring(v), app_.overgroups.size());
            for (std::size_t t = 0; t < parts.size(); ++t) m.us[app_.overgroups[t] - 1] = parts[t];
            m.alpha = rest;
            return {m};
        }
        }
        return {};
    }

    // Move of the simulated strategy (shaped for the premise) to real moves.
    std::vector<CirquentMove> to_conclusion(CirquentMove m) {
        const std::size_t a = app_.oformula;
        switch (app_.rule) {
        case Rule::Axiom:
        case Rule::UnderExchange:
        case Rule::UnderDuplication: return {m};
        case Rule::OformulaExchange:
            if (m.a == a) m.a = a + 1;
            else if (m.a == a + 1) m.a = a;
            return {m};
        case Rule::OverExchange: std::swap(m.us[app_.overgroup - 1], m.us[app_.overgroup]); return {m};
        case Rule::Weakening: {
            if (p_.size() == c_.size()) return {m};
            if (m.a >= a) ++m.a;
            for (std::size_t j : dropped_) m.us.insert(m.us.begin() + static_cast<std::ptrdiff_t>(j), Bitstring());
            return {m};
        }
        case Rule::Contraction:
            if (m.a == a) m.alpha = "0" + m.alpha;
            else if (m.a == a + 1) {
                m.a = a;
                m.alpha = "1" + m.alpha;
            } else if (m.a > a + 1) --m.a;
            return {m};
        case Rule::OverDuplication: {
            const std::size_t j = app_.overgroup - 1;
            auto [u1, u2] = defuse2(m.us[j]);
            m.us[j] = u1;
            m.us.insert(m.us.begin() + static_cast<std::ptrdiff_t>(j) + 1, u2);
            return {m};
        }
        case Rule::Merging: {
            const std::size_t j = app_.overgroup - 1;
            const bool l = std::binary_search(app_.left.begin(), app_.left.end(), m.a);
            const bool r = std::binary_search(app_.right.begin(), app_.right.end(), m.a);
            const Bitstring u1 = m.us[j], u2 = m.us[j + 1];
            m.us.erase(m.us.begin() + static_cast<std::ptrdiff_t>(j) + 1);
            if (l && r) {
                std::vector<CirquentMove> out;
                for (const auto& v : fuse2(u1, u2)) {
                    m.us[j] = v;
                    out.push_back(m);
                }
                return out;
            }
            m.us[j] = l ? u1 : r ? u2 : Bitstring();
            return {m};
        }
        case Rule::DisjIntro:
        case Rule::ConjIntro:
            if (m.a == a) m.alpha = "0." + m.alpha;
            else if (m.a == a + 1) {
                m.a = a;
                m.alpha = "1." + m.alpha;
            } else if (m.a > a + 1) --m.a;
            return {m};
        case Rule::RecIntro: {
            const auto pos = m.us.begin() + static_cast<std::ptrdiff_t>(app_.position - 1);
            const Bitstring u = *pos;
            m.us.erase(pos);
            if (m.a == a) m.alpha = u.str() + "." + m.alpha;
            return {m};
        }
        case Rule::CorecIntro: {
            if (m.a != a) return {m};
            if (app_.overgroups.empty()) {
                std::string u;
                while (std::any_of(used_.begin(), used_.end(), [&](const std::string& v) {
                    return v.size() > u.size() && v.compare(0, u.size(), u) == 0;
                }))
                    u += '0';
                used_.insert(u);
                m.alpha = u + "." + m.alpha;
                return {m};
            }
            std::vector<Bitstring> parts;
            for (std::size_t j : app_.overgroups) {
                parts.push_back(m.us[j - 1]);
                m.us[j - 1] = Bitstring();
            }
            std::vector<CirquentMove> out;
            const std::string alpha = m.alpha;
            for (const auto& v : fuse_n(parts)) {
                m.alpha = v.str() + "." + alpha;
                out.push_back(m);
            }
            return out;
        }
        }
        return {m};
    }

    RuleApp app_;
    Cirquent c_;
    Cirquent p_;
    std::vector<std::size_t> dropped_;
    std::set<std::string> used_; // CorecIntro n = 0: thread prefixes used at the target oformula
};

class ClubToBrec final : public Simulation {
public:
    using Simulation::Simulation;
    TransducerPtr clone() const override { return std::make_unique<ClubToBrec>(*this); }
    std::string describe() const override { return "ClubToBrec\n" + inner().describe(); }

protected:
    std::vector<std::string> env_in(const std::string& real) override {
        if (!split_thread_move(real)) return {};
        return {"1;" + real};
    }
    std::vector<std::string> top_out(const std::string& imaginary) override {
        if (imaginary.rfind("1;", 0) == 0) return {imaginary.substr(2)};
        return {imaginary};
    }
};

class BrecToPlain final : public Simulation {
public:
    using Simulation::Simulation;
    TransducerPtr clone() const override { return std::make_unique<BrecToPlain>(*this); }
    std::string describe() const override { return "BrecToPlain\n" + inner().describe(); }

protected:
    std::vector<std::string> env_in(const std::string& real) override { return {"." + real}; }
    std::vector<std::string> top_out(const std::string& imaginary) override {
        auto split = split_thread_move(imaginary);
        if (!split || !all_zero(split->first)) return {};
        return {std::string(split->second)};
    }
};

} // namespace

TransducerPtr axiom_strategy(const Cirquent& c) { return std::make_unique<Copycat>(c, false); }
TransducerPtr broken_axiom_strategy(const Cirquent& c) { return std::make_unique<Copycat>(c, true); }

TransducerPtr transform(const RuleApp& app, const Cirquent& conclusion, const Cirquent& premise,
                        TransducerPtr premise_strategy) {
    if (app.rule == Rule::Axiom) throw RuleError("Axiom has no premise to transform");
    if (premise_of(conclusion, app) != premise)
        throw RuleError(rule_name(app.rule) + ": premise does not match the conclusion");
    return std::make_unique<RuleSimulation>(app, conclusion, premise, std::move(premise_strategy));
}

TransducerPtr club_to_brec(TransducerPtr s) { return std::make_unique<ClubToBrec>(std::move(s)); }
TransducerPtr brec_to_plain(TransducerPtr s) { return std::make_unique<BrecToPlain>(std::move(s)); }

std::vector<TransducerPtr> compile_steps(const Proof& p) {
    const CheckResult check = check_proof(p);
    if (!check.ok) throw RuleError("proof does not check at step " + std::to_string(check.step) + ": " + check.message);
    std::vector<TransducerPtr> out;
    out.push_back(axiom_strategy(p.steps[0].cirquent));
    for (std::size_t s = 1; s < p.steps.size(); ++s)
        out.push_back(transform(p.steps[s].app, p.steps[s].cirquent, p.steps[s - 1].cirquent, out.back()->clone()));
    return out;
}

Formula proved_formula(const Proof& p) {
    if (p.steps.empty()) throw RuleError("empty proof");
    const Cirquent& c = p.conclusion();
    if (c != club(c.oformulas.front())) throw RuleError("the proof does not end in a cirquent of the form F♣");
    return c.oformulas.front();
}

TransducerPtr compile(const Proof& p) {
    proved_formula(p);
    auto steps = compile_steps(p);
    return brec_to_plain(club_to_brec(std::move(steps.back())));
}

} // namespace cl15
