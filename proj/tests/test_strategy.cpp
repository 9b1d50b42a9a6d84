#include <gtest/gtest.h>

#include <deque>
#include <fstream>

#include <nlohmann/json.hpp>

#include "cl15/error.hpp"
#include "cl15/strategy.hpp"
#include "support.hpp"

using namespace cl15;
using cl15::testing::all_bitstrings;
using cl15::testing::brute_fusions;
using cl15::testing::fusions_match;
using cl15::testing::load_corpus;
using cl15::testing::pick;
using cl15::testing::Rng;

namespace {

std::vector<Bitstring> bits(std::initializer_list<const char*> xs) {
    std::vector<Bitstring> out;
    for (const char* x : xs) out.emplace_back(x);
    return out;
}

// A premise strategy that records what it is shown and answers from a script.
struct Probe : Transducer {
    struct State {
        std::vector<cl15::Run> seen;
        std::deque<Block> replies;
    };
    std::shared_ptr<State> state = std::make_shared<State>();

    Block step(const cl15::Run& run) override {
        state->seen.push_back(run);
        if (state->replies.empty()) return {};
        Block b = state->replies.front();
        state->replies.pop_front();
        return b;
    }
    std::unique_ptr<Transducer> clone() const override { return std::make_unique<Probe>(*this); }
    std::string describe() const override { return "probe"; }
};

// The imaginary environment moves the probe has seen so far.
std::vector<std::string> env_moves(const Probe::State& s) {
    std::vector<std::string> out;
    if (s.seen.empty()) return out;
    for (const auto& m : s.seen.back())
        if (m.player == Player::Bot) out.push_back(m.move);
    return out;
}

// Feeds environment moves one at a time and collects everything the strategy says.
struct Driver {
    TransducerPtr t;
    cl15::Run run;

    Block env(const std::string& move) {
        run.push_back({Player::Bot, move});
        return settle();
    }
    Block settle() {
        Block all;
        for (int guard = 0; guard < 16; ++guard) {
            const Block b = t->step(run);
            if (b.empty()) break;
            for (const auto& m : b) {
                run.push_back({Player::Top, m});
                all.push_back(m);
            }
        }
        return all;
    }
};

struct Wrapped {
    std::shared_ptr<Probe::State> probe;
    Driver driver;
};

Wrapped wrap(const RuleApp& app, const char* conclusion) {
    const Cirquent c = parse_cirquent(conclusion);
    const Cirquent p = premise_of(c, app);
    auto probe = std::make_unique<Probe>();
    auto state = probe->state;
    return {state, Driver{transform(app, c, p, std::move(probe)), {}}};
}

TEST(Fusion, PaperExamples) {
    EXPECT_EQ(fuse2(Bitstring("000"), Bitstring("11")), bits({"01010"}));
    EXPECT_EQ(fuse2(Bitstring("000"), Bitstring("111")), bits({"010101"}));
    EXPECT_EQ(fuse2(Bitstring("000"), Bitstring("1111")), bits({"01010101", "01010111"}));
    EXPECT_EQ(defuse2(Bitstring("01011010")), std::make_pair(Bitstring("0011"), Bitstring("1100")));
    EXPECT_EQ(fuse_n(bits({"11", "00", "111"})), bits({"101101001", "101101011", "101101101", "101101111"}));
    EXPECT_EQ(defuse_n(Bitstring("01011010"), 3), bits({"011", "110", "00"}));
}

TEST(Fusion, EdgeCases) {
    EXPECT_EQ(defuse2(Bitstring()), std::make_pair(Bitstring(), Bitstring()));
    EXPECT_EQ(fuse2(Bitstring(), Bitstring()), bits({""}));
    EXPECT_EQ(fuse2(Bitstring(), Bitstring("1")), bits({"01", "11"}));
    EXPECT_EQ(fuse_n(bits({"0110"})), bits({"0110"}));
    EXPECT_EQ(defuse_n(Bitstring("0110"), 1), bits({"0110"}));
    EXPECT_THROW(fuse_n({}), std::invalid_argument);
    EXPECT_THROW(defuse_n(Bitstring("01"), 0), std::invalid_argument);
}

// Exhaustive against brute-force interleaving for every input of total length ≤ 6.
TEST(FusionProperty, MatchesBruteForceOnSmallInputs) {
    for (std::size_t n = 1; n <= 3; ++n) {
        std::vector<std::vector<Bitstring>> tuples{{}};
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::vector<Bitstring>> next;
            for (const auto& t : tuples) {
                std::size_t used = 0;
                for (const auto& x : t) used += x.size();
                for (std::size_t len = 0; used + len <= 6; ++len)
                    for (const auto& x : all_bitstrings(len)) {
                        auto u = t;
                        u.push_back(x);
                        next.push_back(std::move(u));
                    }
            }
            tuples = std::move(next);
        }
        for (const auto& xs : tuples) {
            const auto got = fuse_n(xs);
            EXPECT_TRUE(fusions_match(got, xs, true));
            if (n == 2) {
                EXPECT_EQ(fuse2(xs[0], xs[1]), got);
            }
            // Defusing any fusion recovers each x_i as a prefix of its part.
            for (const auto& z : got) {
                const auto parts = defuse_n(z, n);
                for (std::size_t i = 0; i < n; ++i) EXPECT_TRUE(xs[i].is_prefix_of(parts[i]));
            }
        }
    }
    EXPECT_EQ(brute_fusions(bits({"1", "0"})).size(), 1u);
}

TEST(FusionProperty, DefusionInterleavesBack) {
    Rng rng(61);
    for (int k = 0; k < 2000; ++k) {
        const auto pool = all_bitstrings(pick(rng, 10));
        const Bitstring z = pool[pick(rng, pool.size())];
        const std::size_t n = 1 + pick(rng, 4);
        const auto parts = defuse_n(z, n);
        ASSERT_EQ(parts.size(), n);
        std::string back;
        for (std::size_t j = 0; back.size() < z.size(); ++j)
            for (std::size_t i = 0; i < n && back.size() < z.size(); ++i) back += parts[i].str().at(j);
        EXPECT_EQ(back, z.str());
        // z is one of the fusions of its own defusion.
        const auto fused = fuse_n(parts);
        EXPECT_NE(std::find(fused.begin(), fused.end(), z), fused.end());
    }
}

TEST(Copycat, PairsNeighbours) {
    Driver one{axiom_strategy(axiom({Formula::pos("P")})), {}};
    EXPECT_EQ(one.env("1;0.m"), Block{"2;0.m"});
    EXPECT_EQ(one.env("2;.q"), Block{"1;.q"});

    Driver two{axiom_strategy(axiom({Formula::pos("P"), Formula::pos("Q")})), {}};
    EXPECT_EQ(two.env("4;,.m"), Block{"3;,.m"});
    EXPECT_EQ(two.env("3;,01.x"), Block{"4;,01.x"});
    // Ill-shaped moves lose for the environment on their own; no answer.
    EXPECT_TRUE(two.env("junk").empty());
    EXPECT_TRUE(two.env("9;,.m").empty());
}

TEST(Copycat, BrokenVariantSwapsParity) {
    Driver d{broken_axiom_strategy(axiom({Formula::pos("P")})), {}};
    EXPECT_EQ(d.env("1;.m"), Block{"0;.m"});
    EXPECT_EQ(d.env("2;.m"), Block{"3;.m"});
}

TEST(Transform, Contraction) {
    auto w = wrap(RuleApp::contraction(1), "{ oformulas: [?P]; under: [[1]]; over: [[1]] }");
    w.probe->replies = {{}, {"1;.0.x", "2;..y"}};
    w.driver.settle();
    // The left copy lives under 0, the right one under 1.
    EXPECT_EQ(w.driver.env("1;.1.m"), (Block{"1;.00.x", "1;.1.y"}));
    EXPECT_EQ(env_moves(*w.probe), (std::vector<std::string>{"2;..m"}));
    w.driver.env("1;.01.q");
    EXPECT_EQ(env_moves(*w.probe), (std::vector<std::string>{"2;..m", "1;.1.q"}));
    // An ε-thread move reaches both copies.
    w.driver.env("1;..e");
    EXPECT_EQ(env_moves(*w.probe), (std::vector<std::string>{"2;..m", "1;.1.q", "1;..e", "2;..e"}));
}

TEST(Transform, OverDuplication) {
    auto w = wrap(RuleApp::over_duplication(1), "{ oformulas: [P]; under: [[1]]; over: [[1],[1]] }");
    w.probe->replies = {{}, {"1;01.x"}};
    w.driver.settle();
    EXPECT_EQ(w.driver.env("1;0,.m"), Block{"1;0,1.x"});
    EXPECT_EQ(env_moves(*w.probe), (std::vector<std::string>{"1;0.m"}));
    // One real move, one imaginary move per fusion of (ε, 1).
    w.driver.env("1;,1.q");
    EXPECT_EQ(env_moves(*w.probe), (std::vector<std::string>{"1;0.m", "1;01.q", "1;11.q"}));
}

TEST(Transform, DisjunctionIntroduction) {
    auto w = wrap(RuleApp::disj_intro(1), "{ oformulas: [P | Q]; under: [[1]]; over: [[1]] }");
    w.probe->replies = {{}, {"2;.x"}};
    w.driver.settle();
    EXPECT_EQ(w.driver.env("1;.0.m"), Block{"1;.1.x"});
    EXPECT_EQ(env_moves(*w.probe), (std::vector<std::string>{"1;.m"}));
}

TEST(Transform, RecurrenceIntroduction) {
    auto w = wrap(RuleApp::rec_intro(1, 2), "{ oformulas: [!P]; under: [[1]]; over: [[1]] }");
    w.probe->replies = {{}, {"1;,0.x"}};
    w.driver.settle();
    // A comma in the premise, a period in the conclusion.
    EXPECT_EQ(w.driver.env("1;.01.m"), Block{"1;.0.x"});
    EXPECT_EQ(env_moves(*w.probe), (std::vector<std::string>{"1;,01.m"}));
}

TEST(Transform, CorecurrenceIntroductionWithoutNewOvergroups) {
    auto w = wrap(RuleApp::corec_intro(1, {}), "{ oformulas: [?P]; under: [[1]]; over: [[1]] }");
    w.probe->replies = {{}, {}, {"1;.x"}};
    w.driver.settle();
    // Off the thread 000…: ignored.
    w.driver.env("1;.1.m");
    EXPECT_TRUE(env_moves(*w.probe).empty());
    // On it: passed on, and the answer goes deep enough not to prefix 00.
    EXPECT_EQ(w.driver.env("1;.00.q"), Block{"1;.00.x"});
    EXPECT_EQ(env_moves(*w.probe), (std::vector<std::string>{"1;.q"}));
}

TEST(Transform, RejectsMismatchedPremise) {
    const Cirquent c = parse_cirquent("{ oformulas: [P | Q]; under: [[1]]; over: [[1]] }");
    EXPECT_THROW(transform(RuleApp::disj_intro(1), c, c, std::make_unique<Probe>()), RuleError);
}

TEST(Bridges, ClubToBrec) {
    auto probe = std::make_unique<Probe>();
    auto state = probe->state;
    state->replies = {{}, {"1;00.m"}};
    Driver d{club_to_brec(std::move(probe)), {}};
    EXPECT_TRUE(d.settle().empty());
    EXPECT_EQ(d.env("0.q"), Block{"00.m"});
    EXPECT_EQ(env_moves(*state), (std::vector<std::string>{"1;0.q"}));
}

TEST(Bridges, BrecToPlain) {
    auto probe = std::make_unique<Probe>();
    auto state = probe->state;
    state->replies = {{}, {"00.m", "01.n", ".o"}};
    Driver d{brec_to_plain(std::move(probe)), {}};
    d.settle();
    EXPECT_EQ(d.env("q"), (Block{"m", "o"}));
    EXPECT_EQ(env_moves(*state), (std::vector<std::string>{".q"}));
}

TEST(Compile, CorpusFormulasAndDescriptions) {
    for (const auto& e : load_corpus()) {
        const auto expect = nlohmann::json::parse(std::ifstream(cl15::testing::corpus_dir() / e.name / "expect.json"));
        EXPECT_EQ(proved_formula(e.proof), parse_formula(expect.at("formula").get<std::string>())) << e.name;
        const auto t = compile(e.proof);
        EXPECT_FALSE(t->describe().empty());
        EXPECT_EQ(t->clone()->describe(), t->describe());
        EXPECT_EQ(compile_steps(e.proof).size(), e.proof.steps.size());
    }
}

TEST(Compile, RejectsBadProofs) {
    Proof p = load_corpus().front().proof;
    Proof truncated = p;
    truncated.steps.pop_back();
    EXPECT_THROW(compile(truncated), RuleError);
    Proof broken = p;
    broken.steps[1].cirquent = broken.steps[0].cirquent;
    EXPECT_THROW(compile(broken), RuleError);
}

// Γ^{≼a;x⃗} = ¬Γ^{≼b;x⃗} for the paired oformulas, whatever the environment does.
TEST(CopycatProperty, PairedProjectionsAreNegations) {
    Rng rng(62);
    const Cirquent c = axiom({Formula::pos("P"), Formula::pos("Q")});
    const Interpretation in{{"P", standard_library().at("Dialog")}, {"Q", standard_library().at("Echo")}};
    const Arena arena = Arena::of_cirquent(c, in);
    const auto env = arena.candidate_moves(Player::Bot, 2);
    const auto stems = all_bitstrings(3);
    for (int k = 0; k < 300; ++k) {
        Driver d{axiom_strategy(c), {}};
        for (std::size_t i = 0, n = pick(rng, 6); i < n; ++i) d.env(env[pick(rng, env.size())]);
        for (int s = 0; s < 5; ++s) {
            const std::vector<ThreadRep> xs{ThreadRep(stems[pick(rng, stems.size())]),
                                            ThreadRep(stems[pick(rng, stems.size())])};
            for (std::size_t a : {1u, 3u})
                EXPECT_EQ(project_cirquent(d.run, c, a, xs), negate_run(project_cirquent(d.run, c, a + 1, xs)));
        }
    }
}

} // namespace
