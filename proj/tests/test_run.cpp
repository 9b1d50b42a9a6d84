#include <gtest/gtest.h>

#include "cl15/error.hpp"
#include "cl15/run.hpp"
#include "support.hpp"

using namespace cl15;
using cl15::testing::all_bitstrings;
using cl15::testing::pick;
using cl15::testing::Rng;

namespace {

TEST(Run, ParseAndPrint) {
    const cl15::Run r = parse_run("T:0.beta, B:1.gamma");
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r[0], (Labmove{Player::Top, "0.beta"}));
    EXPECT_EQ(r[1], (Labmove{Player::Bot, "1.gamma"}));
    EXPECT_EQ(print_run(r), "T:0.beta, B:1.gamma");
    EXPECT_EQ(pretty_run(r), "⟨⊤0.beta, ⊥1.gamma⟩");
    EXPECT_TRUE(parse_run("  ").empty());
    EXPECT_EQ(parse_run("⊤:a, ⊥:b"), parse_run("T:a, B:b"));
}

TEST(Run, CommasInsideMovesSurviveRoundTrip) {
    const cl15::Run r = parse_run("T:3;00,1.alpha, B:5;,.m");
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r[0].move, "3;00,1.alpha");
    EXPECT_EQ(r[1].move, "5;,.m");
    const cl15::Run odd{{Player::Top, ""}, {Player::Bot, "a, T:b"}, {Player::Top, "q\"x"}};
    EXPECT_EQ(parse_run(print_run(odd)), odd);
}

TEST(Run, ParseErrors) {
    EXPECT_THROW(parse_run("X:a"), ParseError);
    EXPECT_THROW(parse_run("T:\"open"), ParseError);
    EXPECT_THROW(parse_run("T:\"a\" b"), ParseError);
    // Unquoted moves may hold commas; only ", T:" or ", B:" separates.
    EXPECT_EQ(parse_run("T:a,"), (cl15::Run{{Player::Top, "a,"}}));
}

TEST(Run, Negation) {
    EXPECT_EQ(negate_run(parse_run("T:alpha, B:beta")), parse_run("B:alpha, T:beta"));
    EXPECT_TRUE(negate_run({}).empty());
}

TEST(Run, PrefixProjection) {
    EXPECT_EQ(project_prefix(parse_run("T:0.beta, B:1.gamma, B:0.delta"), "0."), parse_run("T:beta, B:delta"));
    EXPECT_TRUE(project_prefix({}, "0.").empty());
}

TEST(Run, ThreadProjection) {
    EXPECT_EQ(project_thread(parse_run("T:00.alpha, B:001.beta, B:0.delta"), ThreadRep()),
              parse_run("T:alpha, B:delta"));
    EXPECT_TRUE(project_thread(parse_run("T:alpha, B:beta"), ThreadRep(Bitstring("1"))).empty());
    // The empty prefix reaches every thread.
    EXPECT_EQ(project_thread(parse_run("B:.m"), ThreadRep(Bitstring("1011"))), parse_run("B:m"));
}

TEST(Bitstring, Basics) {
    EXPECT_THROW(Bitstring("012"), std::invalid_argument);
    EXPECT_TRUE(Bitstring("01").is_prefix_of(Bitstring("011")));
    EXPECT_FALSE(Bitstring("011").is_prefix_of(Bitstring("01")));
    EXPECT_TRUE(Bitstring().is_prefix_of(Bitstring("1")));
    EXPECT_EQ(Bitstring().pretty(), "ε");
    EXPECT_EQ(Bitstring("1").append('0'), Bitstring("10"));
}

TEST(ThreadRep, EqualityUpToTrailingZeros) {
    EXPECT_EQ(ThreadRep(Bitstring("1")), ThreadRep(Bitstring("100")));
    EXPECT_EQ(ThreadRep(), ThreadRep(Bitstring("000")));
    EXPECT_FALSE(ThreadRep(Bitstring("1")) == ThreadRep(Bitstring("01")));
    EXPECT_TRUE(ThreadRep(Bitstring("1")).has_prefix("1000"));
    EXPECT_FALSE(ThreadRep(Bitstring("1")).has_prefix("11"));
}

TEST(ThreadClasses, Small) {
    EXPECT_EQ(enumerate_thread_classes({}), std::vector<ThreadRep>{ThreadRep()});
    // Chains {ε, 0} (for 000…) and {ε} (for 1…).
    const auto reps = enumerate_thread_classes({Bitstring(), Bitstring("0")});
    ASSERT_EQ(reps.size(), 2u);
    EXPECT_EQ(reps[0], ThreadRep());
    EXPECT_EQ(prefix_chain({Bitstring(), Bitstring("0")}, reps[1]), std::vector<Bitstring>{Bitstring()});
}

// Every infinite bitstring falls in exactly one enumerated class. Bits past
// the longest used string never matter, so stems one bit longer than that
// (padded with zeros) stand for all infinite bitstrings.
TEST(ThreadClassesProperty, CoverAllThreadsExactlyOnce) {
    Rng rng(21);
    for (int k = 0; k < 400; ++k) {
        std::set<Bitstring> used;
        const std::size_t count = pick(rng, 5);
        for (std::size_t i = 0; i < count; ++i) {
            const auto pool = all_bitstrings(pick(rng, 4));
            used.insert(pool[pick(rng, pool.size())]);
        }
        std::size_t longest = 0;
        for (const auto& u : used) longest = std::max(longest, u.size());

        const auto reps = enumerate_thread_classes(used);
        ASSERT_FALSE(reps.empty());
        EXPECT_EQ(reps[0], ThreadRep());
        std::set<std::vector<Bitstring>> rep_chains;
        for (const auto& r : reps) EXPECT_TRUE(rep_chains.insert(prefix_chain(used, r)).second);

        std::set<std::vector<Bitstring>> seen;
        for (const auto& stem : all_bitstrings(longest + 1)) {
            // Chain straight from the definition.
            std::vector<Bitstring> chain;
            for (std::size_t len = 0; len <= stem.size(); ++len) {
                Bitstring p(stem.str().substr(0, len));
                if (used.count(p)) chain.push_back(p);
            }
            EXPECT_TRUE(rep_chains.count(chain)) << "uncovered thread " << stem.str();
            seen.insert(chain);
        }
        EXPECT_EQ(seen, rep_chains);
    }
}

// Projection onto a thread depends only on the thread's class.
TEST(ThreadClassesProperty, ProjectionIsConstantOnClasses) {
    Rng rng(22);
    for (int k = 0; k < 300; ++k) {
        cl15::Run r;
        std::set<Bitstring> used;
        for (std::size_t i = 0, n = pick(rng, 6); i < n; ++i) {
            const auto pool = all_bitstrings(pick(rng, 3));
            const Bitstring u = pool[pick(rng, pool.size())];
            used.insert(u);
            r.push_back({pick(rng, 2) ? Player::Top : Player::Bot, u.str() + ".m" + std::to_string(i)});
        }
        std::map<std::vector<Bitstring>, cl15::Run> by_chain;
        for (const auto& stem : all_bitstrings(4)) {
            const ThreadRep x(stem);
            const auto chain = prefix_chain(used, x);
            const cl15::Run proj = project_thread(r, x);
            auto [it, fresh] = by_chain.emplace(chain, proj);
            if (!fresh) {
                EXPECT_EQ(it->second, proj);
            }
        }
    }
}

} // namespace
