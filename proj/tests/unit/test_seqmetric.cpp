#include <gtest/gtest.h>

#include <random>

#include "intentlab/error.hpp"
#include "intentlab/seqmetric.hpp"
#include "oracles.hpp"

using namespace intentlab;

TEST(Levenshtein, KnownPairs) {
    EXPECT_EQ(levenshtein(oracle::ids("kitten"), oracle::ids("sitting")), 3u);
    EXPECT_EQ(levenshtein(oracle::ids("Saturday"), oracle::ids("Sunday")), 3u);
    EXPECT_EQ(levenshtein(oracle::ids(""), oracle::ids("abc")), 3u);
    EXPECT_EQ(levenshtein(oracle::ids(""), oracle::ids("")), 0u);
    EXPECT_EQ(levenshtein(oracle::ids("gumbo"), oracle::ids("gambol")), 2u);
}

TEST(Jaro, KnownPairs) {
    EXPECT_NEAR(jaro(oracle::ids("MARTHA"), oracle::ids("MARHTA")), 17.0 / 18.0, 1e-12);
    EXPECT_NEAR(jaro(oracle::ids("DIXON"), oracle::ids("DICKSONX")), 23.0 / 30.0, 1e-12);
    EXPECT_DOUBLE_EQ(jaro(oracle::ids(""), oracle::ids("")), 0.0);
    EXPECT_DOUBLE_EQ(jaro(oracle::ids("abc"), oracle::ids("xyz")), 0.0);
    EXPECT_DOUBLE_EQ(jaro(oracle::ids("same"), oracle::ids("same")), 1.0);
    // One element each: window is 0, a match is only possible at position 0.
    EXPECT_DOUBLE_EQ(jaro(oracle::ids("a"), oracle::ids("a")), 1.0);
}

TEST(JaroWinkler, Martha) {
    const double jw = jaro_winkler(oracle::ids("MARTHA"), oracle::ids("MARHTA"));
    // 17/18 + 3 * 0.1 * (1 - 17/18)
    EXPECT_NEAR(jw, 17.0 / 18.0 + 0.3 / 18.0, 1e-12);
    EXPECT_NEAR(jw, 0.9611, 1e-4);
}

TEST(JaroWinkler, PrefixCapAndScale) {
    const auto a = oracle::ids("abcdefgh");
    const auto b = oracle::ids("abcdefxy");
    const double base = jaro(a, b);
    EXPECT_NEAR(jaro_winkler(a, b, 0.1, 4), base + 0.4 * (1.0 - base), 1e-12);
    EXPECT_NEAR(jaro_winkler(a, b, 0.0, 0), base, 1e-12);
    EXPECT_THROW(jaro_winkler(a, b, 0.3, 4), RangeError);
    EXPECT_THROW(jaro_winkler(a, b, 0.1, 0), RangeError);
    EXPECT_THROW(jaro_winkler(a, b, -0.1, 4), RangeError);
}

TEST(SeqMetric, MatchesOracleOnRandomPairs) {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> len(0, 12);
    std::uniform_int_distribution<int> sym(0, 4);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<int> x(static_cast<std::size_t>(len(rng))), y(static_cast<std::size_t>(len(rng)));
        for (auto& v : x) v = sym(rng);
        for (auto& v : y) v = sym(rng);
        const auto a = oracle::ids(x);
        const auto b = oracle::ids(y);
        ASSERT_EQ(levenshtein(a, b), oracle::levenshtein(oracle::raw(a), oracle::raw(b)));
        ASSERT_NEAR(jaro(a, b), oracle::jaro(oracle::raw(a), oracle::raw(b)), 1e-12);
        ASSERT_NEAR(jaro_winkler(a, b), oracle::jaro_winkler(oracle::raw(a), oracle::raw(b)), 1e-12);
    }
}

TEST(SeqMetric, Symmetric) {
    const auto a = oracle::ids("CRATE");
    const auto b = oracle::ids("TRACE");
    EXPECT_EQ(levenshtein(a, b), levenshtein(b, a));
    EXPECT_DOUBLE_EQ(jaro(a, b), jaro(b, a));
}

TEST(Registry, InternIsStable) {
    IntentRegistry reg;
    const IntentId a = reg.intern("Read News");
    const IntentId b = reg.intern("Call Contact");
    EXPECT_EQ(reg.intern("Read News"), a);
    EXPECT_NE(a, b);
    EXPECT_EQ(reg.label(b), "Call Contact");
    EXPECT_EQ(reg.find("Call Contact"), b);
    EXPECT_FALSE(reg.find("Nope").has_value());
    EXPECT_EQ(reg.size(), 2u);
    EXPECT_THROW(reg.intern(""), ValidationError);
}

TEST(BuildSequence, MostRecentFirstWithinWindow) {
    const LocalTime t0 = make_local_time(2021, 3, 1, 8, 0);
    const std::vector<TimedIntent> history{
        {{1}, t0}, {{2}, t0 + 30}, {{3}, t0 + 60}, {{4}, t0 + 100}};
    const IntentSequence seq = build_sequence(history, t0 + 120);
    // 08:00 is 120 minutes back, outside the 90-minute window.
    ASSERT_EQ(seq.size(), 3u);
    EXPECT_EQ(seq.items[0].value, 4u);
    EXPECT_EQ(seq.items[1].value, 3u);
    EXPECT_EQ(seq.items[2].value, 2u);
    EXPECT_EQ(seq.window_minutes, 90);
    EXPECT_TRUE(build_sequence(history, t0 + 300).empty());
}
