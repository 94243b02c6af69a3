/*
 * Copyright 2026 The tbsg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "tbsg/errors.hpp"
#include "tbsg/ingest.hpp"

namespace tbsg {
namespace {

constexpr const char *kFig2Text = R"(sg-explicit v1
# s1, s2, t, z
states 4
initial 0
state 0 MAX reward=0
  action a1 -> 0:1
  action b1 -> 0:1/2 1:1/2
state 1 MAX reward=0
  action a2 -> 1:1
  action b2 -> 1:1/3 2:1/3 3:1/3
state 2 MAX reward=1
  action -> 2:1
state 3 MAX reward=0
  action -> 3:1
label t = {2}
label goal = {t}
)";

bool same_model(const GameModel &a, const GameModel &b)
{
    if (a.num_states() != b.num_states() || a.initial() != b.initial()) return false;
    for (StateId s = 0; s < a.num_states(); ++s) {
        if (a.owner(s) != b.owner(s) || a.reward(s) != b.reward(s) || a.num_actions(s) != b.num_actions(s))
            return false;
        for (std::size_t k = 0; k < a.num_actions(s); ++k) {
            auto x = a.transitions(s, k), y = b.transitions(s, k);
            if (!std::equal(x.begin(), x.end(), y.begin(), y.end())) return false;
        }
    }
    return true;
}

TEST(ParseExplicit, MinimalGoalDocument)
{
    auto g = parse_explicit("sg-explicit v1\nstates 1\ninitial 0\nstate 0 MAX reward=1\n  action -> 0:1\n"
                            "label goal = {0}\n");
    EXPECT_EQ(g.model.num_states(), 1u);
    EXPECT_EQ(g.labels.at("goal"), std::vector<StateId>{0});
}

TEST(ParseExplicit, Fig2MatchesBuiltModel)
{
    auto g = parse_explicit(kFig2Text);
    EXPECT_TRUE(same_model(g.model, testing::fig2_mdp()));
    EXPECT_EQ(g.labels.at("goal"), std::vector<StateId>{2});
}

TEST(ParseExplicit, UndefinedLabelIsSyntaxError)
{
    std::string text = std::string(kFig2Text) + "label bad = {2, missing}\n";
    try {
        parse_explicit(text);
        FAIL();
    } catch (const SyntaxError &e) {
        EXPECT_EQ(e.line(), 17u);
        EXPECT_EQ(e.column(), 17u);
    }
}

TEST(ParseExplicit, ReportsPositions)
{
    try {
        parse_explicit("sg-explicit v1\nstates 2\ninitial 0\nstate 0 MAX reward=x\n");
        FAIL();
    } catch (const SyntaxError &e) {
        EXPECT_EQ(e.line(), 4u);
        EXPECT_EQ(e.column(), 20u);
    }
    EXPECT_THROW(parse_explicit("sg-explicit v2\n"), SyntaxError);
    EXPECT_THROW(parse_explicit("sg-explicit v1\nstates 1\ninitial 0\n"), SyntaxError);
    EXPECT_THROW(parse_explicit("sg-explicit v1\nstates 1\ninitial 0\nstate 0 MAX reward=0\n  action -> 1:1\n"),
                 SyntaxError);
}

TEST(ParseExplicit, ForwardsModelErrors)
{
    try {
        parse_explicit("sg-explicit v1\nstates 1\ninitial 0\nstate 0 MIN reward=0\n  action -> 0:0.5\n");
        FAIL();
    } catch (const ModelError &e) {
        EXPECT_EQ(e.kind(), ModelErrorKind::DistributionSumError);
    }
}

TEST(SerializeExplicit, RoundTripsCanonicalText)
{
    auto g = parse_explicit(kFig2Text);
    std::string canonical = serialize_explicit(g.model, g.labels);
    auto again = parse_explicit(canonical);
    EXPECT_TRUE(same_model(g.model, again.model));
    EXPECT_EQ(g.labels, again.labels);
    EXPECT_EQ(serialize_explicit(again.model, again.labels), canonical);
}

TEST(SerializeExplicit, RoundTripsRandomGames)
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        GameModel m = testing::random_game(rng, {.integer_rewards = false});
        std::string text = serialize_explicit(m);
        auto back = parse_explicit(text);
        EXPECT_TRUE(same_model(m, back.model));
        EXPECT_EQ(serialize_explicit(back.model), text);
    }
}

TEST(Generate, Fig2ChainOneIsFig2)
{
    auto g = generate({Family::Fig2Chain, 1});
    EXPECT_TRUE(same_model(g.model, testing::fig2_mdp()));
    EXPECT_EQ(g.labels.at("goal"), std::vector<StateId>{2});
}

TEST(Generate, TreeMulMecCounts)
{
    auto one = generate({Family::TreeMulMec, 1});
    // Root gadget (2 states) plus two leaves.
    EXPECT_EQ(one.model.num_states(), 4u);
    std::size_t previous = 0;
    for (std::uint32_t n = 1; n <= 8; ++n) {
        auto g = generate({Family::TreeMulMec, n});
        const std::size_t count = g.model.num_states();
        EXPECT_EQ(count, 3u * (std::size_t{1} << n) - 2);
        EXPECT_GE(count, std::size_t{1} << n);
        EXPECT_GT(count, previous);
        previous = count;
    }
}

TEST(Generate, DocumentedStateCounts)
{
    for (std::uint32_t n = 1; n <= 5; ++n) {
        const std::size_t p = std::size_t{1} << n;
        EXPECT_EQ(generate({Family::TreeMulSec, n}).model.num_states(), 3 * p - 2);
        EXPECT_EQ(generate({Family::TreeMulComplMec, n}).model.num_states(), 4 * p - 3);
        EXPECT_EQ(generate({Family::TreeMulComplSec, n}).model.num_states(), 4 * p - 3);
        EXPECT_EQ(generate({Family::TreeBigMec, n}).model.num_states(), 3 * p - 1);
        EXPECT_EQ(generate({Family::Fig2Chain, n}).model.num_states(), n + 3);
        EXPECT_EQ(generate({Family::DiceRace, n}).model.num_states(), 2 * n * n + 2);
    }
}

TEST(Generate, DeterministicAndLazyAgree)
{
    for (auto f : {Family::Fig1Left, Family::Fig1Right, Family::Fig2Chain, Family::TreeBigMec, Family::TreeMulMec,
                   Family::TreeMulSec, Family::TreeMulComplMec, Family::TreeMulComplSec, Family::DiceRace}) {
        GeneratorSpec spec{f, 3};
        auto a = generate(spec), b = generate(spec);
        EXPECT_EQ(serialize_explicit(a.model, a.labels), serialize_explicit(b.model, b.labels)) << to_string(f);
        auto source = make_source(spec);
        EXPECT_TRUE(same_model(materialize(*source), a.model)) << to_string(f);
        ASSERT_TRUE(source->num_states().has_value());
        EXPECT_EQ(*source->num_states(), a.model.num_states());
        EXPECT_EQ(family_from_name(to_string(f)), f);
    }
}

TEST(Generate, SmallInstancesAreOracleCheckable)
{
    for (auto f : {Family::Fig2Chain, Family::TreeMulMec, Family::TreeMulSec, Family::TreeBigMec, Family::DiceRace}) {
        auto g = generate({f, 1});
        auto it = g.labels.find("goal");
        ASSERT_NE(it, g.labels.end()) << to_string(f);
        auto v = oracle::game_value_bruteforce(g.model, Objective::reachability(it->second));
        EXPECT_GE(v[g.model.initial()], 0.0);
        EXPECT_LE(v[g.model.initial()], 1.0);
    }
}

TEST(Generate, RejectsOutOfRangeParameters)
{
    EXPECT_THROW(generate({Family::Fig2Chain, 0}), ParameterOutOfRange);
    EXPECT_THROW(generate({Family::TreeMulMec, 0}), ParameterOutOfRange);
    EXPECT_THROW(generate({Family::DiceRace, 0}), ParameterOutOfRange);
    EXPECT_FALSE(family_from_name("pig").has_value());
}

}  // namespace
}  // namespace tbsg
