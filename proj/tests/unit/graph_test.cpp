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

#include "fixtures.hpp"
#include "oracle.hpp"
#include "tbsg/graph.hpp"

namespace tbsg {
namespace {

using testing::dirac;
using testing::MAX;
using testing::MIN;

std::vector<StateId> members(const std::vector<char> &mask)
{
    std::vector<StateId> out;
    for (StateId s = 0; s < mask.size(); ++s)
        if (mask[s]) out.push_back(s);
    return out;
}

std::size_t position(const std::vector<std::vector<StateId>> &sccs, StateId s)
{
    for (std::size_t i = 0; i < sccs.size(); ++i)
        if (std::find(sccs[i].begin(), sccs[i].end(), s) != sccs[i].end()) return i;
    return sccs.size();
}

TEST(SccDecompose, SingleAbsorbingState)
{
    GameModel m = build_game({MAX}, {{dirac(0)}}, {0}, 0);
    auto sccs = scc_decompose(m);
    ASSERT_EQ(sccs.size(), 1u);
    EXPECT_EQ(sccs[0], std::vector<StateId>{0});
}

TEST(SccDecompose, Fig2ReverseTopologicalOrder)
{
    auto sccs = scc_decompose(testing::fig2_mdp());
    ASSERT_EQ(sccs.size(), 4u);
    for (const auto &c : sccs) EXPECT_EQ(c.size(), 1u);
    // Sinks come first, s1 last.
    EXPECT_LT(position(sccs, 2), position(sccs, 1));
    EXPECT_LT(position(sccs, 3), position(sccs, 1));
    EXPECT_LT(position(sccs, 1), position(sccs, 0));
}

TEST(SccDecompose, TwoStateCycle)
{
    GameModel m = build_game({MAX, MIN}, {{dirac(1)}, {dirac(0)}}, {0, 0}, 0);
    auto sccs = scc_decompose(m);
    ASSERT_EQ(sccs.size(), 1u);
    EXPECT_EQ(sccs[0], (std::vector<StateId>{0, 1}));
}

TEST(SccDecompose, DeepChainDoesNotRecurse)
{
    const std::size_t n = 200000;
    std::vector<Player> owners(n, MAX);
    std::vector<std::vector<Distribution>> actions(n);
    for (StateId s = 0; s < n; ++s) actions[s] = {dirac(s + 1 < n ? s + 1 : s)};
    GameModel m = build_game(owners, std::move(actions), std::vector<double>(n, 0.0), 0);
    EXPECT_EQ(scc_decompose(m).size(), n);
}

TEST(MecDecompose, Fig2)
{
    auto d = mec_decompose(testing::fig2_mdp());
    ASSERT_EQ(d.mecs.size(), 4u);
    for (StateId s = 0; s < 4; ++s) {
        EXPECT_EQ(d.mecs[s].states, std::vector<StateId>{s});
        EXPECT_EQ(d.mecs[s].actions[0], std::vector<ActionIndex>{0});
    }
    std::vector<std::vector<StateId>> sets;
    for (const auto &m : d.mecs) sets.push_back(m.states);
    EXPECT_EQ(sets, oracle::enumerate_mecs(testing::fig2_mdp()));
}

TEST(MecDecompose, Fig1LeftGrey)
{
    GameModel m = testing::fig1_left_grey();
    auto d = mec_decompose(m);
    ASSERT_EQ(d.mecs.size(), 2u);
    EXPECT_EQ(d.mecs[0].states, std::vector<StateId>{0});
    EXPECT_EQ(d.mecs[0].actions[0], std::vector<ActionIndex>{0});
    EXPECT_EQ(d.mecs[1].states, std::vector<StateId>{1});
    EXPECT_EQ(oracle::enumerate_mecs(m), (std::vector<std::vector<StateId>>{{0}, {1}}));
}

TEST(MecDecompose, AcyclicModelHasOnlySinkMecs)
{
    GameModel m = build_game({MAX, MIN, MAX}, {{dirac(1), dirac(2)}, {dirac(2)}, {dirac(2)}}, {0, 0, 0}, 0);
    auto d = mec_decompose(m);
    ASSERT_EQ(d.mecs.size(), 1u);
    EXPECT_EQ(d.mecs[0].states, std::vector<StateId>{2});
    EXPECT_FALSE(d.membership[0].has_value());
}

TEST(MecDecompose, RestrictedScopePrunesLeavingActions)
{
    GameModel m = testing::fig1_right();
    std::vector<StateId> scope{0, 1};
    auto mecs = mec_decompose(m, std::span<const StateId>(scope));
    ASSERT_EQ(mecs.size(), 1u);
    EXPECT_EQ(mecs[0].states, scope);
    EXPECT_EQ(mecs[0].actions[0], std::vector<ActionIndex>{1});
    EXPECT_EQ(mecs[0].actions[1], std::vector<ActionIndex>{0});
}

TEST(Attractor, AllStatesTarget)
{
    GameModel m = testing::fig2_mdp();
    std::vector<StateId> all{0, 1, 2, 3};
    for (auto mode : {AttractorMode::Maximizer, AttractorMode::Minimizer, AttractorMode::Sure})
        EXPECT_EQ(members(attractor(m, all, mode)), all);
}

TEST(Attractor, Fig2GoalIsNotForced)
{
    std::vector<StateId> goal{2};
    EXPECT_EQ(members(attractor(testing::fig2_mdp(), goal, AttractorMode::Maximizer)), goal);
}

TEST(Attractor, ForcedChain)
{
    GameModel m = build_game({MAX, MIN, MAX}, {{dirac(1)}, {dirac(2)}, {dirac(2)}}, {0, 0, 0}, 0);
    std::vector<StateId> goal{2};
    EXPECT_EQ(members(attractor(m, goal, AttractorMode::Sure)), (std::vector<StateId>{0, 1, 2}));
}

TEST(Attractor, PlayerModes)
{
    // 0 (MAX) may go to goal 2 or sink 3; 1 (MIN) likewise.
    GameModel m = build_game({MAX, MIN, MAX, MAX}, {{dirac(2), dirac(3)}, {dirac(2), dirac(3)}, {dirac(2)}, {dirac(3)}},
                             {0, 0, 0, 0}, 0);
    std::vector<StateId> goal{2};
    EXPECT_EQ(members(attractor(m, goal, AttractorMode::Maximizer)), (std::vector<StateId>{0, 2}));
    EXPECT_EQ(members(attractor(m, goal, AttractorMode::Minimizer)), (std::vector<StateId>{1, 2}));
    EXPECT_EQ(members(attractor(m, goal, AttractorMode::Sure)), (std::vector<StateId>{2}));
}

TEST(QualitativeReach, AbsorbingSink)
{
    GameModel m = build_game({MAX, MAX}, {{dirac(0)}, {dirac(1)}}, {0, 0}, 0);
    std::vector<StateId> goal{1};
    auto q = qualitative_reach(m, goal, {});
    EXPECT_EQ(q.value0, std::vector<StateId>{0});
    EXPECT_EQ(q.value1, std::vector<StateId>{1});
}

TEST(QualitativeReach, Fig2)
{
    std::vector<StateId> goal{2};
    auto q = qualitative_reach(testing::fig2_mdp(), goal, {});
    EXPECT_EQ(q.value0, std::vector<StateId>{3});
    EXPECT_EQ(q.value1, std::vector<StateId>{2});
}

TEST(QualitativeReach, ForcedPath)
{
    GameModel m = build_game({MAX, MIN, MAX}, {{dirac(1)}, {dirac(2)}, {dirac(2)}}, {0, 0, 0}, 0);
    std::vector<StateId> goal{2};
    auto q = qualitative_reach(m, goal, {});
    EXPECT_EQ(q.value1, (std::vector<StateId>{0, 1, 2}));
    EXPECT_TRUE(q.value0.empty());
}

TEST(ControlledEc, Cases)
{
    // Minimizer state 1 has a single action: Maximizer controls {0, 1}.
    GameModel m = build_game({MAX, MIN}, {{dirac(1), dirac(0)}, {dirac(0)}}, {0, 0}, 0);
    EndComponent ec{{0, 1}, {{0, 1}, {0}}};
    EXPECT_EQ(controlled_ec(m, ec), MAX);

    GameModel right = testing::fig1_right();
    EndComponent cycle{{0, 1}, {{1}, {0}}};
    EXPECT_FALSE(controlled_ec(right, cycle).has_value());

    GameModel loop = build_game({MIN}, {{dirac(0)}}, {0}, 0);
    EXPECT_EQ(controlled_ec(loop, EndComponent{{0}, {{0}}}), MIN);
}

}  // namespace
}  // namespace tbsg
