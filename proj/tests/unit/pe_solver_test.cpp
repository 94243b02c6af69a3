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

#include "fixtures.hpp"
#include "tbsg/ce_solver.hpp"
#include "tbsg/errors.hpp"
#include "tbsg/ingest.hpp"
#include "tbsg/pe_solver.hpp"

namespace tbsg {
namespace {

using testing::dirac;
using testing::MAX;

PeObjective reach(std::vector<StateId> goal)
{
    PeObjective o;
    o.goal = membership(std::move(goal));
    return o;
}

// Root 0 reaches goal 1 with probability 0.999; otherwise it enters a binary
// tree of depth 30 whose leaves are absorbing.
class RareSubtree final : public GameSource {
public:
    static constexpr StateId kFirstLeaf = (1u << 30) - 1;

    StateId initial() const override { return 0; }
    Player owner(StateId) const override { return Player::Maximizer; }
    double reward(StateId) const override { return 0.0; }
    std::vector<Distribution> actions(StateId s) const override
    {
        if (s == 0) return {{{1, 0.999}, {2, 0.001}}};
        if (s == 1) return {dirac(1)};
        StateId i = s - 2;
        if (i >= kFirstLeaf) return {dirac(s)};
        return {{{2 + 2 * i + 1, 0.5}, {2 + 2 * i + 2, 0.5}}};
    }
    RewardRange reward_range() const override { return {0.0, 0.0}; }
};

TEST(PartialModel, DiscoversLazily)
{
    GameModel m = testing::fig2_mdp();
    ModelSource source(m);
    PartialModel pm(source);
    EXPECT_EQ(pm.num_states(), 1u);
    EXPECT_FALSE(pm.explored(0));
    EXPECT_TRUE(pm.expand(0));
    EXPECT_FALSE(pm.expand(0));
    EXPECT_EQ(pm.num_states(), 2u);
    EXPECT_EQ(pm.global(1), 1u);
    EXPECT_EQ(pm.local(1), std::optional<StateId>(1));
    EXPECT_EQ(pm.local(3), std::nullopt);
    EXPECT_EQ(pm.explored_count(), 1u);
}

TEST(PartialExplorer, ConvergedInitialStopsAtOnce)
{
    GameModel m = build_game({MAX}, {{dirac(0)}}, {0}, 0);
    ModelSource source(m);
    PartialExplorer e(source, reach({0}), 1e-6);
    EXPECT_TRUE(e.done());
    SolveResult r = solve_pe(source, reach({0}), 1e-6);
    EXPECT_EQ(r.value, 1.0);
    EXPECT_EQ(r.iterations, 0u);
}

TEST(PartialExplorer, SuccessorWeightsFollowGaps)
{
    GameModel m = testing::fig2_mdp();
    ModelSource source(m);
    PartialExplorer e(source, reach({2}), 1e-6);
    e.expand(0);
    e.expand(1);
    e.bounds().upper[1] = 0.75;
    e.bounds().lower[1] = 0.25;
    auto w = e.successor_weights(0, 1);
    ASSERT_EQ(w.size(), 2u);
    EXPECT_DOUBLE_EQ(w[0], 0.5 * 1.0);
    EXPECT_DOUBLE_EQ(w[1], 0.5 * 0.5);
    // Fixed goal and sink: no gap anywhere, fall back to probabilities.
    auto w1 = e.successor_weights(1, 0);
    EXPECT_EQ(w1.size(), 1u);
}

TEST(PartialExplorer, StopRules)
{
    GameModel m = testing::fig2_mdp();
    ModelSource source(m);
    PartialExplorer e(source, reach({2}), 1e-3);
    e.expand(0);
    e.expand(1);
    StateId t = *e.model().local(2);
    EXPECT_EQ(e.path_should_stop(t, 1, 0), StopReason::Absorbing);
    EXPECT_EQ(e.path_should_stop(0, 1, 0), StopReason::None);
    EXPECT_EQ(e.path_should_stop(0, 3, 0), StopReason::Revisit);
    EXPECT_EQ(e.path_should_stop(0, 1, e.length_cap()), StopReason::LengthCap);
    e.bounds().lower[0] = 0.5;
    e.bounds().upper[0] = 0.501;
    EXPECT_EQ(e.path_should_stop(0, 3, 0), StopReason::Converged);
}

TEST(PartialExplorer, GuidancePrefersUnexploredTies)
{
    GameModel m = testing::fig2_mdp();
    ModelSource source(m);
    PartialExplorer e(source, reach({2}), 1e-6);
    e.expand(0);
    // Both actions have ub 1; only b leads to a new state.
    EXPECT_EQ(e.guided_action(0), 1u);
}

TEST(PartialExplorer, MemoryRecordsExitOfFirstState)
{
    GameModel m = testing::fig2_mdp();
    ModelSource source(m);
    PartialExplorer e(source, reach({2}), 1e-6);
    while (!e.done()) e.step();
    ASSERT_TRUE(e.memory().at(0).has_value());
    EXPECT_EQ(e.memory().at(0)->exit, (StateAction{0, 1}));
    EXPECT_NEAR(e.result().value, 0.5, 1e-6);
}

TEST(SolvePe, Fig2)
{
    SolveResult r = solve_pe(testing::fig2_mdp(), Objective::reachability({2}), 1e-6);
    EXPECT_NEAR(r.value, 0.5, 1e-6);
    EXPECT_LE(r.lower, 0.5);
    EXPECT_GE(r.upper, 0.5);
    EXPECT_FALSE(r.budget_exceeded);
}

TEST(SolvePe, Fig2ChainMatchesCe)
{
    for (std::uint32_t k = 1; k <= 10; ++k) {
        ParsedGame g = generate({Family::Fig2Chain, k});
        Objective o = Objective::reachability(g.labels.at("goal"));
        double ce = solve_ce(g.model, o, 1e-6).value;
        double pe = solve_pe(g.model, o, 1e-6).value;
        EXPECT_NEAR(pe, ce, 2e-6) << "k = " << k;
    }
}

TEST(SolvePe, MeanPayoffAndSafety)
{
    EXPECT_NEAR(solve_pe(testing::fig1_left(), Objective::mean_payoff(), 1e-6).value, 5.0, 1e-6);
    EXPECT_NEAR(solve_pe(testing::fig1_right(), Objective::mean_payoff(), 1e-6).value, 0.0, 1e-6);
    EXPECT_NEAR(solve_pe(testing::fig2_mdp(), Objective::safety({3}), 1e-6).value, 1.0, 1e-6);
}

TEST(SolvePe, RareSubtreeStaysUnexplored)
{
    RareSubtree source;
    SolveResult r = solve_pe(source, reach({1}), 1e-2);
    EXPECT_NEAR(r.value, 0.999, 1e-2);
    EXPECT_LT(r.stats.states_explored, 100u);
}

TEST(SolvePe, Deterministic)
{
    ParsedGame g = generate({Family::TreeMulSec, 4});
    for (std::uint64_t seed : {0u, 7u}) {
        PeOptions options;
        options.seed = seed;
        SolveResult a = solve_pe(g.model, Objective::mean_payoff(), 1e-4, options);
        SolveResult b = solve_pe(g.model, Objective::mean_payoff(), 1e-4, options);
        EXPECT_EQ(a.value, b.value);
        EXPECT_EQ(a.iterations, b.iterations);
        EXPECT_EQ(a.stats.states_explored, b.stats.states_explored);
    }
}

TEST(SolvePe, BudgetKeepsSoundBounds)
{
    PeOptions options;
    options.max_paths = 1;
    SolveResult r = solve_pe(testing::fig2_mdp(), Objective::reachability({2}), 1e-9, options);
    EXPECT_TRUE(r.budget_exceeded);
    EXPECT_LE(r.lower, 0.5);
    EXPECT_GE(r.upper, 0.5);
}

TEST(SolvePe, RejectsBadPrecision)
{
    EXPECT_THROW(solve_pe(testing::fig2_mdp(), Objective::reachability({2}), -1.0), ModelError);
}

}  // namespace
}  // namespace tbsg
