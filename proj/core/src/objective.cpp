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

#include "tbsg/objective.hpp"

#include <algorithm>

#include "tbsg/graph.hpp"

namespace tbsg {

const char *to_string(ObjectiveKind kind) noexcept
{
    switch (kind) {
    case ObjectiveKind::Reachability: return "reach";
    case ObjectiveKind::Safety: return "safety";
    case ObjectiveKind::MeanPayoff: return "meanpayoff";
    }
    return "?";
}

Objective Objective::reachability(std::vector<StateId> goal, std::vector<StateId> avoid)
{
    Objective o;
    o.kind = ObjectiveKind::Reachability;
    o.goal = std::move(goal);
    o.avoid = std::move(avoid);
    return o;
}

Objective Objective::safety(std::vector<StateId> unsafe)
{
    Objective o;
    o.kind = ObjectiveKind::Safety;
    o.avoid = std::move(unsafe);
    return o;
}

Objective Objective::mean_payoff(std::optional<RewardRange> range)
{
    Objective o;
    o.kind = ObjectiveKind::MeanPayoff;
    o.rewards = range;
    return o;
}

namespace {

void sort_unique(std::vector<StateId> &v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

void validate_objective(const GameModel &model, Objective &objective)
{
    sort_unique(objective.goal);
    sort_unique(objective.avoid);
    const std::size_t n = model.num_states();
    for (StateId s : objective.goal)
        if (s >= n) throw ModelError(ModelErrorKind::LabelMismatch, "goal state " + std::to_string(s) + " does not exist", s);
    for (StateId s : objective.avoid)
        if (s >= n) throw ModelError(ModelErrorKind::LabelMismatch, "avoid state " + std::to_string(s) + " does not exist", s);
    std::vector<StateId> both;
    std::set_intersection(objective.goal.begin(), objective.goal.end(), objective.avoid.begin(), objective.avoid.end(),
                          std::back_inserter(both));
    if (!both.empty())
        throw ModelError(ModelErrorKind::LabelMismatch,
                         "state " + std::to_string(both.front()) + " is both goal and avoid", both.front());
    if (objective.kind == ObjectiveKind::MeanPayoff && objective.rewards) {
        if (!(objective.rewards->min <= objective.rewards->max) || model.min_reward() < objective.rewards->min ||
            model.max_reward() > objective.rewards->max)
            throw ModelError(ModelErrorKind::LabelMismatch, "reward range does not cover the model rewards");
    }
}

RewardRange reward_range(const GameModel &model, const Objective &objective)
{
    if (objective.kind != ObjectiveKind::MeanPayoff) return {0.0, 1.0};
    if (objective.rewards) return *objective.rewards;
    return {model.min_reward(), model.max_reward()};
}

GameModel swap_owners(const GameModel &model)
{
    std::vector<Player> owners;
    std::vector<std::vector<Distribution>> actions;
    for (StateId s = 0; s < model.num_states(); ++s) {
        owners.push_back(opponent(model.owner(s)));
        actions.push_back(copy_actions(model, s));
    }
    return build_game(std::move(owners), std::move(actions),
                      std::vector<double>(model.rewards().begin(), model.rewards().end()), model.initial());
}

BoundsVector init_bounds(const GameModel &model, Objective objective, bool qualitative)
{
    validate_objective(model, objective);
    const std::size_t n = model.num_states();
    switch (objective.kind) {
    case ObjectiveKind::MeanPayoff: {
        RewardRange r = reward_range(model, objective);
        return BoundsVector(n, r.min, r.max);
    }
    case ObjectiveKind::Reachability: {
        BoundsVector b(n, 0.0, 1.0);
        for (StateId s : objective.goal) b.lower[s] = b.upper[s] = 1.0;
        for (StateId s : objective.avoid) b.lower[s] = b.upper[s] = 0.0;
        if (qualitative) {
            auto q = qualitative_reach(model, objective.goal, objective.avoid);
            for (StateId s : q.value0) b.upper[s] = 0.0;
            for (StateId s : q.value1) b.lower[s] = 1.0;
        }
        return b;
    }
    case ObjectiveKind::Safety: {
        // Dual: Minimizer reaches `unsafe` in the swapped game.
        BoundsVector b(n, 0.0, 1.0);
        for (StateId s : objective.avoid) b.lower[s] = b.upper[s] = 0.0;
        if (qualitative) {
            GameModel dual = swap_owners(model);
            auto q = qualitative_reach(dual, objective.avoid, {});
            for (StateId s : q.value0) b.lower[s] = 1.0;
            for (StateId s : q.value1) b.upper[s] = 0.0;
        }
        return b;
    }
    }
    return {};
}

ReducedGame reach_as_meanpayoff(const GameModel &model, std::vector<StateId> goal, std::vector<StateId> avoid)
{
    Objective check = Objective::reachability(goal, avoid);
    validate_objective(model, check);
    if (check.goal.empty()) throw ModelError(ModelErrorKind::LabelMismatch, "reachability needs a non-empty goal");
    const std::size_t n = model.num_states();
    std::vector<char> is_goal(n, 0), is_avoid(n, 0);
    for (StateId s : check.goal) is_goal[s] = 1;
    for (StateId s : check.avoid) is_avoid[s] = 1;
    std::vector<Player> owners(model.owners().begin(), model.owners().end());
    std::vector<double> rewards(n, 0.0);
    std::vector<std::vector<Distribution>> actions(n);
    for (StateId s = 0; s < n; ++s) {
        if (is_goal[s] || is_avoid[s]) {
            actions[s].push_back(Distribution{{s, 1.0}});
            rewards[s] = is_goal[s] ? 1.0 : 0.0;
        } else {
            actions[s] = copy_actions(model, s);
        }
    }
    ReducedGame out{build_game(std::move(owners), std::move(actions), std::move(rewards), model.initial()),
                    Objective::mean_payoff()};
    out.objective.rewards = RewardRange{out.model.min_reward(), out.model.max_reward()};
    return out;
}

}  // namespace tbsg
