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

#include "tbsg/strategy.hpp"

#include <deque>

#include "tbsg/ec_analysis.hpp"

namespace tbsg {
namespace {

constexpr std::uint32_t kUnranked = 0xffffffffu;

Strategy extract(const GameModel &model, const BoundsVector &bounds, Player player, const Objective &objective)
{
    const std::size_t n = model.num_states();
    const bool maximize = player == Player::Maximizer;
    const auto &x = maximize ? bounds.lower : bounds.upper;
    const bool mean_payoff = objective.kind == ObjectiveKind::MeanPayoff;
    RewardRange range = reward_range(model, objective);
    const double worst = maximize ? range.min : range.max;

    std::vector<char> terminal(n, 0);
    for (StateId s : objective.goal) terminal[s] = 1;
    for (StateId s : objective.avoid) terminal[s] = 1;

    Strategy out{player, std::vector<ActionIndex>(n, 0)};
    std::vector<std::vector<ActionIndex>> greedy(n);
    for (StateId s = 0; s < n; ++s) {
        if (model.owner(s) != player) continue;
        greedy[s] = optimal_actions(model, std::span<const double>(x), s, kStrategyTolerance);
        out.choice[s] = greedy[s].front();
    }

    std::vector<std::uint32_t> rank(n, kUnranked);
    std::deque<StateId> queue;
    auto settle = [&](StateId s) {
        rank[s] = 0;
        queue.push_back(s);
    };
    for (StateId s = 0; s < n; ++s) {
        bool trivial = maximize ? x[s] <= worst + kStrategyTolerance : x[s] >= worst - kStrategyTolerance;
        if (terminal[s] || trivial) settle(s);
    }

    std::vector<StateId> scope;
    for (StateId s = 0; s < n; ++s)
        if (!terminal[s]) scope.push_back(s);
    auto mecs = mec_decompose(model, std::span<const StateId>(scope), [&](StateId s, ActionIndex a) {
        return model.owner(s) != player || std::binary_search(greedy[s].begin(), greedy[s].end(), a);
    });
    StayObjective stay_objective;
    stay_objective.mean_payoff = mean_payoff;
    stay_objective.range = range;
    for (const auto &ec : mecs) {
        std::vector<double> iterate(ec.size(), 0.0);
        StayBounds stay = staying_bounds(model, ec, stay_objective, kStrategyTolerance, iterate, 100000);
        bool realized = true;
        for (StateId s : ec.states)
            realized = realized && (maximize ? stay.low >= x[s] - kStrategyTolerance
                                             : stay.high <= x[s] + kStrategyTolerance);
        if (!realized) continue;
        LocalIndex idx(ec.states, n);
        for (std::size_t i = 0; i < ec.size(); ++i) {
            StateId s = ec.states[i];
            if (model.owner(s) == player) {
                // Keep the action the staying iteration prefers.
                double best = 0.0;
                bool first = true;
                for (ActionIndex a : ec.actions[i]) {
                    double v = 0.0;
                    for (const auto &t : model.transitions(s, a)) v += t.probability * iterate[idx.find(t.target)];
                    if (first || (maximize ? v > best + kTieTolerance : v < best - kTieTolerance)) {
                        best = v;
                        out.choice[s] = a;
                        first = false;
                    }
                }
            }
            if (rank[s] == kUnranked) settle(s);
        }
    }

    // Backward search: the player needs one greedy action with a settled
    // successor, the opponent settles once every action has one.
    std::vector<char> hit(model.num_choices(), 0);
    std::vector<std::uint32_t> hits(n, 0);
    while (!queue.empty()) {
        StateId t = queue.front();
        queue.pop_front();
        for (const auto &pred : model.predecessors(t)) {
            StateId s = pred.state;
            if (rank[s] != kUnranked) continue;
            std::size_t c = model.choice_index(s, pred.action);
            if (hit[c]) continue;
            if (model.owner(s) == player) {
                if (!std::binary_search(greedy[s].begin(), greedy[s].end(), pred.action)) continue;
                hit[c] = 1;
                out.choice[s] = pred.action;
                rank[s] = rank[t] + 1;
                queue.push_back(s);
            } else {
                hit[c] = 1;
                if (++hits[s] == model.num_actions(s)) {
                    rank[s] = rank[t] + 1;
                    queue.push_back(s);
                }
            }
        }
    }
    return out;
}

}  // namespace

Strategy extract_strategy(const GameModel &model, const BoundsVector &bounds, Player player,
                          const Objective &objective)
{
    Objective checked = objective;
    validate_objective(model, checked);
    if (bounds.size() != model.num_states())
        throw ModelError(ModelErrorKind::InvalidArgument, "bounds do not match the model");
    if (checked.kind != ObjectiveKind::Safety) return extract(model, bounds, player, checked);

    // Safety for one player is reachability of `unsafe` for the other in the
    // game with swapped owners.
    GameModel dual = swap_owners(model);
    BoundsVector dual_bounds(model.num_states(), 0.0, 1.0);
    for (StateId s = 0; s < model.num_states(); ++s) {
        dual_bounds.lower[s] = 1.0 - bounds.upper[s];
        dual_bounds.upper[s] = 1.0 - bounds.lower[s];
    }
    Strategy s = extract(dual, dual_bounds, opponent(player), Objective::reachability(checked.avoid));
    s.player = player;
    return s;
}

}  // namespace tbsg
