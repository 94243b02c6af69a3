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

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "tbsg/game_model.hpp"
#include "tbsg/objective.hpp"

namespace tbsg::testing {

inline constexpr Player MAX = Player::Maximizer;
inline constexpr Player MIN = Player::Minimizer;

inline Distribution dirac(StateId t)
{
    return {{t, 1.0}};
}

/// s1 = 0, s2 = 1, t = 2, z = 3. Actions: a1/a2 loop (index 0), b1/b2 leave
/// (index 1).
inline GameModel fig2_mdp()
{
    return build_game({MAX, MAX, MAX, MAX},
                      {{dirac(0), {{0, 0.5}, {1, 0.5}}},
                       {dirac(1), {{1, 1.0 / 3}, {2, 1.0 / 3}, {3, 1.0 / 3}}},
                       {dirac(2)},
                       {dirac(3)}},
                      {0, 0, 1, 0}, 0);
}

/// s = 0 (reward 4, a loops, b to q), q = 1 (MIN, picks f5 or f10), f5 = 2,
/// f10 = 3.
inline GameModel fig1_left()
{
    return build_game({MAX, MIN, MAX, MAX}, {{dirac(0), dirac(1)}, {dirac(2), dirac(3)}, {dirac(2)}, {dirac(3)}},
                      {4, 0, 5, 10}, 0);
}

/// Same with the grey region as a single absorbing reward-5 state g = 1.
inline GameModel fig1_left_grey()
{
    return build_game({MAX, MAX}, {{dirac(0), dirac(1)}, {dirac(1)}}, {4, 5}, 0);
}

/// p = 0 (MIN), s = 1, X = 2 (reward 0), Y = 3 (reward 1).
inline GameModel fig1_right()
{
    return build_game({MIN, MAX, MAX, MAX}, {{dirac(2), dirac(1)}, {dirac(0), dirac(3)}, {dirac(2)}, {dirac(3)}},
                      {0.5, 0.5, 0, 1}, 0);
}

struct RandomGameOptions {
    std::size_t max_states = 8;
    std::size_t max_actions = 3;
    std::size_t max_support = 3;
    double self_loop_bias = 0.3;
    bool integer_rewards = true;
};

/// Random game with mixed ownership and rewards in [0, 10].
inline GameModel random_game(std::mt19937_64 &rng, const RandomGameOptions &opt = {})
{
    auto pick = [&](std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    };
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t n = pick(1, opt.max_states);
    std::vector<Player> owners(n);
    std::vector<double> rewards(n);
    std::vector<std::vector<Distribution>> actions(n);
    for (StateId s = 0; s < n; ++s) {
        owners[s] = unit(rng) < 0.5 ? MAX : MIN;
        rewards[s] = opt.integer_rewards ? static_cast<double>(pick(0, 10)) : 10.0 * unit(rng);
        const std::size_t k = pick(1, opt.max_actions);
        for (std::size_t a = 0; a < k; ++a) {
            std::vector<StateId> targets;
            const std::size_t m = pick(1, std::min(opt.max_support, n));
            if (unit(rng) < opt.self_loop_bias) targets.push_back(s);
            while (targets.size() < m) {
                auto t = static_cast<StateId>(pick(0, n - 1));
                if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
            }
            std::vector<double> w(targets.size());
            double sum = 0.0;
            for (double &x : w) sum += (x = static_cast<double>(pick(1, 4)));
            Distribution d;
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < targets.size(); ++i) {
                d.push_back({targets[i], w[i] / sum});
                acc += w[i] / sum;
            }
            d.push_back({targets.back(), 1.0 - acc});
            actions[s].push_back(normalize_support(std::move(d)));
        }
    }
    return build_game(std::move(owners), std::move(actions), std::move(rewards), 0);
}

/// Random disjoint goal and avoid sets; goal is non-empty.
inline std::pair<std::vector<StateId>, std::vector<StateId>> random_targets(std::mt19937_64 &rng, std::size_t n)
{
    std::vector<StateId> goal, avoid;
    std::uniform_int_distribution<int> roll(0, 5);
    for (StateId s = 0; s < n; ++s) {
        int r = roll(rng);
        if (r == 0) goal.push_back(s);
        else if (r == 1) avoid.push_back(s);
    }
    if (goal.empty()) {
        StateId g = static_cast<StateId>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
        goal.push_back(g);
        avoid.erase(std::remove(avoid.begin(), avoid.end(), g), avoid.end());
    }
    return {goal, avoid};
}

}  // namespace tbsg::testing
