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

#include <optional>
#include <string>
#include <vector>

#include "tbsg/bounds.hpp"
#include "tbsg/game_model.hpp"

namespace tbsg {

enum class ObjectiveKind { Reachability, Safety, MeanPayoff };

const char *to_string(ObjectiveKind kind) noexcept;

struct RewardRange {
    double min = 0.0;
    double max = 0.0;
};

/**
 * What Maximizer optimizes.
 *
 * Reachability: probability of reaching `goal` before any `avoid` state.
 * Safety: probability of never visiting `unsafe`. It is solved as the dual
 * reachability game (owners swapped, Minimizer reaching `unsafe`), with
 * value 1 - dual value.
 * MeanPayoff: liminf average of state rewards; `rewards` defaults to the
 * min/max reward of the model.
 */
struct Objective {
    ObjectiveKind kind = ObjectiveKind::Reachability;
    std::vector<StateId> goal;
    std::vector<StateId> avoid;
    std::optional<RewardRange> rewards;

    static Objective reachability(std::vector<StateId> goal, std::vector<StateId> avoid = {});
    static Objective safety(std::vector<StateId> unsafe);
    static Objective mean_payoff(std::optional<RewardRange> range = std::nullopt);

    const std::vector<StateId> &unsafe() const noexcept { return avoid; }
};

/// Sorts and deduplicates the label sets and checks them against the model.
/// Throws ModelError(LabelMismatch).
void validate_objective(const GameModel &model, Objective &objective);

/// Reward range used for bound initialization.
RewardRange reward_range(const GameModel &model, const Objective &objective);

/**
 * Safe initial bounds. Reachability: [0, 1], goal pinned to 1, avoid to 0;
 * with `qualitative` the graph-based value-0/value-1 states are pinned too.
 * Safety: the dual of reachability. Mean payoff: [rmin, rmax].
 */
BoundsVector init_bounds(const GameModel &model, Objective objective, bool qualitative = true);

/// Same game with owners swapped; used for the safety duality.
GameModel swap_owners(const GameModel &model);

struct ReducedGame {
    GameModel model;
    Objective objective;
};

/**
 * Reachability as mean payoff: goal states become absorbing with reward 1,
 * avoid states absorbing with reward 0, every other reward is 0.
 */
ReducedGame reach_as_meanpayoff(const GameModel &model, std::vector<StateId> goal, std::vector<StateId> avoid = {});

}  // namespace tbsg
