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

#include "tbsg/bounds.hpp"
#include "tbsg/game_model.hpp"
#include "tbsg/objective.hpp"

namespace tbsg {

/// Two actions count as equally good for strategy extraction within this.
inline constexpr double kStrategyTolerance = 1e-9;

/**
 * Memoryless strategy for `player` read off converged bounds: Maximizer is
 * greedy on lb, Minimizer greedy on ub.
 *
 * Greedy choices alone can cycle forever in a region whose staying value is
 * worse than the bound (a self-loop tied with the exit it was deflated to).
 * Ties are therefore broken towards states where the bound is realized:
 * terminal states and end components of the greedy game whose staying value
 * matches the bound. Within such a component the staying-optimal action is
 * kept. Remaining ties go to the lowest index.
 */
Strategy extract_strategy(const GameModel &model, const BoundsVector &bounds, Player player,
                          const Objective &objective);

}  // namespace tbsg
