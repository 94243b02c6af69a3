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

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "tbsg/bounds.hpp"

namespace tbsg {

struct SolveStats {
    std::size_t states_explored = 0;
    std::size_t bellman_updates = 0;
    std::size_t trackers = 0;
    std::size_t tracker_runs = 0;
    std::size_t bound_changes = 0;
    std::size_t stay_iterations = 0;
    std::size_t collapsed_states = 0;
    std::size_t component_searches = 0;
    std::size_t memory_jumps = 0;
};

/**
 * Certified result at the initial state: lower <= value <= upper, and on
 * success upper - lower < 2 * precision. When the iteration budget runs out
 * `budget_exceeded` is set and the bounds are still sound.
 */
struct SolveResult {
    double value = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    /// Sweeps for complete exploration, sampled paths for partial exploration.
    std::size_t iterations = 0;
    bool budget_exceeded = false;
    SolveStats stats;
    /// Original state ids the bounds refer to, ascending. Complete
    /// exploration lists every state; partial exploration the states it has
    /// seen.
    std::vector<StateId> states;
    BoundsVector bounds;
};

/// Snapshot handed to an observer after every iteration.
struct IterationSnapshot {
    std::size_t iteration;
    std::span<const StateId> states;
    const BoundsVector &bounds;
};

using IterationObserver = std::function<void(const IterationSnapshot &)>;

}  // namespace tbsg
