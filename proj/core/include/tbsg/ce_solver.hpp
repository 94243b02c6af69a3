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

#include "tbsg/game_model.hpp"
#include "tbsg/objective.hpp"
#include "tbsg/solve_result.hpp"

namespace tbsg {

struct CeOptions {
    std::size_t max_sweeps = 10'000'000;
    /// Off: plain interval iteration without deflate/inflate.
    bool use_trackers = true;
    bool collapse_controlled = true;
    bool qualitative = true;
    /// Called after every sweep with bounds on the original states.
    IterationObserver observer;
};

/**
 * Complete exploration: goal/sink remapping and graph-based precomputation,
 * collapsing of controlled end components, then Gauss-Seidel sweeps on both
 * bounds in state order, with stale or unconverged MECs deflated and
 * inflated after every sweep. Stops once the initial state's gap is below
 * 2 * epsilon.
 */
SolveResult solve_ce(const GameModel &model, const Objective &objective, double epsilon,
                     const CeOptions &options = {});

}  // namespace tbsg
