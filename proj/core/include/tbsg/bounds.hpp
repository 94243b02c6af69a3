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

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "tbsg/game_view.hpp"

namespace tbsg {

/// Actions whose values differ by at most this much count as tied.
inline constexpr double kTieTolerance = 1e-12;

/// Per-state lower and upper bounds on the value. lower[s] <= upper[s].
struct BoundsVector {
    std::vector<double> lower;
    std::vector<double> upper;

    BoundsVector() = default;
    BoundsVector(std::size_t n, double lo, double hi) : lower(n, lo), upper(n, hi) {}

    std::size_t size() const noexcept { return lower.size(); }
    double gap(StateId s) const noexcept { return upper[s] - lower[s]; }
};

/// Memoryless deterministic strategy of one player; entries of the other
/// player's states are unused.
struct Strategy {
    Player player = Player::Maximizer;
    std::vector<ActionIndex> choice;
};

/// Expected value of `x` after taking `action` in `s`.
template <GameView G>
double action_value(const G &g, StateId s, std::size_t action, std::span<const double> x)
{
    double v = 0.0;
    for (const auto &t : g.transitions(s, action)) v += t.probability * x[t.target];
    return v;
}

/// One-step optimum at `s`: max for Maximizer states, min for Minimizer.
template <GameView G>
double bellman_value(const G &g, StateId s, std::span<const double> x)
{
    const bool maximize = g.owner(s) == Player::Maximizer;
    double best = maximize ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    const std::size_t k = g.num_actions(s);
    for (std::size_t a = 0; a < k; ++a) {
        double v = action_value(g, s, a, x);
        if (maximize ? v > best : v < best) best = v;
    }
    return best;
}

/**
 * Bellman operator. States in `scope` (all states when absent) get the
 * one-step optimum of `x`; every other entry is copied unchanged.
 */
template <GameView G>
std::vector<double> bellman(const G &g, std::span<const double> x,
                            std::optional<std::span<const StateId>> scope = std::nullopt)
{
    std::vector<double> out(x.begin(), x.end());
    if (scope) {
        for (StateId s : *scope)
            if (g.num_actions(s) > 0) out[s] = bellman_value(g, s, x);
    } else {
        for (StateId s = 0; s < g.num_states(); ++s)
            if (g.num_actions(s) > 0) out[s] = bellman_value(g, s, x);
    }
    return out;
}

/**
 * All actions of `s` attaining the Bellman optimum of `x` within `tolerance`,
 * in ascending order. Never empty for a state with actions.
 */
template <GameView G>
std::vector<ActionIndex> optimal_actions(const G &g, std::span<const double> x, StateId s,
                                         double tolerance = kTieTolerance)
{
    std::vector<ActionIndex> out;
    const std::size_t k = g.num_actions(s);
    if (k == 0) return out;
    const double best = bellman_value(g, s, x);
    for (std::size_t a = 0; a < k; ++a)
        if (std::abs(action_value(g, s, a, x) - best) <= tolerance) out.push_back(static_cast<ActionIndex>(a));
    return out;
}

/// Lowest-index optimal action.
template <GameView G>
ActionIndex first_optimal_action(const G &g, std::span<const double> x, StateId s, double tolerance = kTieTolerance)
{
    const double best = bellman_value(g, s, x);
    for (std::size_t a = 0; a < g.num_actions(s); ++a)
        if (std::abs(action_value(g, s, a, x) - best) <= tolerance) return static_cast<ActionIndex>(a);
    return 0;
}

/// Gap below 2 * epsilon certifies the midpoint as epsilon-precise.
inline bool converged(const BoundsVector &bounds, StateId s, double epsilon) noexcept
{
    return bounds.upper[s] - bounds.lower[s] < 2.0 * epsilon;
}

inline double midpoint(const BoundsVector &bounds, StateId s) noexcept
{
    return 0.5 * (bounds.lower[s] + bounds.upper[s]);
}

}  // namespace tbsg
