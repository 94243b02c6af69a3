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
#include <concepts>
#include <cstddef>
#include <span>
#include <vector>

#include "tbsg/game_model.hpp"

namespace tbsg {

/// Read access shared by complete models and the growing partial model.
/// A state with zero actions is treated as unexplored.
template <class G>
concept GameView = requires(const G &g, StateId s, std::size_t a) {
    { g.num_states() } -> std::convertible_to<std::size_t>;
    { g.num_actions(s) } -> std::convertible_to<std::size_t>;
    { g.owner(s) } -> std::same_as<Player>;
    { g.reward(s) } -> std::convertible_to<double>;
    { g.transitions(s, a) } -> std::convertible_to<std::span<const Transition>>;
};

static_assert(GameView<GameModel>);

/**
 * Maps a sorted subset of states to dense local indices. When the subset is
 * the full state range the mapping is the identity and lookups are O(1).
 */
class LocalIndex {
public:
    LocalIndex(std::span<const StateId> sorted_states, std::size_t universe)
        : states_(sorted_states), full_(sorted_states.size() == universe)
    {
    }

    std::size_t size() const noexcept { return states_.size(); }
    StateId global(std::size_t local) const noexcept { return states_[local]; }

    /// Local index of `s`, or size() if `s` is not in the subset.
    std::size_t find(StateId s) const noexcept
    {
        if (full_) return s < states_.size() ? s : states_.size();
        auto it = std::lower_bound(states_.begin(), states_.end(), s);
        return (it != states_.end() && *it == s) ? static_cast<std::size_t>(it - states_.begin()) : states_.size();
    }

    bool contains(StateId s) const noexcept { return find(s) != size(); }

private:
    std::span<const StateId> states_;
    bool full_;
};

inline std::vector<StateId> all_states(std::size_t n)
{
    std::vector<StateId> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<StateId>(i);
    return v;
}

}  // namespace tbsg
