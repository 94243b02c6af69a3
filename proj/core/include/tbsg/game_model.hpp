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
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tbsg/errors.hpp"

namespace tbsg {

using StateId = std::uint32_t;
using ActionIndex = std::uint32_t;

inline constexpr double kDistributionTolerance = 1e-12;

enum class Player : std::uint8_t { Maximizer, Minimizer };

constexpr Player opponent(Player p) noexcept
{
    return p == Player::Maximizer ? Player::Minimizer : Player::Maximizer;
}

const char *to_string(Player p) noexcept;

struct Transition {
    StateId target;
    double probability;

    friend bool operator==(const Transition &, const Transition &) = default;
};

using Distribution = std::vector<Transition>;

/**
 * Sorts by target, merges duplicate targets and drops zero entries.
 * Does not check the sum.
 */
Distribution normalize_support(Distribution d);

struct StateAction {
    StateId state;
    ActionIndex action;

    friend bool operator==(const StateAction &, const StateAction &) = default;
    friend auto operator<=>(const StateAction &, const StateAction &) = default;
};

/**
 * Immutable turn-based stochastic game in compressed sparse layout.
 *
 * Every state owns at least one action; every action is a distribution over
 * states with support sorted by state index. Predecessor lists are the exact
 * inverse of the transition relation.
 */
class GameModel {
public:
    GameModel() = default;

    std::size_t num_states() const noexcept { return owner_.size(); }
    std::size_t num_actions(StateId s) const noexcept { return action_begin_[s + 1] - action_begin_[s]; }
    std::size_t num_choices() const noexcept { return choice_begin_.empty() ? 0 : choice_begin_.size() - 1; }
    std::size_t num_transitions() const noexcept { return transitions_.size(); }
    /// Dense index of the pair (s, action) over all state-action pairs.
    std::size_t choice_index(StateId s, std::size_t action) const noexcept { return action_begin_[s] + action; }

    Player owner(StateId s) const noexcept { return owner_[s]; }
    double reward(StateId s) const noexcept { return reward_[s]; }
    StateId initial() const noexcept { return initial_; }

    std::span<const Transition> transitions(StateId s, std::size_t action) const noexcept
    {
        std::size_t c = action_begin_[s] + action;
        return {transitions_.data() + choice_begin_[c], choice_begin_[c + 1] - choice_begin_[c]};
    }

    /// (state, action) pairs with a positive-probability transition into `s`.
    std::span<const StateAction> predecessors(StateId s) const noexcept
    {
        return {predecessors_.data() + pred_begin_[s], pred_begin_[s + 1] - pred_begin_[s]};
    }

    std::span<const Player> owners() const noexcept { return owner_; }
    std::span<const double> rewards() const noexcept { return reward_; }

    /// True iff every action of `s` is a pure self-loop.
    bool is_absorbing(StateId s) const noexcept;

    double min_reward() const noexcept;
    double max_reward() const noexcept;

    friend GameModel build_game(std::vector<Player> owners, std::vector<std::vector<Distribution>> actions,
                                std::vector<double> rewards, StateId initial);

private:
    std::vector<Player> owner_;
    std::vector<double> reward_;
    std::vector<std::size_t> action_begin_;
    std::vector<std::size_t> choice_begin_;
    std::vector<Transition> transitions_;
    std::vector<std::size_t> pred_begin_;
    std::vector<StateAction> predecessors_;
    StateId initial_ = 0;
};

/**
 * Validates and builds a game. Distributions are normalized (sorted, merged,
 * zero entries dropped) before the sum check.
 *
 * Throws ModelError with kind EmptyActionSet, DistributionSumError or
 * DanglingTarget; InvalidArgument for mismatched list lengths.
 */
GameModel build_game(std::vector<Player> owners, std::vector<std::vector<Distribution>> actions,
                     std::vector<double> rewards, StateId initial);

/// Copies the actions of a state into owned distributions.
std::vector<Distribution> copy_actions(const GameModel &model, StateId s);

struct CollapseSet {
    std::vector<StateId> states;
    /// Actions kept on the representative. Targets inside the set are
    /// redirected to the representative.
    std::vector<StateAction> exits;
    /// Install an explicit "remain forever" self-loop on the representative.
    bool keep_stay = false;
    /// Owner of the representative; defaults to the owner of the first state.
    std::optional<Player> owner;
    /// Reward of the representative; defaults to the reward of the first state.
    std::optional<double> reward;
};

struct CollapseMap {
    std::vector<StateId> representative;
    std::vector<std::vector<StateId>> collapsed_sets;
};

struct CollapseResult {
    GameModel model;
    CollapseMap map;
};

/**
 * Replaces each set by a single representative state.
 *
 * Retained exits keep their external mass; partial self-loop mass on the
 * representative is redistributed proportionally onto the other targets.
 * An exit that degenerates into a pure self-loop is dropped. A set left
 * without actions (or with keep_stay) gets a single self-loop.
 *
 * Throws ModelError with kind OverlappingSets or ForeignAction.
 */
CollapseResult collapse(const GameModel &model, std::span<const CollapseSet> sets);

/// Partial strategy: state -> chosen action, unset entries are free.
using PartialStrategy = std::vector<std::optional<ActionIndex>>;

/**
 * Keeps only the chosen action on every state owned by `fixed`.
 * Throws ModelError(MissingChoice) when such a state has no choice.
 */
GameModel induced_mdp(const GameModel &model, Player fixed, const PartialStrategy &strategy);

}  // namespace tbsg
