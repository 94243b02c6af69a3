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

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tbsg/game_model.hpp"
#include "tbsg/objective.hpp"

namespace tbsg {

using StatePredicate = std::function<bool(StateId)>;

/// Named state sets, each sorted ascending.
using Labels = std::map<std::string, std::vector<StateId>, std::less<>>;

/**
 * On-demand access to a game. Partial exploration asks only for the states
 * it visits, so generator-backed sources never build unexplored regions.
 */
class GameSource {
public:
    virtual ~GameSource() = default;

    virtual StateId initial() const = 0;
    virtual Player owner(StateId s) const = 0;
    virtual double reward(StateId s) const = 0;
    /// Validated distributions with supports sorted by target.
    virtual std::vector<Distribution> actions(StateId s) const = 0;
    /// Bounds on every reward of the game.
    virtual RewardRange reward_range() const = 0;
    /// Number of states when known up front.
    virtual std::optional<std::size_t> num_states() const { return std::nullopt; }
    /// Membership test of a named label, or nullopt if the label is unknown.
    virtual std::optional<StatePredicate> label(std::string_view name) const;
};

/// Source over an explicit model; keeps a reference to `model`.
class ModelSource final : public GameSource {
public:
    explicit ModelSource(const GameModel &model, Labels labels = {});

    StateId initial() const override { return model_.initial(); }
    Player owner(StateId s) const override { return model_.owner(s); }
    double reward(StateId s) const override { return model_.reward(s); }
    std::vector<Distribution> actions(StateId s) const override { return copy_actions(model_, s); }
    RewardRange reward_range() const override { return {model_.min_reward(), model_.max_reward()}; }
    std::optional<std::size_t> num_states() const override { return model_.num_states(); }
    std::optional<StatePredicate> label(std::string_view name) const override;

private:
    const GameModel &model_;
    Labels labels_;
};

/// Same game with the owner of every state swapped.
class SwappedSource final : public GameSource {
public:
    explicit SwappedSource(const GameSource &inner) : inner_(inner) {}

    StateId initial() const override { return inner_.initial(); }
    Player owner(StateId s) const override { return opponent(inner_.owner(s)); }
    double reward(StateId s) const override { return inner_.reward(s); }
    std::vector<Distribution> actions(StateId s) const override { return inner_.actions(s); }
    RewardRange reward_range() const override { return inner_.reward_range(); }
    std::optional<std::size_t> num_states() const override { return inner_.num_states(); }
    std::optional<StatePredicate> label(std::string_view name) const override { return inner_.label(name); }

private:
    const GameSource &inner_;
};

/// Predicate backed by a sorted state list.
StatePredicate membership(std::vector<StateId> sorted_states);

/**
 * Materializes states 0..n-1 of a source with a known state count.
 * Throws ModelError(InvalidArgument) when the count is unknown.
 */
GameModel materialize(const GameSource &source);

}  // namespace tbsg
