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

#include "tbsg/game_source.hpp"

#include <algorithm>

namespace tbsg {

std::optional<StatePredicate> GameSource::label(std::string_view) const
{
    return std::nullopt;
}

ModelSource::ModelSource(const GameModel &model, Labels labels) : model_(model), labels_(std::move(labels)) {}

std::optional<StatePredicate> ModelSource::label(std::string_view name) const
{
    auto it = labels_.find(name);
    if (it == labels_.end()) return std::nullopt;
    return membership(it->second);
}

StatePredicate membership(std::vector<StateId> sorted_states)
{
    std::sort(sorted_states.begin(), sorted_states.end());
    return [states = std::move(sorted_states)](StateId s) {
        return std::binary_search(states.begin(), states.end(), s);
    };
}

GameModel materialize(const GameSource &source)
{
    auto n = source.num_states();
    if (!n) throw ModelError(ModelErrorKind::InvalidArgument, "source does not know its state count");
    std::vector<Player> owners(*n);
    std::vector<double> rewards(*n);
    std::vector<std::vector<Distribution>> actions(*n);
    for (StateId s = 0; s < *n; ++s) {
        owners[s] = source.owner(s);
        rewards[s] = source.reward(s);
        actions[s] = source.actions(s);
    }
    return build_game(std::move(owners), std::move(actions), std::move(rewards), source.initial());
}

}  // namespace tbsg
