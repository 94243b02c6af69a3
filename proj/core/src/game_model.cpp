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

#include "tbsg/game_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tbsg {

const char *to_string(Player p) noexcept
{
    return p == Player::Maximizer ? "MAX" : "MIN";
}

Distribution normalize_support(Distribution d)
{
    std::sort(d.begin(), d.end(), [](const Transition &a, const Transition &b) { return a.target < b.target; });
    Distribution out;
    out.reserve(d.size());
    for (const auto &t : d) {
        if (t.probability == 0.0) continue;
        if (!out.empty() && out.back().target == t.target)
            out.back().probability += t.probability;
        else
            out.push_back(t);
    }
    return out;
}

bool GameModel::is_absorbing(StateId s) const noexcept
{
    for (std::size_t a = 0; a < num_actions(s); ++a) {
        auto t = transitions(s, a);
        if (t.size() != 1 || t[0].target != s) return false;
    }
    return true;
}

double GameModel::min_reward() const noexcept
{
    return reward_.empty() ? 0.0 : *std::min_element(reward_.begin(), reward_.end());
}

double GameModel::max_reward() const noexcept
{
    return reward_.empty() ? 0.0 : *std::max_element(reward_.begin(), reward_.end());
}

GameModel build_game(std::vector<Player> owners, std::vector<std::vector<Distribution>> actions,
                     std::vector<double> rewards, StateId initial)
{
    const std::size_t n = owners.size();
    if (n == 0) throw ModelError(ModelErrorKind::InvalidArgument, "a game needs at least one state");
    if (actions.size() != n || rewards.size() != n)
        throw ModelError(ModelErrorKind::InvalidArgument, "owner, action and reward lists differ in length");
    if (initial >= n)
        throw ModelError(ModelErrorKind::InvalidArgument, "initial state " + std::to_string(initial) + " out of range",
                         initial);

    GameModel m;
    m.owner_ = std::move(owners);
    m.reward_ = std::move(rewards);
    m.initial_ = initial;
    m.action_begin_.reserve(n + 1);
    m.action_begin_.push_back(0);
    m.choice_begin_.push_back(0);

    for (std::size_t s = 0; s < n; ++s) {
        if (actions[s].empty())
            throw ModelError(ModelErrorKind::EmptyActionSet, "state " + std::to_string(s) + " has no actions",
                             static_cast<std::int64_t>(s));
        if (!std::isfinite(m.reward_[s]))
            throw ModelError(ModelErrorKind::InvalidArgument, "state " + std::to_string(s) + " has a non-finite reward",
                             static_cast<std::int64_t>(s));
        for (std::size_t a = 0; a < actions[s].size(); ++a) {
            Distribution d = normalize_support(std::move(actions[s][a]));
            double sum = 0.0;
            for (const auto &t : d) {
                if (t.target >= n)
                    throw ModelError(ModelErrorKind::DanglingTarget,
                                     "state " + std::to_string(s) + " action " + std::to_string(a) +
                                         " targets missing state " + std::to_string(t.target),
                                     static_cast<std::int64_t>(s), static_cast<std::int64_t>(a), t.target);
                if (!(t.probability > 0.0) || t.probability > 1.0 + kDistributionTolerance)
                    throw ModelError(ModelErrorKind::DistributionSumError,
                                     "state " + std::to_string(s) + " action " + std::to_string(a) +
                                         " has probability outside (0,1]",
                                     static_cast<std::int64_t>(s), static_cast<std::int64_t>(a), t.probability);
                sum += t.probability;
            }
            if (std::abs(sum - 1.0) > kDistributionTolerance)
                throw ModelError(ModelErrorKind::DistributionSumError,
                                 "state " + std::to_string(s) + " action " + std::to_string(a) + " sums to " +
                                     std::to_string(sum),
                                 static_cast<std::int64_t>(s), static_cast<std::int64_t>(a), sum);
            m.transitions_.insert(m.transitions_.end(), d.begin(), d.end());
            m.choice_begin_.push_back(m.transitions_.size());
        }
        m.action_begin_.push_back(m.choice_begin_.size() - 1);
    }

    // Predecessors by counting sort over targets.
    m.pred_begin_.assign(n + 1, 0);
    for (const auto &t : m.transitions_) ++m.pred_begin_[t.target + 1];
    for (std::size_t s = 0; s < n; ++s) m.pred_begin_[s + 1] += m.pred_begin_[s];
    m.predecessors_.resize(m.transitions_.size());
    std::vector<std::size_t> fill(m.pred_begin_.begin(), m.pred_begin_.end() - 1);
    for (StateId s = 0; s < n; ++s) {
        for (std::size_t a = 0; a < m.num_actions(s); ++a) {
            for (const auto &t : m.transitions(s, a))
                m.predecessors_[fill[t.target]++] = StateAction{s, static_cast<ActionIndex>(a)};
        }
    }
    return m;
}

std::vector<Distribution> copy_actions(const GameModel &model, StateId s)
{
    std::vector<Distribution> out;
    out.reserve(model.num_actions(s));
    for (std::size_t a = 0; a < model.num_actions(s); ++a) {
        auto t = model.transitions(s, a);
        out.emplace_back(t.begin(), t.end());
    }
    return out;
}

namespace {

Distribution remap(std::span<const Transition> d, const std::vector<StateId> &rep)
{
    Distribution out;
    out.reserve(d.size());
    for (const auto &t : d) out.push_back({rep[t.target], t.probability});
    return normalize_support(std::move(out));
}

}  // namespace

CollapseResult collapse(const GameModel &model, std::span<const CollapseSet> sets)
{
    const std::size_t n = model.num_states();
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> set_of(n, kNone);
    for (std::size_t k = 0; k < sets.size(); ++k) {
        for (StateId s : sets[k].states) {
            if (s >= n)
                throw ModelError(ModelErrorKind::InvalidArgument, "collapse set refers to missing state", s);
            if (set_of[s] != kNone)
                throw ModelError(ModelErrorKind::OverlappingSets,
                                 "state " + std::to_string(s) + " appears in more than one collapse set", s);
            set_of[s] = k;
        }
        for (const auto &e : sets[k].exits) {
            if (e.state >= n || set_of[e.state] != k || e.action >= model.num_actions(e.state))
                throw ModelError(ModelErrorKind::ForeignAction,
                                 "exit (" + std::to_string(e.state) + ", " + std::to_string(e.action) +
                                     ") does not originate in its collapse set",
                                 e.state, e.action);
        }
    }

    CollapseResult result;
    auto &rep = result.map.representative;
    rep.assign(n, 0);
    std::vector<StateId> set_rep(sets.size(), std::numeric_limits<StateId>::max());
    std::vector<StateId> origin;  // new state -> first original state
    std::vector<std::size_t> origin_set;
    for (StateId s = 0; s < n; ++s) {
        std::size_t k = set_of[s];
        if (k == kNone) {
            rep[s] = static_cast<StateId>(origin.size());
            origin.push_back(s);
            origin_set.push_back(kNone);
        } else {
            if (set_rep[k] == std::numeric_limits<StateId>::max()) {
                set_rep[k] = static_cast<StateId>(origin.size());
                origin.push_back(s);
                origin_set.push_back(k);
            }
            rep[s] = set_rep[k];
        }
    }

    const std::size_t m = origin.size();
    std::vector<Player> owners(m);
    std::vector<double> rewards(m);
    std::vector<std::vector<Distribution>> actions(m);
    for (StateId ns = 0; ns < m; ++ns) {
        StateId s = origin[ns];
        std::size_t k = origin_set[ns];
        if (k == kNone) {
            owners[ns] = model.owner(s);
            rewards[ns] = model.reward(s);
            for (std::size_t a = 0; a < model.num_actions(s); ++a)
                actions[ns].push_back(remap(model.transitions(s, a), rep));
            continue;
        }
        const CollapseSet &set = sets[k];
        owners[ns] = set.owner.value_or(model.owner(s));
        rewards[ns] = set.reward.value_or(model.reward(s));
        for (const auto &e : set.exits) {
            Distribution d = remap(model.transitions(e.state, e.action), rep);
            double self = 0.0;
            for (const auto &t : d)
                if (t.target == ns) self = t.probability;
            if (self >= 1.0 - kDistributionTolerance) continue;
            if (self > 0.0) {
                Distribution rest;
                for (const auto &t : d)
                    if (t.target != ns) rest.push_back({t.target, t.probability / (1.0 - self)});
                d = std::move(rest);
            }
            if (std::find(actions[ns].begin(), actions[ns].end(), d) == actions[ns].end())
                actions[ns].push_back(std::move(d));
        }
        if (set.keep_stay || actions[ns].empty()) actions[ns].push_back(Distribution{{ns, 1.0}});
    }

    for (const auto &set : sets) {
        std::vector<StateId> members = set.states;
        std::sort(members.begin(), members.end());
        result.map.collapsed_sets.push_back(std::move(members));
    }
    result.model = build_game(std::move(owners), std::move(actions), std::move(rewards), rep[model.initial()]);
    return result;
}

GameModel induced_mdp(const GameModel &model, Player fixed, const PartialStrategy &strategy)
{
    const std::size_t n = model.num_states();
    std::vector<Player> owners(model.owners().begin(), model.owners().end());
    std::vector<double> rewards(model.rewards().begin(), model.rewards().end());
    std::vector<std::vector<Distribution>> actions(n);
    for (StateId s = 0; s < n; ++s) {
        if (model.owner(s) != fixed) {
            actions[s] = copy_actions(model, s);
            continue;
        }
        std::optional<ActionIndex> choice = s < strategy.size() ? strategy[s] : std::nullopt;
        if (!choice && model.num_actions(s) == 1) choice = 0;
        if (!choice || *choice >= model.num_actions(s))
            throw ModelError(ModelErrorKind::MissingChoice, "no valid choice for state " + std::to_string(s), s);
        auto t = model.transitions(s, *choice);
        actions[s].emplace_back(t.begin(), t.end());
    }
    return build_game(std::move(owners), std::move(actions), std::move(rewards), model.initial());
}

}  // namespace tbsg
