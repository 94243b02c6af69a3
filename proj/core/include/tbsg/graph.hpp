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
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tbsg/game_model.hpp"
#include "tbsg/game_view.hpp"

namespace tbsg {

/**
 * Pair (R, B): every action in B stays inside R and R is strongly connected
 * through B. `states` is sorted, `actions[i]` lists the B-actions of
 * `states[i]` in ascending order.
 */
struct EndComponent {
    std::vector<StateId> states;
    std::vector<std::vector<ActionIndex>> actions;

    std::size_t size() const noexcept { return states.size(); }
    bool contains(StateId s) const noexcept { return std::binary_search(states.begin(), states.end(), s); }
    std::size_t index_of(StateId s) const noexcept
    {
        return static_cast<std::size_t>(std::lower_bound(states.begin(), states.end(), s) - states.begin());
    }

    friend bool operator==(const EndComponent &, const EndComponent &) = default;
};

struct MecDecomposition {
    std::vector<EndComponent> mecs;
    std::vector<std::optional<std::uint32_t>> membership;
};

namespace detail {

/**
 * Iterative Tarjan on a local graph in CSR form. Nodes with alive[i] == 0 are
 * skipped. Returns the component id of every node (unset for dead nodes);
 * ids are assigned in reverse topological order.
 */
std::vector<std::uint32_t> tarjan(std::size_t nodes, std::span<const std::size_t> begin,
                                  std::span<const std::uint32_t> targets, std::span<const char> alive,
                                  std::uint32_t &component_count);

inline constexpr std::uint32_t kNoComponent = 0xffffffffu;

}  // namespace detail

/**
 * SCCs of the graph induced by `scope` (sorted) using actions accepted by
 * `allowed`. Edges leaving the scope are ignored. Components come out in
 * reverse topological order: a component precedes everything that can
 * reach it.
 */
template <GameView G, class Filter>
std::vector<std::vector<StateId>> scc_decompose(const G &g, std::span<const StateId> scope, Filter allowed)
{
    LocalIndex idx(scope, g.num_states());
    const std::size_t k = idx.size();
    std::vector<std::size_t> begin(k + 1, 0);
    std::vector<std::uint32_t> targets;
    for (std::size_t i = 0; i < k; ++i) {
        StateId s = idx.global(i);
        for (std::size_t a = 0; a < g.num_actions(s); ++a) {
            if (!allowed(s, static_cast<ActionIndex>(a))) continue;
            for (const auto &t : g.transitions(s, a)) {
                std::size_t j = idx.find(t.target);
                if (j != k) targets.push_back(static_cast<std::uint32_t>(j));
            }
        }
        begin[i + 1] = targets.size();
    }
    std::vector<char> alive(k, 1);
    std::uint32_t count = 0;
    auto comp = detail::tarjan(k, begin, targets, alive, count);
    std::vector<std::vector<StateId>> out(count);
    for (std::size_t i = 0; i < k; ++i) out[comp[i]].push_back(idx.global(i));
    return out;
}

template <GameView G>
std::vector<std::vector<StateId>> scc_decompose(const G &g)
{
    auto scope = all_states(g.num_states());
    return scc_decompose(g, scope, [](StateId, ActionIndex) { return true; });
}

/**
 * Maximal end components inside `scope` (sorted) using only actions accepted
 * by `allowed`. Actions with a successor outside the scope are pruned, not
 * rejected. Standard refinement: SCC decomposition, prune actions leaving
 * their SCC, drop states without actions, repeat until stable.
 * Output is ordered by smallest member state.
 */
template <GameView G, class Filter>
std::vector<EndComponent> mec_decompose(const G &g, std::span<const StateId> scope, Filter allowed)
{
    LocalIndex idx(scope, g.num_states());
    const std::size_t k = idx.size();
    std::vector<std::vector<ActionIndex>> acts(k);
    std::vector<char> alive(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        StateId s = idx.global(i);
        for (std::size_t a = 0; a < g.num_actions(s); ++a) {
            if (!allowed(s, static_cast<ActionIndex>(a))) continue;
            bool inside = true;
            for (const auto &t : g.transitions(s, a)) {
                if (!idx.contains(t.target)) {
                    inside = false;
                    break;
                }
            }
            if (inside) acts[i].push_back(static_cast<ActionIndex>(a));
        }
        alive[i] = acts[i].empty() ? 0 : 1;
    }

    std::vector<std::size_t> begin(k + 1, 0);
    std::vector<std::uint32_t> targets;
    std::vector<std::uint32_t> comp;
    for (;;) {
        targets.clear();
        for (std::size_t i = 0; i < k; ++i) {
            if (alive[i]) {
                StateId s = idx.global(i);
                for (ActionIndex a : acts[i])
                    for (const auto &t : g.transitions(s, a)) targets.push_back(static_cast<std::uint32_t>(idx.find(t.target)));
            }
            begin[i + 1] = targets.size();
        }
        std::uint32_t count = 0;
        comp = detail::tarjan(k, begin, targets, alive, count);

        bool changed = false;
        for (std::size_t i = 0; i < k; ++i) {
            if (!alive[i]) continue;
            StateId s = idx.global(i);
            auto &list = acts[i];
            auto keep = std::remove_if(list.begin(), list.end(), [&](ActionIndex a) {
                for (const auto &t : g.transitions(s, a)) {
                    std::size_t j = idx.find(t.target);
                    if (!alive[j] || comp[j] != comp[i]) return true;
                }
                return false;
            });
            if (keep != list.end()) {
                list.erase(keep, list.end());
                changed = true;
            }
            if (list.empty()) {
                alive[i] = 0;
                changed = true;
            }
        }
        if (!changed) break;
    }

    std::vector<EndComponent> out;
    std::vector<std::uint32_t> slot(k, detail::kNoComponent);
    std::vector<std::uint32_t> comp_slot;
    for (std::size_t i = 0; i < k; ++i) {
        if (!alive[i]) continue;
        std::uint32_t c = comp[i];
        if (c >= comp_slot.size()) comp_slot.resize(c + 1, detail::kNoComponent);
        if (comp_slot[c] == detail::kNoComponent) {
            comp_slot[c] = static_cast<std::uint32_t>(out.size());
            out.emplace_back();
        }
        auto &ec = out[comp_slot[c]];
        ec.states.push_back(idx.global(i));
        ec.actions.push_back(std::move(acts[i]));
    }
    return out;
}

template <GameView G>
std::vector<EndComponent> mec_decompose(const G &g, std::span<const StateId> scope)
{
    return mec_decompose(g, scope, [](StateId, ActionIndex) { return true; });
}

/// Full decomposition with per-state membership.
template <GameView G>
MecDecomposition mec_decompose(const G &g)
{
    auto scope = all_states(g.num_states());
    MecDecomposition d;
    d.mecs = mec_decompose(g, scope);
    d.membership.assign(g.num_states(), std::nullopt);
    for (std::uint32_t m = 0; m < d.mecs.size(); ++m)
        for (StateId s : d.mecs[m].states) d.membership[s] = m;
    return d;
}

/**
 * Returns the player that alone decides inside `ec`: every state of the
 * other player in the EC has exactly one available action. When both
 * players qualify, a player owning a state with several actions wins,
 * otherwise the owner of the first state.
 */
template <GameView G>
std::optional<Player> controlled_ec(const G &g, const EndComponent &ec)
{
    bool max_has_choice = false;
    bool min_has_choice = false;
    for (StateId s : ec.states) {
        if (g.num_actions(s) <= 1) continue;
        (g.owner(s) == Player::Maximizer ? max_has_choice : min_has_choice) = true;
    }
    if (max_has_choice && min_has_choice) return std::nullopt;
    if (max_has_choice) return Player::Maximizer;
    if (min_has_choice) return Player::Minimizer;
    return ec.states.empty() ? std::nullopt : std::optional<Player>(g.owner(ec.states.front()));
}

/// Forces the reachability of `target`.
enum class AttractorMode { Maximizer, Minimizer, Sure };

/**
 * Backward fixpoint over predecessors. In player mode, states of that player
 * need one action whose successors all lie in the attractor, the other
 * player's states need all actions to do so. In Sure mode every action must.
 */
std::vector<char> attractor(const GameModel &model, std::span<const StateId> target, AttractorMode mode);

struct QualitativeSets {
    std::vector<StateId> value1;
    std::vector<StateId> value0;
};

/**
 * Graph-based value-0 and value-1 states for Maximizer reaching `goal` while
 * avoiding `unsafe` (both treated as absorbing). value0: Maximizer cannot
 * reach goal with positive probability. value1: Maximizer reaches goal
 * almost surely.
 */
QualitativeSets qualitative_reach(const GameModel &model, std::span<const StateId> goal,
                                  std::span<const StateId> unsafe);

}  // namespace tbsg
