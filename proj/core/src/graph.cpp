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

#include "tbsg/graph.hpp"

#include <deque>

namespace tbsg {
namespace detail {

std::vector<std::uint32_t> tarjan(std::size_t nodes, std::span<const std::size_t> begin,
                                  std::span<const std::uint32_t> targets, std::span<const char> alive,
                                  std::uint32_t &component_count)
{
    constexpr std::uint32_t kUnvisited = 0xffffffffu;
    std::vector<std::uint32_t> index(nodes, kUnvisited);
    std::vector<std::uint32_t> low(nodes, 0);
    std::vector<char> on_stack(nodes, 0);
    std::vector<std::uint32_t> comp(nodes, kNoComponent);
    std::vector<std::uint32_t> stack;
    struct Frame {
        std::uint32_t node;
        std::size_t edge;
    };
    std::vector<Frame> call;
    std::uint32_t counter = 0;
    component_count = 0;

    for (std::uint32_t root = 0; root < nodes; ++root) {
        if (!alive[root] || index[root] != kUnvisited) continue;
        call.push_back({root, begin[root]});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            Frame &f = call.back();
            std::uint32_t v = f.node;
            if (f.edge < begin[v + 1]) {
                std::uint32_t w = targets[f.edge++];
                if (w >= nodes || !alive[w]) continue;
                if (index[w] == kUnvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, begin[w]});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::uint32_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = component_count;
                } while (w != v);
                ++component_count;
            }
            call.pop_back();
            if (!call.empty()) {
                std::uint32_t parent = call.back().node;
                low[parent] = std::min(low[parent], low[v]);
            }
        }
    }
    return comp;
}

}  // namespace detail

std::vector<char> attractor(const GameModel &model, std::span<const StateId> target, AttractorMode mode)
{
    const std::size_t n = model.num_states();
    std::vector<char> in(n, 0);
    std::vector<std::uint32_t> missing(model.num_choices());
    std::vector<std::uint32_t> good(n, 0);
    for (StateId s = 0; s < n; ++s)
        for (std::size_t a = 0; a < model.num_actions(s); ++a)
            missing[model.choice_index(s, a)] = static_cast<std::uint32_t>(model.transitions(s, a).size());

    std::deque<StateId> queue;
    for (StateId t : target) {
        if (!in[t]) {
            in[t] = 1;
            queue.push_back(t);
        }
    }
    auto needs_one = [&](StateId s) {
        if (mode == AttractorMode::Sure) return false;
        Player p = mode == AttractorMode::Maximizer ? Player::Maximizer : Player::Minimizer;
        return model.owner(s) == p;
    };
    while (!queue.empty()) {
        StateId t = queue.front();
        queue.pop_front();
        for (const auto &pred : model.predecessors(t)) {
            if (in[pred.state]) continue;
            if (--missing[model.choice_index(pred.state, pred.action)] != 0) continue;
            ++good[pred.state];
            if (needs_one(pred.state) || good[pred.state] == model.num_actions(pred.state)) {
                in[pred.state] = 1;
                queue.push_back(pred.state);
            }
        }
    }
    return in;
}

namespace {

std::vector<char> mask_of(std::size_t n, std::span<const StateId> states)
{
    std::vector<char> m(n, 0);
    for (StateId s : states) m[s] = 1;
    return m;
}

// States of `arena` from which Maximizer reaches `goal` with positive
// probability. With `internal_only`, Maximizer may only use actions whose
// support stays inside the arena.
std::vector<char> positive_reach(const GameModel &model, const std::vector<char> &arena, const std::vector<char> &goal,
                                 bool internal_only)
{
    const std::size_t n = model.num_states();
    std::vector<char> win(n, 0);
    std::vector<char> hit(model.num_choices(), 0);
    std::vector<std::uint32_t> good(n, 0);
    std::deque<StateId> queue;
    for (StateId s = 0; s < n; ++s) {
        if (goal[s]) {
            win[s] = 1;
            queue.push_back(s);
        }
    }
    auto usable = [&](StateId s, std::size_t a) {
        if (!internal_only || model.owner(s) != Player::Maximizer) return true;
        for (const auto &t : model.transitions(s, a))
            if (!arena[t.target]) return false;
        return true;
    };
    while (!queue.empty()) {
        StateId t = queue.front();
        queue.pop_front();
        for (const auto &pred : model.predecessors(t)) {
            StateId s = pred.state;
            if (win[s] || !arena[s]) continue;
            std::size_t c = model.choice_index(s, pred.action);
            if (hit[c] || !usable(s, pred.action)) continue;
            hit[c] = 1;
            ++good[s];
            if (model.owner(s) == Player::Maximizer || good[s] == model.num_actions(s)) {
                win[s] = 1;
                queue.push_back(s);
            }
        }
    }
    return win;
}

}  // namespace

QualitativeSets qualitative_reach(const GameModel &model, std::span<const StateId> goal,
                                  std::span<const StateId> unsafe)
{
    const std::size_t n = model.num_states();
    auto goal_mask = mask_of(n, goal);
    auto unsafe_mask = mask_of(n, unsafe);
    for (StateId s = 0; s < n; ++s)
        if (goal_mask[s] && unsafe_mask[s])
            throw ModelError(ModelErrorKind::InvalidArgument, "goal and unsafe sets overlap", s);

    std::vector<char> arena(n, 0);
    for (StateId s = 0; s < n; ++s) arena[s] = unsafe_mask[s] ? 0 : 1;

    QualitativeSets out;
    auto positive = positive_reach(model, arena, goal_mask, false);
    for (StateId s = 0; s < n; ++s)
        if (!positive[s]) out.value0.push_back(s);

    // Almost-sure reachability: repeatedly remove states from which
    // Minimizer (or chance) can push the play out of the candidate arena.
    std::vector<char> cand = positive;
    for (;;) {
        auto reach = positive_reach(model, cand, goal_mask, true);
        std::vector<char> out_mask(n, 0);
        std::deque<StateId> queue;
        for (StateId s = 0; s < n; ++s) {
            if (!cand[s] || !reach[s]) {
                out_mask[s] = 1;
                queue.push_back(s);
            }
        }
        std::vector<char> tainted(model.num_choices(), 0);
        std::vector<std::uint32_t> bad(n, 0);
        while (!queue.empty()) {
            StateId t = queue.front();
            queue.pop_front();
            for (const auto &pred : model.predecessors(t)) {
                StateId s = pred.state;
                if (out_mask[s] || goal_mask[s]) continue;
                std::size_t c = model.choice_index(s, pred.action);
                if (tainted[c]) continue;
                tainted[c] = 1;
                ++bad[s];
                if (model.owner(s) == Player::Minimizer || bad[s] == model.num_actions(s)) {
                    out_mask[s] = 1;
                    queue.push_back(s);
                }
            }
        }
        bool removed = false;
        for (StateId s = 0; s < n; ++s) {
            if (cand[s] && out_mask[s]) removed = true;
            cand[s] = out_mask[s] ? 0 : 1;
        }
        if (!removed) break;
    }
    for (StateId s = 0; s < n; ++s)
        if (cand[s]) out.value1.push_back(s);
    return out;
}

}  // namespace tbsg
