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

#include "tbsg/ce_solver.hpp"

#include <algorithm>
#include <optional>

#include "tbsg/ec_analysis.hpp"
#include "tbsg/graph.hpp"

namespace tbsg {
namespace {

struct Prepared {
    GameModel model;
    /// Original state -> state of `model`.
    std::vector<StateId> representative;
    std::vector<char> fixed;
    BoundsVector bounds;
    std::size_t collapsed_states = 0;
};

std::vector<StateId> compose(const std::vector<StateId> &first, const std::vector<StateId> &second)
{
    std::vector<StateId> out(first.size());
    for (std::size_t i = 0; i < first.size(); ++i) out[i] = second[first[i]];
    return out;
}

bool uniform_rewards(const GameModel &m, const EndComponent &ec)
{
    for (StateId s : ec.states)
        if (m.reward(s) != m.reward(ec.states.front())) return false;
    return true;
}

// Sends goal and sink regions to two absorbing representatives.
CollapseResult remap_targets(const GameModel &model, const Objective &objective, bool qualitative,
                             std::optional<StateId> &goal_rep)
{
    const std::size_t n = model.num_states();
    std::vector<char> goal(n, 0), sink(n, 0);
    for (StateId s : objective.goal) goal[s] = 1;
    for (StateId s : objective.avoid) sink[s] = 1;
    if (qualitative) {
        auto q = qualitative_reach(model, objective.goal, objective.avoid);
        for (StateId s : q.value1) goal[s] = 1;
        for (StateId s : q.value0) sink[s] = 1;
    }
    std::vector<CollapseSet> sets;
    CollapseSet g, z;
    g.keep_stay = z.keep_stay = true;
    for (StateId s = 0; s < n; ++s) {
        if (goal[s])
            g.states.push_back(s);
        else if (sink[s])
            z.states.push_back(s);
    }
    std::optional<StateId> goal_member;
    if (!g.states.empty()) {
        goal_member = g.states.front();
        sets.push_back(std::move(g));
    }
    if (!z.states.empty()) sets.push_back(std::move(z));
    auto result = collapse(model, sets);
    if (goal_member) goal_rep = result.map.representative[*goal_member];
    return result;
}

Prepared prepare(const GameModel &model, const Objective &objective, const CeOptions &options)
{
    const bool reach = objective.kind == ObjectiveKind::Reachability;
    std::optional<StateId> goal_rep;
    Prepared p;
    GameModel stage;
    if (reach) {
        auto r = remap_targets(model, objective, options.qualitative, goal_rep);
        stage = std::move(r.model);
        p.representative = std::move(r.map.representative);
    } else {
        stage = model;
        p.representative = all_states(model.num_states());
    }

    // Controlled end components: a single player decides, so the component
    // is worth its best exit (or, for mean payoff, its uniform reward).
    if (options.collapse_controlled) {
        std::vector<StateId> scope;
        for (StateId s = 0; s < stage.num_states(); ++s)
            if (!stage.is_absorbing(s)) scope.push_back(s);
        std::vector<CollapseSet> sets;
        for (auto &ec : mec_decompose(stage, std::span<const StateId>(scope))) {
            auto controller = controlled_ec(stage, ec);
            if (!controller) continue;
            CollapseSet set;
            for (StateId s : ec.states) {
                if (stage.owner(s) != *controller) continue;
                for (std::size_t a = 0; a < stage.num_actions(s); ++a) {
                    for (const auto &t : stage.transitions(s, a)) {
                        if (!ec.contains(t.target)) {
                            set.exits.push_back({s, static_cast<ActionIndex>(a)});
                            break;
                        }
                    }
                }
            }
            if (reach) {
                // Staying never reaches the goal; Maximizer leaves, Minimizer
                // stays and the component is value 0 (kept as an absorbing
                // representative).
                if (*controller == Player::Maximizer && set.exits.empty()) continue;
                if (*controller == Player::Minimizer) set.exits.clear();
                set.keep_stay = *controller == Player::Minimizer;
            } else {
                if (ec.size() < 2 || !uniform_rewards(stage, ec)) continue;
                set.keep_stay = true;
            }
            set.owner = *controller;
            set.reward = stage.reward(ec.states.front());
            p.collapsed_states += ec.size();
            set.states = ec.states;
            sets.push_back(std::move(set));
        }
        if (!sets.empty()) {
            auto r = collapse(stage, sets);
            if (goal_rep) goal_rep = r.map.representative[*goal_rep];
            p.representative = compose(p.representative, r.map.representative);
            stage = std::move(r.model);
        }
    }

    const std::size_t n = stage.num_states();
    RewardRange range = reward_range(model, objective);
    p.bounds = BoundsVector(n, range.min, range.max);
    p.fixed.assign(n, 0);
    for (StateId s = 0; s < n; ++s) {
        if (!stage.is_absorbing(s)) continue;
        double v = reach ? (goal_rep && *goal_rep == s ? 1.0 : 0.0) : stage.reward(s);
        p.bounds.lower[s] = p.bounds.upper[s] = v;
        p.fixed[s] = 1;
    }
    p.model = std::move(stage);
    return p;
}

bool region_converged(const BoundsVector &b, const EndComponent &ec, double epsilon)
{
    for (StateId s : ec.states)
        if (!converged(b, s, epsilon)) return false;
    return true;
}

SolveResult solve_reach_or_mp(const GameModel &model, const Objective &objective, double epsilon,
                              const CeOptions &options)
{
    Prepared p = prepare(model, objective, options);
    const GameModel &m = p.model;
    const std::size_t n = m.num_states();
    BoundsVector &b = p.bounds;

    SolveResult result;
    result.stats.collapsed_states = p.collapsed_states;
    result.stats.states_explored = model.num_states();

    StayObjective stay;
    stay.mean_payoff = objective.kind == ObjectiveKind::MeanPayoff;
    stay.range = reward_range(model, objective);
    const double floor = epsilon / 4.0;

    std::vector<MecTracker> trackers;
    if (options.use_trackers) {
        std::vector<StateId> scope;
        for (StateId s = 0; s < n; ++s)
            if (!p.fixed[s]) scope.push_back(s);
        for (auto &ec : mec_decompose(m, std::span<const StateId>(scope)))
            trackers.emplace_back(std::move(ec), std::max((stay.range.max - stay.range.min) / 8.0, floor));
    }
    result.stats.trackers = trackers.size();

    std::vector<StateId> original = all_states(model.num_states());
    BoundsVector view;
    auto notify = [&](std::size_t iteration) {
        if (!options.observer) return;
        view = BoundsVector(model.num_states(), 0.0, 0.0);
        for (StateId s = 0; s < model.num_states(); ++s) {
            view.lower[s] = b.lower[p.representative[s]];
            view.upper[s] = b.upper[p.representative[s]];
        }
        options.observer(IterationSnapshot{iteration, original, view});
    };
    notify(0);

    const StateId init = m.initial();
    std::size_t sweeps = 0;
    while (!converged(b, init, epsilon)) {
        if (sweeps >= options.max_sweeps) {
            result.budget_exceeded = true;
            break;
        }
        for (StateId s = 0; s < n; ++s) {
            if (p.fixed[s]) continue;
            double lo = bellman_value(m, s, std::span<const double>(b.lower));
            double hi = bellman_value(m, s, std::span<const double>(b.upper));
            if (lo > b.lower[s]) b.lower[s] = std::min(lo, b.upper[s]);
            if (hi < b.upper[s]) b.upper[s] = std::max(hi, b.lower[s]);
        }
        result.stats.bellman_updates += n;
        ++sweeps;
        for (auto &t : trackers) {
            bool stale = t.refresh(m, b);
            if (!stale && region_converged(b, t.mec(), epsilon)) continue;
            ++result.stats.tracker_runs;
            if (t.process(m, b, stay, floor)) ++result.stats.bound_changes;
        }
        notify(sweeps);
    }

    for (const auto &t : trackers) {
        for (const auto &c : t.deflated()) result.stats.stay_iterations += c.stay.iterations;
        for (const auto &c : t.inflated()) result.stats.stay_iterations += c.stay.iterations;
    }
    result.iterations = sweeps;
    result.lower = b.lower[init];
    result.upper = b.upper[init];
    result.value = midpoint(b, init);
    result.states = std::move(original);
    result.bounds = BoundsVector(model.num_states(), 0.0, 0.0);
    for (StateId s = 0; s < model.num_states(); ++s) {
        result.bounds.lower[s] = b.lower[p.representative[s]];
        result.bounds.upper[s] = b.upper[p.representative[s]];
    }
    return result;
}

void complement(SolveResult &r)
{
    double lo = 1.0 - r.upper, hi = 1.0 - r.lower;
    r.lower = lo;
    r.upper = hi;
    r.value = 1.0 - r.value;
    for (std::size_t i = 0; i < r.bounds.size(); ++i) {
        double l = 1.0 - r.bounds.upper[i], u = 1.0 - r.bounds.lower[i];
        r.bounds.lower[i] = l;
        r.bounds.upper[i] = u;
    }
}

}  // namespace

SolveResult solve_ce(const GameModel &model, const Objective &objective, double epsilon, const CeOptions &options)
{
    if (!(epsilon > 0.0)) throw ModelError(ModelErrorKind::InvalidArgument, "precision must be positive");
    Objective checked = objective;
    validate_objective(model, checked);
    if (checked.kind != ObjectiveKind::Safety) return solve_reach_or_mp(model, checked, epsilon, options);

    // Safety: Minimizer reaching `unsafe` in the game with swapped owners.
    CeOptions dual_options = options;
    if (options.observer) {
        dual_options.observer = [&](const IterationSnapshot &snap) {
            BoundsVector flipped(snap.bounds.size(), 0.0, 0.0);
            for (std::size_t i = 0; i < flipped.size(); ++i) {
                flipped.lower[i] = 1.0 - snap.bounds.upper[i];
                flipped.upper[i] = 1.0 - snap.bounds.lower[i];
            }
            options.observer(IterationSnapshot{snap.iteration, snap.states, flipped});
        };
    }
    SolveResult r = solve_reach_or_mp(swap_owners(model), Objective::reachability(checked.avoid), epsilon, dual_options);
    complement(r);
    return r;
}

}  // namespace tbsg
