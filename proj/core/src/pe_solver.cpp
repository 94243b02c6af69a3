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

#include "tbsg/pe_solver.hpp"

#include <algorithm>
#include <numeric>

namespace tbsg {

// --- PartialModel ---------------------------------------------------------

PartialModel::PartialModel(const GameSource &source) : source_(source)
{
    discover(source.initial());
}

std::optional<StateId> PartialModel::local(StateId global) const
{
    auto it = index_.find(global);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

StateId PartialModel::discover(StateId global)
{
    auto [it, inserted] = index_.try_emplace(global, static_cast<StateId>(nodes_.size()));
    if (inserted) nodes_.push_back(Node{global, source_.owner(global), source_.reward(global)});
    return it->second;
}

bool PartialModel::expand(StateId s)
{
    if (nodes_[s].explored) return false;
    auto actions = source_.actions(nodes_[s].global);
    if (actions.empty())
        throw ModelError(ModelErrorKind::EmptyActionSet, "state " + std::to_string(nodes_[s].global) + " has no actions",
                         nodes_[s].global);
    const std::size_t first = choice_begin_.size() - 1;
    for (const auto &d : actions) {
        for (const auto &t : d) {
            StateId target = discover(t.target);
            transitions_.push_back({target, t.probability});
        }
        choice_begin_.push_back(transitions_.size());
    }
    nodes_[s].first_choice = first;
    nodes_[s].num_actions = static_cast<std::uint32_t>(actions.size());
    nodes_[s].explored = true;
    ++explored_count_;
    return true;
}

bool PartialModel::is_absorbing(StateId s) const noexcept
{
    if (!nodes_[s].explored) return false;
    for (std::size_t a = 0; a < num_actions(s); ++a) {
        auto t = transitions(s, a);
        if (t.size() != 1 || t[0].target != s) return false;
    }
    return true;
}

// --- DeflateMemory --------------------------------------------------------

void DeflateMemory::clear(std::span<const StateId> states)
{
    for (StateId s : states)
        if (s < records_.size()) records_[s].reset();
}

std::uint32_t DeflateMemory::record(const EndComponent &candidate, StateAction exit)
{
    const std::uint32_t id = next_id_++;
    for (StateId s : candidate.states) {
        if (s >= records_.size()) records_.resize(s + 1);
        records_[s] = Record{id, exit};
    }
    return id;
}

// --- PartialExplorer ------------------------------------------------------

PartialExplorer::PartialExplorer(const GameSource &source, PeObjective objective, double epsilon, PeOptions options)
    : model_(source), objective_(std::move(objective)), epsilon_(epsilon), options_(std::move(options)),
      rng_(options_.seed)
{
    if (!(epsilon > 0.0)) throw ModelError(ModelErrorKind::InvalidArgument, "precision must be positive");
    if (objective_.kind == ObjectiveKind::MeanPayoff)
        range_ = objective_.rewards ? *objective_.rewards : source.reward_range();
    else
        range_ = {0.0, 1.0};
    stay_.mean_payoff = objective_.kind == ObjectiveKind::MeanPayoff;
    stay_.range = range_;
    stay_.goal = [this](StateId s) { return goal_[s] != 0; };
    init_state(0);
}

void PartialExplorer::init_state(StateId s)
{
    bounds_.lower.push_back(range_.min);
    bounds_.upper.push_back(range_.max);
    fixed_.push_back(0);
    goal_.push_back(0);
    visits_.push_back(0);
    tie_turn_.push_back(0);
    tracker_of_.push_back(-1);
    memory_.resize(s + 1);
    if (objective_.kind != ObjectiveKind::MeanPayoff) {
        StateId g = model_.global(s);
        if (objective_.goal && objective_.goal(g)) {
            bounds_.lower[s] = bounds_.upper[s] = 1.0;
            fixed_[s] = goal_[s] = 1;
        } else if (objective_.avoid && objective_.avoid(g)) {
            bounds_.lower[s] = bounds_.upper[s] = 0.0;
            fixed_[s] = 1;
        }
    }
}

void PartialExplorer::expand(StateId s)
{
    const std::size_t before = model_.num_states();
    if (!model_.expand(s)) return;
    for (std::size_t l = before; l < model_.num_states(); ++l) init_state(static_cast<StateId>(l));
    if (!fixed_[s] && model_.is_absorbing(s)) {
        double v = objective_.kind == ObjectiveKind::MeanPayoff ? model_.reward(s) : 0.0;
        bounds_.lower[s] = bounds_.upper[s] = v;
        fixed_[s] = 1;
    }
}

double PartialExplorer::uniform()
{
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

std::vector<double> PartialExplorer::successor_weights(StateId s, ActionIndex a) const
{
    auto ts = model_.transitions(s, a);
    std::vector<double> w(ts.size());
    double total = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        w[i] = ts[i].probability * bounds_.gap(ts[i].target);
        total += w[i];
    }
    if (!(total > 0.0))
        for (std::size_t i = 0; i < ts.size(); ++i) w[i] = ts[i].probability;
    return w;
}

ActionIndex PartialExplorer::guided_action(StateId s) const
{
    const auto &x = model_.owner(s) == Player::Maximizer ? bounds_.upper : bounds_.lower;
    auto optimal = optimal_actions(model_, std::span<const double>(x), s);
    // Among tied actions, one that reaches an unexplored state first.
    for (ActionIndex a : optimal)
        for (const auto &t : model_.transitions(s, a))
            if (!model_.explored(t.target) && !fixed_[t.target]) return a;
    return optimal[tie_turn_[s] % optimal.size()];
}

StopReason PartialExplorer::path_should_stop(StateId s, std::uint32_t visits, std::size_t length) const
{
    if (fixed_[s] || model_.is_absorbing(s)) return StopReason::Absorbing;
    if (converged(bounds_, s, epsilon_)) return StopReason::Converged;
    if (visits > 2) return StopReason::Revisit;
    if (length >= length_cap()) return StopReason::LengthCap;
    return StopReason::None;
}

std::vector<StateId> PartialExplorer::sample_path()
{
    std::vector<StateId> path;
    StateId s = 0;
    std::size_t length = 0;
    for (;;) {
        if (!fixed_[s] && !model_.explored(s)) expand(s);
        path.push_back(s);
        if (++visits_[s] >= 2 && options_.use_deflate_memory) {
            // A closed cycle moves each of its states on to the next tied
            // action.
            std::size_t i = path.size() - 1;
            while (path[i - 1] != s) --i;
            for (; i < path.size(); ++i) ++tie_turn_[path[i]];
        }
        last_stop_ = path_should_stop(s, visits_[s], length);
        if (last_stop_ != StopReason::None) break;

        StateId at = s;
        ActionIndex action;
        // Jump on re-entry only: a first visit follows the guidance, so states
        // of a covered candidate still get their bounds updated.
        const auto &rec = memory_.at(s);
        if (options_.use_deflate_memory && rec && visits_[s] >= 2) {
            at = rec->exit.state;
            action = rec->exit.action;
            ++stats_.memory_jumps;
            if (at != s) path.push_back(at);
        } else {
            action = guided_action(s);
        }
        auto w = successor_weights(at, action);
        double total = std::accumulate(w.begin(), w.end(), 0.0);
        double r = uniform() * total;
        auto ts = model_.transitions(at, action);
        std::size_t pick = ts.size() - 1;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (r < w[i]) {
                pick = i;
                break;
            }
            r -= w[i];
        }
        s = ts[pick].target;
        ++length;
    }
    for (StateId v : path) visits_[v] = 0;
    return path;
}

void PartialExplorer::backpropagate(std::span<const StateId> path)
{
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
        StateId s = *it;
        if (fixed_[s] || !model_.explored(s)) continue;
        double lo = bellman_value(model_, s, std::span<const double>(bounds_.lower));
        double hi = bellman_value(model_, s, std::span<const double>(bounds_.upper));
        if (lo > bounds_.lower[s]) bounds_.lower[s] = std::min(lo, bounds_.upper[s]);
        if (hi < bounds_.upper[s]) bounds_.upper[s] = std::max(hi, bounds_.lower[s]);
        ++stats_.bellman_updates;
    }
}

void PartialExplorer::search_components(std::span<const StateId> path)
{
    std::vector<StateId> scope;
    if (options_.path_local_components) {
        for (StateId s : path)
            if (model_.explored(s) && !fixed_[s]) scope.push_back(s);
        std::sort(scope.begin(), scope.end());
        scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
    } else {
        // Components of the explored part only change when it grows.
        if (model_.explored_count() == explored_at_search_) return;
        for (StateId s = 0; s < model_.num_states(); ++s)
            if (model_.explored(s) && !fixed_[s]) scope.push_back(s);
    }
    explored_at_search_ = model_.explored_count();
    ++stats_.component_searches;

    const double initial_precision = std::max((range_.max - range_.min) / 8.0, epsilon_ / 4.0);
    std::vector<MecTracker> next;
    std::vector<std::int32_t> next_of(model_.num_states(), -1);
    for (auto &ec : mec_decompose(model_, std::span<const StateId>(scope))) {
        std::vector<std::int32_t> old;
        for (StateId s : ec.states)
            if (tracker_of_[s] >= 0) old.push_back(tracker_of_[s]);
        std::sort(old.begin(), old.end());
        old.erase(std::unique(old.begin(), old.end()), old.end());
        const auto id = static_cast<std::int32_t>(next.size());
        for (StateId s : ec.states) next_of[s] = id;
        if (old.size() == 1 && trackers_[old[0]].mec() == ec) {
            next.push_back(std::move(trackers_[old[0]]));
            continue;
        }
        // Grown or merged component: reuse the old staying iterates.
        memory_.clear(ec.states);
        MecTracker t(std::move(ec), initial_precision);
        for (auto o : old) t.seed_from(trackers_[o]);
        next.push_back(std::move(t));
    }
    trackers_.swap(next);
    tracker_of_.swap(next_of);
    stats_.trackers = std::max(stats_.trackers, trackers_.size());
}

void PartialExplorer::process(MecTracker &tracker)
{
    ++stats_.tracker_runs;
    if (tracker.process(model_, bounds_, stay_, epsilon_ / 4.0)) ++stats_.bound_changes;
    if (!options_.use_deflate_memory) return;
    memory_.clear(tracker.mec().states);
    for (const auto &c : tracker.inflated())
        if (c.outcome.exit_binding) memory_.record(c.candidate.ec, c.outcome.exit.exits.front());
    for (const auto &c : tracker.deflated())
        if (c.outcome.exit_binding) memory_.record(c.candidate.ec, c.outcome.exit.exits.front());
}

void PartialExplorer::process_trackers()
{
    for (auto &t : trackers_) {
        bool stale = t.refresh(model_, bounds_);
        if (!stale) {
            bool done = true;
            for (StateId s : t.mec().states) done = done && converged(bounds_, s, epsilon_);
            if (done) continue;
        }
        process(t);
    }
}

void PartialExplorer::escape_loops(std::span<const StateId> path)
{
    // A walk circling inside a larger component leaves no exit to jump to;
    // the components of the path itself do.
    if (!options_.use_deflate_memory || options_.path_local_components) return;
    std::vector<StateId> scope;
    for (StateId s : path)
        if (model_.explored(s) && !fixed_[s]) scope.push_back(s);
    std::sort(scope.begin(), scope.end());
    scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
    const double precision = std::max((range_.max - range_.min) / 8.0, epsilon_ / 4.0);
    for (auto &ec : mec_decompose(model_, std::span<const StateId>(scope))) {
        if (tracker_of_[ec.states.front()] >= 0 && trackers_[tracker_of_[ec.states.front()]].mec() == ec) continue;
        MecTracker t(std::move(ec), precision);
        process(t);
    }
}

void PartialExplorer::step()
{
    auto path = sample_path();
    ++paths_;
    backpropagate(path);
    ++paths_since_search_;
    if (options_.use_trackers && (last_stop_ == StopReason::Revisit || paths_since_search_ >= 8)) {
        search_components(path);
        process_trackers();
        paths_since_search_ = 0;
        if (last_stop_ == StopReason::Revisit) escape_loops(path);
    }
    if (options_.observer) {
        std::vector<StateId> globals(model_.num_states());
        for (StateId s = 0; s < globals.size(); ++s) globals[s] = model_.global(s);
        options_.observer(IterationSnapshot{paths_, globals, bounds_});
    }
}

SolveResult PartialExplorer::result() const
{
    SolveResult r;
    r.lower = bounds_.lower[0];
    r.upper = bounds_.upper[0];
    r.value = midpoint(bounds_, 0);
    r.iterations = paths_;
    r.stats = stats_;
    r.stats.states_explored = model_.explored_count();
    const std::size_t n = model_.num_states();
    std::vector<StateId> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](StateId a, StateId b) { return model_.global(a) < model_.global(b); });
    r.bounds = BoundsVector(n, 0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        r.states.push_back(model_.global(order[i]));
        r.bounds.lower[i] = bounds_.lower[order[i]];
        r.bounds.upper[i] = bounds_.upper[order[i]];
    }
    return r;
}

// --- entry points ---------------------------------------------------------

namespace {

SolveResult run(const GameSource &source, const PeObjective &objective, double epsilon, const PeOptions &options)
{
    PartialExplorer explorer(source, objective, epsilon, options);
    bool budget = false;
    while (!explorer.done()) {
        if (explorer.paths() >= options.max_paths) {
            budget = true;
            break;
        }
        explorer.step();
    }
    SolveResult r = explorer.result();
    r.budget_exceeded = budget;
    return r;
}

}  // namespace

SolveResult solve_pe(const GameSource &source, const PeObjective &objective, double epsilon, const PeOptions &options)
{
    if (objective.kind != ObjectiveKind::Safety) return run(source, objective, epsilon, options);

    // Safety: Minimizer reaching `avoid` in the game with swapped owners.
    SwappedSource dual(source);
    PeObjective reach;
    reach.kind = ObjectiveKind::Reachability;
    reach.goal = objective.avoid;
    PeOptions dual_options = options;
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
    SolveResult r = run(dual, reach, epsilon, dual_options);
    const double lo = 1.0 - r.upper, hi = 1.0 - r.lower;
    r.lower = lo;
    r.upper = hi;
    r.value = 1.0 - r.value;
    for (std::size_t i = 0; i < r.bounds.size(); ++i) {
        const double l = 1.0 - r.bounds.upper[i], u = 1.0 - r.bounds.lower[i];
        r.bounds.lower[i] = l;
        r.bounds.upper[i] = u;
    }
    return r;
}

SolveResult solve_pe(const GameModel &model, const Objective &objective, double epsilon, const PeOptions &options)
{
    Objective checked = objective;
    validate_objective(model, checked);
    ModelSource source(model);
    PeObjective pe;
    pe.kind = checked.kind;
    if (!checked.goal.empty()) pe.goal = membership(checked.goal);
    if (!checked.avoid.empty()) pe.avoid = membership(checked.avoid);
    pe.rewards = checked.rewards;
    return solve_pe(source, pe, epsilon, options);
}

}  // namespace tbsg
