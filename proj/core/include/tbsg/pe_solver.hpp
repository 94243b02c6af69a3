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

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "tbsg/ec_analysis.hpp"
#include "tbsg/game_source.hpp"
#include "tbsg/solve_result.hpp"

namespace tbsg {

/**
 * The explored fragment of a game under local ids (discovery order, the
 * initial state is 0). Explored states carry all their actions; frontier
 * states are known successors without actions yet.
 */
class PartialModel {
public:
    explicit PartialModel(const GameSource &source);

    std::size_t num_states() const noexcept { return nodes_.size(); }
    std::size_t num_actions(StateId s) const noexcept { return nodes_[s].num_actions; }
    Player owner(StateId s) const noexcept { return nodes_[s].owner; }
    double reward(StateId s) const noexcept { return nodes_[s].reward; }
    std::span<const Transition> transitions(StateId s, std::size_t action) const noexcept
    {
        std::size_t c = nodes_[s].first_choice + action;
        return {transitions_.data() + choice_begin_[c], choice_begin_[c + 1] - choice_begin_[c]};
    }

    bool explored(StateId s) const noexcept { return nodes_[s].explored; }
    std::size_t explored_count() const noexcept { return explored_count_; }
    /// Global id of a local state.
    StateId global(StateId s) const noexcept { return nodes_[s].global; }
    std::optional<StateId> local(StateId global) const;
    /// Local id of `global`, adding it to the frontier if it is new.
    StateId discover(StateId global);
    /// Pulls the actions of a frontier state. Returns false if it was
    /// already explored.
    bool expand(StateId s);
    /// True iff `s` is explored and all its actions are pure self-loops.
    bool is_absorbing(StateId s) const noexcept;

private:
    struct Node {
        StateId global;
        Player owner;
        double reward;
        std::size_t first_choice = 0;
        std::uint32_t num_actions = 0;
        bool explored = false;
    };

    const GameSource &source_;
    std::vector<Node> nodes_;
    std::unordered_map<StateId, StateId> index_;
    std::vector<std::size_t> choice_begin_{0};
    std::vector<Transition> transitions_;
    std::size_t explored_count_ = 0;
};

static_assert(GameView<PartialModel>);

/**
 * Per-state record of the exit chosen when the state's candidate was last
 * deflated or inflated. Walks re-entering a covered state on one path
 * continue from the recorded exit instead of circling inside the candidate.
 */
class DeflateMemory {
public:
    struct Record {
        std::uint32_t candidate;
        StateAction exit;
    };

    void resize(std::size_t n) { records_.resize(n); }
    void clear(std::span<const StateId> states);
    /// Records `exit` for every state of `candidate`; returns the id given
    /// to the candidate.
    std::uint32_t record(const EndComponent &candidate, StateAction exit);
    const std::optional<Record> &at(StateId s) const { return records_[s]; }
    std::size_t size() const noexcept { return records_.size(); }

private:
    std::vector<std::optional<Record>> records_;
    std::uint32_t next_id_ = 0;
};

/// Objective over global state ids of a source.
struct PeObjective {
    ObjectiveKind kind = ObjectiveKind::Reachability;
    StatePredicate goal;
    StatePredicate avoid;
    std::optional<RewardRange> rewards;
};

struct PeOptions {
    std::uint64_t seed = 0;
    std::size_t max_paths = 10'000'000;
    bool use_trackers = true;
    /// Off: walks follow the guidance heuristic inside deflated candidates.
    bool use_deflate_memory = true;
    /// On: candidates are searched only among the states of the last path.
    bool path_local_components = false;
    /// Called after every path with bounds on the states seen so far.
    IterationObserver observer;
};

/// Why a walk ended.
enum class StopReason { None, Absorbing, Converged, Revisit, LengthCap };

/**
 * Partial exploration engine. solve_pe drives it; tests may step through it.
 *
 * Each path starts at the initial state. Maximizer takes an ub-maximal
 * action, Minimizer an lb-minimal one. Ties go to the lowest index among
 * actions reaching an unexplored state, else to the lowest index; with the
 * deflate memory on, a state's choice among ties advances each time a walk
 * closes a cycle through it. Successors are
 * drawn proportionally to probability times bound gap, or by probability
 * when every gap is zero. Bounds are then updated backwards along the path.
 * Components of the explored part are searched every 8 paths and after a
 * path ends on a revisit.
 */
class PartialExplorer {
public:
    PartialExplorer(const GameSource &source, PeObjective objective, double epsilon, PeOptions options = {});
    PartialExplorer(const PartialExplorer &) = delete;
    PartialExplorer &operator=(const PartialExplorer &) = delete;

    const PartialModel &model() const noexcept { return model_; }
    const BoundsVector &bounds() const noexcept { return bounds_; }
    BoundsVector &bounds() noexcept { return bounds_; }
    const DeflateMemory &memory() const noexcept { return memory_; }
    const std::vector<MecTracker> &trackers() const noexcept { return trackers_; }
    bool fixed(StateId s) const noexcept { return fixed_[s]; }
    const SolveStats &stats() const noexcept { return stats_; }

    /// Expands a frontier state and initializes its new successors.
    void expand(StateId s);
    /// Relative weights of the successors of (s, a), parallel to transitions(s, a).
    std::vector<double> successor_weights(StateId s, ActionIndex a) const;
    /// Guidance action at `s`, ignoring the deflate memory.
    ActionIndex guided_action(StateId s) const;
    /// Stop rule for a walk standing at `s` with `visits` visits so far on
    /// the path (including this one) and `length` steps taken.
    StopReason path_should_stop(StateId s, std::uint32_t visits, std::size_t length) const;
    std::size_t length_cap() const noexcept { return 50 * model_.explored_count() + 100; }

    /// Samples one path; returns the visited local states in order.
    std::vector<StateId> sample_path();
    StopReason last_stop() const noexcept { return last_stop_; }
    /// Bellman updates on both bounds along the reversed path.
    void backpropagate(std::span<const StateId> path);
    /// Recomputes the MECs of the explored part (or of `path` in
    /// path-local mode) and refreshes the trackers.
    void search_components(std::span<const StateId> path);
    /// Deflates and inflates stale or unconverged trackers; updates the
    /// deflate memory.
    void process_trackers();

    bool done() const noexcept { return converged(bounds_, 0, epsilon_); }
    /// One full iteration: sample, back-propagate, and component work when due.
    void step();
    std::size_t paths() const noexcept { return paths_; }

    SolveResult result() const;

private:
    void init_state(StateId s);
    double uniform();
    void process(MecTracker &tracker);
    void escape_loops(std::span<const StateId> path);

    PartialModel model_;
    PeObjective objective_;
    double epsilon_;
    PeOptions options_;
    RewardRange range_;
    StayObjective stay_;
    BoundsVector bounds_;
    std::vector<char> fixed_;
    std::vector<char> goal_;
    DeflateMemory memory_;
    std::vector<MecTracker> trackers_;
    std::vector<std::int32_t> tracker_of_;
    std::size_t explored_at_search_ = 0;
    std::size_t paths_since_search_ = 0;
    std::size_t paths_ = 0;
    std::mt19937_64 rng_;
    std::vector<std::uint32_t> visits_;
    std::vector<std::uint32_t> tie_turn_;
    StopReason last_stop_ = StopReason::None;
    SolveStats stats_;
};

/// Partial exploration on a lazily accessed game.
SolveResult solve_pe(const GameSource &source, const PeObjective &objective, double epsilon,
                     const PeOptions &options = {});

/// Partial exploration on an explicit model with a label-based objective.
SolveResult solve_pe(const GameModel &model, const Objective &objective, double epsilon,
                     const PeOptions &options = {});

}  // namespace tbsg
