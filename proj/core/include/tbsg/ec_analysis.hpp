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
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "tbsg/bounds.hpp"
#include "tbsg/graph.hpp"
#include "tbsg/objective.hpp"

namespace tbsg {

/**
 * End component of the game with the opponent of `beneficiary` restricted to
 * its currently optimal actions. Deflated when the beneficiary is Maximizer,
 * inflated when it is Minimizer.
 */
struct SecCandidate {
    EndComponent ec;
    Player beneficiary = Player::Maximizer;

    friend bool operator==(const SecCandidate &, const SecCandidate &) = default;
};

/// What remaining inside a candidate forever is worth.
struct StayObjective {
    bool mean_payoff = true;
    /// Worst bounds: an exitless candidate deflates to at most range.min and
    /// inflates to at least range.max.
    RewardRange range{0.0, 1.0};
    /// Reachability only: candidates containing a goal state stay at 1.
    std::function<bool(StateId)> goal;
};

struct StayBounds {
    double low = -std::numeric_limits<double>::infinity();
    double high = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;

    double width() const noexcept { return high - low; }
};

inline constexpr std::size_t kStayIterationCap = 1000;

namespace detail {

template <GameView G>
void check_end_component(const G &g, const EndComponent &ec)
{
    if (ec.states.empty() || ec.actions.size() != ec.states.size())
        throw ModelError(ModelErrorKind::NotAMec, "end component is empty or malformed");
    if (!std::is_sorted(ec.states.begin(), ec.states.end()))
        throw ModelError(ModelErrorKind::NotAMec, "end component states are not sorted");
    for (std::size_t i = 0; i < ec.size(); ++i) {
        StateId s = ec.states[i];
        if (s >= g.num_states() || ec.actions[i].empty())
            throw ModelError(ModelErrorKind::NotAMec, "state " + std::to_string(s) + " has no component action", s);
        for (ActionIndex a : ec.actions[i]) {
            if (a >= g.num_actions(s))
                throw ModelError(ModelErrorKind::NotAMec, "action out of range", s, a);
            for (const auto &t : g.transitions(s, a))
                if (!ec.contains(t.target))
                    throw ModelError(ModelErrorKind::NotAMec, "component action leaves the component", s, a);
        }
    }
}

inline bool sorted_contains(const std::vector<ActionIndex> &v, ActionIndex a)
{
    return std::binary_search(v.begin(), v.end(), a);
}

}  // namespace detail

/**
 * Actions of `ec` left to the owner of `s` once the opponent of
 * `beneficiary` is restricted: the beneficiary keeps all its component
 * actions, the opponent keeps those that are optimal for the other bound
 * (lb when deflating, ub when inflating). That bound converges to the value
 * from the opponent's side, so the restriction eventually matches the
 * opponent's optimal choices; fixing it on the bound being improved can
 * keep a tied, losing action in the candidate forever. If an optimal
 * opponent action leaves the component, the result is empty.
 */
template <GameView G>
std::vector<ActionIndex> recommended_actions(const G &g, const EndComponent &ec, std::size_t i,
                                             const BoundsVector &bounds, Player beneficiary, bool gap_slack = false)
{
    StateId s = ec.states[i];
    if (g.owner(s) == beneficiary) return ec.actions[i];
    const auto &x = beneficiary == Player::Maximizer ? bounds.lower : bounds.upper;
    std::vector<ActionIndex> out;
    // An optimal action leaving the component wins ties: the opponent is
    // taken to leave, so `s` belongs to no candidate.
    for (ActionIndex a : optimal_actions(g, std::span<const double>(x), s))
        if (!detail::sorted_contains(ec.actions[i], a)) return out;
    // Actions tied at the value can differ on x by up to the largest bound
    // gap among the successors; with gap_slack they stay tied until that
    // gap closes.
    double slack = kTieTolerance;
    if (gap_slack)
        for (std::size_t a = 0; a < g.num_actions(s); ++a)
            for (const auto &t : g.transitions(s, a))
                slack = std::max(slack, bounds.upper[t.target] - bounds.lower[t.target]);
    auto opt = optimal_actions(g, std::span<const double>(x), s, slack);
    std::set_intersection(opt.begin(), opt.end(), ec.actions[i].begin(), ec.actions[i].end(), std::back_inserter(out));
    return out;
}

/**
 * SEC-candidates inside `game_mec`: MECs of the game where the opponent of
 * `beneficiary` may only use its optimal component actions. Throws
 * ModelError(NotAMec) when `game_mec` is not an end component of `g`.
 */
template <GameView G>
std::vector<SecCandidate> sec_candidates(const G &g, const EndComponent &game_mec, const BoundsVector &bounds,
                                         Player beneficiary, bool gap_slack = false)
{
    detail::check_end_component(g, game_mec);
    std::vector<std::vector<ActionIndex>> allowed(game_mec.size());
    for (std::size_t i = 0; i < game_mec.size(); ++i)
        allowed[i] = recommended_actions(g, game_mec, i, bounds, beneficiary, gap_slack);
    auto mecs = mec_decompose(g, std::span<const StateId>(game_mec.states), [&](StateId s, ActionIndex a) {
        return detail::sorted_contains(allowed[game_mec.index_of(s)], a);
    });
    std::vector<SecCandidate> out;
    out.reserve(mecs.size());
    for (auto &m : mecs) out.push_back(SecCandidate{std::move(m), beneficiary});
    return out;
}

/**
 * Bounds on the value of remaining in `ec` forever when both players choose
 * only among the listed actions. The bounds hold for every state of `ec`:
 * low is at most the smallest and high at least the largest staying value.
 *
 * Reachability: exact, 1 if `ec` contains a goal state, else 0.
 * Mean payoff: value iteration on the lazy chain x'(s) = r(s) + opt (x(s) +
 * sum delta x) / 2, bounded by the min and max one-step increments. Stops
 * when high - low <= precision or after `max_iterations` steps. `iterate`,
 * if non-empty, is aligned with ec.states and carries the iterate between
 * calls.
 */
template <GameView G>
StayBounds staying_bounds(const G &g, const EndComponent &ec, const StayObjective &objective, double precision,
                          std::span<double> iterate = {}, std::size_t max_iterations = kStayIterationCap)
{
    StayBounds out;
    if (!objective.mean_payoff) {
        bool has_goal = false;
        if (objective.goal)
            for (StateId s : ec.states) has_goal = has_goal || objective.goal(s);
        out.low = out.high = has_goal ? 1.0 : 0.0;
        return out;
    }
    const std::size_t k = ec.size();
    LocalIndex idx(ec.states, g.num_states());
    std::vector<double> own;
    if (iterate.size() != k) {
        own.assign(k, 0.0);
        iterate = own;
    }
    std::vector<double> next(k);
    while (out.iterations < max_iterations) {
        for (std::size_t i = 0; i < k; ++i) {
            StateId s = ec.states[i];
            const bool maximize = g.owner(s) == Player::Maximizer;
            double best = maximize ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
            for (ActionIndex a : ec.actions[i]) {
                double v = 0.0;
                for (const auto &t : g.transitions(s, a)) v += t.probability * iterate[idx.find(t.target)];
                v = 0.5 * iterate[i] + 0.5 * v;
                if (maximize ? v > best : v < best) best = v;
            }
            next[i] = g.reward(s) + best;
        }
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < k; ++i) {
            double d = next[i] - iterate[i];
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        out.low = std::max(out.low, lo);
        out.high = std::min(out.high, hi);
        const double shift = next[0];
        for (std::size_t i = 0; i < k; ++i) iterate[i] = next[i] - shift;
        ++out.iterations;
        if (out.high - out.low <= precision) break;
    }
    return out;
}

/// True if the opponent of the beneficiary still has a choice inside `c`.
template <GameView G>
bool opponent_has_choice(const G &g, const SecCandidate &c)
{
    for (std::size_t i = 0; i < c.ec.size(); ++i)
        if (g.owner(c.ec.states[i]) != c.beneficiary && c.ec.actions[i].size() > 1) return true;
    return false;
}

/**
 * Splits a candidate in which the opponent kept several actions: the
 * opponent is fixed to its best staying action under `iterate` (aligned with
 * c.ec.states, as left by staying_bounds), lowest index on ties, and the
 * MECs of the resulting MDP are returned. Staying values are uniform on
 * each of them.
 */
template <GameView G>
std::vector<SecCandidate> fix_opponent(const G &g, const SecCandidate &c, std::span<const double> iterate)
{
    const EndComponent &ec = c.ec;
    LocalIndex idx(ec.states, g.num_states());
    std::vector<ActionIndex> fixed(ec.size(), 0);
    for (std::size_t i = 0; i < ec.size(); ++i) {
        StateId s = ec.states[i];
        if (g.owner(s) == c.beneficiary) continue;
        const bool maximize = g.owner(s) == Player::Maximizer;
        double best = 0.0;
        bool first = true;
        for (ActionIndex a : ec.actions[i]) {
            double v = 0.0;
            for (const auto &t : g.transitions(s, a)) v += t.probability * iterate[idx.find(t.target)];
            const double tol = 1e-9 * std::max(1.0, std::abs(v));
            if (first || (maximize ? v > best + tol : v < best - tol)) {
                best = v;
                fixed[i] = a;
                first = false;
            }
        }
    }
    auto mecs = mec_decompose(g, std::span<const StateId>(ec.states), [&](StateId s, ActionIndex a) {
        std::size_t i = ec.index_of(s);
        if (g.owner(s) != c.beneficiary) return a == fixed[i];
        return detail::sorted_contains(ec.actions[i], a);
    });
    std::vector<SecCandidate> out;
    out.reserve(mecs.size());
    for (auto &m : mecs) out.push_back(SecCandidate{std::move(m), c.beneficiary});
    return out;
}

struct ExitValue {
    double value = 0.0;
    /// All optimizing exits, ascending.
    std::vector<StateAction> exits;
};

/**
 * Best one-step expectation over the beneficiary's actions that leave the
 * candidate: max of ub for Maximizer, min of lb for Minimizer. Without exits
 * the value is `worst` and `exits` is empty.
 */
template <GameView G>
ExitValue best_exit(const G &g, const EndComponent &candidate, const BoundsVector &bounds, Player beneficiary,
                    double worst)
{
    const bool maximize = beneficiary == Player::Maximizer;
    const auto &x = maximize ? bounds.upper : bounds.lower;
    ExitValue out;
    out.value = worst;
    bool found = false;
    for (StateId s : candidate.states) {
        if (g.owner(s) != beneficiary) continue;
        for (std::size_t a = 0; a < g.num_actions(s); ++a) {
            bool leaves = false;
            double v = 0.0;
            for (const auto &t : g.transitions(s, a)) {
                v += t.probability * x[t.target];
                if (!candidate.contains(t.target)) leaves = true;
            }
            if (!leaves) continue;
            StateAction sa{s, static_cast<ActionIndex>(a)};
            if (!found || (maximize ? v > out.value + kTieTolerance : v < out.value - kTieTolerance)) {
                out.value = v;
                out.exits.assign(1, sa);
                found = true;
            } else if (std::abs(v - out.value) <= kTieTolerance) {
                out.exits.push_back(sa);
                if (maximize ? v > out.value : v < out.value) out.value = v;
            }
        }
    }
    return out;
}

struct DeflateOutcome {
    /// max(stay, exit) for deflate, min(stay, exit) for inflate.
    double bound = 0.0;
    ExitValue exit;
    /// True when the exit alone determines the bound.
    bool exit_binding = false;
    bool changed = false;
};

/**
 * ub(s) := min(ub(s), max(stay_high, best exit)) on every state of a
 * Maximizer candidate. Never raises ub and never drops it below lb.
 */
template <GameView G>
DeflateOutcome deflate(const G &g, const EndComponent &candidate, BoundsVector &bounds, double stay_high,
                       double worst)
{
    DeflateOutcome out;
    out.exit = best_exit(g, candidate, bounds, Player::Maximizer, worst);
    out.bound = std::max(stay_high, out.exit.value);
    out.exit_binding = !out.exit.exits.empty() && out.exit.value >= stay_high;
    for (StateId s : candidate.states) {
        double v = std::max(std::min(bounds.upper[s], out.bound), bounds.lower[s]);
        if (v < bounds.upper[s]) {
            bounds.upper[s] = v;
            out.changed = true;
        }
    }
    return out;
}

/// Dual of deflate: lb(s) := max(lb(s), min(stay_low, best exit)).
template <GameView G>
DeflateOutcome inflate(const G &g, const EndComponent &candidate, BoundsVector &bounds, double stay_low,
                       double worst)
{
    DeflateOutcome out;
    out.exit = best_exit(g, candidate, bounds, Player::Minimizer, worst);
    out.bound = std::min(stay_low, out.exit.value);
    out.exit_binding = !out.exit.exits.empty() && out.exit.value <= stay_low;
    for (StateId s : candidate.states) {
        double v = std::min(std::max(bounds.lower[s], out.bound), bounds.upper[s]);
        if (v > bounds.lower[s]) {
            bounds.lower[s] = v;
            out.changed = true;
        }
    }
    return out;
}

/// Candidate plus what its last processing produced.
struct TrackedCandidate {
    SecCandidate candidate;
    StayBounds stay;
    double stay_precision = std::numeric_limits<double>::infinity();
    DeflateOutcome outcome;
};

/**
 * Bookkeeping for one MEC of the game (or of the explored part of it).
 *
 * The tracker watches the opponent-restricted action sets of its states.
 * When they change it is stale and its candidates are recomputed; staying
 * iterates live per MEC state, so they survive candidate changes.
 */
class MecTracker {
public:
    MecTracker() = default;
    MecTracker(EndComponent mec, double initial_precision)
        : mec_(std::move(mec)), max_iterate_(mec_.size(), 0.0), min_iterate_(mec_.size(), 0.0),
          precision_(initial_precision)
    {
    }

    const EndComponent &mec() const noexcept { return mec_; }
    bool stale() const noexcept { return stale_; }
    void mark_stale() noexcept { stale_ = true; }
    double precision() const noexcept { return precision_; }
    const std::vector<TrackedCandidate> &deflated() const noexcept { return deflate_; }
    const std::vector<TrackedCandidate> &inflated() const noexcept { return inflate_; }

    /// Seeds the staying iterates from another tracker's states.
    void seed_from(const MecTracker &other)
    {
        for (std::size_t j = 0; j < other.mec_.size(); ++j) {
            StateId s = other.mec_.states[j];
            if (!mec_.contains(s)) continue;
            std::size_t i = mec_.index_of(s);
            max_iterate_[i] = other.max_iterate_[j];
            min_iterate_[i] = other.min_iterate_[j];
        }
        precision_ = std::min(precision_, other.precision_);
    }

    /// Recomputes the restricted action sets; marks the tracker stale when
    /// they differ from the last ones. Returns the stale flag.
    template <GameView G>
    bool refresh(const G &g, const BoundsVector &bounds)
    {
        signature_scratch_.clear();
        for (std::size_t i = 0; i < mec_.size(); ++i) {
            StateId s = mec_.states[i];
            if (g.owner(s) == Player::Minimizer) {
                auto a = recommended_actions(g, mec_, i, bounds, Player::Maximizer);
                signature_scratch_.insert(signature_scratch_.end(), a.begin(), a.end());
            } else {
                auto a = recommended_actions(g, mec_, i, bounds, Player::Minimizer);
                signature_scratch_.insert(signature_scratch_.end(), a.begin(), a.end());
            }
            signature_scratch_.push_back(kSeparator);
        }
        if (signature_scratch_ != signature_) {
            signature_.swap(signature_scratch_);
            stale_ = true;
        }
        return stale_;
    }

    /**
     * Deflates and inflates every candidate. Stale trackers recompute their
     * candidates first; otherwise the staying precision is halved, never
     * below `precision_floor`. Returns true if any bound moved.
     */
    template <GameView G>
    bool process(const G &g, BoundsVector &bounds, const StayObjective &objective, double precision_floor)
    {
        bool same = true;
        if (stale_) split_attempts_ = 0;
        const bool resplit = split_width_ > precision_ && split_attempts_ < kSplitAttempts;
        if (stale_ || resplit) {
            split_width_ = 0.0;
            ++split_attempts_;
            same = replace(deflate_, candidates(g, bounds, Player::Maximizer, objective, max_iterate_));
            same = replace(inflate_, candidates(g, bounds, Player::Minimizer, objective, min_iterate_)) && same;
            stale_ = false;
        }
        if (same && ran_) precision_ = std::max(precision_ * 0.5, precision_floor);
        ran_ = true;
        bool changed = false;
        for (auto &c : deflate_) {
            update_stay(g, c, objective, max_iterate_);
            c.outcome = deflate(g, c.candidate.ec, bounds, c.stay.high, objective.range.min);
            changed = changed || c.outcome.changed;
        }
        for (auto &c : inflate_) {
            update_stay(g, c, objective, min_iterate_);
            c.outcome = inflate(g, c.candidate.ec, bounds, c.stay.low, objective.range.max);
            changed = changed || c.outcome.changed;
        }
        return changed;
    }

private:
    static constexpr ActionIndex kSeparator = 0xffffffffu;
    static constexpr std::size_t kSplitAttempts = 32;

    // Installs new candidates, keeping staying data of unchanged ones.
    // Returns true when the candidates cover the same state sets as before.
    static bool replace(std::vector<TrackedCandidate> &tracked, std::vector<SecCandidate> fresh)
    {
        bool same = fresh.size() == tracked.size();
        std::vector<TrackedCandidate> next;
        next.reserve(fresh.size());
        for (auto &c : fresh) {
            if (same)
                same = std::any_of(tracked.begin(), tracked.end(),
                                   [&](const TrackedCandidate &t) { return t.candidate.ec.states == c.ec.states; });
            auto it = std::find_if(tracked.begin(), tracked.end(),
                                   [&](const TrackedCandidate &t) { return t.candidate == c; });
            if (it != tracked.end())
                next.push_back(std::move(*it));
            else
                next.push_back(TrackedCandidate{std::move(c), {}, std::numeric_limits<double>::infinity(), {}});
        }
        tracked.swap(next);
        return same;
    }

    // Candidates of one side; for mean payoff, those where the opponent kept
    // a choice are split by fixing its staying strategy.
    template <GameView G>
    std::vector<SecCandidate> candidates(const G &g, const BoundsVector &bounds, Player beneficiary,
                                         const StayObjective &objective, std::vector<double> &iterate)
    {
        auto raw = sec_candidates(g, mec_, bounds, beneficiary);
        if (!objective.mean_payoff) return raw;
        // An opponent action whose bound lags behind a tied one drops out of
        // the exact restriction, and the candidate built without it can be
        // wrong for good. Candidates that keep such actions are added and
        // left to the split below.
        for (auto &c : sec_candidates(g, mec_, bounds, beneficiary, true))
            if (std::find(raw.begin(), raw.end(), c) == raw.end()) raw.push_back(std::move(c));
        std::vector<SecCandidate> out;
        for (auto &c : raw) {
            if (!opponent_has_choice(g, c)) {
                out.push_back(std::move(c));
                continue;
            }
            const auto &states = c.ec.states;
            scratch_.resize(states.size());
            for (std::size_t i = 0; i < states.size(); ++i) scratch_[i] = iterate[mec_.index_of(states[i])];
            StayBounds b = staying_bounds(g, c.ec, objective, precision_, std::span<double>(scratch_));
            for (std::size_t i = 0; i < states.size(); ++i) iterate[mec_.index_of(states[i])] = scratch_[i];
            split_width_ = std::max(split_width_, b.width());
            for (auto &part : fix_opponent(g, c, std::span<const double>(scratch_)))
                if (std::find(out.begin(), out.end(), part) == out.end()) out.push_back(std::move(part));
        }
        return out;
    }

    template <GameView G>
    void update_stay(const G &g, TrackedCandidate &c, const StayObjective &objective, std::vector<double> &iterate)
    {
        if (c.stay.iterations > 0 && c.stay.width() <= precision_) return;
        if (!objective.mean_payoff) {
            c.stay = staying_bounds(g, c.candidate.ec, objective, precision_);
            c.stay.iterations = 1;
            return;
        }
        const auto &states = c.candidate.ec.states;
        scratch_.resize(states.size());
        for (std::size_t i = 0; i < states.size(); ++i) scratch_[i] = iterate[mec_.index_of(states[i])];
        StayBounds fresh = staying_bounds(g, c.candidate.ec, objective, precision_, std::span<double>(scratch_));
        for (std::size_t i = 0; i < states.size(); ++i) iterate[mec_.index_of(states[i])] = scratch_[i];
        // Bounds from earlier calls on the same candidate stay valid.
        c.stay.low = std::max(c.stay.low, fresh.low);
        c.stay.high = std::min(c.stay.high, fresh.high);
        c.stay.iterations += fresh.iterations;
        c.stay_precision = precision_;
    }

    EndComponent mec_;
    std::vector<double> max_iterate_;
    std::vector<double> min_iterate_;
    std::vector<ActionIndex> signature_;
    std::vector<ActionIndex> signature_scratch_;
    std::vector<double> scratch_;
    std::vector<TrackedCandidate> deflate_;
    std::vector<TrackedCandidate> inflate_;
    double precision_ = 1.0;
    // Width of the staying iteration that decided the last splits; splits
    // are redone (at most kSplitAttempts times per staleness) while it is
    // looser than the precision.
    double split_width_ = 0.0;
    std::size_t split_attempts_ = 0;
    bool stale_ = true;
    bool ran_ = false;
};

}  // namespace tbsg
