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

#include "oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tbsg::oracle {
namespace {

void check_size(const Chain &chain)
{
    if (chain.size() == 0 || chain.size() > kMaxChainStates)
        throw TooLarge("chain has " + std::to_string(chain.size()) + " states");
}

// Plain solve with a residual check.
Eigen::VectorXd solve_dense(const Eigen::MatrixXd &a, const Eigen::VectorXd &b)
{
    if (a.rows() == 0) return Eigen::VectorXd(0);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    Eigen::VectorXd x = lu.solve(b);
    if (!x.allFinite()) throw SingularSystem("non-finite solution");
    double residual = (a * x - b).cwiseAbs().maxCoeff();
    if (!(residual < kResidualLimit)) throw SingularSystem("residual " + std::to_string(residual));
    return x;
}

std::vector<std::vector<StateId>> reverse_edges(const Chain &chain)
{
    std::vector<std::vector<StateId>> rev(chain.size());
    for (StateId s = 0; s < chain.size(); ++s)
        for (const auto &t : chain.successors[s]) rev[t.target].push_back(s);
    return rev;
}

// States that reach `from` backwards, never stepping through `blocked`.
std::vector<char> backward_closure(const std::vector<std::vector<StateId>> &rev, const std::vector<char> &from,
                                   const std::vector<char> &blocked)
{
    std::vector<char> seen = from;
    std::vector<StateId> stack;
    for (StateId s = 0; s < from.size(); ++s)
        if (from[s]) stack.push_back(s);
    while (!stack.empty()) {
        StateId t = stack.back();
        stack.pop_back();
        for (StateId p : rev[t]) {
            if (seen[p] || blocked[p]) continue;
            seen[p] = 1;
            stack.push_back(p);
        }
    }
    return seen;
}

std::vector<char> forward_reach(const Chain &chain, StateId s)
{
    std::vector<char> seen(chain.size(), 0);
    std::vector<StateId> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
        StateId u = stack.back();
        stack.pop_back();
        for (const auto &t : chain.successors[u])
            if (!seen[t.target]) {
                seen[t.target] = 1;
                stack.push_back(t.target);
            }
    }
    return seen;
}

std::vector<char> mask_of(std::size_t n, const std::vector<StateId> &states)
{
    std::vector<char> m(n, 0);
    for (StateId s : states) m.at(s) = 1;
    return m;
}

}  // namespace

Chain chain_of(const GameModel &model)
{
    std::vector<ActionIndex> choice(model.num_states(), 0);
    for (StateId s = 0; s < model.num_states(); ++s)
        if (model.num_actions(s) != 1) throw std::invalid_argument("state " + std::to_string(s) + " has a choice");
    return induce(model, choice);
}

Chain induce(const GameModel &model, const std::vector<ActionIndex> &choice)
{
    Chain c;
    c.successors.resize(model.num_states());
    c.reward.resize(model.num_states());
    for (StateId s = 0; s < model.num_states(); ++s) {
        auto tr = model.transitions(s, choice.at(s));
        c.successors[s].assign(tr.begin(), tr.end());
        c.reward[s] = model.reward(s);
    }
    return c;
}

std::vector<double> solve_mc_reach(const Chain &chain, const std::vector<StateId> &goal,
                                   const std::vector<StateId> &avoid)
{
    check_size(chain);
    const std::size_t n = chain.size();
    auto is_goal = mask_of(n, goal);
    auto is_avoid = mask_of(n, avoid);
    auto rev = reverse_edges(chain);

    // Positive probability of reaching goal; goal and avoid are absorbing.
    auto positive = backward_closure(rev, is_goal, is_avoid);
    std::vector<char> zero(n, 0);
    for (StateId s = 0; s < n; ++s) zero[s] = !positive[s] || (is_avoid[s] && !is_goal[s]);
    // Positive probability of failing.
    auto can_fail = backward_closure(rev, zero, is_goal);

    std::vector<double> value(n, 0.0);
    std::vector<int> slot(n, -1);
    std::vector<StateId> unknown;
    for (StateId s = 0; s < n; ++s) {
        if (is_goal[s] || !can_fail[s]) {
            value[s] = 1.0;
        } else if (!zero[s]) {
            slot[s] = static_cast<int>(unknown.size());
            unknown.push_back(s);
        }
    }
    const auto k = static_cast<Eigen::Index>(unknown.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(k, k);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (const auto &t : chain.successors[unknown[i]]) {
            if (slot[t.target] >= 0)
                a(i, slot[t.target]) -= t.probability;
            else
                b(i) += t.probability * value[t.target];
        }
    }
    Eigen::VectorXd x = solve_dense(a, b);
    for (Eigen::Index i = 0; i < k; ++i) value[unknown[i]] = x(i);
    return value;
}

std::vector<double> solve_mc_meanpayoff(const Chain &chain)
{
    check_size(chain);
    const std::size_t n = chain.size();
    std::vector<std::vector<char>> reach(n);
    for (StateId s = 0; s < n; ++s) reach[s] = forward_reach(chain, s);

    // s is recurrent iff every state it reaches reaches it back.
    std::vector<int> bscc(n, -1);
    std::vector<std::vector<StateId>> classes;
    for (StateId s = 0; s < n; ++s) {
        if (bscc[s] >= 0) continue;
        bool recurrent = true;
        for (StateId t = 0; t < n && recurrent; ++t)
            if (reach[s][t] && !reach[t][s]) recurrent = false;
        if (!recurrent) continue;
        std::vector<StateId> members;
        for (StateId t = 0; t < n; ++t)
            if (reach[s][t]) {
                bscc[t] = static_cast<int>(classes.size());
                members.push_back(t);
            }
        classes.push_back(std::move(members));
    }

    std::vector<double> value(n, 0.0);
    for (const auto &members : classes) {
        const auto k = static_cast<Eigen::Index>(members.size());
        std::vector<int> local(n, -1);
        for (Eigen::Index i = 0; i < k; ++i) local[members[i]] = static_cast<int>(i);
        // pi (P - I) = 0, sum pi = 1; last balance row replaced by the sum.
        Eigen::MatrixXd m = -Eigen::MatrixXd::Identity(k, k);
        for (Eigen::Index i = 0; i < k; ++i)
            for (const auto &t : chain.successors[members[i]]) m(local[t.target], i) += t.probability;
        Eigen::MatrixXd a = m;
        a.row(k - 1).setOnes();
        Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
        b(k - 1) = 1.0;
        Eigen::VectorXd pi = solve_dense(a, b);
        if (!((m * pi).cwiseAbs().maxCoeff() < kResidualLimit)) throw SingularSystem("stationary balance violated");
        double gain = 0.0;
        for (Eigen::Index i = 0; i < k; ++i) gain += pi(i) * chain.reward[members[i]];
        for (StateId s : members) value[s] = gain;
    }

    std::vector<int> slot(n, -1);
    std::vector<StateId> transient;
    for (StateId s = 0; s < n; ++s)
        if (bscc[s] < 0) {
            slot[s] = static_cast<int>(transient.size());
            transient.push_back(s);
        }
    const auto k = static_cast<Eigen::Index>(transient.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(k, k);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (const auto &t : chain.successors[transient[i]]) {
            if (slot[t.target] >= 0)
                a(i, slot[t.target]) -= t.probability;
            else
                b(i) += t.probability * value[t.target];
        }
    Eigen::VectorXd x = solve_dense(a, b);
    for (Eigen::Index i = 0; i < k; ++i) value[transient[i]] = x(i);
    return value;
}

std::vector<double> game_value_bruteforce(const GameModel &model, const Objective &objective)
{
    const std::size_t n = model.num_states();
    std::vector<StateId> max_states, min_states;
    for (StateId s = 0; s < n; ++s) {
        if (model.num_actions(s) < 2) continue;
        (model.owner(s) == Player::Maximizer ? max_states : min_states).push_back(s);
    }
    auto count = [&](const std::vector<StateId> &states) {
        std::uint64_t c = 1;
        for (StateId s : states) {
            c *= model.num_actions(s);
            if (c > kMaxStrategyPairs) throw TooLarge("too many strategies");
        }
        return c;
    };
    const std::uint64_t sigmas = count(max_states);
    const std::uint64_t taus = count(min_states);
    if (sigmas * taus > kMaxStrategyPairs) throw TooLarge(std::to_string(sigmas * taus) + " strategy pairs");

    auto evaluate = [&](const std::vector<ActionIndex> &choice) {
        Chain c = induce(model, choice);
        switch (objective.kind) {
        case ObjectiveKind::Reachability: return solve_mc_reach(c, objective.goal, objective.avoid);
        case ObjectiveKind::Safety: {
            auto v = solve_mc_reach(c, objective.unsafe());
            for (double &x : v) x = 1.0 - x;
            return v;
        }
        case ObjectiveKind::MeanPayoff: return solve_mc_meanpayoff(c);
        }
        throw std::logic_error("unknown objective");
    };
    auto assign = [&](std::vector<ActionIndex> &choice, const std::vector<StateId> &states, std::uint64_t index) {
        for (StateId s : states) {
            choice[s] = static_cast<ActionIndex>(index % model.num_actions(s));
            index /= model.num_actions(s);
        }
    };

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> sup_inf(n, -inf);
    std::vector<std::vector<double>> sup_over_sigma(taus, std::vector<double>(n, -inf));
    std::vector<ActionIndex> choice(n, 0);
    for (std::uint64_t i = 0; i < sigmas; ++i) {
        assign(choice, max_states, i);
        std::vector<double> inner(n, inf);
        for (std::uint64_t j = 0; j < taus; ++j) {
            assign(choice, min_states, j);
            auto v = evaluate(choice);
            for (StateId s = 0; s < n; ++s) {
                inner[s] = std::min(inner[s], v[s]);
                sup_over_sigma[j][s] = std::max(sup_over_sigma[j][s], v[s]);
            }
        }
        for (StateId s = 0; s < n; ++s) sup_inf[s] = std::max(sup_inf[s], inner[s]);
    }
    for (StateId s = 0; s < n; ++s) {
        double inf_sup = inf;
        for (const auto &v : sup_over_sigma) inf_sup = std::min(inf_sup, v[s]);
        if (std::abs(inf_sup - sup_inf[s]) > kDeterminacyTolerance)
            throw DeterminacyViolation("state " + std::to_string(s) + ": sup-inf " + std::to_string(sup_inf[s]) +
                                       " vs inf-sup " + std::to_string(inf_sup));
    }
    return sup_inf;
}

std::vector<std::vector<StateId>> enumerate_mecs(const GameModel &model)
{
    const std::size_t n = model.num_states();
    if (n > 16) throw TooLarge("subset enumeration needs at most 16 states");
    auto closed = [&](StateId s, std::size_t a, std::uint32_t r) {
        for (const auto &t : model.transitions(s, a))
            if (!(r >> t.target & 1u)) return false;
        return true;
    };
    auto is_ec = [&](std::uint32_t r) {
        for (StateId s = 0; s < n; ++s) {
            if (!(r >> s & 1u)) continue;
            bool any = false;
            for (std::size_t a = 0; a < model.num_actions(s) && !any; ++a) any = closed(s, a, r);
            if (!any) return false;
        }
        // Every member reaches every other member over closed actions.
        for (StateId s = 0; s < n; ++s) {
            if (!(r >> s & 1u)) continue;
            std::uint32_t seen = 1u << s;
            std::vector<StateId> stack{s};
            while (!stack.empty()) {
                StateId u = stack.back();
                stack.pop_back();
                for (std::size_t a = 0; a < model.num_actions(u); ++a) {
                    if (!closed(u, a, r)) continue;
                    for (const auto &t : model.transitions(u, a))
                        if (!(seen >> t.target & 1u)) {
                            seen |= 1u << t.target;
                            stack.push_back(t.target);
                        }
                }
            }
            if (seen != r) return false;
        }
        return true;
    };
    std::vector<std::uint32_t> ecs;
    for (std::uint32_t r = 1; r < (1u << n); ++r)
        if (is_ec(r)) ecs.push_back(r);
    std::vector<std::vector<StateId>> out;
    for (std::uint32_t r : ecs) {
        bool maximal = std::none_of(ecs.begin(), ecs.end(), [&](std::uint32_t o) { return o != r && (o & r) == r; });
        if (!maximal) continue;
        std::vector<StateId> states;
        for (StateId s = 0; s < n; ++s)
            if (r >> s & 1u) states.push_back(s);
        out.push_back(std::move(states));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace tbsg::oracle
