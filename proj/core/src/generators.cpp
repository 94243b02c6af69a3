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

#include <algorithm>
#include <array>

#include "tbsg/ingest.hpp"

namespace tbsg {
namespace {

constexpr Player MAX = Player::Maximizer;
constexpr Player MIN = Player::Minimizer;

Distribution dirac(StateId t)
{
    return {{t, 1.0}};
}

Distribution mix(std::initializer_list<Transition> parts)
{
    return normalize_support(Distribution(parts));
}

// Explicitly listed small game shared by the figure families.
class TableSource : public GameSource {
public:
    TableSource(std::vector<Player> owners, std::vector<double> rewards, std::vector<std::vector<Distribution>> actions,
                Labels labels)
        : owners_(std::move(owners)), rewards_(std::move(rewards)), actions_(std::move(actions)),
          labels_(std::move(labels))
    {
    }

    StateId initial() const override { return 0; }
    Player owner(StateId s) const override { return owners_[s]; }
    double reward(StateId s) const override { return rewards_[s]; }
    std::vector<Distribution> actions(StateId s) const override { return actions_[s]; }
    RewardRange reward_range() const override
    {
        auto [lo, hi] = std::minmax_element(rewards_.begin(), rewards_.end());
        return {*lo, *hi};
    }
    std::optional<std::size_t> num_states() const override { return owners_.size(); }
    std::optional<StatePredicate> label(std::string_view name) const override
    {
        auto it = labels_.find(name);
        if (it == labels_.end()) return std::nullopt;
        return membership(it->second);
    }
    const Labels &labels() const { return labels_; }

private:
    std::vector<Player> owners_;
    std::vector<double> rewards_;
    std::vector<std::vector<Distribution>> actions_;
    Labels labels_;
};

std::unique_ptr<GameSource> fig1_left()
{
    // s, q, f5, f10
    return std::make_unique<TableSource>(
        std::vector<Player>{MAX, MIN, MAX, MAX}, std::vector<double>{4, 0, 5, 10},
        std::vector<std::vector<Distribution>>{{dirac(0), dirac(1)}, {dirac(2), dirac(3)}, {dirac(2)}, {dirac(3)}},
        Labels{{"s", {0}}, {"q", {1}}});
}

std::unique_ptr<GameSource> fig1_right()
{
    // p, s, X, Y
    return std::make_unique<TableSource>(
        std::vector<Player>{MIN, MAX, MAX, MAX}, std::vector<double>{0.5, 0.5, 0, 1},
        std::vector<std::vector<Distribution>>{{dirac(2), dirac(1)}, {dirac(0), dirac(3)}, {dirac(2)}, {dirac(3)}},
        Labels{{"goal", {3}}, {"X", {2}}, {"Y", {3}}});
}

class Fig2ChainSource final : public GameSource {
public:
    explicit Fig2ChainSource(std::uint32_t k) : k_(k) {}

    StateId initial() const override { return 0; }
    Player owner(StateId) const override { return MAX; }
    double reward(StateId s) const override { return s == t() ? 1.0 : 0.0; }
    std::vector<Distribution> actions(StateId s) const override
    {
        if (s >= t()) return {dirac(s)};
        if (s < k_) return {dirac(s), mix({{s, 0.5}, {s + 1, 0.5}})};
        return {dirac(s), mix({{t(), 1.0 / 3}, {z(), 1.0 / 3}, {s, 1.0 / 3}})};
    }
    RewardRange reward_range() const override { return {0.0, 1.0}; }
    std::optional<std::size_t> num_states() const override { return std::size_t{k_} + 3; }
    std::optional<StatePredicate> label(std::string_view name) const override
    {
        if (name == "goal" || name == "t") return membership({t()});
        if (name == "z") return membership({z()});
        return std::nullopt;
    }

private:
    StateId t() const { return k_ + 1; }
    StateId z() const { return k_ + 2; }
    std::uint32_t k_;
};

double leaf_reward(std::uint64_t j)
{
    return static_cast<double>((7 * j + 3) % 11);
}

// Full binary tree of gadgets with absorbing leaves.
class GadgetTree final : public GameSource {
public:
    GadgetTree(Family family, std::uint32_t n) : family_(family), n_(n)
    {
        gadget_ = (family == Family::TreeMulComplMec || family == Family::TreeMulComplSec) ? 3 : 2;
        internal_ = (std::uint64_t{1} << n) - 1;
        leaves_ = std::uint64_t{1} << n;
    }

    StateId initial() const override { return 0; }
    Player owner(StateId s) const override
    {
        if (s >= leaf_base()) return MAX;
        std::uint64_t r = s % gadget_;
        switch (family_) {
        case Family::TreeMulSec: return r == 1 ? MIN : MAX;
        case Family::TreeMulComplSec: return r == 1 ? MIN : MAX;
        default: return MAX;
        }
    }
    double reward(StateId s) const override
    {
        if (s >= leaf_base()) return leaf_reward(s - leaf_base());
        std::uint64_t r = s % gadget_;
        switch (family_) {
        case Family::TreeMulMec: return r == 0 ? 2.0 : 8.0;
        case Family::TreeMulSec: return r == 0 ? 3.0 : 7.0;
        case Family::TreeMulComplMec: return std::array<double, 3>{1.0, 6.0, 9.0}[r];
        default: return std::array<double, 3>{2.0, 6.0, 8.0}[r];
        }
    }
    std::vector<Distribution> actions(StateId s) const override
    {
        if (s >= leaf_base()) return {dirac(s)};
        const std::uint64_t node = s / gadget_;
        const auto base = static_cast<StateId>(node * gadget_);
        const StateId left = entry(2 * node + 1);
        const StateId right = entry(2 * node + 2);
        const StateId u = base, v = base + 1, w = base + 2;
        switch (family_) {
        case Family::TreeMulMec:
            if (s == u) return {dirac(v), mix({{left, 0.75}, {v, 0.25}}), mix({{right, 0.75}, {v, 0.25}})};
            return {dirac(u)};
        case Family::TreeMulSec:
            if (s == u) return {dirac(v), mix({{left, 0.75}, {v, 0.25}})};
            return {dirac(u), dirac(right)};
        default:
            // Three states with probabilistic internal moves; v's owner
            // depends on the family.
            if (s == u) return {mix({{v, 0.5}, {w, 0.5}}), mix({{left, 2.0 / 3}, {v, 1.0 / 3}})};
            if (s == v) return {dirac(u), mix({{w, 0.5}, {right, 0.5}})};
            return {mix({{u, 0.5}, {v, 0.5}}), mix({{right, 2.0 / 3}, {w, 1.0 / 3}})};
        }
    }
    RewardRange reward_range() const override { return {0.0, 10.0}; }
    std::optional<std::size_t> num_states() const override { return leaf_base() + leaves_; }
    std::optional<StatePredicate> label(std::string_view name) const override
    {
        if (name != "goal") return std::nullopt;
        StateId base = leaf_base();
        return StatePredicate([base](StateId s) { return s >= base && leaf_reward(s - base) >= 6.0; });
    }

private:
    StateId leaf_base() const { return static_cast<StateId>(internal_ * gadget_); }
    StateId entry(std::uint64_t node) const
    {
        if (node < internal_) return static_cast<StateId>(node * gadget_);
        return static_cast<StateId>(leaf_base() + (node - internal_));
    }

    Family family_;
    std::uint32_t n_;
    std::uint64_t gadget_;
    std::uint64_t internal_;
    std::uint64_t leaves_;
};

// One state per tree node; the bottom level closes the cycle to the root.
class BigMecTree final : public GameSource {
public:
    explicit BigMecTree(std::uint32_t n) : n_(n)
    {
        nodes_ = (std::uint64_t{2} << n) - 1;
        first_bottom_ = (std::uint64_t{1} << n) - 1;
    }

    StateId initial() const override { return 0; }
    Player owner(StateId s) const override
    {
        if (s >= nodes_) return MAX;
        return level(s) % 2 == 0 ? MAX : MIN;
    }
    double reward(StateId s) const override
    {
        if (s >= nodes_) return leaf_reward(s - nodes_);
        return static_cast<double>((5 * std::uint64_t{s}) % 11);
    }
    std::vector<Distribution> actions(StateId s) const override
    {
        if (s >= nodes_) return {dirac(s)};
        if (s >= first_bottom_) return {dirac(0), dirac(static_cast<StateId>(nodes_ + (s - first_bottom_)))};
        return {dirac(2 * s + 1), dirac(2 * s + 2)};
    }
    RewardRange reward_range() const override { return {0.0, 10.0}; }
    std::optional<std::size_t> num_states() const override { return nodes_ + (std::uint64_t{1} << n_); }
    std::optional<StatePredicate> label(std::string_view name) const override
    {
        if (name != "goal") return std::nullopt;
        auto base = static_cast<StateId>(nodes_);
        return StatePredicate([base](StateId s) { return s >= base && leaf_reward(s - base) >= 6.0; });
    }

private:
    static std::uint32_t level(std::uint64_t s)
    {
        std::uint32_t l = 0;
        while (s + 1 >= (std::uint64_t{2} << l)) ++l;
        return l;
    }

    std::uint32_t n_;
    std::uint64_t nodes_;
    std::uint64_t first_bottom_;
};

class DiceRaceSource final : public GameSource {
public:
    explicit DiceRaceSource(std::uint32_t target) : target_(target) {}

    StateId initial() const override { return index(0, 0, 0); }
    Player owner(StateId s) const override
    {
        if (s >= win()) return MAX;
        return s < target_ * target_ ? MAX : MIN;
    }
    double reward(StateId s) const override { return s == win() ? 1.0 : 0.0; }
    std::vector<Distribution> actions(StateId s) const override
    {
        if (s >= win()) return {dirac(s)};
        const std::uint32_t turn = s / (target_ * target_);
        const std::uint32_t rest = s % (target_ * target_);
        const std::uint32_t a = rest / target_, b = rest % target_;
        auto after = [&](std::uint32_t step) -> StateId {
            std::uint32_t mine = (turn == 0 ? a : b) + step;
            if (mine >= target_) return turn == 0 ? win() : lose();
            return turn == 0 ? index(1, mine, b) : index(0, a, mine);
        };
        Distribution roll;
        roll.push_back({after(0), 1.0 / 6});
        for (std::uint32_t k = 2; k <= 6; ++k) roll.push_back({after(k), 1.0 / 6});
        return {dirac(after(2)), normalize_support(std::move(roll))};
    }
    RewardRange reward_range() const override { return {0.0, 1.0}; }
    std::optional<std::size_t> num_states() const override { return std::size_t{2} * target_ * target_ + 2; }
    std::optional<StatePredicate> label(std::string_view name) const override
    {
        if (name == "goal" || name == "win") return membership({win()});
        if (name == "lose") return membership({lose()});
        return std::nullopt;
    }

private:
    StateId index(std::uint32_t turn, std::uint32_t a, std::uint32_t b) const
    {
        return turn * target_ * target_ + a * target_ + b;
    }
    StateId win() const { return 2 * target_ * target_; }
    StateId lose() const { return 2 * target_ * target_ + 1; }

    std::uint32_t target_;
};

constexpr std::array<std::pair<Family, std::string_view>, 9> kNames{{
    {Family::Fig1Left, "fig1left"},
    {Family::Fig1Right, "fig1right"},
    {Family::Fig2Chain, "fig2chain"},
    {Family::TreeBigMec, "tree_big_mec"},
    {Family::TreeMulMec, "tree_mul_mec"},
    {Family::TreeMulSec, "tree_mul_sec"},
    {Family::TreeMulComplMec, "tree_mul_compl_mec"},
    {Family::TreeMulComplSec, "tree_mul_compl_sec"},
    {Family::DiceRace, "dice_race"},
}};

void check_range(std::uint32_t v, std::uint32_t lo, std::uint32_t hi, std::string_view what)
{
    if (v < lo || v > hi)
        throw ParameterOutOfRange(std::string(what) + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                  "], got " + std::to_string(v));
}

}  // namespace

const char *to_string(Family family) noexcept
{
    for (const auto &[f, name] : kNames)
        if (f == family) return name.data();
    return "?";
}

std::optional<Family> family_from_name(std::string_view name)
{
    for (const auto &[f, n] : kNames)
        if (n == name) return f;
    return std::nullopt;
}

std::string_view parameter_name(Family family) noexcept
{
    switch (family) {
    case Family::Fig1Left:
    case Family::Fig1Right: return "";
    case Family::Fig2Chain: return "k";
    case Family::DiceRace: return "target";
    default: return "N";
    }
}

std::unique_ptr<GameSource> make_source(const GeneratorSpec &spec)
{
    switch (spec.family) {
    case Family::Fig1Left: return fig1_left();
    case Family::Fig1Right: return fig1_right();
    case Family::Fig2Chain:
        check_range(spec.parameter, 1, 1u << 24, "k");
        return std::make_unique<Fig2ChainSource>(spec.parameter);
    case Family::TreeBigMec:
    case Family::TreeMulMec:
    case Family::TreeMulSec:
    case Family::TreeMulComplMec:
    case Family::TreeMulComplSec:
        check_range(spec.parameter, 1, 24, "N");
        if (spec.family == Family::TreeBigMec) return std::make_unique<BigMecTree>(spec.parameter);
        return std::make_unique<GadgetTree>(spec.family, spec.parameter);
    case Family::DiceRace:
        check_range(spec.parameter, 1, 4096, "target");
        return std::make_unique<DiceRaceSource>(spec.parameter);
    }
    throw ParameterOutOfRange("unknown family");
}

ParsedGame generate(const GeneratorSpec &spec)
{
    auto source = make_source(spec);
    ParsedGame out;
    out.model = materialize(*source);
    // Labels are materialized by scanning every state against the
    // family's label names.
    static constexpr std::array<std::string_view, 9> kLabelNames{"goal", "t", "z", "s", "q", "X", "Y", "win", "lose"};
    for (auto name : kLabelNames) {
        auto pred = source->label(name);
        if (!pred) continue;
        std::vector<StateId> members;
        for (StateId s = 0; s < out.model.num_states(); ++s)
            if ((*pred)(s)) members.push_back(s);
        out.labels.emplace(std::string(name), std::move(members));
    }
    return out;
}

}  // namespace tbsg
