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
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "tbsg/game_model.hpp"
#include "tbsg/game_source.hpp"

namespace tbsg {

struct ParsedGame {
    GameModel model;
    Labels labels;
};

/**
 * Parses the explicit game format (see docs/format.md):
 *
 *     sg-explicit v1
 *     states 4
 *     initial 0
 *     state 0 MAX reward=0
 *       action a1 -> 0:1
 *       action b1 -> 0:1/2 1:1/2
 *     ...
 *     label goal = {2}
 *
 * Throws SyntaxError(line, column) for malformed text and ModelError for
 * semantic problems found while building the model.
 */
ParsedGame parse_explicit(std::string_view text);

/// Reads and parses a file. Throws std::runtime_error when it cannot be read.
ParsedGame load_explicit(const std::filesystem::path &path);

/// Canonical text: no comments, no action names, shortest round-trip
/// decimals, labels in name order as index lists.
std::string serialize_explicit(const GameModel &model, const Labels &labels = {});

enum class Family {
    Fig1Left,
    Fig1Right,
    Fig2Chain,
    TreeBigMec,
    TreeMulMec,
    TreeMulSec,
    TreeMulComplMec,
    TreeMulComplSec,
    DiceRace,
};

const char *to_string(Family family) noexcept;
std::optional<Family> family_from_name(std::string_view name);
/// Name of the family's size parameter ("k", "N", "target"), empty if none.
std::string_view parameter_name(Family family) noexcept;

struct GeneratorSpec {
    Family family = Family::Fig1Left;
    /// k for Fig2Chain, N for the tree families, target for DiceRace.
    std::uint32_t parameter = 1;
};

/**
 * Lazy source for a generated family; every source knows its state count
 * and exposes its labels. Throws ParameterOutOfRange.
 *
 * Fig1Left: s (MAX, reward 4) loops (a) or moves to q (b); q (MIN, reward 0)
 *   picks absorbing f5 (reward 5) or f10 (reward 10). States s, q, f5, f10.
 * Fig1Right: p (MIN) exits to X (x) or moves to s (y); s (MAX) moves to p
 *   (a) or exits to Y (b). p and s have reward 1/2, X and Y are absorbing
 *   with rewards 0 and 1. Labels goal = {Y}.
 * Fig2Chain(k): MAX states x_0..x_k, t, z. x_i loops (a) or moves to
 *   x_i, x_{i+1} with 1/2 each (b); x_k's b reaches t, z, x_k with 1/3 each.
 *   t and z are absorbing, t has reward 1, all others 0. k + 3 states;
 *   labels goal = t = {t}, z = {z}.
 * Tree families (N >= 1): a full binary tree with internal levels 0..N-1 and
 *   2^N leaves. Leaf j is absorbing with reward (7j + 3) mod 11; label goal
 *   holds the leaves with reward >= 6. Internal node i is a gadget occupying
 *   states [g*i, g*i + g) whose first state is its entry; leaves follow the
 *   gadgets.
 *   TreeMulMec: g = 2, MAX u (reward 2), MAX v (reward 8); u -> v, or a
 *     child with 3/4 and v with 1/4; v -> u. 3 * 2^N - 2 states.
 *   TreeMulSec: g = 2, MAX s (reward 3), MIN p (reward 7); s -> p or
 *     left child 3/4, p 1/4; p -> s or right child. 3 * 2^N - 2 states.
 *   TreeMulComplMec: g = 3, MAX u, v, w (rewards 1, 6, 9) with branching
 *     internal moves and exits to both children. 4 * 2^N - 3 states.
 *   TreeMulComplSec: g = 3 as above with v owned by MIN (rewards 2, 6, 8).
 *   TreeBigMec: one state per tree node, MAX on even levels and MIN on odd
 *     ones, moving to either child; every node at level N either returns to
 *     the root or enters its own absorbing terminal. Node rewards
 *     (5i) mod 11, terminal rewards as tree leaves. 3 * 2^N - 1 states.
 * DiceRace(target): MAX and MIN race from 0 to `target`, alternating
 *   turns. Stride moves 2; roll draws 1..6 uniformly, a 1 moves nothing and
 *   k >= 2 moves k. Reaching the target wins for the mover. States
 *   (turn, a, b) plus absorbing win (reward 1) and lose (reward 0);
 *   2 * target^2 + 2 states; label goal = {win}.
 */
std::unique_ptr<GameSource> make_source(const GeneratorSpec &spec);

/// Materialized generator output.
ParsedGame generate(const GeneratorSpec &spec);

}  // namespace tbsg
