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

#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <chrono>
#include <nlohmann/json.hpp>
#include <optional>

#include "tbsg/ce_solver.hpp"
#include "tbsg/errors.hpp"
#include "tbsg/ingest.hpp"
#include "tbsg/pe_solver.hpp"

namespace tbsg::cli {
namespace {

// Thrown for bad flag values; the message names the flag.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Settings {
    std::string model;
    std::string generate;
    std::vector<std::string> params;
    std::string objective;
    std::string goal;
    std::string avoid;
    std::string unsafe;
    std::string mode = "pe";
    double precision = 1e-6;
    std::uint64_t seed = 0;
};

// A comma-separated list of state indices, or nullopt if `text` is not one.
std::optional<std::vector<StateId>> parse_indices(std::string_view text)
{
    std::vector<StateId> out;
    while (!text.empty()) {
        auto comma = text.find(',');
        auto item = text.substr(0, comma);
        StateId v = 0;
        auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc() || p != item.data() + item.size()) return std::nullopt;
        out.push_back(v);
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<StateId> resolve(const Labels &labels, const std::string &flag, const std::string &text)
{
    if (text.empty()) return {};
    if (auto it = labels.find(text); it != labels.end()) return it->second;
    if (auto idx = parse_indices(text)) return *idx;
    throw UsageError(flag + ": '" + text + "' is neither a label nor a list of state indices");
}

StatePredicate resolve(const GameSource &source, const std::string &flag, const std::string &text)
{
    if (text.empty()) return [](StateId) { return false; };
    if (auto p = source.label(text)) return *p;
    auto idx = parse_indices(text);
    if (!idx) throw UsageError(flag + ": '" + text + "' is neither a label nor a list of state indices");
    if (auto n = source.num_states(); n && !idx->empty() && idx->back() >= *n)
        throw UsageError(flag + ": state " + std::to_string(idx->back()) + " out of range");
    return membership(std::move(*idx));
}

GeneratorSpec generator_spec(const Settings &s)
{
    auto family = family_from_name(s.generate);
    if (!family) throw UsageError("--generate: unknown family '" + s.generate + "'");
    GeneratorSpec spec{*family, 1};
    const auto name = parameter_name(*family);
    for (const auto &p : s.params) {
        auto eq = p.find('=');
        if (eq == std::string::npos) throw UsageError("--param: expected key=value, got '" + p + "'");
        if (name.empty() || p.substr(0, eq) != name)
            throw UsageError("--param: " + s.generate + " has no parameter '" + p.substr(0, eq) + "'");
        auto value = std::string_view(p).substr(eq + 1);
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), spec.parameter);
        if (value.empty() || ec != std::errc() || ptr != value.data() + value.size())
            throw UsageError("--param: '" + std::string(value) + "' is not a non-negative integer");
    }
    return spec;
}

ObjectiveKind objective_kind(const std::string &name)
{
    if (name == "reach") return ObjectiveKind::Reachability;
    if (name == "safety") return ObjectiveKind::Safety;
    if (name == "meanpayoff") return ObjectiveKind::MeanPayoff;
    throw UsageError("--objective: expected reach, safety or meanpayoff");
}

void check_labels(const Settings &s, ObjectiveKind kind)
{
    if (kind == ObjectiveKind::Reachability && s.goal.empty()) throw UsageError("--goal is required for reach");
    if (kind == ObjectiveKind::Safety && s.unsafe.empty()) throw UsageError("--unsafe is required for safety");
    if (kind != ObjectiveKind::Reachability && (!s.goal.empty() || !s.avoid.empty()))
        throw UsageError("--goal and --avoid apply to reach only");
    if (kind != ObjectiveKind::Safety && !s.unsafe.empty()) throw UsageError("--unsafe applies to safety only");
}

Objective explicit_objective(const Settings &s, ObjectiveKind kind, const Labels &labels)
{
    switch (kind) {
    case ObjectiveKind::Reachability:
        return Objective::reachability(resolve(labels, "--goal", s.goal), resolve(labels, "--avoid", s.avoid));
    case ObjectiveKind::Safety: return Objective::safety(resolve(labels, "--unsafe", s.unsafe));
    case ObjectiveKind::MeanPayoff: break;
    }
    return Objective::mean_payoff();
}

PeObjective lazy_objective(const Settings &s, ObjectiveKind kind, const GameSource &source)
{
    PeObjective o;
    o.kind = kind;
    if (kind == ObjectiveKind::Reachability) {
        o.goal = resolve(source, "--goal", s.goal);
        o.avoid = resolve(source, "--avoid", s.avoid);
    } else if (kind == ObjectiveKind::Safety) {
        o.avoid = resolve(source, "--unsafe", s.unsafe);
    }
    return o;
}

SolveResult solve(const Settings &s, ObjectiveKind kind)
{
    const bool pe = s.mode == "pe";
    PeOptions pe_options;
    pe_options.seed = s.seed;
    // Generated models stay lazy under partial exploration.
    if (pe && !s.generate.empty()) {
        auto source = make_source(generator_spec(s));
        return solve_pe(*source, lazy_objective(s, kind, *source), s.precision, pe_options);
    }
    ParsedGame game = s.generate.empty() ? load_explicit(s.model) : generate(generator_spec(s));
    Objective objective = explicit_objective(s, kind, game.labels);
    if (pe) return solve_pe(game.model, objective, s.precision, pe_options);
    return solve_ce(game.model, objective, s.precision);
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    Settings s;
    CLI::App app{"Solves turn-based stochastic games with certified bounds.", "tbsg"};
    auto *model = app.add_option("--model", s.model, "Model file in the explicit format")->check(CLI::ExistingFile);
    auto *gen = app.add_option("--generate", s.generate, "Generated family, e.g. fig2chain or tree_mul_mec");
    model->excludes(gen);
    app.add_option("--param", s.params, "Generator parameter as key=value (k, N or target)")->needs(gen);
    app.add_option("--objective", s.objective, "reach, safety or meanpayoff")->required();
    app.add_option("--goal", s.goal, "Goal label or comma-separated state indices");
    app.add_option("--avoid", s.avoid, "States to avoid when reaching the goal");
    app.add_option("--unsafe", s.unsafe, "Unsafe label or comma-separated state indices");
    app.add_option("--mode", s.mode, "Complete (ce) or partial (pe) exploration")->check(CLI::IsMember({"ce", "pe"}));
    app.add_option("--precision", s.precision, "Absolute precision")->check(CLI::PositiveNumber);
    app.add_option("--seed", s.seed, "Seed for partial exploration");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
        if (s.model.empty() && s.generate.empty()) throw UsageError("one of --model or --generate is required");
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const UsageError &e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    SolveResult r;
    double elapsed_ms = 0.0;
    try {
        const ObjectiveKind kind = objective_kind(s.objective);
        check_labels(s, kind);
        const auto start = std::chrono::steady_clock::now();
        r = solve(s, kind);
        elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    } catch (const SyntaxError &e) {
        err << "error: " << s.model << ':' << e.what() << '\n';
        return kInputError;
    } catch (const std::exception &e) {
        // Usage, model, parameter and file errors alike.
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    nlohmann::ordered_json j;
    j["value"] = r.value;
    j["lower"] = r.lower;
    j["upper"] = r.upper;
    j["precision"] = s.precision;
    j["mode"] = s.mode;
    j["objective"] = s.objective;
    j["states_explored"] = r.stats.states_explored;
    j["iterations"] = r.iterations;
    j["time_ms"] = elapsed_ms;
    j["seed"] = s.seed;
    out << j.dump() << '\n';
    if (r.budget_exceeded) {
        err << "error: iteration budget exhausted; bounds are sound but wider than requested\n";
        return kBudgetExceeded;
    }
    return kSuccess;
}

}  // namespace tbsg::cli
