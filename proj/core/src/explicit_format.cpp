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
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "tbsg/ingest.hpp"

namespace tbsg {
namespace {

struct Token {
    std::string_view text;
    std::size_t column;  // 1-based
};

bool is_punct(char c)
{
    return c == '{' || c == '}' || c == ',' || c == '=';
}

std::vector<Token> tokenize(std::string_view line, bool split_punct)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (c == '#') break;
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (split_punct && is_punct(c)) {
            out.push_back({line.substr(i, 1), i + 1});
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '#' &&
               !(split_punct && is_punct(line[j])))
            ++j;
        out.push_back({line.substr(i, j - i), i + 1});
        i = j;
    }
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    ParsedGame run();

private:
    [[noreturn]] void fail(std::size_t column, const std::string &msg) const { throw SyntaxError(line_no_, column, msg); }

    std::uint64_t parse_index(const Token &t) const
    {
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || p != t.text.data() + t.text.size())
            fail(t.column, "expected a non-negative integer, got '" + std::string(t.text) + "'");
        return v;
    }

    double parse_number(std::string_view s, std::size_t column) const
    {
        auto slash = s.find('/');
        if (slash != std::string_view::npos) {
            double num = parse_number(s.substr(0, slash), column);
            double den = parse_number(s.substr(slash + 1), column + slash + 1);
            if (den == 0.0) fail(column + slash + 1, "zero denominator");
            return num / den;
        }
        double v = 0.0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || p != s.data() + s.size())
            fail(column, "expected a number, got '" + std::string(s) + "'");
        return v;
    }

    StateId state_ref(const Token &t) const
    {
        std::uint64_t v = parse_index(t);
        if (!states_ || v >= *states_) fail(t.column, "state " + std::string(t.text) + " out of range");
        return static_cast<StateId>(v);
    }

    void header(const std::vector<Token> &tok);
    void state_line(const std::vector<Token> &tok);
    void action_line(const std::vector<Token> &tok);
    void label_line(const std::vector<Token> &tok);

    std::string_view text_;
    std::size_t line_no_ = 0;
    bool seen_header_ = false;
    std::optional<std::size_t> states_;
    std::optional<StateId> initial_;
    std::vector<Player> owners_;
    std::vector<double> rewards_;
    std::vector<std::vector<Distribution>> actions_;
    std::vector<char> defined_;
    std::optional<StateId> current_;
    bool labels_started_ = false;
    Labels labels_;
};

void Parser::header(const std::vector<Token> &tok)
{
    if (tok.size() != 2 || tok[0].text != "sg-explicit")
        fail(tok[0].column, "expected header 'sg-explicit v1'");
    if (tok[1].text != "v1") fail(tok[1].column, "unsupported format version '" + std::string(tok[1].text) + "'");
    seen_header_ = true;
}

void Parser::state_line(const std::vector<Token> &tok)
{
    if (!states_ || !initial_) fail(tok[0].column, "'states' and 'initial' must precede state blocks");
    if (labels_started_) fail(tok[0].column, "state blocks must precede labels");
    if (tok.size() != 4) fail(tok[0].column, "expected 'state <id> <MAX|MIN> reward=<r>'");
    StateId s = state_ref(tok[1]);
    if (defined_[s]) fail(tok[1].column, "state " + std::to_string(s) + " defined twice");
    defined_[s] = 1;
    if (tok[2].text == "MAX")
        owners_[s] = Player::Maximizer;
    else if (tok[2].text == "MIN")
        owners_[s] = Player::Minimizer;
    else
        fail(tok[2].column, "expected MAX or MIN, got '" + std::string(tok[2].text) + "'");
    constexpr std::string_view key = "reward=";
    if (tok[3].text.substr(0, key.size()) != key) fail(tok[3].column, "expected reward=<r>");
    rewards_[s] = parse_number(tok[3].text.substr(key.size()), tok[3].column + key.size());
    current_ = s;
}

void Parser::action_line(const std::vector<Token> &tok)
{
    if (!current_ || labels_started_) fail(tok[0].column, "action outside a state block");
    std::size_t i = 1;
    if (i < tok.size() && tok[i].text != "->") ++i;  // optional action name
    if (i >= tok.size() || tok[i].text != "->") fail(tok[0].column, "expected '->' in action line");
    ++i;
    if (i >= tok.size()) fail(tok.back().column, "action without successors");
    Distribution d;
    for (; i < tok.size(); ++i) {
        auto colon = tok[i].text.find(':');
        if (colon == std::string_view::npos) fail(tok[i].column, "expected <target>:<probability>");
        Token target{tok[i].text.substr(0, colon), tok[i].column};
        StateId t = state_ref(target);
        double p = parse_number(tok[i].text.substr(colon + 1), tok[i].column + colon + 1);
        if (!(p > 0.0) || p > 1.0) fail(tok[i].column + colon + 1, "probability must lie in (0, 1]");
        d.push_back({t, p});
    }
    actions_[*current_].push_back(std::move(d));
}

void Parser::label_line(const std::vector<Token> &tok)
{
    labels_started_ = true;
    if (tok.size() < 4 || tok[2].text != "=" || tok[3].text != "{")
        fail(tok[0].column, "expected 'label <name> = {...}'");
    std::string name(tok[1].text);
    if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
        fail(tok[1].column, "label names start with a letter");
    if (labels_.count(name)) fail(tok[1].column, "label '" + name + "' defined twice");
    std::vector<StateId> members;
    std::size_t i = 4;
    bool expect_elem = true;
    bool closed = false;
    for (; i < tok.size(); ++i) {
        const Token &t = tok[i];
        if (t.text == "}") {
            closed = true;
            ++i;
            break;
        }
        if (expect_elem) {
            if (std::isdigit(static_cast<unsigned char>(t.text[0]))) {
                members.push_back(state_ref(t));
            } else {
                auto it = labels_.find(t.text);
                if (it == labels_.end()) fail(t.column, "undefined label '" + std::string(t.text) + "'");
                members.insert(members.end(), it->second.begin(), it->second.end());
            }
            expect_elem = false;
        } else {
            if (t.text != ",") fail(t.column, "expected ',' or '}'");
            expect_elem = true;
        }
    }
    if (!closed) fail(tok.back().column, "unterminated label set");
    if (expect_elem && !members.empty()) fail(tok[i - 1].column, "dangling ','");
    if (i != tok.size()) fail(tok[i].column, "unexpected text after label set");
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    labels_.emplace(std::move(name), std::move(members));
}

ParsedGame Parser::run()
{
    std::size_t pos = 0;
    while (pos <= text_.size()) {
        std::size_t end = text_.find('\n', pos);
        if (end == std::string_view::npos) end = text_.size();
        std::string_view line = text_.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no_;
        pos = end + 1;

        auto first = tokenize(line, false);
        if (first.empty()) continue;
        std::string_view kw = first[0].text;
        if (!seen_header_) {
            header(first);
            continue;
        }
        if (kw == "states") {
            if (states_) fail(first[0].column, "'states' given twice");
            if (first.size() != 2) fail(first[0].column, "expected 'states <count>'");
            std::uint64_t n = parse_index(first[1]);
            if (n == 0) fail(first[1].column, "a game needs at least one state");
            if (n > 0xfffffffeu) fail(first[1].column, "too many states");
            states_ = n;
            owners_.assign(n, Player::Maximizer);
            rewards_.assign(n, 0.0);
            actions_.assign(n, {});
            defined_.assign(n, 0);
        } else if (kw == "initial") {
            if (initial_) fail(first[0].column, "'initial' given twice");
            if (first.size() != 2) fail(first[0].column, "expected 'initial <state>'");
            if (!states_) fail(first[0].column, "'states' must precede 'initial'");
            initial_ = state_ref(first[1]);
        } else if (kw == "state") {
            state_line(first);
        } else if (kw == "action") {
            action_line(first);
        } else if (kw == "label") {
            if (!states_) fail(first[0].column, "'states' must precede labels");
            label_line(tokenize(line, true));
        } else {
            fail(first[0].column, "unknown keyword '" + std::string(kw) + "'");
        }
    }
    if (!seen_header_) throw SyntaxError(line_no_, 1, "missing header 'sg-explicit v1'");
    if (!states_) throw SyntaxError(line_no_, 1, "missing 'states'");
    if (!initial_) throw SyntaxError(line_no_, 1, "missing 'initial'");
    for (std::size_t s = 0; s < *states_; ++s)
        if (!defined_[s]) throw SyntaxError(line_no_, 1, "state " + std::to_string(s) + " is never defined");
    ParsedGame out;
    out.model = build_game(std::move(owners_), std::move(actions_), std::move(rewards_), *initial_);
    out.labels = std::move(labels_);
    return out;
}

void append_number(std::string &out, double v)
{
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, p);
}

}  // namespace

ParsedGame parse_explicit(std::string_view text)
{
    return Parser(text).run();
}

ParsedGame load_explicit(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_explicit(ss.str());
}

std::string serialize_explicit(const GameModel &model, const Labels &labels)
{
    std::string out = "sg-explicit v1\n";
    out += "states " + std::to_string(model.num_states()) + "\n";
    out += "initial " + std::to_string(model.initial()) + "\n";
    for (StateId s = 0; s < model.num_states(); ++s) {
        out += "state " + std::to_string(s) + " " + to_string(model.owner(s)) + " reward=";
        append_number(out, model.reward(s));
        out += '\n';
        for (std::size_t a = 0; a < model.num_actions(s); ++a) {
            out += "  action ->";
            for (const auto &t : model.transitions(s, a)) {
                out += ' ' + std::to_string(t.target) + ':';
                append_number(out, t.probability);
            }
            out += '\n';
        }
    }
    for (const auto &[name, states] : labels) {
        out += "label " + name + " = {";
        for (std::size_t i = 0; i < states.size(); ++i) {
            if (i) out += ", ";
            out += std::to_string(states[i]);
        }
        out += "}\n";
    }
    return out;
}

}  // namespace tbsg
