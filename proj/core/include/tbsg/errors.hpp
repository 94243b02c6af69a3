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

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tbsg {

enum class ModelErrorKind {
    InvalidArgument,
    EmptyActionSet,
    DistributionSumError,
    DanglingTarget,
    OverlappingSets,
    ForeignAction,
    MissingChoice,
    LabelMismatch,
    NotAMec,
};

const char *to_string(ModelErrorKind kind) noexcept;

/// Structural error in a model or in arguments referring to one.
class ModelError : public std::runtime_error {
public:
    ModelError(ModelErrorKind kind, std::string message, std::int64_t state = -1, std::int64_t action = -1,
               double value = 0.0);

    ModelErrorKind kind() const noexcept { return kind_; }
    /// Offending state, or -1.
    std::int64_t state() const noexcept { return state_; }
    /// Offending action index (or target for DanglingTarget), or -1.
    std::int64_t action() const noexcept { return action_; }
    /// Distribution sum for DistributionSumError, dangling target otherwise.
    double value() const noexcept { return value_; }

private:
    ModelErrorKind kind_;
    std::int64_t state_;
    std::int64_t action_;
    double value_;
};

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(std::size_t line, std::size_t column, const std::string &message);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class ParameterOutOfRange : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace tbsg
