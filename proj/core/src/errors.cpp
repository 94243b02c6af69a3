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

#include "tbsg/errors.hpp"

namespace tbsg {

const char *to_string(ModelErrorKind kind) noexcept
{
    switch (kind) {
    case ModelErrorKind::InvalidArgument: return "InvalidArgument";
    case ModelErrorKind::EmptyActionSet: return "EmptyActionSet";
    case ModelErrorKind::DistributionSumError: return "DistributionSumError";
    case ModelErrorKind::DanglingTarget: return "DanglingTarget";
    case ModelErrorKind::OverlappingSets: return "OverlappingSets";
    case ModelErrorKind::ForeignAction: return "ForeignAction";
    case ModelErrorKind::MissingChoice: return "MissingChoice";
    case ModelErrorKind::LabelMismatch: return "LabelMismatch";
    case ModelErrorKind::NotAMec: return "NotAMec";
    }
    return "?";
}

ModelError::ModelError(ModelErrorKind kind, std::string message, std::int64_t state, std::int64_t action,
                       double value)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), state_(state),
      action_(action), value_(value)
{
}

SyntaxError::SyntaxError(std::size_t line, std::size_t column, const std::string &message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line), column_(column)
{
}

}  // namespace tbsg
