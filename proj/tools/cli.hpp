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

#include <ostream>
#include <string>
#include <vector>

namespace tbsg::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInputError = 1,
    kBudgetExceeded = 2,
};

/**
 * Solves one model-objective pair and writes a single JSON object to `out`:
 *
 *     {"value", "lower", "upper", "precision", "mode", "objective",
 *      "states_explored", "iterations", "time_ms", "seed"}
 *
 * `args` excludes the program name. Diagnostics go to `err`. Returns an
 * ExitCode; on kBudgetExceeded the bounds are still written.
 */
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace tbsg::cli
