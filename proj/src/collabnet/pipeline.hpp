// Copyright 2026 The collabnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Stage runner. Each stage writes into <out>/<stage>/ and leaves a
// summary.json there; <out>/report.json aggregates them.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "collabnet/config.hpp"

namespace collabnet::pipeline {

struct RunResult {
  /// 0 on success, otherwise the ErrorCode of the first failure.
  int exit_code = 0;
  std::vector<config::ConfigIssue> issues;  // validation problems; nothing ran when non-empty
  nlohmann::json report;
};

/// Validates first; on success runs the enabled stages in dependency order.
/// A failing stage stops the run, keeps earlier outputs and records the cause
/// in report.json.
RunResult run_pipeline(const config::PipelineConfig& config);

}  // namespace collabnet::pipeline
