/******************************************************************************
 * Copyright 2026 The psmrac Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

/**
 * @file scenario_file.hpp
 * @brief Strict JSON scenario files for the command-line tool.
 */

#pragma once

#include <string>

#include "psmrac/simulate.hpp"

namespace psmrac::cli {

struct ScenarioFile {
  Scenario scenario;
  /// Output directory for simulate; empty means "out/<name>".
  std::string output_dir;
  /// Parameter file written by design; empty means "<name>.params".
  std::string params_path;
};

/// Parses a scenario document; relative plant paths resolve against base_dir.
/// Throws ConfigError on unknown keys, wrong types or missing fields.
ScenarioFile parse_scenario(const std::string& text, const std::string& base_dir);
ScenarioFile read_scenario_file(const std::string& path);

/// Scenario for a GTM case (1..6) with the scenario-file output defaults.
ScenarioFile preset_scenario(int index);

}  // namespace psmrac::cli
