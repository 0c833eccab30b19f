// Copyright 2026 The QuEPP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "run_config.h"

namespace quepp::cli {

struct Context {
  RunConfig config;
  std::filesystem::path out;
  bool force = false;
  /// Result files for `report`.
  std::vector<std::string> inputs;
};

void cmd_generate(const Context& ctx);
void cmd_cpt(const Context& ctx);
void cmd_sample(const Context& ctx);
void cmd_quepp(const Context& ctx);
void cmd_report(const Context& ctx);

nlohmann::json result_json(const QueppResult& r);

}  // namespace quepp::cli
