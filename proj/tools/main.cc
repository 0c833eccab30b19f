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


#include <cstdlib>
#include <iostream>
#include <new>

#include <CLI11.hpp>

#include "commands.h"
#include "quepp/errors.h"

namespace {

enum ExitCode { kOk = 0, kOther = 1, kConfig = 2, kCapability = 3, kInternal = 4 };

}  // namespace

int main(int argc, char** argv) {
  using namespace quepp;
  CLI::App app{"QuEPP: Clifford perturbation theory boosted by noisy quantum executions"};
  app.set_version_flag("--version", cli::version_string());
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::size_t workers = 0;
  std::string out;
  bool allow_partial = false;
  bool infinite_shots = false;
  bool force = false;
  std::vector<std::string> inputs;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", config_path, "Run configuration (JSON); result files are accepted too");
    if (needs_config) c->required();
    sub->add_option("--seed", seed, "Override the top-level seed and every seed derived from it");
    sub->add_option("--workers", workers, "Worker threads (1 gives bit-exact reruns)");
    sub->add_option("--out", out, "Output directory (default: $QUEPP_OUTPUT_DIR, then the config, then ./quepp_out)");
  };
  auto* gen = app.add_subcommand("generate", "Write experiment circuits and a manifest");
  auto* cpt = app.add_subcommand("cpt", "Classical CPT series by order and by merged term count");
  auto* sample = app.add_subcommand("sample", "Build the path ensemble and dump it as JSON lines");
  auto* quepp_cmd = app.add_subcommand("quepp", "Run the full protocol against the simulated backend");
  auto* report = app.add_subcommand("report", "Merge quepp result files into bias tables");
  for (auto* s : {gen, cpt, sample, quepp_cmd}) add_common(s, true);
  for (auto* s : {cpt, sample, quepp_cmd}) {
    s->add_flag("--allow-partial", allow_partial, "Continue with the executable subset when jobs fail");
    s->add_flag("--infinite-shots", infinite_shots, "Exact noisy expectations, no shot noise");
  }
  add_common(report, false);
  report->add_option("inputs", inputs, "quepp.json files")->required();
  report->add_flag("--force", force, "Merge files that come from different seeds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    cli::Context ctx;
    if (!config_path.empty()) {
      ctx.config = cli::load_config(config_path);
      if (seed != 0) cli::reseed(ctx.config, seed);
      if (workers != 0) ctx.config.workers = workers;
      if (allow_partial) ctx.config.allow_partial = true;
      if (infinite_shots) ctx.config.plan.infinite_shots = true;
    }
    std::string dir = out;
    if (dir.empty()) {
      if (const char* env = std::getenv("QUEPP_OUTPUT_DIR"); env && *env) dir = env;
    }
    if (dir.empty()) dir = ctx.config.output_dir;
    if (dir.empty()) dir = "quepp_out";
    ctx.out = dir;
    ctx.force = force;
    ctx.inputs = inputs;

    if (*gen) cli::cmd_generate(ctx);
    else if (*cpt) cli::cmd_cpt(ctx);
    else if (*sample) cli::cmd_sample(ctx);
    else if (*quepp_cmd) cli::cmd_quepp(ctx);
    else if (*report) cli::cmd_report(ctx);
    std::cout << "wrote " << ctx.out.string() << "\n";
    return kOk;
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const CapabilityError& e) {
    std::cerr << "capability error: " << e.what() << "\n";
    return kCapability;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
}
