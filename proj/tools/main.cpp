// Copyright 2026 The Apiary Desk Authors
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

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "apiary/commands.hpp"

namespace cli = apiary::cli;

int main(int argc, char** argv) {
  CLI::App app{"apiary: free-flyer wrench-policy training, evaluation and flight-sequence replay"};
  app.require_subcommand(1);
  int workers = 0;
  app.add_option("--workers", workers, "Worker threads (default: APIARY_WORKERS, else hardware)")
      ->check(CLI::NonNegativeNumber);

  cli::TrainArgs train;
  std::uint64_t seed = 0;
  auto* t = app.add_subcommand("train", "Train a policy with PPO");
  t->add_option("--config", train.config_path, "INI configuration file")->check(CLI::ExistingFile);
  t->add_option("--out", train.out_dir, "Output directory")->required();
  auto* seed_opt = t->add_option("--seed", seed, "Master seed (overrides the config)");
  t->add_option("--workers", workers, "Worker threads")->check(CLI::NonNegativeNumber);

  cli::EvalArgs eval;
  double mass_scale = 0.0;
  auto* e = app.add_subcommand("eval", "Evaluate a checkpoint with the deterministic policy");
  e->add_option("--ckpt", eval.ckpt_path, "Policy checkpoint")->required();
  e->add_option("--scenario", eval.scenario, "iss6dof or granite3dof")
      ->check(CLI::IsMember({"iss6dof", "granite3dof"}));
  e->add_option("--episodes", eval.episodes, "Episode count")->check(CLI::PositiveNumber);
  e->add_option("--seed", eval.seed, "Seed for the episode bank");
  e->add_option("--logs", eval.logs_dir, "Directory for per-episode trajectory CSVs");
  e->add_option("--out", eval.out_dir, "Directory for summary.csv, episodes.csv and config.ini");
  auto* mass_opt = e->add_option("--mass-scale", mass_scale, "Pin mass to this multiple of nominal");
  e->add_option("--config", eval.config_path, "Override the configuration stored in the checkpoint")
      ->check(CLI::ExistingFile);
  e->add_option("--workers", workers, "Worker threads")->check(CLI::NonNegativeNumber);

  cli::CompareArgs cmp;
  auto* c = app.add_subcommand("compare", "Run one maneuver under the baseline and the policy");
  c->add_option("--ckpt", cmp.ckpt_path, "Policy checkpoint")->required();
  c->add_option("--maneuver", cmp.maneuver, "Maneuver, e.g. 'undock' or 'rotate z -20 30'");
  c->add_option("--out", cmp.out_dir, "Output directory")->required();
  c->add_option("--config", cmp.config_path, "Override the configuration stored in the checkpoint")
      ->check(CLI::ExistingFile);

  cli::ReplayArgs rep;
  auto* r = app.add_subcommand("replay", "Replay a maneuver sequence with the safety monitor");
  r->add_option("--sequence", rep.sequence_path, "Sequence file")->required();
  r->add_option("--ckpt", rep.ckpt_path, "Policy checkpoint");
  r->add_option("--faults", rep.faults_path, "Fault injection file");
  r->add_option("--out", rep.out_dir, "Output directory")->required();
  r->add_option("--controller", rep.controller, "rl or baseline")->check(CLI::IsMember({"rl", "baseline"}));
  r->add_option("--config", rep.config_path, "Override the configuration stored in the checkpoint")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? cli::kExitOk : cli::kExitUsage;
  }

  return cli::run_guarded(
      [&] {
        if (*t) {
          if (*seed_opt) train.seed = seed;
          train.workers = workers;
          cli::cmd_train(train, std::cout, std::cerr);
        } else if (*e) {
          if (*mass_opt) eval.mass_scale = mass_scale;
          eval.workers = workers;
          cli::cmd_eval(eval, std::cout, std::cerr);
        } else if (*c) {
          cli::cmd_compare(cmp, std::cout, std::cerr);
        } else if (*r) {
          cli::cmd_replay(rep, std::cout, std::cerr);
        }
      },
      std::cerr);
}
