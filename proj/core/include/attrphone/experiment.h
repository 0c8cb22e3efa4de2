// core/include/attrphone/experiment.h

// Copyright 2026  attrphone contributors

// See ../../../COPYING for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef ATTRPHONE_EXPERIMENT_H_
#define ATTRPHONE_EXPERIMENT_H_

#include <string>
#include <vector>

#include "attrphone/attribute-map.h"
#include "attrphone/eval.h"
#include "attrphone/net.h"
#include "attrphone/phone-set.h"
#include "attrphone/trainer.h"

namespace attrphone {

/// Everything a run needs, parsed from the key = value config format
/// documented in the README. Relative inventory paths are resolved against
/// the config file's directory.
struct ExperimentConfig {
  std::vector<std::string> inventory_paths;
  std::string out_dir = "runs/out";
  TrainMode mode = TrainMode::kFused;
  uint64_t seed = 0;

  int model_dim = 16;
  int num_blocks = 1;
  bool encoder_recurrent = true;
  int head_dim = 16;

  TrainerConfig trainer;
  SyntheticCorpusSpec corpus;
};

ExperimentConfig LoadExperimentConfig(const std::string &path);

/// Inventories, union, mappings and the derived model shapes for a config.
struct ExperimentSetup {
  std::vector<LanguageInventory> inventories;
  UnionInventory uni;
  AttributeMapping manner_map;
  AttributeMapping place_map;
  ModelConfig model;
};

ExperimentSetup BuildSetup(const ExperimentConfig &config);

struct ExperimentResult {
  EvalReport baseline;
  EvalReport fused;
};

/// Full orchestration: generates the corpus, trains baseline and fused
/// models with identical seeds, evaluates both per language, and writes
/// reports, checkpoints, training logs and a summary table under
/// config.out_dir. Partial artifacts are removed when a step fails.
ExperimentResult RunExperiment(const ExperimentConfig &config);

}  // namespace attrphone

#endif  // ATTRPHONE_EXPERIMENT_H_
