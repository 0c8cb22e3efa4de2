// core/src/experiment.cc

// Copyright 2026  attrphone contributors

// See ../../COPYING for clarification regarding multiple authors
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

#include "attrphone/experiment.h"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "attrphone/errors.h"

namespace attrphone {

namespace {

std::string Trim(const std::string &s) {
  const size_t begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const size_t end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

int ParseInt(const std::string &key, const std::string &value) {
  try {
    size_t used = 0;
    const int parsed = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception &) {
    throw BadConfig("key \"" + key + "\": expected an integer, got \"" +
                    value + "\"");
  }
}

uint64_t ParseUint64(const std::string &key, const std::string &value) {
  try {
    size_t used = 0;
    const unsigned long long parsed = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception &) {
    throw BadConfig("key \"" + key + "\": expected an unsigned integer, got \"" +
                    value + "\"");
  }
}

double ParseDouble(const std::string &key, const std::string &value) {
  try {
    size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception &) {
    throw BadConfig("key \"" + key + "\": expected a number, got \"" + value +
                    "\"");
  }
}

bool ParseBool(const std::string &key, const std::string &value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw BadConfig("key \"" + key + "\": expected true or false, got \"" +
                  value + "\"");
}

std::pair<int, int> ParseIntPair(const std::string &key,
                                 const std::string &value) {
  std::stringstream ss(value);
  std::string first, second, rest;
  if (!(ss >> first >> second) || (ss >> rest))
    throw BadConfig("key \"" + key + "\": expected two integers, got \"" +
                    value + "\"");
  return {ParseInt(key, first), ParseInt(key, second)};
}

std::vector<std::string> SplitOnSpaces(const std::string &value) {
  std::vector<std::string> parts;
  std::stringstream ss(value);
  std::string part;
  while (ss >> part) parts.push_back(part);
  return parts;
}

}  // namespace

ExperimentConfig LoadExperimentConfig(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::map<std::string, std::string> raw;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const size_t eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw BadConfig(path + ":" + std::to_string(line_number) +
                      ": expected key = value");
    const std::string key = Trim(trimmed.substr(0, eq));
    const std::string value = Trim(trimmed.substr(eq + 1));
    if (key.empty())
      throw BadConfig(path + ":" + std::to_string(line_number) +
                      ": empty key");
    if (!raw.emplace(key, value).second)
      throw BadConfig(path + ":" + std::to_string(line_number) +
                      ": duplicate key \"" + key + "\"");
  }

  ExperimentConfig config;
  const std::filesystem::path config_dir =
      std::filesystem::path(path).parent_path();

  auto take = [&raw](const std::string &key) -> const std::string * {
    const auto it = raw.find(key);
    return it == raw.end() ? nullptr : &it->second;
  };

  if (const std::string *v = take("inventories")) {
    for (const std::string &entry : SplitOnSpaces(*v)) {
      std::filesystem::path p(entry);
      if (p.is_relative()) p = config_dir / p;
      config.inventory_paths.push_back(p.string());
    }
  }
  if (config.inventory_paths.empty())
    throw BadConfig("config must list at least one inventory file");
  if (const std::string *v = take("out_dir")) config.out_dir = *v;
  if (const std::string *v = take("mode")) {
    if (*v == "baseline")
      config.mode = TrainMode::kBaseline;
    else if (*v == "fused")
      config.mode = TrainMode::kFused;
    else
      throw BadConfig("mode must be baseline or fused, got \"" + *v + "\"");
  }
  if (const std::string *v = take("seed")) config.seed = ParseUint64("seed", *v);
  config.trainer.seed = config.seed;
  config.corpus.seed = config.seed;

  if (const std::string *v = take("model.dim"))
    config.model_dim = ParseInt("model.dim", *v);
  if (const std::string *v = take("model.blocks"))
    config.num_blocks = ParseInt("model.blocks", *v);
  if (const std::string *v = take("model.recurrent"))
    config.encoder_recurrent = ParseBool("model.recurrent", *v);
  if (const std::string *v = take("model.head_dim"))
    config.head_dim = ParseInt("model.head_dim", *v);

  TrainerConfig &trainer = config.trainer;
  if (const std::string *v = take("trainer.beta1"))
    trainer.beta1 = ParseDouble("trainer.beta1", *v);
  if (const std::string *v = take("trainer.beta2"))
    trainer.beta2 = ParseDouble("trainer.beta2", *v);
  if (const std::string *v = take("trainer.epsilon"))
    trainer.epsilon = ParseDouble("trainer.epsilon", *v);
  if (const std::string *v = take("trainer.warmup_steps"))
    trainer.warmup_steps = ParseInt("trainer.warmup_steps", *v);
  if (const std::string *v = take("trainer.epochs"))
    trainer.epochs = ParseInt("trainer.epochs", *v);
  if (const std::string *v = take("trainer.batch_size"))
    trainer.batch_size = ParseInt("trainer.batch_size", *v);
  if (const std::string *v = take("trainer.patience"))
    trainer.patience = ParseInt("trainer.patience", *v);
  if (const std::string *v = take("trainer.threads"))
    trainer.num_threads = ParseInt("trainer.threads", *v);
  if (const std::string *v = take("trainer.lr_scale"))
    trainer.lr_scale = ParseDouble("trainer.lr_scale", *v);
  if (const std::string *v = take("trainer.seed"))
    trainer.seed = ParseUint64("trainer.seed", *v);
  if (const std::string *v = take("trainer.weight.phoneme"))
    trainer.weight_phoneme = ParseDouble("trainer.weight.phoneme", *v);
  if (const std::string *v = take("trainer.weight.manner"))
    trainer.weight_manner = ParseDouble("trainer.weight.manner", *v);
  if (const std::string *v = take("trainer.weight.place"))
    trainer.weight_place = ParseDouble("trainer.weight.place", *v);
  if (const std::string *v = take("trainer.fusion.manner"))
    trainer.fusion.manner = ParseDouble("trainer.fusion.manner", *v);
  if (const std::string *v = take("trainer.fusion.place"))
    trainer.fusion.place = ParseDouble("trainer.fusion.place", *v);
  trainer.model_dim = config.model_dim;

  SyntheticCorpusSpec &corpus = config.corpus;
  int default_train = 40;
  int default_test = 10;
  if (const std::string *v = take("corpus.train_utterances"))
    default_train = ParseInt("corpus.train_utterances", *v);
  if (const std::string *v = take("corpus.test_utterances"))
    default_test = ParseInt("corpus.test_utterances", *v);
  if (const std::string *v = take("corpus.utterance_length")) {
    const auto [lo, hi] = ParseIntPair("corpus.utterance_length", *v);
    corpus.min_utterance_length = lo;
    corpus.max_utterance_length = hi;
  }
  if (const std::string *v = take("corpus.frames_per_phoneme")) {
    const auto [lo, hi] = ParseIntPair("corpus.frames_per_phoneme", *v);
    corpus.min_frames_per_phoneme = lo;
    corpus.max_frames_per_phoneme = hi;
  }
  if (const std::string *v = take("corpus.noise_sigma"))
    corpus.noise_sigma = ParseDouble("corpus.noise_sigma", *v);
  if (const std::string *v = take("corpus.identity_salience"))
    corpus.identity_salience = ParseDouble("corpus.identity_salience", *v);
  if (const std::string *v = take("corpus.seed"))
    corpus.seed = ParseUint64("corpus.seed", *v);

  for (const std::string &inventory_path : config.inventory_paths) {
    LanguageCorpusSpec language;
    language.language_id =
        std::filesystem::path(inventory_path).stem().string();
    language.train_utterances = default_train;
    language.test_utterances = default_test;
    if (const std::string *v =
            take("corpus.train_utterances." + language.language_id))
      language.train_utterances =
          ParseInt("corpus.train_utterances." + language.language_id, *v);
    if (const std::string *v =
            take("corpus.test_utterances." + language.language_id))
      language.test_utterances =
          ParseInt("corpus.test_utterances." + language.language_id, *v);
    corpus.languages.push_back(language);
  }

  // Every key must have been consumed; unknown keys are configuration bugs.
  static const char *kKnown[] = {
      "inventories", "out_dir", "mode", "seed", "model.dim", "model.blocks",
      "model.recurrent", "model.head_dim", "trainer.beta1", "trainer.beta2",
      "trainer.epsilon", "trainer.warmup_steps", "trainer.epochs",
      "trainer.batch_size", "trainer.patience", "trainer.threads",
      "trainer.lr_scale", "trainer.seed", "trainer.weight.phoneme",
      "trainer.weight.manner", "trainer.weight.place", "trainer.fusion.manner",
      "trainer.fusion.place", "corpus.train_utterances",
      "corpus.test_utterances", "corpus.utterance_length",
      "corpus.frames_per_phoneme", "corpus.noise_sigma",
      "corpus.identity_salience", "corpus.seed"};
  for (const auto &[key, value] : raw) {
    bool known = false;
    for (const char *candidate : kKnown)
      if (key == candidate) {
        known = true;
        break;
      }
    if (!known && key.rfind("corpus.train_utterances.", 0) != 0 &&
        key.rfind("corpus.test_utterances.", 0) != 0)
      throw BadConfig("unknown config key \"" + key + "\"");
    if (key.rfind("corpus.train_utterances.", 0) == 0 ||
        key.rfind("corpus.test_utterances.", 0) == 0) {
      const std::string language = key.substr(key.rfind('.') + 1);
      bool found = false;
      for (const LanguageCorpusSpec &spec : corpus.languages)
        if (spec.language_id == language) found = true;
      if (!found)
        throw BadConfig("per-language override for unknown language \"" +
                        language + "\" in key \"" + key + "\"");
    }
  }
  return config;
}

ExperimentSetup BuildSetup(const ExperimentConfig &config) {
  ExperimentSetup setup;
  for (const std::string &path : config.inventory_paths)
    setup.inventories.push_back(LoadInventory(path));
  setup.uni = BuildUnionInventory(setup.inventories);
  setup.manner_map = BuildMapping(AttributeCategory::Manner(), setup.uni);
  setup.place_map = BuildMapping(AttributeCategory::Place(), setup.uni);
  setup.model.input_dim = SyntheticFeatureDim(setup.uni);
  setup.model.model_dim = config.model_dim;
  setup.model.num_blocks = config.num_blocks;
  setup.model.encoder_recurrent = config.encoder_recurrent;
  setup.model.head_dim = config.head_dim;
  setup.model.phoneme_vocab = setup.uni.NumPhonemes() + 1;
  setup.model.manner_vocab = AttributeCategory::Manner().NumClasses() + 1;
  setup.model.place_vocab = AttributeCategory::Place().NumClasses() + 1;
  ValidateModelConfig(setup.model);
  ValidateTrainerConfig(config.trainer);
  return setup;
}

ExperimentResult RunExperiment(const ExperimentConfig &config) {
  namespace fs = std::filesystem;
  const fs::path out_dir(config.out_dir);
  const bool created = !fs::exists(out_dir);
  fs::create_directories(out_dir);
  std::vector<fs::path> written;
  try {
    const ExperimentSetup setup = BuildSetup(config);
    const Corpus corpus = GenerateCorpus(config.corpus, setup.uni);

    ExperimentResult result;
    for (const TrainMode mode : {TrainMode::kBaseline, TrainMode::kFused}) {
      const std::string tag = TrainModeName(mode);
      const TrainResult trained =
          Train(setup.model, config.trainer, corpus, setup.uni,
                setup.manner_map, setup.place_map, mode);
      written.push_back(out_dir / ("train_log_" + tag + ".csv"));
      WriteTrainLogCsv(trained.log, written.back().string());
      written.push_back(out_dir / (tag + ".ckpt"));
      SaveCheckpoint(setup.model, trained.params, written.back().string());

      EvalOptions options;
      options.mode = mode;
      options.fusion = config.trainer.fusion;
      const EvalReport report =
          Evaluate(setup.model, trained.params, corpus.test, setup.uni,
                   setup.manner_map, setup.place_map, options);
      written.push_back(out_dir / ("report_" + tag + ".csv"));
      WriteReportCsv(report, written.back().string());
      (mode == TrainMode::kBaseline ? result.baseline : result.fused) = report;
    }

    written.push_back(out_dir / "summary.txt");
    std::ofstream summary(written.back());
    if (!summary) throw IoError("cannot write " + written.back().string());
    summary << FormatComparisonTable(result.baseline, result.fused);
    summary.close();
    return result;
  } catch (...) {
    // Remove partial artifacts: the whole directory when this run created
    // it, otherwise only the files this run managed to write.
    std::error_code ec;
    if (created) {
      fs::remove_all(out_dir, ec);
    } else {
      for (const fs::path &p : written) fs::remove(p, ec);
    }
    throw;
  }
}

}  // namespace attrphone
