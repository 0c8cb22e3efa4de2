// core/include/attrphone/trainer.h

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

#ifndef ATTRPHONE_TRAINER_H_
#define ATTRPHONE_TRAINER_H_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "attrphone/attribute-map.h"
#include "attrphone/ctc.h"
#include "attrphone/net.h"
#include "attrphone/phone-set.h"
#include "attrphone/tensor.h"

namespace attrphone {

struct TrainerConfig {
  double beta1 = 0.9;
  double beta2 = 0.98;
  double epsilon = 1e-9;
  int warmup_steps = 500;
  int model_dim = 16;
  double weight_phoneme = 1.0;
  double weight_manner = 1.0;
  double weight_place = 1.0;
  int epochs = 30;
  int batch_size = 8;
  uint64_t seed = 0;
  int patience = 5;     // early-stopping patience in epochs
  int num_threads = 1;  // per-utterance forward/backward parallelism
  double lr_scale = 1.0;
  FusionWeights fusion;
};

/// Throws BadConfig when the betas, epsilon or loss weights are out of range.
void ValidateTrainerConfig(const TrainerConfig &config);

/// Learning rate at a 1-based optimizer step: linear warm-up to the peak
/// 0.05/sqrt(model_dim) at warmup_steps, inverse-square-root decay after.
double LrAt(const TrainerConfig &config, int64_t step);

struct AdamState {
  std::map<std::string, Tensor2> first_moment;
  std::map<std::string, Tensor2> second_moment;
  int64_t step = 0;
};

/// One bias-corrected Adam update. Parameters without an entry in `grads`
/// are left untouched, as are their moments.
void AdamStep(ModelParams *params, const GradientMap &grads, AdamState *state,
              double lr, const TrainerConfig &config);

struct LanguageCorpusSpec {
  std::string language_id;
  int train_utterances = 0;
  int test_utterances = 0;
};

/// Synthetic stand-in for a multilingual speech corpus. Each phoneme of an
/// utterance emits a run of noisy copies of its prototype feature vector:
/// one-hot manner and place blocks plus a phoneme-identity block scaled by
/// identity_salience, so attribute structure dominates but same-attribute
/// phonemes stay distinguishable.
struct SyntheticCorpusSpec {
  std::vector<LanguageCorpusSpec> languages;
  int min_utterance_length = 3;
  int max_utterance_length = 6;
  int min_frames_per_phoneme = 2;
  int max_frames_per_phoneme = 4;
  double noise_sigma = 0.3;
  double identity_salience = 0.3;
  uint64_t seed = 0;
};

struct Utterance {
  std::string utterance_id;
  std::string language_id;
  Tensor2 features;  // T x F
  LabelSequence phonemes;
};

struct Corpus {
  std::vector<Utterance> train;
  std::vector<Utterance> test;
  int feature_dim = 0;
};

/// Feature width of the synthetic layout: 7 + 11 + |P_uni|.
int SyntheticFeatureDim(const UnionInventory &uni);

Corpus GenerateCorpus(const SyntheticCorpusSpec &spec,
                      const UnionInventory &uni);

/// Writes train.tsv / test.tsv transcripts plus features/<utt>.csv matrices.
void SaveCorpus(const Corpus &corpus, const std::string &dir,
                const UnionInventory &uni);
Corpus LoadCorpus(const std::string &dir, const UnionInventory &uni);

/// Maps a phoneme transcript to per-category attribute targets, collapsing
/// adjacent duplicates after the mapping.
std::pair<LabelSequence, LabelSequence> DeriveAttributeLabels(
    const LabelSequence &phonemes, const UnionInventory &uni);

enum class TrainMode { kBaseline, kFused };
const std::string &TrainModeName(TrainMode mode);

struct MultiTaskLoss {
  double total = 0.0;
  double phoneme = 0.0;
  double manner = 0.0;
  double place = 0.0;
  GradientMap grads;  // filled only when requested
};

/// One utterance through the full training objective. In fused mode the
/// phoneme CTC loss is taken on the fused logits and its gradient flows
/// back through the projection into both attribute heads; in baseline mode
/// the attribute heads are skipped and their weights treated as zero.
MultiTaskLoss ComputeMultiTaskLoss(
    const ModelConfig &model_config, const ModelParams &params,
    const Tensor2 &features, const LabelSequence &phonemes,
    const LabelSequence &manner_labels, const LabelSequence &place_labels,
    const AttributeMapping &manner_map, const AttributeMapping &place_map,
    TrainMode mode, const TrainerConfig &trainer_config, bool want_grads);

struct EpochLogEntry {
  int epoch;
  std::string split;  // "train" or "heldout"
  double total = 0.0;
  double phoneme = 0.0;
  double manner = 0.0;
  double place = 0.0;
};

struct TrainResult {
  ModelParams params;  // best parameters under the held-out loss
  std::vector<EpochLogEntry> log;
  int best_epoch = 0;
};

/// Multi-task CTC training. In baseline mode the attribute heads and the
/// fusion path are disabled and only the phoneme head is optimized; in fused
/// mode the phoneme loss is taken on the fused logits and the attribute
/// heads carry their own CTC losses.
TrainResult Train(const ModelConfig &model_config,
                  const TrainerConfig &trainer_config, const Corpus &corpus,
                  const UnionInventory &uni, const AttributeMapping &manner_map,
                  const AttributeMapping &place_map, TrainMode mode);

void WriteTrainLogCsv(const std::vector<EpochLogEntry> &log,
                      const std::string &path);

}  // namespace attrphone

#endif  // ATTRPHONE_TRAINER_H_
