// core/include/attrphone/eval.h

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

#ifndef ATTRPHONE_EVAL_H_
#define ATTRPHONE_EVAL_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "attrphone/attribute-map.h"
#include "attrphone/ctc.h"
#include "attrphone/net.h"
#include "attrphone/phone-set.h"
#include "attrphone/trainer.h"

namespace attrphone {

struct EditCounts {
  int substitutions = 0;
  int deletions = 0;
  int insertions = 0;

  int Total() const { return substitutions + deletions + insertions; }
  bool operator==(const EditCounts &other) const = default;
};

/// Minimal-cost Levenshtein alignment with unit costs. When several
/// alignments reach the minimum, the breakdown prefers substitutions over
/// insertions over deletions so the split is deterministic.
EditCounts EditDistance(const LabelSequence &ref, const LabelSequence &hyp);

/// Pooled error-rate accumulator: 100 * (S+D+I) / total reference tokens.
struct ErrorRateAccumulator {
  EditCounts counts;
  long long reference_tokens = 0;

  void Add(const LabelSequence &ref, const LabelSequence &hyp);
  /// Throws EmptyReference when no reference token was accumulated.
  double Percent() const;
};

double Per(const std::vector<std::pair<LabelSequence, LabelSequence>>
               &ref_hyp_pairs);

struct ConsistencyCounts {
  long long violations = 0;
  long long counted = 0;

  double Rate() const {
    return counted == 0 ? 0.0 : 100.0 * violations / counted;
  }
};

/// Frame-level check of the phoneme argmax against each attribute head's
/// argmax under the binary mappings. Frames whose phoneme argmax is blank
/// are not counted; a counted frame is a violation when some category's
/// non-blank attribute argmax does not map onto the predicted phoneme.
ConsistencyCounts CountConsistencyViolations(
    const LogitSequence &phoneme_logits,
    const std::vector<std::pair<const AttributeMapping *,
                                const LogitSequence *>> &attribute_heads);

struct Posteriorgram {
  std::string utterance_id;
  Head head;
  Tensor2 frames;  // T x V softmax probabilities
};

Posteriorgram MakePosteriorgram(const std::string &utterance_id, Head head,
                                const LogitSequence &logits);

/// CSV with header `frame,<class names...>` and one softmax row per frame.
void ExportPosteriorgram(const Posteriorgram &posteriorgram,
                         const std::vector<std::string> &class_names,
                         const std::string &path);

struct LanguageEval {
  double per = 0.0;
  double aer_manner = 0.0;
  double aer_place = 0.0;
  double consistency_violation_rate = 0.0;
  long long utterances = 0;
};

struct EvalReport {
  std::map<std::string, LanguageEval> per_language;
  LanguageEval aggregate;  // unweighted mean over languages
};

struct EvalOptions {
  TrainMode mode = TrainMode::kFused;
  FusionWeights fusion;
  bool restrict_to_language = false;  // mask decoding to the language subset
};

EvalReport Evaluate(const ModelConfig &model_config, const ModelParams &params,
                    const std::vector<Utterance> &utterances,
                    const UnionInventory &uni,
                    const AttributeMapping &manner_map,
                    const AttributeMapping &place_map,
                    const EvalOptions &options);

void WriteReportCsv(const EvalReport &report, const std::string &path);

/// Side-by-side baseline/fused table for humans.
std::string FormatComparisonTable(const EvalReport &baseline,
                                  const EvalReport &fused);

/// Final logits of one utterance under the given mode (fused or plain
/// phoneme head), plus the raw per-head logits.
struct DecodedUtterance {
  LogitSequence final_logits;
  std::map<Head, LogitSequence> head_logits;
  LabelSequence hypothesis;
};

DecodedUtterance DecodeUtterance(const ModelConfig &model_config,
                                 const ModelParams &params,
                                 const Utterance &utterance,
                                 const UnionInventory &uni,
                                 const AttributeMapping &manner_map,
                                 const AttributeMapping &place_map,
                                 const EvalOptions &options);

}  // namespace attrphone

#endif  // ATTRPHONE_EVAL_H_
