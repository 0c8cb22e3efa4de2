// core/src/eval.cc

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

#include "attrphone/eval.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "attrphone/errors.h"

namespace attrphone {

EditCounts EditDistance(const LabelSequence &ref, const LabelSequence &hyp) {
  const int m = ref.Length();
  const int n = hyp.Length();
  std::vector<std::vector<int>> cost(m + 1, std::vector<int>(n + 1, 0));
  for (int i = 1; i <= m; ++i) cost[i][0] = i;
  for (int j = 1; j <= n; ++j) cost[0][j] = j;
  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= n; ++j) {
      const int diagonal =
          cost[i - 1][j - 1] + (ref.tokens[i - 1] == hyp.tokens[j - 1] ? 0 : 1);
      cost[i][j] = std::min({diagonal, cost[i][j - 1] + 1, cost[i - 1][j] + 1});
    }
  }
  // Backtrace preferring substitution over insertion over deletion on ties.
  EditCounts counts;
  int i = m, j = n;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const int match = ref.tokens[i - 1] == hyp.tokens[j - 1] ? 0 : 1;
      if (cost[i][j] == cost[i - 1][j - 1] + match) {
        counts.substitutions += match;
        --i;
        --j;
        continue;
      }
    }
    if (j > 0 && cost[i][j] == cost[i][j - 1] + 1) {
      ++counts.insertions;
      --j;
      continue;
    }
    ++counts.deletions;
    --i;
  }
  return counts;
}

void ErrorRateAccumulator::Add(const LabelSequence &ref,
                               const LabelSequence &hyp) {
  const EditCounts c = EditDistance(ref, hyp);
  counts.substitutions += c.substitutions;
  counts.deletions += c.deletions;
  counts.insertions += c.insertions;
  reference_tokens += ref.Length();
}

double ErrorRateAccumulator::Percent() const {
  if (reference_tokens == 0)
    throw EmptyReference("error rate undefined without reference tokens");
  return 100.0 * counts.Total() / static_cast<double>(reference_tokens);
}

double Per(const std::vector<std::pair<LabelSequence, LabelSequence>>
               &ref_hyp_pairs) {
  ErrorRateAccumulator accumulator;
  for (const auto &[ref, hyp] : ref_hyp_pairs) accumulator.Add(ref, hyp);
  return accumulator.Percent();
}

namespace {

// Argmax with ties toward the lowest index, matching greedy decoding.
int RowArgmax(const Tensor2 &frames, int t) {
  int best = 0;
  double best_score = frames.at(t, 0);
  for (int k = 1; k < frames.cols; ++k)
    if (frames.at(t, k) > best_score) {
      best = k;
      best_score = frames.at(t, k);
    }
  return best;
}

}  // namespace

ConsistencyCounts CountConsistencyViolations(
    const LogitSequence &phoneme_logits,
    const std::vector<std::pair<const AttributeMapping *,
                                const LogitSequence *>> &attribute_heads) {
  for (const auto &[mapping, logits] : attribute_heads) {
    if (logits->NumFrames() != phoneme_logits.NumFrames())
      throw DimensionMismatch("attribute and phoneme logits disagree on the "
                              "frame count");
    if (logits->VocabSize() != mapping->matrix.rows ||
        phoneme_logits.VocabSize() != mapping->matrix.cols)
      throw DimensionMismatch("logit widths do not match the mapping");
  }
  ConsistencyCounts counts;
  for (int t = 0; t < phoneme_logits.NumFrames(); ++t) {
    const int phoneme = RowArgmax(phoneme_logits.frames, t);
    if (phoneme == phoneme_logits.BlankIndex()) continue;
    ++counts.counted;
    for (const auto &[mapping, logits] : attribute_heads) {
      const int attribute = RowArgmax(logits->frames, t);
      if (attribute == logits->BlankIndex()) continue;
      if (mapping->matrix.at(attribute, phoneme) == 0.0) {
        ++counts.violations;
        break;
      }
    }
  }
  return counts;
}

Posteriorgram MakePosteriorgram(const std::string &utterance_id, Head head,
                                const LogitSequence &logits) {
  if (!logits.frames.IsFinite())
    throw NonFiniteActivation("cannot build a posteriorgram from non-finite "
                              "logits");
  Posteriorgram posteriorgram;
  posteriorgram.utterance_id = utterance_id;
  posteriorgram.head = head;
  posteriorgram.frames = Tensor2(logits.NumFrames(), logits.VocabSize());
  for (int t = 0; t < logits.NumFrames(); ++t) {
    double max = logits.frames.at(t, 0);
    for (int k = 1; k < logits.VocabSize(); ++k)
      max = std::max(max, logits.frames.at(t, k));
    double sum = 0.0;
    for (int k = 0; k < logits.VocabSize(); ++k) {
      const double e = std::exp(logits.frames.at(t, k) - max);
      posteriorgram.frames.at(t, k) = e;
      sum += e;
    }
    for (int k = 0; k < logits.VocabSize(); ++k)
      posteriorgram.frames.at(t, k) /= sum;
  }
  return posteriorgram;
}

void ExportPosteriorgram(const Posteriorgram &posteriorgram,
                         const std::vector<std::string> &class_names,
                         const std::string &path) {
  if (static_cast<int>(class_names.size()) != posteriorgram.frames.cols)
    throw DimensionMismatch("class name count does not match the vocabulary");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write posteriorgram " + path);
  out << "frame";
  for (const std::string &name : class_names) out << ',' << name;
  out << '\n';
  char buffer[32];
  for (int t = 0; t < posteriorgram.frames.rows; ++t) {
    out << t;
    for (int k = 0; k < posteriorgram.frames.cols; ++k) {
      std::snprintf(buffer, sizeof(buffer), "%.10g",
                    posteriorgram.frames.at(t, k));
      out << ',' << buffer;
    }
    out << '\n';
  }
  if (!out) throw IoError("error writing posteriorgram " + path);
}

DecodedUtterance DecodeUtterance(const ModelConfig &model_config,
                                 const ModelParams &params,
                                 const Utterance &utterance,
                                 const UnionInventory &uni,
                                 const AttributeMapping &manner_map,
                                 const AttributeMapping &place_map,
                                 const EvalOptions &options) {
  ModelOutputs outputs = ModelForward(model_config, params, utterance.features,
                                      AllHeads(), nullptr);
  DecodedUtterance decoded;
  if (options.mode == TrainMode::kFused) {
    const LogitSequence projected_manner =
        Project(manner_map, outputs.logits.at(Head::kManner));
    const LogitSequence projected_place =
        Project(place_map, outputs.logits.at(Head::kPlace));
    decoded.final_logits = Fuse(outputs.logits.at(Head::kPhoneme),
                                {{&projected_manner, options.fusion.manner},
                                 {&projected_place, options.fusion.place}});
  } else {
    decoded.final_logits = outputs.logits.at(Head::kPhoneme);
  }
  if (options.restrict_to_language) {
    const std::vector<bool> mask = LanguageMask(uni, utterance.language_id);
    decoded.hypothesis = GreedyDecode(decoded.final_logits, &mask);
  } else {
    decoded.hypothesis = GreedyDecode(decoded.final_logits);
  }
  decoded.head_logits = std::move(outputs.logits);
  return decoded;
}

EvalReport Evaluate(const ModelConfig &model_config, const ModelParams &params,
                    const std::vector<Utterance> &utterances,
                    const UnionInventory &uni,
                    const AttributeMapping &manner_map,
                    const AttributeMapping &place_map,
                    const EvalOptions &options) {
  if (utterances.empty())
    throw EmptyInput("cannot evaluate an empty utterance list");
  struct LanguageAccumulator {
    ErrorRateAccumulator per;
    ErrorRateAccumulator manner;
    ErrorRateAccumulator place;
    ConsistencyCounts consistency;
    long long utterances = 0;
  };
  std::map<std::string, LanguageAccumulator> by_language;
  for (const Utterance &utterance : utterances) {
    const DecodedUtterance decoded =
        DecodeUtterance(model_config, params, utterance, uni, manner_map,
                        place_map, options);
    LanguageAccumulator &acc = by_language[utterance.language_id];
    acc.per.Add(utterance.phonemes, decoded.hypothesis);
    const auto [manner_ref, place_ref] =
        DeriveAttributeLabels(utterance.phonemes, uni);
    acc.manner.Add(manner_ref,
                   GreedyDecode(decoded.head_logits.at(Head::kManner)));
    acc.place.Add(place_ref,
                  GreedyDecode(decoded.head_logits.at(Head::kPlace)));
    const ConsistencyCounts frame_counts = CountConsistencyViolations(
        decoded.final_logits,
        {{&manner_map, &decoded.head_logits.at(Head::kManner)},
         {&place_map, &decoded.head_logits.at(Head::kPlace)}});
    acc.consistency.violations += frame_counts.violations;
    acc.consistency.counted += frame_counts.counted;
    acc.utterances += 1;
  }
  EvalReport report;
  for (const auto &[language, acc] : by_language) {
    LanguageEval eval;
    eval.per = acc.per.Percent();
    eval.aer_manner = acc.manner.Percent();
    eval.aer_place = acc.place.Percent();
    eval.consistency_violation_rate = acc.consistency.Rate();
    eval.utterances = acc.utterances;
    report.per_language.emplace(language, eval);
    report.aggregate.per += eval.per;
    report.aggregate.aer_manner += eval.aer_manner;
    report.aggregate.aer_place += eval.aer_place;
    report.aggregate.consistency_violation_rate +=
        eval.consistency_violation_rate;
    report.aggregate.utterances += eval.utterances;
  }
  const double languages = static_cast<double>(report.per_language.size());
  report.aggregate.per /= languages;
  report.aggregate.aer_manner /= languages;
  report.aggregate.aer_place /= languages;
  report.aggregate.consistency_violation_rate /= languages;
  return report;
}

namespace {

void WriteReportRow(std::ofstream &out, const std::string &language,
                    const LanguageEval &eval) {
  char buffer[192];
  std::snprintf(buffer, sizeof(buffer), "%s,%.4f,%.4f,%.4f,%.4f,%lld\n",
                language.c_str(), eval.per, eval.aer_manner, eval.aer_place,
                eval.consistency_violation_rate, eval.utterances);
  out << buffer;
}

}  // namespace

void WriteReportCsv(const EvalReport &report, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report " + path);
  out << "language,per,aer_manner,aer_place,consistency_violation_rate,"
         "utterances\n";
  for (const auto &[language, eval] : report.per_language)
    WriteReportRow(out, language, eval);
  WriteReportRow(out, "ALL", report.aggregate);
  if (!out) throw IoError("error writing report " + path);
}

std::string FormatComparisonTable(const EvalReport &baseline,
                                  const EvalReport &fused) {
  std::ostringstream out;
  char buffer[256];
  std::snprintf(buffer, sizeof(buffer), "%-10s %12s %12s %14s %14s\n",
                "language", "per_base", "per_fused", "cviol_base",
                "cviol_fused");
  out << buffer;
  auto row = [&](const std::string &language, const LanguageEval &b,
                 const LanguageEval &f) {
    std::snprintf(buffer, sizeof(buffer), "%-10s %12.2f %12.2f %14.2f %14.2f\n",
                  language.c_str(), b.per, f.per,
                  b.consistency_violation_rate, f.consistency_violation_rate);
    out << buffer;
  };
  for (const auto &[language, eval] : baseline.per_language) {
    const auto it = fused.per_language.find(language);
    if (it != fused.per_language.end()) row(language, eval, it->second);
  }
  row("Avg", baseline.aggregate, fused.aggregate);
  return out.str();
}

}  // namespace attrphone
