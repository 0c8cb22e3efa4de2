// core/src/trainer.cc

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

#include "attrphone/trainer.h"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "attrphone/errors.h"
#include "attrphone/rng.h"

namespace attrphone {

namespace {
constexpr double kPeakLrNumerator = 0.05;
}

void ValidateTrainerConfig(const TrainerConfig &config) {
  if (config.beta1 < 0.0 || config.beta1 >= 1.0 || config.beta2 < 0.0 ||
      config.beta2 >= 1.0)
    throw BadConfig("Adam betas must lie in [0, 1)");
  if (config.epsilon <= 0.0) throw BadConfig("Adam epsilon must be positive");
  if (config.warmup_steps < 1) throw BadConfig("warmup_steps must be >= 1");
  if (config.model_dim < 1) throw BadConfig("model_dim must be >= 1");
  if (config.weight_phoneme < 0.0 || config.weight_manner < 0.0 ||
      config.weight_place < 0.0)
    throw BadConfig("loss weights must be nonnegative");
  if (config.weight_phoneme == 0.0 && config.weight_manner == 0.0 &&
      config.weight_place == 0.0)
    throw BadConfig("at least one loss weight must be positive");
  if (config.epochs < 1) throw BadConfig("epochs must be >= 1");
  if (config.batch_size < 1) throw BadConfig("batch_size must be >= 1");
  if (config.patience < 1) throw BadConfig("patience must be >= 1");
  if (config.num_threads < 1) throw BadConfig("num_threads must be >= 1");
  if (config.lr_scale < 0.0) throw BadConfig("lr_scale must be nonnegative");
  if (!std::isfinite(config.fusion.manner) ||
      !std::isfinite(config.fusion.place) || config.fusion.manner < 0.0 ||
      config.fusion.place < 0.0)
    throw BadConfig("fusion weights must be finite and nonnegative");
}

double LrAt(const TrainerConfig &config, int64_t step) {
  const double peak = kPeakLrNumerator / std::sqrt(config.model_dim);
  const double warmup = config.warmup_steps;
  const double factor = std::min(static_cast<double>(step) / warmup,
                                 std::sqrt(warmup / static_cast<double>(step)));
  return config.lr_scale * peak * factor;
}

void AdamStep(ModelParams *params, const GradientMap &grads, AdamState *state,
              double lr, const TrainerConfig &config) {
  state->step += 1;
  const double bias1 = 1.0 - std::pow(config.beta1, state->step);
  const double bias2 = 1.0 - std::pow(config.beta2, state->step);
  for (const auto &[name, grad] : grads) {
    Tensor2 &param = params->At(name);
    if (!param.SameShape(grad))
      throw ShapeMismatch("gradient shape mismatch for \"" + name + "\"");
    auto m_it = state->first_moment.find(name);
    if (m_it == state->first_moment.end()) {
      m_it = state->first_moment
                 .emplace(name, Tensor2(param.rows, param.cols))
                 .first;
      state->second_moment.emplace(name, Tensor2(param.rows, param.cols));
    }
    Tensor2 &m = m_it->second;
    Tensor2 &v = state->second_moment.at(name);
    for (size_t i = 0; i < param.data.size(); ++i) {
      const double g = grad.data[i];
      m.data[i] = config.beta1 * m.data[i] + (1.0 - config.beta1) * g;
      v.data[i] = config.beta2 * v.data[i] + (1.0 - config.beta2) * g * g;
      const double m_hat = m.data[i] / bias1;
      const double v_hat = v.data[i] / bias2;
      param.data[i] -= lr * m_hat / (std::sqrt(v_hat) + config.epsilon);
    }
  }
}

int SyntheticFeatureDim(const UnionInventory &uni) {
  return AttributeCategory::Manner().NumClasses() +
         AttributeCategory::Place().NumClasses() + uni.NumPhonemes();
}

namespace {

void ValidateCorpusSpec(const SyntheticCorpusSpec &spec,
                        const UnionInventory &uni) {
  if (spec.languages.empty()) throw BadSpec("corpus spec lists no languages");
  if (spec.min_utterance_length < 1 ||
      spec.max_utterance_length < spec.min_utterance_length)
    throw BadSpec("bad utterance length range");
  if (spec.min_frames_per_phoneme < 1 ||
      spec.max_frames_per_phoneme < spec.min_frames_per_phoneme)
    throw BadSpec("bad frames-per-phoneme range");
  if (spec.noise_sigma < 0.0) throw BadSpec("noise_sigma must be >= 0");
  if (spec.identity_salience < 0.0)
    throw BadSpec("identity_salience must be >= 0");
  for (const LanguageCorpusSpec &language : spec.languages) {
    if (language.train_utterances < 0 || language.test_utterances < 0)
      throw BadSpec("utterance counts must be >= 0");
    if (std::find(uni.languages.begin(), uni.languages.end(),
                  language.language_id) == uni.languages.end())
      throw BadSpec("language \"" + language.language_id +
                    "\" is not part of the union inventory");
  }
}

std::vector<double> PhonemePrototype(const UnionInventory &uni, int index,
                                     double identity_salience) {
  const int manner_classes = AttributeCategory::Manner().NumClasses();
  const int place_classes = AttributeCategory::Place().NumClasses();
  std::vector<double> proto(SyntheticFeatureDim(uni), 0.0);
  const PhonemeDefinition &p = uni.Phoneme(index);
  proto[p.manner] = 1.0;
  proto[manner_classes + p.place] = 1.0;
  proto[manner_classes + place_classes + index] = identity_salience;
  return proto;
}

Utterance MakeUtterance(const SyntheticCorpusSpec &spec,
                        const UnionInventory &uni,
                        const std::vector<int> &subset,
                        const std::string &utterance_id,
                        const std::string &language_id, Rng *rng) {
  Utterance utterance;
  utterance.utterance_id = utterance_id;
  utterance.language_id = language_id;
  const int length =
      rng->UniformInt(spec.min_utterance_length, spec.max_utterance_length);
  std::vector<int> durations(length);
  int total_frames = 0;
  for (int i = 0; i < length; ++i) {
    utterance.phonemes.tokens.push_back(
        subset[rng->UniformInt(0, static_cast<int>(subset.size()) - 1)]);
    durations[i] = rng->UniformInt(spec.min_frames_per_phoneme,
                                   spec.max_frames_per_phoneme);
    total_frames += durations[i];
  }
  utterance.features = Tensor2(total_frames, SyntheticFeatureDim(uni));
  int frame = 0;
  for (int i = 0; i < length; ++i) {
    const std::vector<double> proto = PhonemePrototype(
        uni, utterance.phonemes.tokens[i], spec.identity_salience);
    for (int k = 0; k < durations[i]; ++k, ++frame) {
      double *row =
          &utterance.features.data[static_cast<size_t>(frame) *
                                   utterance.features.cols];
      for (size_t d = 0; d < proto.size(); ++d)
        row[d] = proto[d] + spec.noise_sigma * rng->Gaussian();
    }
  }
  return utterance;
}

}  // namespace

Corpus GenerateCorpus(const SyntheticCorpusSpec &spec,
                      const UnionInventory &uni) {
  ValidateCorpusSpec(spec, uni);
  Rng rng(spec.seed);
  Corpus corpus;
  corpus.feature_dim = SyntheticFeatureDim(uni);
  for (const LanguageCorpusSpec &language : spec.languages) {
    const std::vector<bool> mask = LanguageMask(uni, language.language_id);
    std::vector<int> subset;
    for (int j = 0; j < uni.NumPhonemes(); ++j)
      if (mask[j]) subset.push_back(j);
    if (subset.empty())
      throw BadSpec("language \"" + language.language_id +
                    "\" has an empty phoneme subset");
    char buffer[64];
    for (int u = 0; u < language.train_utterances; ++u) {
      std::snprintf(buffer, sizeof(buffer), "%s-train-%04d",
                    language.language_id.c_str(), u);
      corpus.train.push_back(MakeUtterance(spec, uni, subset, buffer,
                                           language.language_id, &rng));
    }
    for (int u = 0; u < language.test_utterances; ++u) {
      std::snprintf(buffer, sizeof(buffer), "%s-test-%04d",
                    language.language_id.c_str(), u);
      corpus.test.push_back(MakeUtterance(spec, uni, subset, buffer,
                                          language.language_id, &rng));
    }
  }
  return corpus;
}

namespace {

void WriteTranscripts(const std::vector<Utterance> &utterances,
                      const UnionInventory &uni, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write transcript file " + path);
  for (const Utterance &utterance : utterances) {
    out << utterance.utterance_id << '\t' << utterance.language_id << '\t';
    for (size_t i = 0; i < utterance.phonemes.tokens.size(); ++i) {
      if (i > 0) out << ' ';
      out << uni.Phoneme(utterance.phonemes.tokens[i]).symbol;
    }
    out << '\n';
  }
  if (!out) throw IoError("error writing transcript file " + path);
}

void WriteFeatureCsv(const Tensor2 &features, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write feature file " + path);
  char buffer[32];
  for (int t = 0; t < features.rows; ++t) {
    for (int d = 0; d < features.cols; ++d) {
      // %.17g preserves doubles exactly across the round trip.
      std::snprintf(buffer, sizeof(buffer), "%.17g", features.at(t, d));
      if (d > 0) out << ',';
      out << buffer;
    }
    out << '\n';
  }
  if (!out) throw IoError("error writing feature file " + path);
}

Tensor2 ReadFeatureCsv(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open feature file " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.emplace_back();
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      rows.back().push_back(std::stod(cell));
    if (rows.back().size() != rows.front().size())
      throw MalformedRow("ragged feature matrix in " + path);
  }
  if (rows.empty()) throw MalformedRow("empty feature matrix in " + path);
  Tensor2 features(static_cast<int>(rows.size()),
                   static_cast<int>(rows.front().size()));
  for (size_t t = 0; t < rows.size(); ++t)
    for (size_t d = 0; d < rows[t].size(); ++d)
      features.at(static_cast<int>(t), static_cast<int>(d)) = rows[t][d];
  return features;
}

std::vector<Utterance> ReadTranscripts(const std::string &path,
                                       const std::string &features_dir,
                                       const UnionInventory &uni) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open transcript file " + path);
  std::vector<Utterance> utterances;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const size_t tab1 = line.find('\t');
    const size_t tab2 = tab1 == std::string::npos
                            ? std::string::npos
                            : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos)
      throw MalformedRow("transcript rows need 3 tab-separated fields: " +
                         line);
    Utterance utterance;
    utterance.utterance_id = line.substr(0, tab1);
    utterance.language_id = line.substr(tab1 + 1, tab2 - tab1 - 1);
    std::stringstream symbols(line.substr(tab2 + 1));
    std::string symbol;
    while (symbols >> symbol)
      utterance.phonemes.tokens.push_back(uni.IndexOf(symbol));
    utterance.features =
        ReadFeatureCsv(features_dir + "/" + utterance.utterance_id + ".csv");
    utterances.push_back(std::move(utterance));
  }
  return utterances;
}

}  // namespace

void SaveCorpus(const Corpus &corpus, const std::string &dir,
                const UnionInventory &uni) {
  std::filesystem::create_directories(dir + "/features");
  WriteTranscripts(corpus.train, uni, dir + "/train.tsv");
  WriteTranscripts(corpus.test, uni, dir + "/test.tsv");
  for (const std::vector<Utterance> *split : {&corpus.train, &corpus.test})
    for (const Utterance &utterance : *split)
      WriteFeatureCsv(utterance.features,
                      dir + "/features/" + utterance.utterance_id + ".csv");
}

Corpus LoadCorpus(const std::string &dir, const UnionInventory &uni) {
  Corpus corpus;
  corpus.train = ReadTranscripts(dir + "/train.tsv", dir + "/features", uni);
  corpus.test = ReadTranscripts(dir + "/test.tsv", dir + "/features", uni);
  const std::vector<Utterance> &any =
      corpus.train.empty() ? corpus.test : corpus.train;
  if (any.empty()) throw EmptyInput("corpus at " + dir + " has no utterances");
  corpus.feature_dim = any.front().features.cols;
  for (const std::vector<Utterance> *split : {&corpus.train, &corpus.test})
    for (const Utterance &utterance : *split)
      if (utterance.features.cols != corpus.feature_dim)
        throw MalformedRow("inconsistent feature dimension for utterance " +
                           utterance.utterance_id);
  return corpus;
}

std::pair<LabelSequence, LabelSequence> DeriveAttributeLabels(
    const LabelSequence &phonemes, const UnionInventory &uni) {
  LabelSequence manner, place;
  for (int token : phonemes.tokens) {
    if (token < 0 || token >= uni.NumPhonemes())
      throw UnknownPhoneme("phoneme index " + std::to_string(token) +
                           " outside the union inventory");
    const PhonemeDefinition &p = uni.Phoneme(token);
    if (manner.tokens.empty() || manner.tokens.back() != p.manner)
      manner.tokens.push_back(p.manner);
    if (place.tokens.empty() || place.tokens.back() != p.place)
      place.tokens.push_back(p.place);
  }
  return {manner, place};
}

const std::string &TrainModeName(TrainMode mode) {
  static const std::string names[] = {"baseline", "fused"};
  return names[static_cast<int>(mode)];
}

MultiTaskLoss ComputeMultiTaskLoss(
    const ModelConfig &model_config, const ModelParams &params,
    const Tensor2 &features, const LabelSequence &phonemes,
    const LabelSequence &manner_labels, const LabelSequence &place_labels,
    const AttributeMapping &manner_map, const AttributeMapping &place_map,
    TrainMode mode, const TrainerConfig &trainer_config, bool want_grads) {
  const bool fused = mode == TrainMode::kFused;
  const double weight_phoneme = trainer_config.weight_phoneme;
  const double weight_manner = fused ? trainer_config.weight_manner : 0.0;
  const double weight_place = fused ? trainer_config.weight_place : 0.0;
  const FusionWeights &fusion = trainer_config.fusion;
  const std::vector<Head> heads =
      fused ? AllHeads() : std::vector<Head>{Head::kPhoneme};
  ForwardTrace trace;
  ModelOutputs outputs = ModelForward(model_config, params, features, heads,
                                      want_grads ? &trace : nullptr);

  MultiTaskLoss result;
  LogitSequence final_logits;
  LogitSequence projected_manner, projected_place;
  if (fused) {
    projected_manner = Project(manner_map, outputs.logits.at(Head::kManner));
    projected_place = Project(place_map, outputs.logits.at(Head::kPlace));
    final_logits = Fuse(outputs.logits.at(Head::kPhoneme),
                        {{&projected_manner, fusion.manner},
                         {&projected_place, fusion.place}});
  } else {
    final_logits = outputs.logits.at(Head::kPhoneme);
  }

  CtcLossResult phoneme_loss = CtcLoss(final_logits, phonemes);
  result.phoneme = phoneme_loss.loss;
  result.total = weight_phoneme * phoneme_loss.loss;

  CtcLossResult manner_loss, place_loss;
  if (fused) {
    manner_loss = CtcLoss(outputs.logits.at(Head::kManner), manner_labels);
    place_loss = CtcLoss(outputs.logits.at(Head::kPlace), place_labels);
    result.manner = manner_loss.loss;
    result.place = place_loss.loss;
    result.total +=
        weight_manner * manner_loss.loss + weight_place * place_loss.loss;
  }

  if (want_grads) {
    std::map<Head, Tensor2> loss_grads;
    Tensor2 final_grad = phoneme_loss.grad;
    for (double &g : final_grad.data) g *= weight_phoneme;
    loss_grads[Head::kPhoneme] = final_grad;
    if (fused) {
      // The fused loss reaches each attribute head twice: through its own
      // CTC term and through the projection into the phoneme logits.
      const LogitSequence final_grad_seq{final_grad};
      LogitSequence manner_back = ProjectTranspose(manner_map, final_grad_seq);
      Tensor2 manner_grad = manner_loss.grad;
      for (size_t i = 0; i < manner_grad.data.size(); ++i)
        manner_grad.data[i] = weight_manner * manner_grad.data[i] +
                              fusion.manner * manner_back.frames.data[i];
      loss_grads[Head::kManner] = std::move(manner_grad);
      LogitSequence place_back = ProjectTranspose(place_map, final_grad_seq);
      Tensor2 place_grad = place_loss.grad;
      for (size_t i = 0; i < place_grad.data.size(); ++i)
        place_grad.data[i] = weight_place * place_grad.data[i] +
                             fusion.place * place_back.frames.data[i];
      loss_grads[Head::kPlace] = std::move(place_grad);
    }
    result.grads = Backward(model_config, params, &trace, loss_grads);
  }
  return result;
}

namespace {

struct Sample {
  const Utterance *utterance;
  LabelSequence manner;
  LabelSequence place;
};

void AccumulateGrads(GradientMap *sum, const GradientMap &grads) {
  for (const auto &[name, grad] : grads) {
    const auto it = sum->find(name);
    if (it == sum->end())
      sum->emplace(name, grad);
    else
      AxpyInPlace(&it->second, 1.0, grad);
  }
}

}  // namespace

TrainResult Train(const ModelConfig &model_config,
                  const TrainerConfig &trainer_config, const Corpus &corpus,
                  const UnionInventory &uni, const AttributeMapping &manner_map,
                  const AttributeMapping &place_map, TrainMode mode) {
  ValidateModelConfig(model_config);
  ValidateTrainerConfig(trainer_config);
  if (corpus.train.empty()) throw EmptyInput("training split is empty");
  if (model_config.input_dim != corpus.feature_dim)
    throw ShapeMismatch("model input_dim does not match corpus feature_dim");
  if (model_config.phoneme_vocab != uni.NumPhonemes() + 1)
    throw ShapeMismatch("phoneme vocabulary does not match the union");
  if (model_config.manner_vocab != manner_map.matrix.rows ||
      model_config.place_vocab != place_map.matrix.rows)
    throw ShapeMismatch("attribute vocabularies do not match the mappings");

  const bool fused = mode == TrainMode::kFused;
  if (trainer_config.weight_phoneme == 0.0 &&
      (!fused || (trainer_config.weight_manner == 0.0 &&
                  trainer_config.weight_place == 0.0)))
    throw BadConfig("all effective loss weights are zero in mode " +
                    TrainModeName(mode));

  auto make_samples = [&uni](const std::vector<Utterance> &utterances) {
    std::vector<Sample> samples;
    samples.reserve(utterances.size());
    for (const Utterance &utterance : utterances) {
      Sample sample;
      sample.utterance = &utterance;
      std::tie(sample.manner, sample.place) =
          DeriveAttributeLabels(utterance.phonemes, uni);
      samples.push_back(std::move(sample));
    }
    return samples;
  };
  const std::vector<Sample> train_samples = make_samples(corpus.train);
  const std::vector<Sample> heldout_samples = make_samples(corpus.test);

  ModelParams params = InitParams(model_config, trainer_config.seed);
  AdamState adam;
  Rng shuffle_rng(trainer_config.seed ^ 0x9e3779b97f4a7c15ULL);

  auto compute_one = [&](const Sample &sample, bool want_grads) {
    return ComputeMultiTaskLoss(model_config, params,
                                sample.utterance->features,
                                sample.utterance->phonemes, sample.manner,
                                sample.place, manner_map, place_map, mode,
                                trainer_config, want_grads);
  };
  auto evaluate_batch = [&](const std::vector<const Sample *> &batch,
                            bool want_grads,
                            std::vector<MultiTaskLoss> *results) {
    results->resize(batch.size());
    const int threads =
        std::min<int>(trainer_config.num_threads,
                      static_cast<int>(batch.size()));
    if (threads <= 1) {
      for (size_t i = 0; i < batch.size(); ++i)
        (*results)[i] = compute_one(*batch[i], want_grads);
      return;
    }
    // Per-utterance passes run concurrently against read-only params; the
    // reduction below walks results in utterance order, so the sums match
    // the single-threaded run bit for bit.
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (int w = 0; w < threads; ++w) {
      workers.emplace_back([&, w]() {
        try {
          for (size_t i = next.fetch_add(1); i < batch.size();
               i = next.fetch_add(1))
            (*results)[i] = compute_one(*batch[i], want_grads);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (std::thread &worker : workers) worker.join();
    for (const std::exception_ptr &error : errors)
      if (error) std::rethrow_exception(error);
  };

  TrainResult result;
  double best_heldout = std::numeric_limits<double>::infinity();
  int epochs_since_best = 0;
  ModelParams best_params = params;
  int best_epoch = 0;

  std::vector<int> order(train_samples.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  for (int epoch = 1; epoch <= trainer_config.epochs; ++epoch) {
    shuffle_rng.Shuffle(&order);
    EpochLogEntry train_entry{epoch, "train"};
    std::vector<MultiTaskLoss> results;
    for (size_t begin = 0; begin < order.size();
         begin += trainer_config.batch_size) {
      const size_t end =
          std::min(order.size(), begin + trainer_config.batch_size);
      std::vector<const Sample *> batch;
      batch.reserve(end - begin);
      for (size_t i = begin; i < end; ++i)
        batch.push_back(&train_samples[order[i]]);
      evaluate_batch(batch, /*want_grads=*/true, &results);

      GradientMap batch_grads;
      for (size_t i = 0; i < results.size(); ++i) {
        const MultiTaskLoss &r = results[i];
        if (!std::isfinite(r.total))
          throw NonFiniteLoss("non-finite loss at epoch " +
                              std::to_string(epoch) + ", utterance " +
                              batch[i]->utterance->utterance_id);
        train_entry.total += r.total;
        train_entry.phoneme += r.phoneme;
        train_entry.manner += r.manner;
        train_entry.place += r.place;
        AccumulateGrads(&batch_grads, r.grads);
      }
      const double scale = 1.0 / static_cast<double>(batch.size());
      for (auto &[name, grad] : batch_grads)
        for (double &g : grad.data) g *= scale;
      const double lr = LrAt(trainer_config, adam.step + 1);
      AdamStep(&params, batch_grads, &adam, lr, trainer_config);
    }
    const double train_n = static_cast<double>(train_samples.size());
    train_entry.total /= train_n;
    train_entry.phoneme /= train_n;
    train_entry.manner /= train_n;
    train_entry.place /= train_n;
    result.log.push_back(train_entry);

    if (!heldout_samples.empty()) {
      EpochLogEntry heldout_entry{epoch, "heldout"};
      std::vector<const Sample *> heldout_batch;
      heldout_batch.reserve(heldout_samples.size());
      for (const Sample &sample : heldout_samples)
        heldout_batch.push_back(&sample);
      evaluate_batch(heldout_batch, /*want_grads=*/false, &results);
      for (const MultiTaskLoss &r : results) {
        if (!std::isfinite(r.total))
          throw NonFiniteLoss("non-finite held-out loss at epoch " +
                              std::to_string(epoch));
        heldout_entry.total += r.total;
        heldout_entry.phoneme += r.phoneme;
        heldout_entry.manner += r.manner;
        heldout_entry.place += r.place;
      }
      const double heldout_n = static_cast<double>(heldout_samples.size());
      heldout_entry.total /= heldout_n;
      heldout_entry.phoneme /= heldout_n;
      heldout_entry.manner /= heldout_n;
      heldout_entry.place /= heldout_n;
      result.log.push_back(heldout_entry);

      if (heldout_entry.total < best_heldout) {
        best_heldout = heldout_entry.total;
        best_params = params;
        best_epoch = epoch;
        epochs_since_best = 0;
      } else if (++epochs_since_best >= trainer_config.patience) {
        break;
      }
    } else {
      best_params = params;
      best_epoch = epoch;
    }
  }

  result.params = std::move(best_params);
  result.best_epoch = best_epoch;
  return result;
}

void WriteTrainLogCsv(const std::vector<EpochLogEntry> &log,
                      const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write training log " + path);
  out << "epoch,split,total,phoneme,manner,place\n";
  char buffer[160];
  for (const EpochLogEntry &entry : log) {
    std::snprintf(buffer, sizeof(buffer), "%d,%s,%.10g,%.10g,%.10g,%.10g\n",
                  entry.epoch, entry.split.c_str(), entry.total, entry.phoneme,
                  entry.manner, entry.place);
    out << buffer;
  }
  if (!out) throw IoError("error writing training log " + path);
}

}  // namespace attrphone
