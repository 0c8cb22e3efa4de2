// core/include/attrphone/net.h

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

#ifndef ATTRPHONE_NET_H_
#define ATTRPHONE_NET_H_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "attrphone/logit-sequence.h"
#include "attrphone/tensor.h"

namespace attrphone {

/// Shapes of the reduced encoder and the three recognizer heads. The encoder
/// is a per-frame dense projection followed by one or two
/// dense -> tanh -> dense residual blocks and an optional unidirectional
/// tanh recurrence; each head is a tanh recurrence plus a linear output
/// layer. Vocabulary sizes include the blank.
struct ModelConfig {
  int input_dim = 0;
  int model_dim = 16;
  int num_blocks = 1;
  bool encoder_recurrent = true;
  int head_dim = 16;
  int phoneme_vocab = 0;
  int manner_vocab = 8;
  int place_vocab = 12;

  bool operator==(const ModelConfig &other) const = default;
};

/// Throws BadConfig on nonpositive dimensions or an unsupported block count.
void ValidateModelConfig(const ModelConfig &config);

enum class Head { kPhoneme, kManner, kPlace };

const std::string &HeadName(Head head);
const std::vector<Head> &AllHeads();
int HeadVocab(const ModelConfig &config, Head head);

/// All trainable tensors, addressable by name. Iteration order is the sorted
/// name order, which keeps every parameter walk deterministic.
struct ModelParams {
  std::map<std::string, Tensor2> entries;

  Tensor2 &At(const std::string &name);
  const Tensor2 &At(const std::string &name) const;

  bool operator==(const ModelParams &other) const = default;
};

/// Glorot uniform bound sqrt(6 / (fan_in + fan_out)).
double InitBound(int fan_in, int fan_out);

/// Weights uniform in [-InitBound, InitBound], biases zero; the draw
/// sequence is pinned so the same seed always gives bit-identical tensors.
ModelParams InitParams(const ModelConfig &config, uint64_t seed);

struct EncoderTrace {
  Tensor2 features;
  Tensor2 input_activation;
  // One (block input, inner tanh activation) pair per residual block.
  std::vector<std::pair<Tensor2, Tensor2>> blocks;
  Tensor2 rnn_input;
  Tensor2 rnn_hidden;
};

struct HeadTrace {
  Tensor2 input;       // encoder output fed to this head
  Tensor2 rnn_hidden;  // recurrent activations, T x head_dim
};

/// Activations cached by one forward pass; consumed exactly once by
/// Backward and never reused across inputs.
struct ForwardTrace {
  EncoderTrace encoder;
  std::map<Head, HeadTrace> heads;
  bool consumed = false;
};

/// Maps T x input_dim features to T x model_dim hidden states. The frame
/// count is preserved. Pass a null trace when no backward pass will follow.
Tensor2 EncoderForward(const ModelConfig &config, const ModelParams &params,
                       const Tensor2 &features, EncoderTrace *trace);

LogitSequence HeadForward(const ModelConfig &config, const ModelParams &params,
                          Head head, const Tensor2 &hidden, HeadTrace *trace);

using GradientMap = std::map<std::string, Tensor2>;

/// Backpropagates the per-head loss gradients (T x vocab each) through the
/// heads and the shared encoder, accumulating summed encoder gradients.
/// Every head with a loss gradient must have been run under `trace`.
GradientMap Backward(const ModelConfig &config, const ModelParams &params,
                     ForwardTrace *trace,
                     const std::map<Head, Tensor2> &loss_grads);

struct ModelOutputs {
  Tensor2 hidden;
  std::map<Head, LogitSequence> logits;
};

/// Encoder plus the requested heads in one call.
ModelOutputs ModelForward(const ModelConfig &config, const ModelParams &params,
                          const Tensor2 &features,
                          const std::vector<Head> &heads, ForwardTrace *trace);

/// Versioned binary container of the config and all named tensors; the
/// round trip is bit-exact. Little-endian hosts only.
void SaveCheckpoint(const ModelConfig &config, const ModelParams &params,
                    const std::string &path);
std::pair<ModelConfig, ModelParams> LoadCheckpoint(const std::string &path);

}  // namespace attrphone

#endif  // ATTRPHONE_NET_H_
