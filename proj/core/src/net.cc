// core/src/net.cc

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

#include "attrphone/net.h"

#include <cmath>

#include "attrphone/errors.h"
#include "attrphone/rng.h"

namespace attrphone {

void ValidateModelConfig(const ModelConfig &config) {
  if (config.input_dim <= 0 || config.model_dim <= 0 || config.head_dim <= 0)
    throw BadConfig("model dimensions must be positive");
  if (config.num_blocks < 1 || config.num_blocks > 2)
    throw BadConfig("encoder supports 1 or 2 residual blocks, got " +
                    std::to_string(config.num_blocks));
  if (config.phoneme_vocab < 2 || config.manner_vocab < 2 ||
      config.place_vocab < 2)
    throw BadConfig("every head vocabulary needs at least one token plus "
                    "blank");
}

const std::string &HeadName(Head head) {
  static const std::string names[] = {"phoneme", "manner", "place"};
  return names[static_cast<int>(head)];
}

const std::vector<Head> &AllHeads() {
  static const std::vector<Head> heads = {Head::kPhoneme, Head::kManner,
                                          Head::kPlace};
  return heads;
}

int HeadVocab(const ModelConfig &config, Head head) {
  switch (head) {
    case Head::kPhoneme: return config.phoneme_vocab;
    case Head::kManner: return config.manner_vocab;
    case Head::kPlace: return config.place_vocab;
  }
  return 0;
}

Tensor2 &ModelParams::At(const std::string &name) {
  const auto it = entries.find(name);
  if (it == entries.end())
    throw ShapeMismatch("missing model parameter \"" + name + "\"");
  return it->second;
}

const Tensor2 &ModelParams::At(const std::string &name) const {
  const auto it = entries.find(name);
  if (it == entries.end())
    throw ShapeMismatch("missing model parameter \"" + name + "\"");
  return it->second;
}

double InitBound(int fan_in, int fan_out) {
  return std::sqrt(6.0 / (fan_in + fan_out));
}

namespace {

Tensor2 DrawWeight(int fan_in, int fan_out, Rng *rng) {
  const double bound = InitBound(fan_in, fan_out);
  Tensor2 w(fan_in, fan_out);
  for (double &v : w.data) v = rng->Uniform(-bound, bound);
  return w;
}

// y_row[j] += sum_i x_row[i] * w[i][j]
void AddRowTimesMatrix(const double *x, const Tensor2 &w, double *y) {
  for (int i = 0; i < w.rows; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const double *wrow = &w.data[static_cast<size_t>(i) * w.cols];
    for (int j = 0; j < w.cols; ++j) y[j] += xi * wrow[j];
  }
}

// y_row[i] += sum_j g_row[j] * w[i][j]   (multiply by w transposed)
void AddRowTimesMatrixT(const double *g, const Tensor2 &w, double *y) {
  for (int i = 0; i < w.rows; ++i) {
    const double *wrow = &w.data[static_cast<size_t>(i) * w.cols];
    double sum = 0.0;
    for (int j = 0; j < w.cols; ++j) sum += g[j] * wrow[j];
    y[i] += sum;
  }
}

// dw[i][j] += x_row[i] * g_row[j]
void AddOuterProduct(const double *x, const double *g, Tensor2 *dw) {
  for (int i = 0; i < dw->rows; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    double *dwrow = &dw->data[static_cast<size_t>(i) * dw->cols];
    for (int j = 0; j < dw->cols; ++j) dwrow[j] += xi * g[j];
  }
}

// Unidirectional tanh recurrence; returns T x hidden_dim activations.
Tensor2 RnnForward(const Tensor2 &input, const Tensor2 &weight_ih,
                   const Tensor2 &weight_hh, const Tensor2 &bias) {
  const int num_frames = input.rows;
  const int hidden_dim = weight_ih.cols;
  Tensor2 hidden(num_frames, hidden_dim);
  std::vector<double> pre(hidden_dim);
  for (int t = 0; t < num_frames; ++t) {
    for (int j = 0; j < hidden_dim; ++j) pre[j] = bias.data[j];
    AddRowTimesMatrix(&input.data[static_cast<size_t>(t) * input.cols],
                      weight_ih, pre.data());
    if (t > 0)
      AddRowTimesMatrix(&hidden.data[static_cast<size_t>(t - 1) * hidden_dim],
                        weight_hh, pre.data());
    double *hrow = &hidden.data[static_cast<size_t>(t) * hidden_dim];
    for (int j = 0; j < hidden_dim; ++j) hrow[j] = std::tanh(pre[j]);
  }
  return hidden;
}

// Backpropagation through time for RnnForward. `grad_hidden` holds the
// gradient arriving at each hidden state from above; returns the gradient
// with respect to the input and accumulates the weight gradients.
Tensor2 RnnBackward(const Tensor2 &input, const Tensor2 &hidden,
                    const Tensor2 &weight_ih, const Tensor2 &weight_hh,
                    const Tensor2 &grad_hidden, Tensor2 *dweight_ih,
                    Tensor2 *dweight_hh, Tensor2 *dbias) {
  const int num_frames = input.rows;
  const int hidden_dim = hidden.cols;
  Tensor2 grad_input(num_frames, input.cols);
  std::vector<double> carry(hidden_dim, 0.0);
  std::vector<double> ds(hidden_dim);
  for (int t = num_frames - 1; t >= 0; --t) {
    const double *hrow = &hidden.data[static_cast<size_t>(t) * hidden_dim];
    const double *grow =
        &grad_hidden.data[static_cast<size_t>(t) * hidden_dim];
    for (int j = 0; j < hidden_dim; ++j) {
      const double dh = grow[j] + carry[j];
      ds[j] = dh * (1.0 - hrow[j] * hrow[j]);
    }
    AddOuterProduct(&input.data[static_cast<size_t>(t) * input.cols],
                    ds.data(), dweight_ih);
    if (t > 0)
      AddOuterProduct(&hidden.data[static_cast<size_t>(t - 1) * hidden_dim],
                      ds.data(), dweight_hh);
    for (int j = 0; j < hidden_dim; ++j) dbias->data[j] += ds[j];
    AddRowTimesMatrixT(ds.data(), weight_ih,
                       &grad_input.data[static_cast<size_t>(t) * input.cols]);
    std::fill(carry.begin(), carry.end(), 0.0);
    if (t > 0) AddRowTimesMatrixT(ds.data(), weight_hh, carry.data());
  }
  return grad_input;
}

void CheckFinite(const Tensor2 &t, const std::string &what) {
  if (!t.IsFinite())
    throw NonFiniteActivation("non-finite values in " + what);
}

}  // namespace

ModelParams InitParams(const ModelConfig &config, uint64_t seed) {
  ValidateModelConfig(config);
  Rng rng(seed);
  ModelParams params;
  auto add = [&params](const std::string &name, Tensor2 tensor) {
    params.entries.emplace(name, std::move(tensor));
  };
  // Insertion below follows a fixed layer order so that the draw sequence,
  // and therefore every tensor, is reproducible from the seed alone.
  add("encoder.input.weight",
      DrawWeight(config.input_dim, config.model_dim, &rng));
  add("encoder.input.bias", Tensor2(1, config.model_dim));
  for (int b = 0; b < config.num_blocks; ++b) {
    const std::string prefix = "encoder.block" + std::to_string(b);
    add(prefix + ".dense1.weight",
        DrawWeight(config.model_dim, config.model_dim, &rng));
    add(prefix + ".dense1.bias", Tensor2(1, config.model_dim));
    add(prefix + ".dense2.weight",
        DrawWeight(config.model_dim, config.model_dim, &rng));
    add(prefix + ".dense2.bias", Tensor2(1, config.model_dim));
  }
  if (config.encoder_recurrent) {
    add("encoder.rnn.weight_ih",
        DrawWeight(config.model_dim, config.model_dim, &rng));
    add("encoder.rnn.weight_hh",
        DrawWeight(config.model_dim, config.model_dim, &rng));
    add("encoder.rnn.bias", Tensor2(1, config.model_dim));
  }
  for (Head head : AllHeads()) {
    const std::string prefix = "head." + HeadName(head);
    add(prefix + ".rnn.weight_ih",
        DrawWeight(config.model_dim, config.head_dim, &rng));
    add(prefix + ".rnn.weight_hh",
        DrawWeight(config.head_dim, config.head_dim, &rng));
    add(prefix + ".rnn.bias", Tensor2(1, config.head_dim));
    add(prefix + ".out.weight",
        DrawWeight(config.head_dim, HeadVocab(config, head), &rng));
    add(prefix + ".out.bias", Tensor2(1, HeadVocab(config, head)));
  }
  return params;
}

Tensor2 EncoderForward(const ModelConfig &config, const ModelParams &params,
                       const Tensor2 &features, EncoderTrace *trace) {
  if (features.cols != config.input_dim || features.rows < 1)
    throw ShapeMismatch("encoder expects T x " +
                        std::to_string(config.input_dim) + " features, got " +
                        std::to_string(features.rows) + " x " +
                        std::to_string(features.cols));
  Tensor2 projected = MatMul(features, params.At("encoder.input.weight"));
  AddRowVectorInPlace(&projected, params.At("encoder.input.bias"));
  Tensor2 state = TanhElementwise(projected);
  if (trace != nullptr) {
    trace->features = features;
    trace->input_activation = state;
    trace->blocks.clear();
  }
  for (int b = 0; b < config.num_blocks; ++b) {
    const std::string prefix = "encoder.block" + std::to_string(b);
    Tensor2 inner = MatMul(state, params.At(prefix + ".dense1.weight"));
    AddRowVectorInPlace(&inner, params.At(prefix + ".dense1.bias"));
    Tensor2 activation = TanhElementwise(inner);
    Tensor2 update = MatMul(activation, params.At(prefix + ".dense2.weight"));
    AddRowVectorInPlace(&update, params.At(prefix + ".dense2.bias"));
    if (trace != nullptr)
      trace->blocks.emplace_back(state, activation);
    AxpyInPlace(&update, 1.0, state);
    state = std::move(update);
  }
  if (config.encoder_recurrent) {
    Tensor2 hidden =
        RnnForward(state, params.At("encoder.rnn.weight_ih"),
                   params.At("encoder.rnn.weight_hh"),
                   params.At("encoder.rnn.bias"));
    if (trace != nullptr) {
      trace->rnn_input = std::move(state);
      trace->rnn_hidden = hidden;
    }
    state = std::move(hidden);
  }
  CheckFinite(state, "encoder output");
  return state;
}

LogitSequence HeadForward(const ModelConfig &config, const ModelParams &params,
                          Head head, const Tensor2 &hidden, HeadTrace *trace) {
  if (hidden.cols != config.model_dim || hidden.rows < 1)
    throw ShapeMismatch("head input must be T x " +
                        std::to_string(config.model_dim));
  const std::string prefix = "head." + HeadName(head);
  Tensor2 rnn_hidden = RnnForward(hidden, params.At(prefix + ".rnn.weight_ih"),
                                  params.At(prefix + ".rnn.weight_hh"),
                                  params.At(prefix + ".rnn.bias"));
  Tensor2 logits = MatMul(rnn_hidden, params.At(prefix + ".out.weight"));
  AddRowVectorInPlace(&logits, params.At(prefix + ".out.bias"));
  CheckFinite(logits, "logits of head " + HeadName(head));
  if (trace != nullptr) {
    trace->input = hidden;
    trace->rnn_hidden = std::move(rnn_hidden);
  }
  return LogitSequence(std::move(logits));
}

GradientMap Backward(const ModelConfig &config, const ModelParams &params,
                     ForwardTrace *trace,
                     const std::map<Head, Tensor2> &loss_grads) {
  if (trace == nullptr || trace->consumed)
    throw TraceMismatch("forward trace missing or already consumed");
  trace->consumed = true;

  GradientMap grads;
  auto grad_of = [&grads, &params](const std::string &name) -> Tensor2 & {
    auto it = grads.find(name);
    if (it == grads.end()) {
      const Tensor2 &p = params.At(name);
      it = grads.emplace(name, Tensor2(p.rows, p.cols)).first;
    }
    return it->second;
  };

  const int num_frames = trace->encoder.features.rows;
  Tensor2 grad_hidden(num_frames, config.model_dim);

  for (const auto &[head, loss_grad] : loss_grads) {
    const auto it = trace->heads.find(head);
    if (it == trace->heads.end())
      throw TraceMismatch("no forward trace for head " + HeadName(head));
    const HeadTrace &head_trace = it->second;
    if (loss_grad.rows != head_trace.rnn_hidden.rows ||
        loss_grad.cols != HeadVocab(config, head))
      throw TraceMismatch("loss gradient shape mismatch for head " +
                          HeadName(head));
    const std::string prefix = "head." + HeadName(head);
    grad_of(prefix + ".out.weight") =
        MatMulTransposeA(head_trace.rnn_hidden, loss_grad);
    grad_of(prefix + ".out.bias") = ColumnSums(loss_grad);
    Tensor2 grad_rnn =
        MatMulTransposeB(loss_grad, params.At(prefix + ".out.weight"));
    Tensor2 grad_input = RnnBackward(
        head_trace.input, head_trace.rnn_hidden,
        params.At(prefix + ".rnn.weight_ih"),
        params.At(prefix + ".rnn.weight_hh"), grad_rnn,
        &grad_of(prefix + ".rnn.weight_ih"),
        &grad_of(prefix + ".rnn.weight_hh"), &grad_of(prefix + ".rnn.bias"));
    // The encoder is shared: gradients from every head sum.
    AxpyInPlace(&grad_hidden, 1.0, grad_input);
  }

  const EncoderTrace &enc = trace->encoder;
  Tensor2 grad_state = std::move(grad_hidden);
  if (config.encoder_recurrent) {
    grad_state = RnnBackward(
        enc.rnn_input, enc.rnn_hidden, params.At("encoder.rnn.weight_ih"),
        params.At("encoder.rnn.weight_hh"), grad_state,
        &grad_of("encoder.rnn.weight_ih"), &grad_of("encoder.rnn.weight_hh"),
        &grad_of("encoder.rnn.bias"));
  }
  for (int b = config.num_blocks - 1; b >= 0; --b) {
    const std::string prefix = "encoder.block" + std::to_string(b);
    const Tensor2 &block_input = enc.blocks[b].first;
    const Tensor2 &activation = enc.blocks[b].second;
    grad_of(prefix + ".dense2.weight") =
        MatMulTransposeA(activation, grad_state);
    grad_of(prefix + ".dense2.bias") = ColumnSums(grad_state);
    Tensor2 grad_activation =
        MatMulTransposeB(grad_state, params.At(prefix + ".dense2.weight"));
    for (size_t i = 0; i < grad_activation.data.size(); ++i) {
      const double a = activation.data[i];
      grad_activation.data[i] *= 1.0 - a * a;
    }
    grad_of(prefix + ".dense1.weight") =
        MatMulTransposeA(block_input, grad_activation);
    grad_of(prefix + ".dense1.bias") = ColumnSums(grad_activation);
    // Residual: the block input feeds both the inner path and the skip.
    Tensor2 grad_inner =
        MatMulTransposeB(grad_activation, params.At(prefix + ".dense1.weight"));
    AxpyInPlace(&grad_state, 1.0, grad_inner);
  }
  for (size_t i = 0; i < grad_state.data.size(); ++i) {
    const double a = enc.input_activation.data[i];
    grad_state.data[i] *= 1.0 - a * a;
  }
  grad_of("encoder.input.weight") =
      MatMulTransposeA(enc.features, grad_state);
  grad_of("encoder.input.bias") = ColumnSums(grad_state);
  return grads;
}

ModelOutputs ModelForward(const ModelConfig &config, const ModelParams &params,
                          const Tensor2 &features,
                          const std::vector<Head> &heads,
                          ForwardTrace *trace) {
  ModelOutputs outputs;
  outputs.hidden = EncoderForward(config, params, features,
                                  trace != nullptr ? &trace->encoder : nullptr);
  for (Head head : heads) {
    HeadTrace head_trace;
    outputs.logits.emplace(
        head, HeadForward(config, params, head, outputs.hidden,
                          trace != nullptr ? &head_trace : nullptr));
    if (trace != nullptr) trace->heads[head] = std::move(head_trace);
  }
  if (trace != nullptr) trace->consumed = false;
  return outputs;
}

}  // namespace attrphone
