// tests/net-test.cc

// Copyright 2026  attrphone contributors

// See ../COPYING for clarification regarding multiple authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>

#include "attrphone/errors.h"
#include "attrphone/net.h"
#include "attrphone/rng.h"
#include "grad-check.h"
#include "oracles.h"

using namespace attrphone;
using testing::MakeTinyProblem;
using testing::NaiveEncoderForward;
using testing::NaiveHeadForward;
using testing::TensorRows;
using testing::TinyProblem;

namespace {

ModelConfig SmallConfig() {
  ModelConfig config;
  config.input_dim = 2;
  config.model_dim = 3;
  config.num_blocks = 1;
  config.encoder_recurrent = true;
  config.head_dim = 3;
  config.phoneme_vocab = 4;
  config.manner_vocab = 8;
  config.place_vocab = 12;
  return config;
}

ModelParams ZeroParams(const ModelConfig &config) {
  ModelParams params = InitParams(config, 0);
  for (auto &[name, tensor] : params.entries) tensor.SetZero();
  return params;
}

}  // namespace

TEST_CASE("model config validation") {
  ModelConfig config = SmallConfig();
  CHECK_NOTHROW(ValidateModelConfig(config));
  config.num_blocks = 3;
  CHECK_THROWS_AS(ValidateModelConfig(config), BadConfig);
  config = SmallConfig();
  config.input_dim = 0;
  CHECK_THROWS_AS(ValidateModelConfig(config), BadConfig);
  config = SmallConfig();
  config.phoneme_vocab = 1;
  CHECK_THROWS_AS(ValidateModelConfig(config), BadConfig);
}

TEST_CASE("initialization") {
  SUBCASE("bound for equal fans of 3 is exactly 1") {
    CHECK(InitBound(3, 3) == 1.0);
  }
  SUBCASE("same seed gives bit-identical parameters") {
    const ModelConfig config = SmallConfig();
    CHECK(InitParams(config, 42) == InitParams(config, 42));
  }
  SUBCASE("different seeds differ") {
    const ModelConfig config = SmallConfig();
    CHECK_FALSE(InitParams(config, 42) == InitParams(config, 43));
  }
  SUBCASE("weights respect the bound, biases are zero") {
    const ModelConfig config = SmallConfig();
    const ModelParams params = InitParams(config, 7);
    for (const auto &[name, tensor] : params.entries) {
      if (name.find("bias") != std::string::npos) {
        for (double v : tensor.data) CHECK(v == 0.0);
      } else {
        const double bound = InitBound(tensor.rows, tensor.cols);
        for (double v : tensor.data) {
          CHECK(v <= bound);
          CHECK(v >= -bound);
        }
      }
    }
  }
}

TEST_CASE("encoder forward") {
  const ModelConfig config = SmallConfig();
  SUBCASE("zero parameters map any input to zero") {
    const ModelParams params = ZeroParams(config);
    Tensor2 features(4, 2);
    features.at(0, 0) = 1.5;
    features.at(3, 1) = -2.0;
    const Tensor2 hidden = EncoderForward(config, params, features, nullptr);
    CHECK(hidden.rows == 4);
    CHECK(hidden.cols == 3);
    for (double v : hidden.data) CHECK(v == 0.0);
  }
  SUBCASE("deterministic across calls") {
    const ModelParams params = InitParams(config, 5);
    Rng rng(6);
    Tensor2 features(5, 2);
    for (double &v : features.data) v = rng.Uniform(-1.0, 1.0);
    const Tensor2 a = EncoderForward(config, params, features, nullptr);
    const Tensor2 b = EncoderForward(config, params, features, nullptr);
    CHECK(a == b);
  }
  SUBCASE("matches the straight-line oracle on a seed-0 3x2 input") {
    const ModelParams params = InitParams(config, 0);
    Tensor2 features(3, 2);
    features.at(0, 0) = 0.3;
    features.at(0, 1) = -0.8;
    features.at(1, 0) = 1.1;
    features.at(1, 1) = 0.05;
    features.at(2, 0) = -0.6;
    features.at(2, 1) = 0.9;
    const Tensor2 hidden = EncoderForward(config, params, features, nullptr);
    const auto oracle = NaiveEncoderForward(config, params,
                                            TensorRows(features));
    for (int t = 0; t < 3; ++t)
      for (int j = 0; j < 3; ++j)
        CHECK(hidden.at(t, j) == doctest::Approx(oracle[t][j]).epsilon(1e-12));
  }
  SUBCASE("two-block non-recurrent variant matches the oracle too") {
    ModelConfig wide = SmallConfig();
    wide.num_blocks = 2;
    wide.encoder_recurrent = false;
    const ModelParams params = InitParams(wide, 3);
    Rng rng(4);
    Tensor2 features(4, 2);
    for (double &v : features.data) v = rng.Uniform(-1.0, 1.0);
    const Tensor2 hidden = EncoderForward(wide, params, features, nullptr);
    const auto oracle = NaiveEncoderForward(wide, params, TensorRows(features));
    for (int t = 0; t < 4; ++t)
      for (int j = 0; j < 3; ++j)
        CHECK(hidden.at(t, j) == doctest::Approx(oracle[t][j]).epsilon(1e-12));
  }
  SUBCASE("shape and finiteness errors") {
    const ModelParams params = InitParams(config, 1);
    CHECK_THROWS_AS(EncoderForward(config, params, Tensor2(3, 5), nullptr),
                    ShapeMismatch);
    ModelParams poisoned = params;
    poisoned.At("encoder.input.weight").at(0, 0) =
        std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(EncoderForward(config, poisoned, Tensor2(3, 2), nullptr),
                    NonFiniteActivation);
  }
}

TEST_CASE("head forward") {
  const ModelConfig config = SmallConfig();
  SUBCASE("zero parameters give uniform zero logits") {
    const ModelParams params = ZeroParams(config);
    Tensor2 hidden(4, 3);
    hidden.at(1, 2) = 0.7;
    const LogitSequence logits =
        HeadForward(config, params, Head::kPhoneme, hidden, nullptr);
    CHECK(logits.NumFrames() == 4);
    CHECK(logits.VocabSize() == 4);
    for (double v : logits.frames.data) CHECK(v == 0.0);
  }
  SUBCASE("T=1 reduces the recurrence to a dense step") {
    const ModelParams params = InitParams(config, 9);
    Rng rng(10);
    Tensor2 hidden(1, 3);
    for (double &v : hidden.data) v = rng.Uniform(-1.0, 1.0);
    const LogitSequence logits =
        HeadForward(config, params, Head::kManner, hidden, nullptr);
    // Independent dense computation: tanh(x W_ih + b) W_out + b_out; the
    // recurrent weights cannot contribute because h_0 = 0.
    const Tensor2 &w_ih = params.At("head.manner.rnn.weight_ih");
    const Tensor2 &b = params.At("head.manner.rnn.bias");
    const Tensor2 &w_out = params.At("head.manner.out.weight");
    const Tensor2 &b_out = params.At("head.manner.out.bias");
    for (int v = 0; v < logits.VocabSize(); ++v) {
      double expected = b_out.data[v];
      for (int j = 0; j < config.head_dim; ++j) {
        double s = b.data[j];
        for (int i = 0; i < config.model_dim; ++i)
          s += hidden.at(0, i) * w_ih.at(i, j);
        expected += std::tanh(s) * w_out.at(j, v);
      }
      CHECK(logits.frames.at(0, v) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  SUBCASE("matches the recurrence oracle on longer inputs") {
    const ModelParams params = InitParams(config, 11);
    Rng rng(12);
    Tensor2 hidden(6, 3);
    for (double &v : hidden.data) v = rng.Uniform(-1.0, 1.0);
    for (Head head : AllHeads()) {
      const LogitSequence logits =
          HeadForward(config, params, head, hidden, nullptr);
      const auto oracle =
          NaiveHeadForward(params, HeadName(head), TensorRows(hidden));
      CHECK(logits.VocabSize() == HeadVocab(config, head));
      for (int t = 0; t < 6; ++t)
        for (int v = 0; v < logits.VocabSize(); ++v)
          CHECK(logits.frames.at(t, v) ==
                doctest::Approx(oracle[t][v]).epsilon(1e-12));
    }
  }
  SUBCASE("wrong hidden width is rejected") {
    const ModelParams params = InitParams(config, 1);
    CHECK_THROWS_AS(
        HeadForward(config, params, Head::kPhoneme, Tensor2(3, 5), nullptr),
        ShapeMismatch);
  }
}

TEST_CASE("backward") {
  const ModelConfig config = SmallConfig();
  const ModelParams params = InitParams(config, 21);
  Rng rng(22);
  Tensor2 features(5, 2);
  for (double &v : features.data) v = rng.Uniform(-1.0, 1.0);

  SUBCASE("zero loss gradients produce zero parameter gradients") {
    ForwardTrace trace;
    ModelForward(config, params, features, AllHeads(), &trace);
    std::map<Head, Tensor2> loss_grads;
    loss_grads[Head::kPhoneme] = Tensor2(5, 4);
    const GradientMap grads = Backward(config, params, &trace, loss_grads);
    for (const auto &[name, grad] : grads)
      for (double v : grad.data) CHECK(v == 0.0);
  }
  SUBCASE("gradients are linear in the loss gradients") {
    std::map<Head, Tensor2> loss_grads;
    loss_grads[Head::kPhoneme] = Tensor2(5, 4);
    for (double &v : loss_grads[Head::kPhoneme].data)
      v = rng.Uniform(-1.0, 1.0);
    ForwardTrace trace1;
    ModelForward(config, params, features, AllHeads(), &trace1);
    const GradientMap base = Backward(config, params, &trace1, loss_grads);
    for (double &v : loss_grads[Head::kPhoneme].data) v *= 2.0;
    ForwardTrace trace2;
    ModelForward(config, params, features, AllHeads(), &trace2);
    const GradientMap doubled = Backward(config, params, &trace2, loss_grads);
    for (const auto &[name, grad] : base) {
      const Tensor2 &twice = doubled.at(name);
      for (size_t i = 0; i < grad.data.size(); ++i)
        CHECK(twice.data[i] ==
              doctest::Approx(2.0 * grad.data[i]).epsilon(1e-9));
    }
  }
  SUBCASE("a trace cannot be consumed twice") {
    ForwardTrace trace;
    ModelForward(config, params, features, AllHeads(), &trace);
    std::map<Head, Tensor2> loss_grads;
    loss_grads[Head::kPhoneme] = Tensor2(5, 4);
    Backward(config, params, &trace, loss_grads);
    CHECK_THROWS_AS(Backward(config, params, &trace, loss_grads),
                    TraceMismatch);
  }
  SUBCASE("a loss gradient for a head that never ran is rejected") {
    ForwardTrace trace;
    ModelForward(config, params, features, {Head::kPhoneme}, &trace);
    std::map<Head, Tensor2> loss_grads;
    loss_grads[Head::kManner] = Tensor2(5, 8);
    CHECK_THROWS_AS(Backward(config, params, &trace, loss_grads),
                    TraceMismatch);
  }
  SUBCASE("wrong loss-gradient shape is rejected") {
    ForwardTrace trace;
    ModelForward(config, params, features, AllHeads(), &trace);
    std::map<Head, Tensor2> loss_grads;
    loss_grads[Head::kPhoneme] = Tensor2(5, 7);
    CHECK_THROWS_AS(Backward(config, params, &trace, loss_grads),
                    TraceMismatch);
  }
}

TEST_CASE("full-model gradients match finite differences") {
  const TinyProblem problem = MakeTinyProblem(31);
  const auto stats = testing::CheckFullModelGradients(problem, 32);
  CAPTURE(stats.worst_parameter);
  CHECK(stats.parameters_checked > 300);
  CHECK(stats.worst_relative_error < 1e-4);
}

TEST_CASE("checkpoint round trip is bit-exact") {
  const ModelConfig config = SmallConfig();
  const ModelParams params = InitParams(config, 77);
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "net-test.ckpt";
  SaveCheckpoint(config, params, path.string());
  const auto [loaded_config, loaded_params] = LoadCheckpoint(path.string());
  CHECK(loaded_config == config);
  REQUIRE(loaded_params.entries.size() == params.entries.size());
  for (const auto &[name, tensor] : params.entries) {
    const Tensor2 &loaded = loaded_params.At(name);
    CHECK(loaded.rows == tensor.rows);
    CHECK(loaded.cols == tensor.cols);
    CHECK(std::memcmp(loaded.data.data(), tensor.data.data(),
                      tensor.data.size() * sizeof(double)) == 0);
  }
  CHECK_THROWS_AS(LoadCheckpoint("/nonexistent/x.ckpt"), IoError);
}
