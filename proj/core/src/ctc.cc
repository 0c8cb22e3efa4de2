// core/src/ctc.cc

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

#include "attrphone/ctc.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "attrphone/errors.h"

namespace attrphone {

namespace {

constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without leaving log space.
inline double LogAdd(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  return a > b ? a + std::log1p(std::exp(b - a))
               : b + std::log1p(std::exp(a - b));
}

// Row-wise log-softmax of the logits.
Tensor2 LogSoftmax(const Tensor2 &logits) {
  Tensor2 out(logits.rows, logits.cols);
  for (int t = 0; t < logits.rows; ++t) {
    const double *row = &logits.data[static_cast<size_t>(t) * logits.cols];
    double max = row[0];
    for (int k = 1; k < logits.cols; ++k) max = std::max(max, row[k]);
    double sum = 0.0;
    for (int k = 0; k < logits.cols; ++k) sum += std::exp(row[k] - max);
    const double log_norm = max + std::log(sum);
    double *orow = &out.data[static_cast<size_t>(t) * out.cols];
    for (int k = 0; k < logits.cols; ++k) orow[k] = row[k] - log_norm;
  }
  return out;
}

}  // namespace

CtcLossResult CtcLoss(const LogitSequence &logits,
                      const LabelSequence &labels) {
  const int num_frames = logits.NumFrames();
  const int vocab = logits.VocabSize();
  const int blank = logits.BlankIndex();
  if (num_frames < 1 || vocab < 2)
    throw DimensionMismatch("CtcLoss: logits must be at least 1 x 2");
  if (labels.tokens.empty())
    throw InfeasibleLength("CtcLoss: empty label sequence");
  int required = labels.Length();
  for (int i = 1; i < labels.Length(); ++i)
    if (labels.tokens[i] == labels.tokens[i - 1]) ++required;
  if (num_frames < required)
    throw InfeasibleLength("CtcLoss: " + std::to_string(num_frames) +
                           " frames cannot emit " +
                           std::to_string(labels.Length()) +
                           " labels (need " + std::to_string(required) + ")");
  for (int token : labels.tokens)
    if (token < 0 || token >= blank)
      throw IndexOutOfRange("CtcLoss: label " + std::to_string(token) +
                            " outside [0, " + std::to_string(blank) + ")");

  // Extended label sequence with blanks interleaved: b l1 b l2 ... lL b.
  const int num_states = 2 * labels.Length() + 1;
  std::vector<int> extended(num_states, blank);
  for (int i = 0; i < labels.Length(); ++i)
    extended[2 * i + 1] = labels.tokens[i];

  const Tensor2 log_probs = LogSoftmax(logits.frames);
  auto lp = [&](int t, int k) {
    return log_probs.data[static_cast<size_t>(t) * vocab + k];
  };

  // Forward variables include the emission at t; backward variables cover
  // emissions strictly after t, following Graves' convention.
  Tensor2 alpha(num_frames, num_states);
  Tensor2 beta(num_frames, num_states);
  alpha.data.assign(alpha.data.size(), kLogZero);
  beta.data.assign(beta.data.size(), kLogZero);

  alpha.at(0, 0) = lp(0, extended[0]);
  if (num_states > 1) alpha.at(0, 1) = lp(0, extended[1]);
  for (int t = 1; t < num_frames; ++t) {
    for (int u = 0; u < num_states; ++u) {
      double sum = alpha.at(t - 1, u);
      if (u > 0) sum = LogAdd(sum, alpha.at(t - 1, u - 1));
      if (u > 1 && extended[u] != blank && extended[u] != extended[u - 2])
        sum = LogAdd(sum, alpha.at(t - 1, u - 2));
      alpha.at(t, u) = sum == kLogZero ? kLogZero : sum + lp(t, extended[u]);
    }
  }

  beta.at(num_frames - 1, num_states - 1) = 0.0;
  if (num_states > 1) beta.at(num_frames - 1, num_states - 2) = 0.0;
  for (int t = num_frames - 2; t >= 0; --t) {
    for (int u = 0; u < num_states; ++u) {
      double sum = beta.at(t + 1, u) + lp(t + 1, extended[u]);
      if (u + 1 < num_states)
        sum = LogAdd(sum, beta.at(t + 1, u + 1) + lp(t + 1, extended[u + 1]));
      if (u + 2 < num_states && extended[u] != blank &&
          extended[u] != extended[u + 2])
        sum = LogAdd(sum, beta.at(t + 1, u + 2) + lp(t + 1, extended[u + 2]));
      beta.at(t, u) = sum;
    }
  }

  double log_likelihood = alpha.at(num_frames - 1, num_states - 1);
  if (num_states > 1)
    log_likelihood =
        LogAdd(log_likelihood, alpha.at(num_frames - 1, num_states - 2));

  CtcLossResult result;
  result.loss = -log_likelihood;
  if (result.loss < 0.0 && result.loss > -1e-12) result.loss = 0.0;

  // grad[t][k] = softmax[t][k] - P(symbol k at frame t | labels).
  result.grad = Tensor2(num_frames, vocab);
  std::vector<double> log_posterior(vocab);
  for (int t = 0; t < num_frames; ++t) {
    std::fill(log_posterior.begin(), log_posterior.end(), kLogZero);
    for (int u = 0; u < num_states; ++u) {
      const double occupancy = alpha.at(t, u) + beta.at(t, u);
      if (occupancy == kLogZero) continue;
      double &cell = log_posterior[extended[u]];
      cell = LogAdd(cell, occupancy);
    }
    for (int k = 0; k < vocab; ++k) {
      const double posterior =
          log_posterior[k] == kLogZero
              ? 0.0
              : std::exp(log_posterior[k] - log_likelihood);
      result.grad.at(t, k) = std::exp(lp(t, k)) - posterior;
    }
  }
  return result;
}

LabelSequence Collapse(const std::vector<int> &path, int blank_index) {
  LabelSequence out;
  int previous = -1;
  for (int index : path) {
    if (index != previous && index != blank_index) out.tokens.push_back(index);
    previous = index;
  }
  return out;
}

LabelSequence GreedyDecode(const LogitSequence &logits,
                           const std::vector<bool> *allowed) {
  const int vocab = logits.VocabSize();
  const int blank = logits.BlankIndex();
  if (allowed != nullptr && static_cast<int>(allowed->size()) != vocab - 1)
    throw DimensionMismatch("GreedyDecode: mask must cover the non-blank "
                            "vocabulary");
  std::vector<int> path(logits.NumFrames());
  for (int t = 0; t < logits.NumFrames(); ++t) {
    // Strict comparison over an ascending scan breaks ties toward the
    // lowest index.
    int best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < vocab; ++k) {
      if (k != blank && allowed != nullptr && !(*allowed)[k]) continue;
      const double score = logits.frames.at(t, k);
      if (score > best_score) {
        best = k;
        best_score = score;
      }
    }
    path[t] = best;
  }
  return Collapse(path, blank);
}

}  // namespace attrphone
