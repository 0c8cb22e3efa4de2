// core/include/attrphone/ctc.h

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

#ifndef ATTRPHONE_CTC_H_
#define ATTRPHONE_CTC_H_

#include <vector>

#include "attrphone/logit-sequence.h"
#include "attrphone/tensor.h"

namespace attrphone {

/// CTC target: vocabulary indices with the blank excluded. May be empty only
/// as a decoding output, never as a loss target.
struct LabelSequence {
  std::vector<int> tokens;

  int Length() const { return static_cast<int>(tokens.size()); }
  bool operator==(const LabelSequence &other) const = default;
};

struct CtcLossResult {
  double loss = 0.0;  // negative log-likelihood, natural log
  Tensor2 grad;       // d loss / d logits, T x V
};

/// Negative log-likelihood of the label sequence under the alignment-free
/// CTC model (Graves et al., 2006), with the exact gradient with respect to
/// the unnormalized logits. Computed entirely in log space. The blank is the
/// last vocabulary index.
CtcLossResult CtcLoss(const LogitSequence &logits, const LabelSequence &labels);

/// Merges adjacent duplicates, then removes blanks.
LabelSequence Collapse(const std::vector<int> &path, int blank_index);

/// Per-frame argmax (ties broken toward the lowest index) followed by
/// Collapse. When `allowed` is non-null it must have V-1 entries; phonemes
/// with a false entry are excluded from the argmax (the blank always stays
/// eligible).
LabelSequence GreedyDecode(const LogitSequence &logits,
                           const std::vector<bool> *allowed = nullptr);

}  // namespace attrphone

#endif  // ATTRPHONE_CTC_H_
