// core/include/attrphone/logit-sequence.h

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

#ifndef ATTRPHONE_LOGIT_SEQUENCE_H_
#define ATTRPHONE_LOGIT_SEQUENCE_H_

#include "attrphone/tensor.h"

namespace attrphone {

/// Per-frame unnormalized scores over one vocabulary. By convention the last
/// index of every vocabulary is the CTC blank.
struct LogitSequence {
  Tensor2 frames;  // T x V

  LogitSequence() = default;
  explicit LogitSequence(Tensor2 frames) : frames(std::move(frames)) {}
  LogitSequence(int num_frames, int vocab_size)
      : frames(num_frames, vocab_size) {}

  int NumFrames() const { return frames.rows; }
  int VocabSize() const { return frames.cols; }
  int BlankIndex() const { return frames.cols - 1; }

  bool operator==(const LogitSequence &other) const = default;
};

}  // namespace attrphone

#endif  // ATTRPHONE_LOGIT_SEQUENCE_H_
