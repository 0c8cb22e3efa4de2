// core/include/attrphone/attribute-map.h

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

#ifndef ATTRPHONE_ATTRIBUTE_MAP_H_
#define ATTRPHONE_ATTRIBUTE_MAP_H_

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "attrphone/logit-sequence.h"
#include "attrphone/phone-set.h"
#include "attrphone/tensor.h"

namespace attrphone {

/// Binary attribute-to-phoneme mapping for one category, extended by one
/// blank row and one blank column so that it stays shape-compatible with CTC
/// heads. Entry (i, j) is 1 iff phoneme j carries attribute i; the blank
/// column carries a single 1 in the blank row. Frozen after construction.
struct AttributeMapping {
  AttributeCategoryKind category;
  Tensor2 matrix;                        // (|C|+1) x (|P_uni|+1), entries 0/1
  std::map<std::string, int> row_index;  // attribute class -> row
  std::map<std::string, int> col_index;  // phoneme symbol -> column

  int NumAttributes() const { return matrix.rows - 1; }
  int NumPhonemes() const { return matrix.cols - 1; }
  int BlankRow() const { return matrix.rows - 1; }
  int BlankColumn() const { return matrix.cols - 1; }
};

AttributeMapping BuildMapping(const AttributeCategory &category,
                              const UnionInventory &uni);

/// Projects attribute logits (T x |C|+1) into phoneme-logit space
/// (T x |P_uni|+1): out[t][j] = sum_i matrix[i][j] * in[t][i].
LogitSequence Project(const AttributeMapping &mapping,
                      const LogitSequence &attribute_logits);

/// Adjoint of Project: maps a sequence over phonemes (T x |P_uni|+1) back to
/// attribute space (T x |C|+1). Used to backpropagate through the projection.
LogitSequence ProjectTranspose(const AttributeMapping &mapping,
                               const LogitSequence &phoneme_space);

struct FusionWeights {
  double manner = 1.0;
  double place = 1.0;
};

struct WeightedLogits {
  const LogitSequence *logits;
  double weight;
};

/// fused[t][j] = phoneme_logits[t][j] + sum_k weight_k * projected_k[t][j].
LogitSequence Fuse(const LogitSequence &phoneme_logits,
                   const std::vector<WeightedLogits> &projected);

/// Renders the matrix as CSV: rows are attribute classes plus blank, columns
/// are phoneme symbols plus blank.
void WriteMappingCsv(const AttributeMapping &mapping,
                     const UnionInventory &uni, std::ostream &out);

}  // namespace attrphone

#endif  // ATTRPHONE_ATTRIBUTE_MAP_H_
