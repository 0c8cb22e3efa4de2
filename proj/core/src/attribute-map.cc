// core/src/attribute-map.cc

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

#include "attrphone/attribute-map.h"

#include <string>

#include "attrphone/errors.h"

namespace attrphone {

AttributeMapping BuildMapping(const AttributeCategory &category,
                              const UnionInventory &uni) {
  if (uni.NumPhonemes() == 0) throw EmptyInput("union inventory is empty");
  AttributeMapping mapping;
  mapping.category = category.kind;
  mapping.matrix = Tensor2(category.NumClasses() + 1, uni.NumPhonemes() + 1);
  for (int i = 0; i < category.NumClasses(); ++i)
    mapping.row_index.emplace(category.classes[i], i);
  for (int j = 0; j < uni.NumPhonemes(); ++j) {
    const PhonemeDefinition &p = uni.Phoneme(j);
    mapping.col_index.emplace(p.symbol, j);
    const int attribute =
        category.kind == AttributeCategoryKind::kManner ? p.manner : p.place;
    mapping.matrix.at(attribute, j) = 1.0;
  }
  mapping.matrix.at(mapping.BlankRow(), mapping.BlankColumn()) = 1.0;
  return mapping;
}

LogitSequence Project(const AttributeMapping &mapping,
                      const LogitSequence &attribute_logits) {
  if (attribute_logits.VocabSize() != mapping.matrix.rows)
    throw DimensionMismatch(
        "Project: attribute logits have " +
        std::to_string(attribute_logits.VocabSize()) + " columns, mapping has " +
        std::to_string(mapping.matrix.rows) + " rows");
  return LogitSequence(MatMul(attribute_logits.frames, mapping.matrix));
}

LogitSequence ProjectTranspose(const AttributeMapping &mapping,
                               const LogitSequence &phoneme_space) {
  if (phoneme_space.VocabSize() != mapping.matrix.cols)
    throw DimensionMismatch(
        "ProjectTranspose: sequence has " +
        std::to_string(phoneme_space.VocabSize()) + " columns, mapping has " +
        std::to_string(mapping.matrix.cols) + " columns");
  return LogitSequence(MatMulTransposeB(phoneme_space.frames, mapping.matrix));
}

LogitSequence Fuse(const LogitSequence &phoneme_logits,
                   const std::vector<WeightedLogits> &projected) {
  LogitSequence fused = phoneme_logits;
  for (const WeightedLogits &term : projected) {
    if (!term.logits->frames.SameShape(phoneme_logits.frames))
      throw DimensionMismatch("Fuse: projected sequence shape differs from "
                              "phoneme logits");
    AxpyInPlace(&fused.frames, term.weight, term.logits->frames);
  }
  return fused;
}

void WriteMappingCsv(const AttributeMapping &mapping,
                     const UnionInventory &uni, std::ostream &out) {
  const AttributeCategory &category = AttributeCategory::Get(mapping.category);
  out << category.name;
  for (int j = 0; j < mapping.NumPhonemes(); ++j)
    out << ',' << uni.Phoneme(j).symbol;
  out << ",<blank>\n";
  for (int i = 0; i < mapping.matrix.rows; ++i) {
    out << (i < mapping.NumAttributes() ? category.classes[i] : "<blank>");
    for (int j = 0; j < mapping.matrix.cols; ++j)
      out << ',' << static_cast<int>(mapping.matrix.at(i, j));
    out << "\n";
  }
}

}  // namespace attrphone
