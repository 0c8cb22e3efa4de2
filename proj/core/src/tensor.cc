// core/src/tensor.cc

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

#include "attrphone/tensor.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "attrphone/errors.h"

namespace attrphone {

namespace {
void CheckShape(bool ok, const std::string &op) {
  if (!ok) throw ShapeMismatch("incompatible tensor shapes in " + op);
}
}  // namespace

bool Tensor2::IsFinite() const {
  return std::all_of(data.begin(), data.end(),
                     [](double v) { return std::isfinite(v); });
}

void Tensor2::SetZero() { std::fill(data.begin(), data.end(), 0.0); }

Tensor2 MatMul(const Tensor2 &a, const Tensor2 &b) {
  CheckShape(a.cols == b.rows, "MatMul");
  Tensor2 y(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = 0; k < a.cols; ++k) {
      const double aik = a.data[static_cast<size_t>(i) * a.cols + k];
      if (aik == 0.0) continue;
      const double *brow = &b.data[static_cast<size_t>(k) * b.cols];
      double *yrow = &y.data[static_cast<size_t>(i) * y.cols];
      for (int j = 0; j < b.cols; ++j) yrow[j] += aik * brow[j];
    }
  }
  return y;
}

Tensor2 MatMulTransposeA(const Tensor2 &a, const Tensor2 &b) {
  CheckShape(a.rows == b.rows, "MatMulTransposeA");
  Tensor2 y(a.cols, b.cols);
  for (int k = 0; k < a.rows; ++k) {
    const double *arow = &a.data[static_cast<size_t>(k) * a.cols];
    const double *brow = &b.data[static_cast<size_t>(k) * b.cols];
    for (int i = 0; i < a.cols; ++i) {
      const double aki = arow[i];
      if (aki == 0.0) continue;
      double *yrow = &y.data[static_cast<size_t>(i) * y.cols];
      for (int j = 0; j < b.cols; ++j) yrow[j] += aki * brow[j];
    }
  }
  return y;
}

Tensor2 MatMulTransposeB(const Tensor2 &a, const Tensor2 &b) {
  CheckShape(a.cols == b.cols, "MatMulTransposeB");
  Tensor2 y(a.rows, b.rows);
  for (int i = 0; i < a.rows; ++i) {
    const double *arow = &a.data[static_cast<size_t>(i) * a.cols];
    for (int j = 0; j < b.rows; ++j) {
      const double *brow = &b.data[static_cast<size_t>(j) * b.cols];
      double sum = 0.0;
      for (int k = 0; k < a.cols; ++k) sum += arow[k] * brow[k];
      y.data[static_cast<size_t>(i) * y.cols + j] = sum;
    }
  }
  return y;
}

void AddRowVectorInPlace(Tensor2 *m, const Tensor2 &row) {
  CheckShape(row.rows == 1 && row.cols == m->cols, "AddRowVectorInPlace");
  for (int i = 0; i < m->rows; ++i) {
    double *mrow = &m->data[static_cast<size_t>(i) * m->cols];
    for (int j = 0; j < m->cols; ++j) mrow[j] += row.data[j];
  }
}

void AxpyInPlace(Tensor2 *y, double alpha, const Tensor2 &x) {
  CheckShape(y->SameShape(x), "AxpyInPlace");
  for (size_t i = 0; i < x.data.size(); ++i) y->data[i] += alpha * x.data[i];
}

Tensor2 ColumnSums(const Tensor2 &m) {
  Tensor2 y(1, m.cols);
  for (int i = 0; i < m.rows; ++i) {
    const double *mrow = &m.data[static_cast<size_t>(i) * m.cols];
    for (int j = 0; j < m.cols; ++j) y.data[j] += mrow[j];
  }
  return y;
}

Tensor2 TanhElementwise(const Tensor2 &m) {
  Tensor2 y = m;
  for (double &v : y.data) v = std::tanh(v);
  return y;
}

}  // namespace attrphone
