// core/include/attrphone/tensor.h

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

#ifndef ATTRPHONE_TENSOR_H_
#define ATTRPHONE_TENSOR_H_

#include <cassert>
#include <vector>

namespace attrphone {

/// Dense row-major matrix of doubles. The only tensor rank used anywhere in
/// this project; vectors are 1xN or Nx1 as convenient.
struct Tensor2 {
  Tensor2() = default;
  Tensor2(int rows, int cols)
      : rows(rows), cols(cols),
        data(static_cast<size_t>(rows) * static_cast<size_t>(cols), 0.0) {
    assert(rows > 0 && cols > 0);
  }

  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  double &at(int r, int c) {
    assert(r >= 0 && r < rows && c >= 0 && c < cols);
    return data[static_cast<size_t>(r) * cols + c];
  }
  double at(int r, int c) const {
    assert(r >= 0 && r < rows && c >= 0 && c < cols);
    return data[static_cast<size_t>(r) * cols + c];
  }

  bool SameShape(const Tensor2 &other) const {
    return rows == other.rows && cols == other.cols;
  }
  bool IsFinite() const;
  void SetZero();

  bool operator==(const Tensor2 &other) const {
    return rows == other.rows && cols == other.cols && data == other.data;
  }
};

// y = a * b, shapes [m x k] [k x n].
Tensor2 MatMul(const Tensor2 &a, const Tensor2 &b);
// y = a^T * b, shapes [k x m] [k x n].
Tensor2 MatMulTransposeA(const Tensor2 &a, const Tensor2 &b);
// y = a * b^T, shapes [m x k] [n x k].
Tensor2 MatMulTransposeB(const Tensor2 &a, const Tensor2 &b);

// Adds the 1 x cols row vector to every row of m.
void AddRowVectorInPlace(Tensor2 *m, const Tensor2 &row);
// y += alpha * x.
void AxpyInPlace(Tensor2 *y, double alpha, const Tensor2 &x);
// Sums the rows of m into a 1 x cols vector.
Tensor2 ColumnSums(const Tensor2 &m);
Tensor2 TanhElementwise(const Tensor2 &m);

}  // namespace attrphone

#endif  // ATTRPHONE_TENSOR_H_
