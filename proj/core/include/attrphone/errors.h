// core/include/attrphone/errors.h

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

#ifndef ATTRPHONE_ERRORS_H_
#define ATTRPHONE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace attrphone {

// Base class of every error thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string &message) : std::runtime_error(message) {}
};

// Inventory loading and validation.
struct MalformedRow : Error { using Error::Error; };
struct UnknownAttribute : Error { using Error::Error; };
struct DuplicateSymbol : Error { using Error::Error; };
struct VowelMismatch : Error { using Error::Error; };
struct AttributeConflict : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };
struct UnknownLanguage : Error { using Error::Error; };
struct UnknownPhoneme : Error { using Error::Error; };

// Shapes and numeric state.
struct DimensionMismatch : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct NonFiniteActivation : Error { using Error::Error; };
struct NonFiniteLoss : Error { using Error::Error; };

// CTC preconditions.
struct InfeasibleLength : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };

// Model plumbing.
struct TraceMismatch : Error { using Error::Error; };
struct BadConfig : Error { using Error::Error; };
struct BadSpec : Error { using Error::Error; };

// Scoring and file I/O.
struct EmptyReference : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace attrphone

#endif  // ATTRPHONE_ERRORS_H_
