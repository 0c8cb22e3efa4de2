// core/include/attrphone/phone-set.h

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

#ifndef ATTRPHONE_PHONE_SET_H_
#define ATTRPHONE_PHONE_SET_H_

#include <map>
#include <string>
#include <vector>

namespace attrphone {

enum class AttributeCategoryKind { kManner, kPlace };

/// One articulatory attribute category with its fixed, ordered class list.
/// Manner has 7 classes and place has 11; "vowel" is a class in both so that
/// vowels and consonants live in one space per category.
struct AttributeCategory {
  AttributeCategoryKind kind;
  std::string name;                  // "manner" or "place"
  std::vector<std::string> classes;  // fixed order, stable across runs

  int NumClasses() const { return static_cast<int>(classes.size()); }
  /// Case-insensitive lookup; returns -1 when the name is not a class.
  int IndexOf(const std::string &class_name) const;

  static const AttributeCategory &Manner();
  static const AttributeCategory &Place();
  static const AttributeCategory &Get(AttributeCategoryKind kind);
};

/// Index of the "vowel" class within a category.
int VowelClassIndex(const AttributeCategory &category);

/// A phoneme symbol with exactly one manner and one place class, stored as
/// indices into the canonical category orderings.
struct PhonemeDefinition {
  std::string symbol;
  int manner = -1;
  int place = -1;

  const std::string &MannerName() const;
  const std::string &PlaceName() const;

  bool operator==(const PhonemeDefinition &other) const = default;
};

/// Validates symbol shape, class names (case-insensitive) and the vowel
/// pairing rule, throwing MalformedRow / UnknownAttribute / VowelMismatch.
PhonemeDefinition MakePhonemeDefinition(const std::string &symbol,
                                        const std::string &manner_name,
                                        const std::string &place_name);

struct LanguageInventory {
  std::string language_id;
  std::vector<PhonemeDefinition> phonemes;  // sorted by symbol, unique

  bool operator==(const LanguageInventory &other) const = default;
};

/// Reads the three-column inventory TSV (symbol, manner, place); lines
/// starting with '#' are skipped. The filename stem becomes the language id.
LanguageInventory LoadInventory(const std::string &path);

/// Builds a LanguageInventory from parsed rows, running the same validation
/// as LoadInventory.
LanguageInventory MakeLanguageInventory(
    const std::string &language_id,
    const std::vector<PhonemeDefinition> &phonemes);

void WriteInventory(const LanguageInventory &inventory,
                    const std::string &path);

/// Union of several language inventories: deterministically ordered
/// (lexicographic by symbol bytes), with per-language membership retained.
struct UnionInventory {
  std::vector<PhonemeDefinition> phonemes;
  std::map<std::string, int> index_of;        // symbol -> position
  std::vector<std::string> languages;         // contributing ids, input order
  std::vector<std::vector<bool>> membership;  // [language][phoneme]

  int NumPhonemes() const { return static_cast<int>(phonemes.size()); }
  const PhonemeDefinition &Phoneme(int index) const { return phonemes[index]; }
  /// Throws UnknownPhoneme when the symbol is absent.
  int IndexOf(const std::string &symbol) const;
};

UnionInventory BuildUnionInventory(
    const std::vector<LanguageInventory> &inventories);

/// Per-phoneme membership flags for one contributing language.
std::vector<bool> LanguageMask(const UnionInventory &uni,
                               const std::string &language_id);

}  // namespace attrphone

#endif  // ATTRPHONE_PHONE_SET_H_
