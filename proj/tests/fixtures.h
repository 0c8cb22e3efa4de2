// tests/fixtures.h

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

#ifndef ATTRPHONE_TESTS_FIXTURES_H_
#define ATTRPHONE_TESTS_FIXTURES_H_

#include <string>
#include <vector>

#include "attrphone/phone-set.h"

namespace attrphone {
namespace testing {

inline PhonemeDefinition Ph(const std::string &symbol,
                            const std::string &manner,
                            const std::string &place) {
  return MakePhonemeDefinition(symbol, manner, place);
}

/// Inventory touching all 7 manner and all 11 place classes.
inline LanguageInventory CoveringInventory(
    const std::string &language_id = "cov") {
  return MakeLanguageInventory(
      language_id,
      {
          Ph("p", "stop", "bilabial"),
          Ph("t", "stop", "alveolar"),
          Ph("ʈ", "stop", "retroflex"),
          Ph("c", "stop", "palatal"),
          Ph("k", "stop", "velar"),
          Ph("q", "stop", "uvular"),
          Ph("ʔ", "stop", "glottal"),
          Ph("m", "nasal", "bilabial"),
          Ph("n", "nasal", "alveolar"),
          Ph("ɳ", "nasal", "retroflex"),
          Ph("ɲ", "nasal", "palatal"),
          Ph("ŋ", "nasal", "velar"),
          Ph("ɸ", "fricative", "bilabial"),
          Ph("f", "fricative", "labiodental"),
          Ph("θ", "fricative", "dental"),
          Ph("s", "fricative", "alveolar"),
          Ph("ʃ", "fricative", "postalveolar"),
          Ph("ʂ", "fricative", "retroflex"),
          Ph("ç", "fricative", "palatal"),
          Ph("x", "fricative", "velar"),
          Ph("χ", "fricative", "uvular"),
          Ph("h", "fricative", "glottal"),
          Ph("ts", "affricate", "alveolar"),
          Ph("tʃ", "affricate", "postalveolar"),
          Ph("ɾ", "tap", "alveolar"),
          Ph("ɽ", "tap", "retroflex"),
          Ph("l", "approximant", "alveolar"),
          Ph("ʋ", "approximant", "labiodental"),
          Ph("j", "approximant", "palatal"),
          Ph("ɻ", "approximant", "retroflex"),
          Ph("a", "vowel", "vowel"),
          Ph("i", "vowel", "vowel"),
          Ph("u", "vowel", "vowel"),
      });
}

/// Three overlapping toy languages over a 20-phoneme union, mirroring the
/// reference experiment shipped under data/inventories/.
inline std::vector<LanguageInventory> ReferenceInventories() {
  const LanguageInventory la = MakeLanguageInventory(
      "la", {Ph("p", "stop", "bilabial"), Ph("b", "stop", "bilabial"),
             Ph("t", "stop", "alveolar"), Ph("d", "stop", "alveolar"),
             Ph("k", "stop", "velar"), Ph("m", "nasal", "bilabial"),
             Ph("n", "nasal", "alveolar"), Ph("f", "fricative", "labiodental"),
             Ph("s", "fricative", "alveolar"),
             Ph("l", "approximant", "alveolar"), Ph("a", "vowel", "vowel"),
             Ph("e", "vowel", "vowel"), Ph("i", "vowel", "vowel"),
             Ph("o", "vowel", "vowel"), Ph("u", "vowel", "vowel")});
  const LanguageInventory lb = MakeLanguageInventory(
      "lb", {Ph("p", "stop", "bilabial"), Ph("t", "stop", "alveolar"),
             Ph("k", "stop", "velar"), Ph("m", "nasal", "bilabial"),
             Ph("n", "nasal", "alveolar"), Ph("ŋ", "nasal", "velar"),
             Ph("s", "fricative", "alveolar"),
             Ph("ʃ", "fricative", "postalveolar"),
             Ph("tʃ", "affricate", "postalveolar"),
             Ph("j", "approximant", "palatal"), Ph("a", "vowel", "vowel"),
             Ph("e", "vowel", "vowel"), Ph("i", "vowel", "vowel"),
             Ph("u", "vowel", "vowel")});
  const LanguageInventory lc = MakeLanguageInventory(
      "lc", {Ph("b", "stop", "bilabial"), Ph("d", "stop", "alveolar"),
             Ph("k", "stop", "velar"), Ph("ŋ", "nasal", "velar"),
             Ph("f", "fricative", "labiodental"),
             Ph("s", "fricative", "alveolar"),
             Ph("ʃ", "fricative", "postalveolar"), Ph("ɾ", "tap", "alveolar"),
             Ph("l", "approximant", "alveolar"),
             Ph("j", "approximant", "palatal"), Ph("a", "vowel", "vowel"),
             Ph("o", "vowel", "vowel"), Ph("u", "vowel", "vowel")});
  return {la, lb, lc};
}

}  // namespace testing
}  // namespace attrphone

#endif  // ATTRPHONE_TESTS_FIXTURES_H_
