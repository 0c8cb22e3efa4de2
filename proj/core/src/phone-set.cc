// core/src/phone-set.cc

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

#include "attrphone/phone-set.h"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "attrphone/errors.h"

namespace attrphone {

namespace {

std::string ToLowerAscii(const std::string &s) {
  std::string out = s;
  for (char &c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool HasWhitespace(const std::string &s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

}  // namespace

int AttributeCategory::IndexOf(const std::string &class_name) const {
  const std::string lowered = ToLowerAscii(class_name);
  for (int i = 0; i < NumClasses(); ++i)
    if (classes[i] == lowered) return i;
  return -1;
}

const AttributeCategory &AttributeCategory::Manner() {
  static const AttributeCategory category{
      AttributeCategoryKind::kManner,
      "manner",
      {"approximant", "tap", "fricative", "affricate", "nasal", "stop",
       "vowel"}};
  return category;
}

const AttributeCategory &AttributeCategory::Place() {
  static const AttributeCategory category{
      AttributeCategoryKind::kPlace,
      "place",
      {"bilabial", "labiodental", "dental", "alveolar", "postalveolar",
       "retroflex", "palatal", "velar", "uvular", "glottal", "vowel"}};
  return category;
}

const AttributeCategory &AttributeCategory::Get(AttributeCategoryKind kind) {
  return kind == AttributeCategoryKind::kManner ? Manner() : Place();
}

int VowelClassIndex(const AttributeCategory &category) {
  return category.IndexOf("vowel");
}

const std::string &PhonemeDefinition::MannerName() const {
  return AttributeCategory::Manner().classes[manner];
}

const std::string &PhonemeDefinition::PlaceName() const {
  return AttributeCategory::Place().classes[place];
}

PhonemeDefinition MakePhonemeDefinition(const std::string &symbol,
                                        const std::string &manner_name,
                                        const std::string &place_name) {
  if (symbol.empty() || HasWhitespace(symbol))
    throw MalformedRow("phoneme symbol must be non-empty and whitespace-free, "
                       "got \"" + symbol + "\"");
  const int manner = AttributeCategory::Manner().IndexOf(manner_name);
  if (manner < 0)
    throw UnknownAttribute("unknown manner class \"" + manner_name +
                           "\" for phoneme \"" + symbol + "\"");
  const int place = AttributeCategory::Place().IndexOf(place_name);
  if (place < 0)
    throw UnknownAttribute("unknown place class \"" + place_name +
                           "\" for phoneme \"" + symbol + "\"");
  const bool manner_vowel = manner == VowelClassIndex(AttributeCategory::Manner());
  const bool place_vowel = place == VowelClassIndex(AttributeCategory::Place());
  if (manner_vowel != place_vowel)
    throw VowelMismatch("phoneme \"" + symbol +
                        "\" must be vowel in both categories or in neither");
  return PhonemeDefinition{symbol, manner, place};
}

LanguageInventory MakeLanguageInventory(
    const std::string &language_id,
    const std::vector<PhonemeDefinition> &phonemes) {
  if (phonemes.empty())
    throw EmptyInput("language \"" + language_id + "\" has no phonemes");
  LanguageInventory inventory;
  inventory.language_id = language_id;
  inventory.phonemes = phonemes;
  std::sort(inventory.phonemes.begin(), inventory.phonemes.end(),
            [](const PhonemeDefinition &a, const PhonemeDefinition &b) {
              return a.symbol < b.symbol;
            });
  for (size_t i = 1; i < inventory.phonemes.size(); ++i)
    if (inventory.phonemes[i].symbol == inventory.phonemes[i - 1].symbol)
      throw DuplicateSymbol("duplicate phoneme \"" +
                            inventory.phonemes[i].symbol + "\" in language \"" +
                            language_id + "\"");
  return inventory;
}

LanguageInventory LoadInventory(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open inventory file " + path);
  std::vector<PhonemeDefinition> phonemes;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
      const size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (fields.size() != 3)
      throw MalformedRow(path + ":" + std::to_string(line_number) +
                         ": expected 3 tab-separated columns, got " +
                         std::to_string(fields.size()));
    phonemes.push_back(MakePhonemeDefinition(fields[0], fields[1], fields[2]));
  }
  const std::string stem = std::filesystem::path(path).stem().string();
  return MakeLanguageInventory(stem, phonemes);
}

void WriteInventory(const LanguageInventory &inventory,
                    const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write inventory file " + path);
  out << "# inventory for language " << inventory.language_id << "\n";
  for (const PhonemeDefinition &p : inventory.phonemes)
    out << p.symbol << '\t' << p.MannerName() << '\t' << p.PlaceName() << "\n";
  if (!out) throw IoError("error writing inventory file " + path);
}

int UnionInventory::IndexOf(const std::string &symbol) const {
  const auto it = index_of.find(symbol);
  if (it == index_of.end())
    throw UnknownPhoneme("phoneme \"" + symbol + "\" is not in the union");
  return it->second;
}

UnionInventory BuildUnionInventory(
    const std::vector<LanguageInventory> &inventories) {
  if (inventories.empty())
    throw EmptyInput("cannot build a union from zero inventories");
  std::map<std::string, PhonemeDefinition> merged;
  for (const LanguageInventory &inventory : inventories) {
    for (const PhonemeDefinition &p : inventory.phonemes) {
      const auto it = merged.find(p.symbol);
      if (it == merged.end()) {
        merged.emplace(p.symbol, p);
      } else if (!(it->second == p)) {
        throw AttributeConflict(
            "phoneme \"" + p.symbol + "\" is " + it->second.MannerName() +
            "/" + it->second.PlaceName() + " in one language but " +
            p.MannerName() + "/" + p.PlaceName() + " in language \"" +
            inventory.language_id + "\"");
      }
    }
  }
  UnionInventory uni;
  for (const auto &[symbol, phoneme] : merged) {
    uni.index_of.emplace(symbol, static_cast<int>(uni.phonemes.size()));
    uni.phonemes.push_back(phoneme);
  }
  for (const LanguageInventory &inventory : inventories) {
    uni.languages.push_back(inventory.language_id);
    std::vector<bool> mask(uni.phonemes.size(), false);
    for (const PhonemeDefinition &p : inventory.phonemes)
      mask[uni.index_of.at(p.symbol)] = true;
    uni.membership.push_back(std::move(mask));
  }
  return uni;
}

std::vector<bool> LanguageMask(const UnionInventory &uni,
                               const std::string &language_id) {
  for (size_t i = 0; i < uni.languages.size(); ++i)
    if (uni.languages[i] == language_id) return uni.membership[i];
  throw UnknownLanguage("language \"" + language_id +
                        "\" did not contribute to the union");
}

}  // namespace attrphone
