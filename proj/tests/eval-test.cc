// tests/eval-test.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "attrphone/errors.h"
#include "attrphone/eval.h"
#include "attrphone/rng.h"
#include "fixtures.h"
#include "oracles.h"

using namespace attrphone;
using testing::ExhaustiveAlignments;
using testing::Ph;

namespace {

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

UnionInventory SmallUnion() {
  return BuildUnionInventory({MakeLanguageInventory(
      "u", {Ph("p", "stop", "bilabial"), Ph("m", "nasal", "bilabial"),
            Ph("a", "vowel", "vowel")})});
}

}  // namespace

TEST_CASE("edit distance basics") {
  CHECK(EditDistance(LabelSequence{{0, 1, 2}}, LabelSequence{{0, 1, 2}}) ==
        EditCounts{0, 0, 0});
  CHECK(EditDistance(LabelSequence{{0, 1, 2}}, LabelSequence{{0, 2}}) ==
        EditCounts{0, 1, 0});
  CHECK(EditDistance(LabelSequence{{}}, LabelSequence{{0}}) ==
        EditCounts{0, 0, 1});
  CHECK(EditDistance(LabelSequence{{0}}, LabelSequence{{}}) ==
        EditCounts{0, 1, 0});
  CHECK(EditDistance(LabelSequence{{0, 1}}, LabelSequence{{1, 0}}).Total() ==
        2);
}

TEST_CASE("edit distance agrees with the exhaustive alignment oracle") {
  Rng rng(41);
  for (int round = 0; round < 200; ++round) {
    std::vector<int> ref(rng.UniformInt(0, 5)), hyp(rng.UniformInt(0, 5));
    for (int &v : ref) v = rng.UniformInt(0, 2);
    for (int &v : hyp) v = rng.UniformInt(0, 2);
    const auto oracle = ExhaustiveAlignments(ref, hyp);
    const EditCounts counts =
        EditDistance(LabelSequence{ref}, LabelSequence{hyp});
    CHECK(counts.Total() == oracle.min_cost);
    CHECK(oracle.breakdowns.count({counts.substitutions, counts.deletions,
                                   counts.insertions}) == 1);
  }
}

TEST_CASE("edit distance is symmetric up to swapping deletions/insertions") {
  Rng rng(42);
  for (int round = 0; round < 100; ++round) {
    std::vector<int> ref(rng.UniformInt(0, 6)), hyp(rng.UniformInt(0, 6));
    for (int &v : ref) v = rng.UniformInt(0, 3);
    for (int &v : hyp) v = rng.UniformInt(0, 3);
    const EditCounts forward =
        EditDistance(LabelSequence{ref}, LabelSequence{hyp});
    const EditCounts backward =
        EditDistance(LabelSequence{hyp}, LabelSequence{ref});
    CHECK(forward.Total() == backward.Total());
    CHECK(forward.deletions == backward.insertions);
    CHECK(forward.insertions == backward.deletions);
  }
}

TEST_CASE("phoneme error rate") {
  SUBCASE("perfect hypotheses score zero") {
    CHECK(Per({{LabelSequence{{0, 1}}, LabelSequence{{0, 1}}}}) == 0.0);
  }
  SUBCASE("one deletion in three tokens") {
    const double per =
        Per({{LabelSequence{{0, 1, 2}}, LabelSequence{{0, 2}}}});
    CHECK(per == doctest::Approx(100.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("empty hypotheses are all deletions") {
    CHECK(Per({{LabelSequence{{0, 1}}, LabelSequence{{}}},
               {LabelSequence{{2}}, LabelSequence{{}}}}) == 100.0);
  }
  SUBCASE("pooling is order-invariant") {
    const std::vector<std::pair<LabelSequence, LabelSequence>> pairs = {
        {LabelSequence{{0, 1, 2}}, LabelSequence{{0, 2}}},
        {LabelSequence{{1}}, LabelSequence{{1, 1}}},
        {LabelSequence{{2, 2}}, LabelSequence{{0, 2}}}};
    std::vector<std::pair<LabelSequence, LabelSequence>> reversed(
        pairs.rbegin(), pairs.rend());
    CHECK(Per(pairs) == Per(reversed));
  }
  SUBCASE("PER can exceed 100 with many insertions") {
    CHECK(Per({{LabelSequence{{0}}, LabelSequence{{1, 1, 1}}}}) > 100.0);
  }
  SUBCASE("no reference tokens is an error") {
    CHECK_THROWS_AS(Per({{LabelSequence{{}}, LabelSequence{{0}}}}),
                    EmptyReference);
  }
}

TEST_CASE("consistency violations") {
  const UnionInventory uni = SmallUnion();  // order: a, m, p
  const AttributeMapping manner =
      BuildMapping(AttributeCategory::Manner(), uni);
  const AttributeMapping place = BuildMapping(AttributeCategory::Place(), uni);
  const int vocab = uni.NumPhonemes() + 1;

  SUBCASE("attribute logits projected from the phoneme one-hot are clean") {
    Rng rng(51);
    const int num_frames = 6;
    LogitSequence phoneme(num_frames, vocab);
    for (int t = 0; t < num_frames; ++t)
      phoneme.frames.at(t, rng.UniformInt(0, vocab - 1)) = 4.0;
    // S^C applied to the phoneme indicator recovers that phoneme's own
    // attributes, so the argmaxes can never disagree.
    const LogitSequence manner_logits = ProjectTranspose(manner, phoneme);
    const LogitSequence place_logits = ProjectTranspose(place, phoneme);
    const ConsistencyCounts counts = CountConsistencyViolations(
        phoneme, {{&manner, &manner_logits}, {&place, &place_logits}});
    CHECK(counts.violations == 0);
    CHECK(counts.Rate() == 0.0);
  }
  SUBCASE("a stop-manner frame under a nasal phoneme argmax is a violation") {
    LogitSequence phoneme(1, vocab);
    phoneme.frames.at(0, uni.IndexOf("m")) = 5.0;
    LogitSequence manner_logits(1, manner.matrix.rows);
    manner_logits.frames.at(0, manner.row_index.at("stop")) = 5.0;
    const ConsistencyCounts counts =
        CountConsistencyViolations(phoneme, {{&manner, &manner_logits}});
    CHECK(counts.counted == 1);
    CHECK(counts.violations == 1);
    CHECK(counts.Rate() == 100.0);
  }
  SUBCASE("blank phoneme frames are not counted") {
    LogitSequence phoneme(2, vocab);
    phoneme.frames.at(0, vocab - 1) = 5.0;  // blank argmax
    phoneme.frames.at(1, uni.IndexOf("a")) = 5.0;
    LogitSequence manner_logits(2, manner.matrix.rows);
    manner_logits.frames.at(0, manner.row_index.at("stop")) = 5.0;
    manner_logits.frames.at(1, manner.row_index.at("vowel")) = 5.0;
    const ConsistencyCounts counts =
        CountConsistencyViolations(phoneme, {{&manner, &manner_logits}});
    CHECK(counts.counted == 1);
    CHECK(counts.violations == 0);
  }
  SUBCASE("blank attribute argmaxes do not flag violations") {
    LogitSequence phoneme(1, vocab);
    phoneme.frames.at(0, uni.IndexOf("m")) = 5.0;
    LogitSequence manner_logits(1, manner.matrix.rows);
    manner_logits.frames.at(0, manner.BlankRow()) = 5.0;
    const ConsistencyCounts counts =
        CountConsistencyViolations(phoneme, {{&manner, &manner_logits}});
    CHECK(counts.counted == 1);
    CHECK(counts.violations == 0);
  }
  SUBCASE("fusion endpoints: weight zero matches the raw head, huge weight "
          "drives violations to zero") {
    Rng rng(52);
    const int num_frames = 12;
    LogitSequence phoneme(num_frames, vocab);
    for (double &v : phoneme.frames.data) v = rng.Uniform(-1.0, 1.0);
    // Consistent attribute logits built from a random phoneme per frame.
    LogitSequence indicator(num_frames, vocab);
    for (int t = 0; t < num_frames; ++t)
      indicator.frames.at(t, rng.UniformInt(0, vocab - 2)) = 8.0;
    const LogitSequence manner_logits = ProjectTranspose(manner, indicator);
    const LogitSequence place_logits = ProjectTranspose(place, indicator);
    const std::vector<std::pair<const AttributeMapping *,
                                const LogitSequence *>> heads = {
        {&manner, &manner_logits}, {&place, &place_logits}};

    const LogitSequence projected_manner = Project(manner, manner_logits);
    const LogitSequence projected_place = Project(place, place_logits);
    const LogitSequence at_zero = Fuse(
        phoneme, {{&projected_manner, 0.0}, {&projected_place, 0.0}});
    CHECK(CountConsistencyViolations(at_zero, heads).violations ==
          CountConsistencyViolations(phoneme, heads).violations);

    const double huge = 1e9;
    const LogitSequence dominated = Fuse(
        phoneme, {{&projected_manner, huge}, {&projected_place, huge}});
    CHECK(CountConsistencyViolations(dominated, heads).violations == 0);
  }
  SUBCASE("frame-count mismatch is rejected") {
    LogitSequence phoneme(2, vocab);
    LogitSequence manner_logits(3, manner.matrix.rows);
    CHECK_THROWS_AS(
        CountConsistencyViolations(phoneme, {{&manner, &manner_logits}}),
        DimensionMismatch);
  }
}

TEST_CASE("posteriorgrams") {
  SUBCASE("uniform logits give uniform probabilities") {
    const LogitSequence logits(3, 4);
    const Posteriorgram pg = MakePosteriorgram("u1", Head::kManner, logits);
    for (double v : pg.frames.data)
      CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("rows are probability distributions") {
    Rng rng(61);
    LogitSequence logits(8, 9);
    for (double &v : logits.frames.data) v = rng.Uniform(-6.0, 6.0);
    const Posteriorgram pg = MakePosteriorgram("u2", Head::kPhoneme, logits);
    for (int t = 0; t < pg.frames.rows; ++t) {
      double sum = 0.0;
      for (int k = 0; k < pg.frames.cols; ++k) {
        CHECK(pg.frames.at(t, k) >= 0.0);
        CHECK(pg.frames.at(t, k) <= 1.0);
        sum += pg.frames.at(t, k);
      }
      CHECK(std::fabs(sum - 1.0) < 1e-6);
    }
  }
  SUBCASE("export is deterministic and carries the header") {
    LogitSequence logits(2, 3);
    logits.frames.at(0, 0) = 1.0;
    logits.frames.at(1, 2) = -0.5;
    const Posteriorgram pg = MakePosteriorgram("u3", Head::kManner, logits);
    const std::vector<std::string> names = {"x", "y", "<blank>"};
    const auto dir = std::filesystem::temp_directory_path();
    const std::string path_a = (dir / "pg_a.csv").string();
    const std::string path_b = (dir / "pg_b.csv").string();
    ExportPosteriorgram(pg, names, path_a);
    ExportPosteriorgram(pg, names, path_b);
    const std::string a = ReadFile(path_a);
    CHECK(a == ReadFile(path_b));
    CHECK(a.rfind("frame,x,y,<blank>\n", 0) == 0);
    CHECK_THROWS_AS(ExportPosteriorgram(pg, {"x"}, path_a),
                    DimensionMismatch);
  }
}

TEST_CASE("report CSV carries per-language rows plus the ALL row") {
  EvalReport report;
  report.per_language["la"] = {25.0, 10.0, 12.5, 5.0, 8};
  report.per_language["lb"] = {35.0, 20.0, 7.5, 15.0, 4};
  report.aggregate = {30.0, 15.0, 10.0, 10.0, 12};
  const std::string path =
      (std::filesystem::temp_directory_path() / "report-test.csv").string();
  WriteReportCsv(report, path);
  const std::string csv = ReadFile(path);
  CHECK(csv.find("language,per,aer_manner,aer_place,"
                 "consistency_violation_rate,utterances\n") == 0);
  CHECK(csv.find("la,25.0000,10.0000,12.5000,5.0000,8\n") !=
        std::string::npos);
  CHECK(csv.find("lb,35.0000,") != std::string::npos);
  CHECK(csv.find("ALL,30.0000,15.0000,10.0000,10.0000,12\n") !=
        std::string::npos);
}
