// core/src/checkpoint.cc

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

#include <cstdint>
#include <cstring>
#include <fstream>

#include "attrphone/errors.h"
#include "attrphone/net.h"

namespace attrphone {

namespace {

constexpr char kMagic[8] = {'A', 'T', 'P', 'H', 'C', 'K', 'P', 'T'};
constexpr uint32_t kVersion = 1;

template <typename T>
void WriteScalar(std::ofstream &out, T value) {
  out.write(reinterpret_cast<const char *>(&value), sizeof(T));
}

template <typename T>
T ReadScalar(std::ifstream &in, const std::string &path) {
  T value{};
  in.read(reinterpret_cast<char *>(&value), sizeof(T));
  if (!in) throw IoError("truncated checkpoint " + path);
  return value;
}

}  // namespace

void SaveCheckpoint(const ModelConfig &config, const ModelParams &params,
                    const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint " + path);
  out.write(kMagic, sizeof(kMagic));
  WriteScalar(out, kVersion);
  WriteScalar<int32_t>(out, config.input_dim);
  WriteScalar<int32_t>(out, config.model_dim);
  WriteScalar<int32_t>(out, config.num_blocks);
  WriteScalar<int32_t>(out, config.encoder_recurrent ? 1 : 0);
  WriteScalar<int32_t>(out, config.head_dim);
  WriteScalar<int32_t>(out, config.phoneme_vocab);
  WriteScalar<int32_t>(out, config.manner_vocab);
  WriteScalar<int32_t>(out, config.place_vocab);
  WriteScalar<uint64_t>(out, params.entries.size());
  for (const auto &[name, tensor] : params.entries) {
    WriteScalar<uint32_t>(out, static_cast<uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    WriteScalar<uint64_t>(out, static_cast<uint64_t>(tensor.rows));
    WriteScalar<uint64_t>(out, static_cast<uint64_t>(tensor.cols));
    out.write(reinterpret_cast<const char *>(tensor.data.data()),
              static_cast<std::streamsize>(tensor.data.size() *
                                           sizeof(double)));
  }
  if (!out) throw IoError("error writing checkpoint " + path);
}

std::pair<ModelConfig, ModelParams> LoadCheckpoint(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw IoError("not a checkpoint file: " + path);
  const auto version = ReadScalar<uint32_t>(in, path);
  if (version != kVersion)
    throw IoError("unsupported checkpoint version " + std::to_string(version));
  ModelConfig config;
  config.input_dim = ReadScalar<int32_t>(in, path);
  config.model_dim = ReadScalar<int32_t>(in, path);
  config.num_blocks = ReadScalar<int32_t>(in, path);
  config.encoder_recurrent = ReadScalar<int32_t>(in, path) != 0;
  config.head_dim = ReadScalar<int32_t>(in, path);
  config.phoneme_vocab = ReadScalar<int32_t>(in, path);
  config.manner_vocab = ReadScalar<int32_t>(in, path);
  config.place_vocab = ReadScalar<int32_t>(in, path);
  const auto count = ReadScalar<uint64_t>(in, path);
  ModelParams params;
  for (uint64_t i = 0; i < count; ++i) {
    const auto name_len = ReadScalar<uint32_t>(in, path);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    if (!in) throw IoError("truncated checkpoint " + path);
    const auto rows = ReadScalar<uint64_t>(in, path);
    const auto cols = ReadScalar<uint64_t>(in, path);
    Tensor2 tensor(static_cast<int>(rows), static_cast<int>(cols));
    in.read(reinterpret_cast<char *>(tensor.data.data()),
            static_cast<std::streamsize>(tensor.data.size() * sizeof(double)));
    if (!in) throw IoError("truncated checkpoint " + path);
    params.entries.emplace(std::move(name), std::move(tensor));
  }
  return {config, params};
}

}  // namespace attrphone
