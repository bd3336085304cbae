// Copyright 2026 The MVMF Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "artifacts.hpp"

#include <openssl/evp.h>

#include <Eigen/Core>
#include <array>
#include <fstream>
#include <iterator>
#include <memory>

#include "mvmf/errors.hpp"

#ifndef MVMF_VERSION
#define MVMF_VERSION "unknown"
#endif

namespace mvmf::cli {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(),
                 nullptr) != 1) {
    throw Error(Errc::kIoError, "SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot read " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

void write_text(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(Errc::kIoError, "cannot write " + path.string());
}

Csv::Csv(std::vector<std::string> header) : width_(header.size()) { add(std::move(header)); }

Csv& Csv::add(std::vector<std::string> row) {
  if (row.size() != width_) {
    throw Error(Errc::kDimensionMismatch, "CSV row has the wrong number of fields");
  }
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i > 0) text_ += ',';
    text_ += row[i];
  }
  text_ += '\n';
  return *this;
}

std::string Csv::str() const { return text_; }

void Provenance::add_input(const fs::path& path) {
  inputs.emplace_back(path.generic_string(), sha256_file(path));
}

Json Provenance::to_json() const {
  Json j;
  j["tool"] = "mvmf";
  j["version"] = MVMF_VERSION;
  j["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                       std::to_string(EIGEN_MAJOR_VERSION) + "." +
                       std::to_string(EIGEN_MINOR_VERSION);
  j["command"] = command;
  j["config"] = config;
  j["config_sha256"] = sha256_hex(config.dump());
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  Json files = Json::array();
  for (const auto& [path, hash] : inputs) files.push_back({{"path", path}, {"sha256", hash}});
  j["inputs"] = std::move(files);
  return j;
}

void Provenance::write(const fs::path& dir) const {
  write_text(dir / "provenance.json", to_json().dump(2) + "\n");
}

}  // namespace mvmf::cli
