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

#ifndef MVMF_TOOLS_ARTIFACTS_HPP_
#define MVMF_TOOLS_ARTIFACTS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace mvmf::cli {

using Json = nlohmann::ordered_json;

std::string sha256_hex(std::string_view bytes);
/// Throws Error(kIoError) when the file cannot be read.
std::string sha256_file(const std::filesystem::path& path);

/// Writes `text` verbatim (LF line endings), creating parent directories.
void write_text(const std::filesystem::path& path, std::string_view text);

/// Minimal CSV builder. Fields are written as given; callers format numbers
/// with format_double so output is stable across platforms.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header);
  Csv& add(std::vector<std::string> row);
  std::string str() const;
  void write(const std::filesystem::path& path) const { write_text(path, str()); }

 private:
  std::size_t width_;
  std::string text_;
};

/// Run record: resolved configuration (defaults included), its hash, the
/// seed and the content hash of every input file. Runtime-only settings
/// such as the output directory and thread count are left out so that the
/// record is part of the reproducible output.
struct Provenance {
  std::string command;
  Json config = Json::object();
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, sha256

  void add_input(const std::filesystem::path& path);
  Json to_json() const;
  void write(const std::filesystem::path& dir) const;
};

}  // namespace mvmf::cli

#endif  // MVMF_TOOLS_ARTIFACTS_HPP_
