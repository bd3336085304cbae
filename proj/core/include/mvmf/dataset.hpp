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

#ifndef MVMF_DATASET_HPP_
#define MVMF_DATASET_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mvmf/linalg.hpp"

namespace mvmf {

/// One observation matrix: subjects in rows, regions in columns.
struct ViewMatrix {
  std::string name;
  std::vector<std::string> subjects;
  Matrix values;
  /// Optional 0/1 class per subject, carried opaquely.
  std::optional<std::vector<int>> labels;

  Eigen::Index rows() const { return values.rows(); }
};

/// A manifest entry: view name and the CSV it is read from.
struct ViewSource {
  std::string name;
  std::filesystem::path path;
};

/// M views over a common, ordered region axis. Immutable once built; every
/// constructor path validates the invariants.
class MultiViewDataset {
 public:
  /// Throws Error on: no views, region/column count mismatch, n_m < 2,
  /// non-finite entries, duplicate subject ids, label length mismatch.
  MultiViewDataset(std::vector<ViewMatrix> views,
                   std::vector<std::string> regions, bool centered = false);

  std::size_t num_views() const { return views_.size(); }
  Eigen::Index num_regions() const {
    return static_cast<Eigen::Index>(regions_.size());
  }
  bool centered() const { return centered_; }
  const std::vector<std::string>& regions() const { return regions_; }
  const std::vector<ViewMatrix>& views() const { return views_; }
  const ViewMatrix& view(std::size_t m) const;

  /// Smallest min(n_m, p) over views; the bound on d + r.
  Eigen::Index max_total_rank() const;

 private:
  std::vector<ViewMatrix> views_;
  std::vector<std::string> regions_;
  bool centered_;
};

/// Parses one per-view CSV (header `subject_id,<regions...>[,label]`).
/// Returns the view and its region header.
std::pair<ViewMatrix, std::vector<std::string>> read_view_csv(
    const std::filesystem::path& path, const std::string& view_name);

/// Reads a manifest: a JSON object mapping view name to CSV path, in view
/// order. Relative paths are resolved against the manifest's directory.
std::vector<ViewSource> read_manifest(const std::filesystem::path& manifest);

/// Loads every listed view; the region headers must agree exactly.
MultiViewDataset load_views(const std::vector<ViewSource>& sources);

/// Convenience: read_manifest followed by load_views.
MultiViewDataset load_manifest(const std::filesystem::path& manifest);

/// Writes a view in the CSV format read by read_view_csv. Values use 17
/// significant digits.
void write_view_csv(const std::filesystem::path& path, const ViewMatrix& view,
                    const std::vector<std::string>& regions);

/// Subtracts column means of every view. Throws kAlreadyCentered.
MultiViewDataset center_columns(const MultiViewDataset& ds);

/// (1/sqrt(n_m)) X^(m). Requires a centered dataset.
Matrix scaled_view(const MultiViewDataset& ds, std::size_t m);

/// Sum over regions of per-region sample variance (divisor n_m), which
/// equals the gram trace of scaled_view.
double total_variance(const MultiViewDataset& ds, std::size_t m);

}  // namespace mvmf

#endif  // MVMF_DATASET_HPP_
