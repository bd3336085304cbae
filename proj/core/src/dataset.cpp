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

#include "mvmf/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>

#include "json.hpp"

#include "mvmf/errors.hpp"

namespace mvmf {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

std::string where(const std::filesystem::path& path, std::size_t line_no) {
  return path.string() + ":" + std::to_string(line_no);
}

double parse_number(std::string_view cell, const std::filesystem::path& path,
                    std::size_t line_no) {
  double value = 0.0;
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw Error(Errc::kNonNumericCell,
                where(path, line_no) + ": cannot parse '" + std::string(cell) +
                    "' as a number");
  }
  if (!std::isfinite(value)) {
    throw Error(Errc::kInvalidValue,
                where(path, line_no) + ": non-finite value '" +
                    std::string(cell) + "'");
  }
  return value;
}

}  // namespace

MultiViewDataset::MultiViewDataset(std::vector<ViewMatrix> views,
                                   std::vector<std::string> regions,
                                   bool centered)
    : views_(std::move(views)), regions_(std::move(regions)), centered_(centered) {
  if (views_.empty()) throw Error(Errc::kEmptyView, "dataset has no views");
  if (regions_.empty()) throw Error(Errc::kEmptyView, "dataset has no regions");
  const auto p = static_cast<Eigen::Index>(regions_.size());
  for (const ViewMatrix& v : views_) {
    if (v.values.cols() != p) {
      throw Error(Errc::kMismatchedRegions,
                  "view '" + v.name + "' has " + std::to_string(v.values.cols()) +
                      " columns, expected " + std::to_string(p));
    }
    if (v.values.rows() < 2) {
      throw Error(Errc::kEmptyView,
                  "view '" + v.name + "' needs at least 2 subjects");
    }
    if (static_cast<Eigen::Index>(v.subjects.size()) != v.values.rows()) {
      throw Error(Errc::kDimensionMismatch,
                  "view '" + v.name + "': subject count differs from rows");
    }
    if (!v.values.allFinite()) {
      throw Error(Errc::kInvalidValue, "view '" + v.name + "' has NaN/Inf");
    }
    std::set<std::string_view> seen;
    for (const std::string& s : v.subjects) {
      if (!seen.insert(s).second) {
        throw Error(Errc::kDuplicateSubjectInView,
                    "view '" + v.name + "': duplicate subject '" + s + "'");
      }
    }
    if (v.labels) {
      if (static_cast<Eigen::Index>(v.labels->size()) != v.values.rows()) {
        throw Error(Errc::kDimensionMismatch,
                    "view '" + v.name + "': label count differs from rows");
      }
      for (int l : *v.labels) {
        if (l != 0 && l != 1) {
          throw Error(Errc::kInvalidValue,
                      "view '" + v.name + "': labels must be 0 or 1");
        }
      }
    }
  }
}

const ViewMatrix& MultiViewDataset::view(std::size_t m) const {
  if (m >= views_.size()) {
    throw Error(Errc::kViewIndexOutOfRange,
                "view index " + std::to_string(m) + " out of range (M=" +
                    std::to_string(views_.size()) + ")");
  }
  return views_[m];
}

Eigen::Index MultiViewDataset::max_total_rank() const {
  Eigen::Index bound = num_regions();
  for (const ViewMatrix& v : views_) bound = std::min(bound, v.values.rows());
  return bound;
}

std::pair<ViewMatrix, std::vector<std::string>> read_view_csv(
    const std::filesystem::path& path, const std::string& view_name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open " + path.string());

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw Error(Errc::kEmptyView, path.string() + ": missing header");
  }
  ++line_no;
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  const auto header = split_commas(line);
  if (header.size() < 2) {
    throw Error(Errc::kMismatchedRegions,
                where(path, line_no) + ": header needs an id column and regions");
  }
  const bool has_labels = header.back() == "label";
  std::vector<std::string> regions;
  for (std::size_t c = 1; c + (has_labels ? 1 : 0) < header.size(); ++c) {
    regions.emplace_back(header[c]);
  }
  if (regions.empty()) {
    throw Error(Errc::kMismatchedRegions, where(path, line_no) + ": no regions");
  }

  ViewMatrix view;
  view.name = view_name;
  std::vector<double> flat;
  std::vector<int> labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != header.size()) {
      throw Error(Errc::kNonNumericCell,
                  where(path, line_no) + ": expected " +
                      std::to_string(header.size()) + " cells, got " +
                      std::to_string(cells.size()));
    }
    view.subjects.emplace_back(cells[0]);
    for (std::size_t c = 1; c <= regions.size(); ++c) {
      flat.push_back(parse_number(cells[c], path, line_no));
    }
    if (has_labels) {
      const std::string_view l = cells.back();
      if (l != "0" && l != "1") {
        throw Error(Errc::kNonNumericCell,
                    where(path, line_no) + ": label must be 0 or 1");
      }
      labels.push_back(l == "1" ? 1 : 0);
    }
  }
  if (view.subjects.empty()) {
    throw Error(Errc::kEmptyView, path.string() + ": no data rows");
  }

  const auto n = static_cast<Eigen::Index>(view.subjects.size());
  const auto p = static_cast<Eigen::Index>(regions.size());
  view.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                               Eigen::Dynamic, Eigen::RowMajor>>(
      flat.data(), n, p);
  if (has_labels) view.labels = std::move(labels);
  return {std::move(view), std::move(regions)};
}

std::vector<ViewSource> read_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw Error(Errc::kIoError, "cannot open manifest " + manifest.string());
  nlohmann::ordered_json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kFormatError,
                "manifest " + manifest.string() + ": " + e.what());
  }
  if (!doc.is_object() || doc.empty()) {
    throw Error(Errc::kFormatError,
                "manifest must be a non-empty object of view name -> path");
  }
  const std::filesystem::path base = manifest.parent_path();
  std::vector<ViewSource> sources;
  for (const auto& [name, value] : doc.items()) {
    if (!value.is_string()) {
      throw Error(Errc::kFormatError, "manifest entry '" + name + "' is not a path");
    }
    std::filesystem::path p = value.get<std::string>();
    if (p.is_relative()) p = base / p;
    sources.push_back({name, p});
  }
  return sources;
}

MultiViewDataset load_views(const std::vector<ViewSource>& sources) {
  if (sources.empty()) throw Error(Errc::kEmptyView, "no views listed");
  std::vector<ViewMatrix> views;
  std::vector<std::string> regions;
  for (const ViewSource& src : sources) {
    auto [view, header] = read_view_csv(src.path, src.name);
    if (views.empty()) {
      regions = std::move(header);
    } else if (header != regions) {
      throw Error(Errc::kMismatchedRegions,
                  src.path.string() + ": region header differs from " +
                      sources.front().path.string());
    }
    views.push_back(std::move(view));
  }
  return MultiViewDataset(std::move(views), std::move(regions), false);
}

MultiViewDataset load_manifest(const std::filesystem::path& manifest) {
  return load_views(read_manifest(manifest));
}

void write_view_csv(const std::filesystem::path& path, const ViewMatrix& view,
                    const std::vector<std::string>& regions) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIoError, "cannot write " + path.string());
  out << "subject_id";
  for (const std::string& r : regions) out << ',' << r;
  if (view.labels) out << ",label";
  out << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < view.values.rows(); ++i) {
    out << view.subjects[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < view.values.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", view.values(i, j));
      out << ',' << buf;
    }
    if (view.labels) out << ',' << (*view.labels)[static_cast<std::size_t>(i)];
    out << '\n';
  }
}

MultiViewDataset center_columns(const MultiViewDataset& ds) {
  if (ds.centered()) {
    throw Error(Errc::kAlreadyCentered, "dataset is already centered");
  }
  std::vector<ViewMatrix> views = ds.views();
  for (ViewMatrix& v : views) {
    const Eigen::RowVectorXd mean = v.values.colwise().mean();
    v.values.rowwise() -= mean;
  }
  return MultiViewDataset(std::move(views), ds.regions(), true);
}

Matrix scaled_view(const MultiViewDataset& ds, std::size_t m) {
  const ViewMatrix& v = ds.view(m);
  if (!ds.centered()) {
    throw Error(Errc::kNotCentered, "scaled_view requires a centered dataset");
  }
  return v.values / std::sqrt(static_cast<double>(v.values.rows()));
}

double total_variance(const MultiViewDataset& ds, std::size_t m) {
  const ViewMatrix& v = ds.view(m);
  if (!ds.centered()) {
    throw Error(Errc::kNotCentered, "total_variance requires a centered dataset");
  }
  return v.values.squaredNorm() / static_cast<double>(v.values.rows());
}

}  // namespace mvmf
