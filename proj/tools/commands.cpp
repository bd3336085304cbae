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

#include "commands.hpp"

#include <filesystem>
#include <fstream>

#include "mvmf/analysis.hpp"
#include "mvmf/dataset.hpp"
#include "mvmf/errors.hpp"
#include "mvmf/model_selection.hpp"
#include "mvmf/serialize.hpp"
#include "mvmf/solver.hpp"
#include "mvmf/stability.hpp"
#include "mvmf/synthetic.hpp"

namespace mvmf::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v) { return format_double(v); }
std::string flag(bool v) { return v ? "1" : "0"; }

// Missing or unreadable manifests are configuration errors; problems inside
// the listed CSVs keep their dataset codes.
MultiViewDataset load_input(const std::string& manifest, Provenance& prov) {
  if (manifest.empty()) throw Error(Errc::kConfigParseError, "--manifest is required");
  if (!fs::is_regular_file(manifest)) {
    throw Error(Errc::kConfigParseError, "manifest not found: " + manifest);
  }
  std::vector<ViewSource> sources;
  try {
    sources = read_manifest(manifest);
  } catch (const Error& e) {
    throw Error(Errc::kConfigParseError, e.what());
  }
  prov.add_input(manifest);
  for (const ViewSource& s : sources) {
    if (fs::is_regular_file(s.path)) prov.add_input(s.path);
  }
  return center_columns(load_views(sources));
}

FitConfig base_fit(int max_iters, double tol) {
  FitConfig cfg;
  cfg.max_iters = max_iters;
  cfg.rel_tol = tol;
  return cfg;
}

fs::path out_path(const Context& ctx, const std::string& name) {
  return fs::path(ctx.out) / name;
}

// View names become file names; keep them to a portable character set.
std::string file_stem(const std::string& view) {
  std::string s = view;
  for (char& c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return s;
}

void write_trace(const FitTrace& trace, const fs::path& path) {
  Csv csv({"iteration", "objective", "max_violation"});
  for (std::size_t t = 0; t < trace.objective.size(); ++t) {
    csv.add({std::to_string(t), num(trace.objective[t]), num(trace.max_violation[t])});
  }
  csv.write(path);
}

void write_variance(const Factorization& f, const MultiViewDataset& ds, const Context& ctx) {
  const VarianceReport report = compute_variance(f, ds);
  Csv summary({"view", "total", "shared", "specific", "shared_fraction",
               "specific_fraction", "over_one"});
  for (std::size_t m = 0; m < ds.num_views(); ++m) {
    const ViewVariance& v = report.views[m];
    summary.add({ds.view(m).name, num(v.total), num(v.shared), num(v.specific),
                 num(v.shared_fraction), num(v.specific_fraction), flag(v.over_one)});
  }
  summary.write(out_path(ctx, "variance.csv"));

  std::vector<std::string> header{"region", "shared"};
  for (const ViewMatrix& v : ds.views()) header.push_back("specific:" + v.name);
  Csv regions(header);
  for (Eigen::Index j = 0; j < ds.num_regions(); ++j) {
    std::vector<std::string> row{ds.regions()[static_cast<std::size_t>(j)],
                                 num(report.shared_by_region(j))};
    for (const ViewVariance& v : report.views) row.push_back(num(v.specific_by_region(j)));
    regions.add(std::move(row));
  }
  regions.write(out_path(ctx, "variance_by_region.csv"));
}

}  // namespace

Json describe(const FitOptions& o) {
  Json j;
  j["manifest"] = o.manifest;
  j["d"] = o.d;
  j["r"] = o.r;
  j["lambda_mode"] = o.lambda_mode;
  j["k"] = o.k;
  j["lambda_shared"] = o.lambda_shared;
  j["lambda_specific"] = o.lambda_specific;
  j["max_iters"] = o.max_iters;
  j["tol"] = o.tol;
  j["seed"] = o.seed;
  return j;
}

Json describe(const SelectRankOptions& o) {
  Json j;
  j["manifest"] = o.manifest;
  j["r"] = o.r;
  j["threshold"] = o.threshold;
  j["max_iters"] = o.max_iters;
  j["tol"] = o.tol;
  return j;
}

Json describe(const StabilityOptions& o) {
  Json j;
  j["manifest"] = o.manifest;
  j["d"] = o.d;
  j["r"] = o.r;
  j["k"] = o.k;
  j["subsamples"] = o.subsamples;
  j["fraction"] = o.fraction;
  j["with_replacement"] = !o.without_replacement;
  j["max_failure_rate"] = o.max_failure_rate;
  j["max_iters"] = o.max_iters;
  j["tol"] = o.tol;
  j["seed"] = o.seed;
  return j;
}

Json describe(const ProjectOptions& o) {
  Json j;
  j["manifest"] = o.manifest;
  j["model"] = o.model;
  return j;
}

Json describe(const SynthOptions& o) {
  Json j;
  j["spec"] = o.spec;
  return j;
}

void run_fit(const FitOptions& o, Context& ctx) {
  ctx.provenance.seed = o.seed;
  const MultiViewDataset ds = load_input(o.manifest, ctx.provenance);
  FitConfig cfg = base_fit(o.max_iters, o.tol);
  cfg.d = o.d;
  cfg.r = o.r;
  cfg.seed = o.seed;
  if (o.lambda_mode == "count") {
    cfg.penalty = Penalty::count(o.k);
  } else if (o.lambda_mode == "weights") {
    cfg.penalty = Penalty::uniform(ds.num_views(), o.d, o.r, o.lambda_shared, o.lambda_specific);
  } else {
    throw Error(Errc::kConfigParseError, "lambda-mode must be 'weights' or 'count'");
  }
  const FitResult result = fit(ds, cfg);
  write_factorization(out_path(ctx, "factorization.txt"), result.model);
  write_trace(result.trace, out_path(ctx, "trace.csv"));
  write_variance(result.model, ds, ctx);
  *ctx.stdout_stream << "iterations=" << result.trace.iterations
                     << " converged=" << (result.trace.converged ? "true" : "false")
                     << " objective=" << num(result.trace.objective.back()) << "\n";
}

void run_select_rank(const SelectRankOptions& o, Context& ctx) {
  const MultiViewDataset ds = load_input(o.manifest, ctx.provenance);
  const RankScan scan =
      scan_ranks(ds, o.r, o.threshold, base_fit(o.max_iters, o.tol), ctx.threads);

  std::vector<std::string> header{"d"};
  for (const ViewMatrix& v : ds.views()) {
    header.push_back(v.name + "_shared_frac");
    header.push_back(v.name + "_specific_frac");
  }
  header.push_back("qualifies");
  Csv table(header);
  for (const RankCandidate& c : scan.candidates) {
    std::vector<std::string> row{std::to_string(c.d)};
    for (const ExplainedFraction& f : c.per_view) {
      row.push_back(num(f.shared));
      row.push_back(num(f.specific));
    }
    row.push_back(flag(c.qualifies));
    table.add(std::move(row));
  }
  table.write(out_path(ctx, "rank_table.csv"));
  if (!scan.selected) {
    throw Error(Errc::kNotReached, "no d up to " +
                                       std::to_string(scan.candidates.size()) +
                                       " reaches the threshold in any view");
  }
  *ctx.stdout_stream << "selected_d=" << *scan.selected << "\n";
}

void run_stability(const StabilityOptions& o, Context& ctx) {
  ctx.provenance.seed = o.seed;
  const MultiViewDataset ds = load_input(o.manifest, ctx.provenance);
  StabilityConfig cfg;
  cfg.n_subsamples = o.subsamples;
  cfg.fraction = o.fraction;
  cfg.with_replacement = !o.without_replacement;
  cfg.max_failure_rate = o.max_failure_rate;
  cfg.seed = o.seed;
  cfg.fit = base_fit(o.max_iters, o.tol);
  cfg.fit.d = o.d;
  cfg.fit.r = o.r;
  cfg.fit.penalty = Penalty::count(o.k);
  const StabilityReport report = mvmf::run_stability(ds, cfg, ctx.threads);

  Csv csv({"component", "region", "sp", "rank", "mean_abs_loading"});
  for (std::size_t c = 0; c < report.components.size(); ++c) {
    const auto row = static_cast<Eigen::Index>(c);
    const auto& order = report.ranking[c];
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      const Eigen::Index j = order[pos];
      csv.add({report.components[c], report.regions[static_cast<std::size_t>(j)],
               num(report.probability(row, j)), std::to_string(pos + 1),
               num(report.mean_abs_loading(row, j))});
    }
  }
  csv.write(out_path(ctx, "stability.csv"));
  *ctx.stdout_stream << "successful=" << report.successful << " failed=" << report.failed
                     << "\n";
}

void run_project(const ProjectOptions& o, Context& ctx) {
  const MultiViewDataset ds = load_input(o.manifest, ctx.provenance);
  if (o.model.empty()) throw Error(Errc::kConfigParseError, "--model is required");
  if (!fs::is_regular_file(o.model)) {
    throw Error(Errc::kConfigParseError, "model file not found: " + o.model);
  }
  ctx.provenance.add_input(o.model);
  const Factorization f = read_factorization(fs::path(o.model));
  const ProjectionSet set = project(f, ds);

  Csv summary({"view", "residual_norm", "data_norm"});
  Csv plot({"x", "y", "label", "view"});
  for (const ViewProjection& v : set.views) {
    summary.add({v.view, num(v.residual_norm), num(v.data_norm)});

    std::vector<std::string> header{"subject_id"};
    header.insert(header.end(), v.axes.begin(), v.axes.end());
    if (v.labels) header.push_back("label");
    Csv ppj(header);
    for (Eigen::Index i = 0; i < v.coordinates.rows(); ++i) {
      std::vector<std::string> row{v.subjects[static_cast<std::size_t>(i)]};
      for (Eigen::Index c = 0; c < v.coordinates.cols(); ++c) row.push_back(num(v.coordinates(i, c)));
      if (v.labels) row.push_back(std::to_string((*v.labels)[static_cast<std::size_t>(i)]));
      ppj.add(std::move(row));
    }
    ppj.write(out_path(ctx, "ppj_" + file_stem(v.view) + ".csv"));

    if (set.r != 2) continue;
    const Matrix specific = v.specific();
    for (Eigen::Index i = 0; i < specific.rows(); ++i) {
      plot.add({num(specific(i, 0)), num(specific(i, 1)),
                v.labels ? std::to_string((*v.labels)[static_cast<std::size_t>(i)]) : "",
                v.view});
    }
    if (!v.labels) continue;
    const LdaSummary lda = lda_boundary(specific, *v.labels);
    Csv out({"w_x", "w_y", "offset", "accuracy", "drawn", "pct_class0_side0",
             "pct_class0_side1", "pct_class1_side0", "pct_class1_side1"});
    out.add({num(lda.normal(0)), num(lda.normal(1)), num(lda.offset), num(lda.accuracy),
             flag(lda.drawn), num(lda.percent[0][0]), num(lda.percent[0][1]),
             num(lda.percent[1][0]), num(lda.percent[1][1])});
    out.write(out_path(ctx, "lda_" + file_stem(v.view) + ".csv"));
  }
  summary.write(out_path(ctx, "projection.csv"));
  if (set.r == 2) plot.write(out_path(ctx, "plot_specific.csv"));
}

namespace {

template <typename T>
T field(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

PlantSpec parse_plant_spec(const Json& j) {
  if (!j.is_object()) throw Error(Errc::kConfigParseError, "synth spec must be a JSON object");
  if (!j.contains("n") || !j.contains("p")) {
    throw Error(Errc::kConfigParseError, "synth spec needs 'n' and 'p'");
  }
  PlantSpec spec;
  spec.n = j.at("n").get<std::vector<Eigen::Index>>();
  spec.p = j.at("p").get<Eigen::Index>();
  spec.d = field<Eigen::Index>(j, "d", 1);
  spec.r = field<Eigen::Index>(j, "r", 1);
  spec.noise = field<double>(j, "noise", 0.0);
  spec.view_noise = field<std::vector<double>>(j, "view_noise", {});
  spec.label_strength = field<std::vector<double>>(j, "label_strength", {});
  spec.shared_scale = field<double>(j, "shared_scale", 1.0);
  spec.specific_scale = field<double>(j, "specific_scale", 1.0);
  spec.shared_support = field<Supports>(j, "shared_support", {});
  spec.specific_support = field<std::vector<Supports>>(j, "specific_support", {});
  spec.seed = field<std::uint64_t>(j, "seed", 1);
  return spec;
}

}  // namespace

void run_synth(const SynthOptions& o, Context& ctx) {
  if (o.spec.empty()) throw Error(Errc::kConfigParseError, "--spec is required");
  std::ifstream in(o.spec);
  if (!in) throw Error(Errc::kConfigParseError, "spec file not found: " + o.spec);
  PlantSpec spec;
  try {
    spec = parse_plant_spec(Json::parse(in));
  } catch (const Json::exception& e) {
    throw Error(Errc::kConfigParseError, std::string("bad synth spec: ") + e.what());
  }
  ctx.provenance.add_input(o.spec);
  ctx.provenance.seed = spec.seed;
  const PlantedData planted = generate(spec);

  Json manifest = Json::object();
  for (const ViewMatrix& v : planted.data.views()) {
    const std::string file = file_stem(v.name) + ".csv";
    write_view_csv(out_path(ctx, file), v, planted.data.regions());
    manifest[v.name] = file;
  }
  write_text(out_path(ctx, "manifest.json"), manifest.dump(2) + "\n");
  write_factorization(out_path(ctx, "ground_truth.txt"), planted.truth);
}

}  // namespace mvmf::cli
