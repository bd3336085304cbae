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

#include "cli.hpp"

#include <filesystem>
#include <functional>
#include <string>

#include "CLI11.hpp"
#include "artifacts.hpp"
#include "commands.hpp"
#include "mvmf/errors.hpp"

namespace mvmf::cli {

namespace {

namespace fs = std::filesystem;

struct Failure {
  std::string code;
  std::string module;
  std::string name;
  std::string message;
};

Failure from_error(const Error& e) {
  return {e.qualified_code(), std::string(error_module(e.code())),
          std::string(error_name(e.code())), e.what()};
}

int report(const Failure& f, const std::string& command, const Context& ctx, int status,
           std::ostream& err) {
  Json record;
  record["status"] = "error";
  record["code"] = f.code;
  record["module"] = f.module;
  record["name"] = f.name;
  record["message"] = f.message;
  record["command"] = command;
  record["exit_status"] = status;
  err << record.dump() << "\n";
  if (!ctx.out.empty()) {
    try {
      write_text(fs::path(ctx.out) / "error.json", record.dump(2) + "\n");
    } catch (const std::exception&) {
      // the stderr copy is all we can offer
    }
  }
  return status;
}

void add_fit_controls(CLI::App* sub, int& max_iters, double& tol) {
  sub->add_option("--max-iters", max_iters, "Iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--tol", tol, "Stop when the objective decrease relative to the start "
                                "falls below this")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_common(CLI::App* sub, Context& ctx) {
  sub->add_option("--out", ctx.out, "Output directory")->required();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse multi-view matrix factorization", "mvmf"};
  app.set_config("--config", "", "TOML/INI file of option values; flags override it");
  app.set_version_flag("--version", MVMF_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  Context ctx;
  ctx.stdout_stream = &out;
  app.add_option("--threads", ctx.threads, "Worker threads, 0 = all available")
      ->envname("MVMF_THREADS")
      ->capture_default_str();

  FitOptions fit_opts;
  auto* fit = app.add_subcommand("fit", "Fit shared and view-specific factors");
  fit->add_option("--manifest", fit_opts.manifest, "View manifest (JSON)")->required();
  fit->add_option("--d", fit_opts.d, "Shared rank")->capture_default_str();
  fit->add_option("--r", fit_opts.r, "Specific rank per view")->capture_default_str();
  fit->add_option("--lambda-mode", fit_opts.lambda_mode, "weights or count")
      ->check(CLI::IsMember({"weights", "count"}))
      ->capture_default_str();
  fit->add_option("--k", fit_opts.k, "Nonzeros per loading column (count mode)")
      ->capture_default_str();
  fit->add_option("--lambda-shared", fit_opts.lambda_shared,
                  "L1 weight on every shared loading column (weights mode)")
      ->capture_default_str();
  fit->add_option("--lambda-specific", fit_opts.lambda_specific,
                  "L1 weight on every specific loading column (weights mode)")
      ->capture_default_str();
  fit->add_option("--seed", fit_opts.seed, "Seed recorded with the run")->capture_default_str();
  add_fit_controls(fit, fit_opts.max_iters, fit_opts.tol);
  add_common(fit, ctx);

  SelectRankOptions rank_opts;
  auto* select = app.add_subcommand("select-rank", "Smallest shared rank reaching a variance threshold");
  select->add_option("--manifest", rank_opts.manifest, "View manifest (JSON)")->required();
  select->add_option("--r", rank_opts.r, "Specific rank per view")->capture_default_str();
  select->add_option("--threshold", rank_opts.threshold, "Explained-variance target in (0, 1]")
      ->capture_default_str();
  add_fit_controls(select, rank_opts.max_iters, rank_opts.tol);
  add_common(select, ctx);

  StabilityOptions stab_opts;
  auto* stab = app.add_subcommand("stability", "Selection probabilities over subsamples");
  stab->add_option("--manifest", stab_opts.manifest, "View manifest (JSON)")->required();
  stab->add_option("--d", stab_opts.d, "Shared rank")->capture_default_str();
  stab->add_option("--r", stab_opts.r, "Specific rank per view")->capture_default_str();
  stab->add_option("--k", stab_opts.k, "Nonzeros per loading column")->capture_default_str();
  stab->add_option("--subsamples", stab_opts.subsamples, "Number of subsamples")
      ->capture_default_str();
  stab->add_option("--fraction", stab_opts.fraction, "Share of each view drawn per subsample")
      ->capture_default_str();
  stab->add_flag("--without-replacement", stab_opts.without_replacement,
                 "Draw subjects without replacement");
  stab->add_option("--max-failure-rate", stab_opts.max_failure_rate,
                   "Abort when more subsample fits than this share fail")
      ->capture_default_str();
  stab->add_option("--seed", stab_opts.seed, "Master seed")->capture_default_str();
  add_fit_controls(stab, stab_opts.max_iters, stab_opts.tol);
  add_common(stab, ctx);

  ProjectOptions proj_opts;
  auto* proj = app.add_subcommand("project", "Principal projections and LDA summaries");
  proj->add_option("--manifest", proj_opts.manifest, "View manifest (JSON)")->required();
  proj->add_option("--model", proj_opts.model, "Factorization file written by fit")->required();
  add_common(proj, ctx);

  SynthOptions synth_opts;
  auto* synth = app.add_subcommand("synth", "Generate planted multi-view data");
  synth->add_option("--spec", synth_opts.spec, "Plant specification (JSON)")->required();
  add_common(synth, ctx);

  std::string command = "mvmf";
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    for (const auto* sub : app.get_subcommands()) command = sub->get_name();
    return report({"cli.ConfigParseError", "cli", "ConfigParseError", e.what()}, command, ctx,
                  kExitConfig, err);
  }

  std::function<void()> action;
  if (fit->parsed()) {
    command = "fit";
    ctx.provenance.config = describe(fit_opts);
    action = [&] { run_fit(fit_opts, ctx); };
  } else if (select->parsed()) {
    command = "select-rank";
    ctx.provenance.config = describe(rank_opts);
    action = [&] { run_select_rank(rank_opts, ctx); };
  } else if (stab->parsed()) {
    command = "stability";
    ctx.provenance.config = describe(stab_opts);
    action = [&] { run_stability(stab_opts, ctx); };
  } else if (proj->parsed()) {
    command = "project";
    ctx.provenance.config = describe(proj_opts);
    action = [&] { run_project(proj_opts, ctx); };
  } else {
    command = "synth";
    ctx.provenance.config = describe(synth_opts);
    action = [&] { run_synth(synth_opts, ctx); };
  }
  ctx.provenance.command = command;

  int status = kExitOk;
  try {
    fs::create_directories(ctx.out);
    fs::remove(fs::path(ctx.out) / "error.json");
    action();
  } catch (const Error& e) {
    status = e.code() == Errc::kConfigParseError ? kExitConfig : kExitFailure;
    report(from_error(e), command, ctx, status, err);
  } catch (const fs::filesystem_error& e) {
    status = kExitFailure;
    report({"dataset.IoError", "dataset", "IoError", e.what()}, command, ctx, status, err);
  } catch (const std::exception& e) {
    status = kExitFailure;
    report({"cli.Unexpected", "cli", "Unexpected", e.what()}, command, ctx, status, err);
  }

  try {
    ctx.provenance.write(ctx.out);
  } catch (const std::exception& e) {
    err << "warning: could not write provenance: " << e.what() << "\n";
    if (status == kExitOk) status = kExitFailure;
  }
  return status;
}

}  // namespace mvmf::cli
