// Copyright 2026 The vecscope Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: bench -> analyze -> classify -> roofline, plus an
// event registry listing. Every command writes to caller-provided streams so
// it can be driven from tests as well as from main().

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vecscope/classifier.hpp"
#include "vecscope/collector.hpp"
#include "vecscope/machine_model.hpp"
#include "vecscope/measurement.hpp"
#include "vecscope/workloads.hpp"

namespace vecscope {

enum class Subcommand { bench, analyze, classify, roofline, events };
enum class OutputFormat { text, csv, json };

std::string_view to_string(Subcommand s);
std::string_view to_string(OutputFormat f);

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitBackendUnavailable = 2;

struct BenchParams {
  std::string kernel = "spmv";  // spmv | stream
  int n = 2048;                 // matrix dimension or stream length
  double density = 0.01;
  std::uint64_t seed = 42;
  int repeat = 1;
  int elen_bits = 64;
  StreamOp op = StreamOp::triad;
  std::optional<std::filesystem::path> matrix;  // Matrix Market input
  std::vector<Variant> variants;                // empty: backend default
  std::vector<std::string> events;              // empty: default event set
  int repetitions = 5;
  double min_roi_seconds = 0.1;
  double max_rel_stddev = 0.05;
  // Relative amplitude of the scripted repetition-to-repetition noise of the
  // synthetic backend; 0 gives identical repetitions.
  double synthetic_jitter = 0.0;
};

void validate(const BenchParams& params);

struct RunPlan {
  Subcommand subcommand = Subcommand::events;
  std::string machine = "grace";
  BackendKind backend = BackendKind::live;
  OutputFormat format = OutputFormat::text;
  std::vector<int> threads;  // empty: OMP_NUM_THREADS, else {1}
  std::optional<std::filesystem::path> out;

  BenchParams bench;

  std::vector<std::filesystem::path> inputs;  // analyze / classify / roofline
  ClassifierConfig classifier;

  int roofline_elen_bits = 64;
  bool normalize = false;
  std::optional<std::filesystem::path> svg;
};

// Throws DomainError when an output path cannot be written or a numeric
// option is out of range.
void validate(const RunPlan& plan);

// Thread counts to use: plan.threads, else OMP_NUM_THREADS, else {1}.
std::vector<int> resolve_threads(const std::vector<int>& threads);

// Parses "1,72" style lists.
std::vector<int> parse_thread_list(std::string_view text);

// Builds the counter backend for one repetition of `workload` built as
// `variant`. `jitter` scales synthetic counts and is ignored otherwise.
using BackendFactory = std::function<std::unique_ptr<CounterBackend>(
    const Workload& workload, Variant variant, std::uint64_t invocations, double jitter)>;

BackendFactory default_backend_factory(BackendKind kind, const MachineModel& model);

struct BenchResult {
  std::vector<MeasurementRecord> records;  // one per (threads, variant)
  std::vector<std::string> warnings;
};

// For every thread count and variant: scales inner invocations until one ROI
// lasts at least min_roi_seconds, runs `repetitions` ROIs and keeps the median
// of every counter and of the wall time. Warns when the relative sample
// standard deviation of any of them exceeds max_rel_stddev.
BenchResult run_bench(const BenchParams& params, const MachineModel& model,
                      const std::vector<int>& threads, BackendKind kind,
                      const BackendFactory& factory);

// Repetition scale factors of the synthetic backend for a jitter amplitude f:
// 1, 1+f, 1-f, 1+f, 1-f, ...
double jitter_factor(double amplitude, int repetition);

// Per-kernel analysis table.
std::string analyses_to_text(std::span<const AnalysisOutcome> outcomes);
std::string analyses_to_csv(std::span<const AnalysisOutcome> outcomes);

// Commands. Each returns an exit code and reports problems on `err`.
int cmd_bench(const RunPlan& plan, std::ostream& out, std::ostream& err,
              const BackendFactory& factory = {});
int cmd_analyze(const RunPlan& plan, std::ostream& out, std::ostream& err);
int cmd_classify(const RunPlan& plan, std::ostream& out, std::ostream& err);
int cmd_roofline(const RunPlan& plan, std::ostream& out, std::ostream& err);
int cmd_events(const RunPlan& plan, std::ostream& out, std::ostream& err);

int execute(const RunPlan& plan, std::ostream& out, std::ostream& err);

// Parses argv (argv[0] is the program name) and executes the plan.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vecscope
