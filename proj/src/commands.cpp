// Copyright 2026 The vecscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "vecscope/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "vecscope/error.hpp"
#include "vecscope/metrics.hpp"
#include "vecscope/roofline.hpp"

namespace vecscope {

std::string_view to_string(Subcommand s) {
  switch (s) {
    case Subcommand::bench: return "bench";
    case Subcommand::analyze: return "analyze";
    case Subcommand::classify: return "classify";
    case Subcommand::roofline: return "roofline";
    case Subcommand::events: return "events";
  }
  return "events";
}

std::string_view to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::text: return "text";
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
  }
  return "text";
}

// ---------------------------------------------------------------------------
// Plan validation
// ---------------------------------------------------------------------------

void validate(const BenchParams& p) {
  if (p.kernel != "spmv" && p.kernel != "stream")
    throw DomainError(fmt::format("unknown kernel '{}' (expected spmv or stream)", p.kernel));
  if (p.n < 1) throw DomainError(fmt::format("--n must be >= 1, got {}", p.n));
  if (p.repetitions < 5)
    throw DomainError(fmt::format("--repetitions must be >= 5, got {}", p.repetitions));
  if (!(p.min_roi_seconds > 0.0)) throw DomainError("minimum ROI time must be positive");
  if (!(p.max_rel_stddev > 0.0)) throw DomainError("standard deviation limit must be positive");
  if (!(p.synthetic_jitter >= 0.0 && p.synthetic_jitter < 1.0))
    throw DomainError(fmt::format("--synthetic-jitter must lie in [0, 1), got {}",
                                  p.synthetic_jitter));
  if (p.kernel == "spmv") {
    validate(SpmvParams{p.repeat, p.elen_bits, 1});
    if (!p.matrix && (!(p.density > 0.0) || p.density > 1.0))
      throw DomainError(fmt::format("--density must lie in (0, 1], got {}", p.density));
  }
}

namespace {

void check_writable(const std::filesystem::path& path, std::string_view flag) {
  auto parent = path.parent_path();
  if (parent.empty()) parent = ".";
  if (!std::filesystem::is_directory(parent))
    throw DomainError(fmt::format("{}: directory '{}' does not exist", flag, parent.string()));
  if (std::filesystem::is_directory(path))
    throw DomainError(fmt::format("{}: '{}' is a directory", flag, path.string()));
}

}  // namespace

void validate(const RunPlan& plan) {
  for (int t : plan.threads)
    if (t < 1) throw DomainError(fmt::format("--threads entries must be >= 1, got {}", t));
  if (plan.out) check_writable(*plan.out, "--out");
  if (plan.svg) check_writable(*plan.svg, "--svg");
  if (plan.subcommand == Subcommand::bench) validate(plan.bench);
  if (plan.subcommand == Subcommand::classify) validate(plan.classifier);
}

std::vector<int> parse_thread_list(std::string_view text) {
  std::vector<int> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size() || value < 1)
      throw DomainError(fmt::format("bad thread count '{}' in '{}'", item, text));
    out.push_back(value);
  }
  if (out.empty()) throw DomainError("empty thread list");
  return out;
}

std::vector<int> resolve_threads(const std::vector<int>& threads) {
  if (!threads.empty()) return threads;
  if (const char* env = std::getenv("OMP_NUM_THREADS"); env && *env)
    return parse_thread_list(env);
  return {1};
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

double jitter_factor(double amplitude, int repetition) {
  if (repetition == 0) return 1.0;
  return repetition % 2 == 1 ? 1.0 + amplitude : 1.0 - amplitude;
}

BackendFactory default_backend_factory(BackendKind kind, const MachineModel& model) {
  switch (kind) {
    case BackendKind::synthetic:
      return [model](const Workload& w, Variant variant, std::uint64_t invocations,
                     double jitter) -> std::unique_ptr<CounterBackend> {
        auto window = synthetic_window(w.profile(model), variant, model, w.elen_bits(),
                                       w.threads(), invocations, jitter);
        return std::make_unique<SyntheticBackend>(std::vector<SyntheticWindow>{window});
      };
    case BackendKind::live:
      return [](const Workload&, Variant, std::uint64_t, double) { return make_live_backend(); };
    case BackendKind::replay:
      break;
  }
  throw DomainError("the replay backend reads recorded measurements, not live kernels");
}

namespace {

std::uint64_t median(std::vector<std::uint64_t> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return v[n / 2 - 1] / 2 + v[n / 2] / 2 + (v[n / 2 - 1] % 2 + v[n / 2] % 2) / 2;
}

double rel_stddev(const std::vector<std::uint64_t>& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0;
  for (auto x : v) mean += static_cast<double>(x);
  mean /= static_cast<double>(v.size());
  if (mean == 0.0) return 0.0;
  double ss = 0;
  for (auto x : v) ss += (static_cast<double>(x) - mean) * (static_cast<double>(x) - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1)) / mean;
}

EventSet bench_events(const BenchParams& p) {
  return p.events.empty() ? EventSet::default_set() : EventSet::from_names(p.events);
}

void add_unique(std::vector<std::string>& warnings, std::string w) {
  if (std::find(warnings.begin(), warnings.end(), w) == warnings.end())
    warnings.push_back(std::move(w));
}

}  // namespace

BenchResult run_bench(const BenchParams& params, const MachineModel& model,
                      const std::vector<int>& threads, BackendKind kind,
                      const BackendFactory& factory) {
  validate(params);
  validate(model);
  if (kind == BackendKind::replay)
    throw DomainError("bench replays recorded measurements only through run_replay");

  std::vector<Variant> variants = params.variants;
  if (variants.empty()) {
    if (kind == BackendKind::live)
      variants = {build_variant()};
    else
      variants = {Variant::baseline, Variant::asimd, Variant::sve};
  }
  if (kind == BackendKind::live && variants.size() != 1)
    throw DomainError(fmt::format(
        "the live backend measures this build only; pass one --variant label (this build: {})",
        to_string(build_variant())));

  std::optional<CsrMatrix<double>> matrix;
  if (params.kernel == "spmv")
    matrix = params.matrix ? read_matrix_market_file(*params.matrix)
                           : generate_matrix(params.n, params.density, params.seed);

  const EventSet events = bench_events(params);
  const auto target_ns = static_cast<std::uint64_t>(params.min_roi_seconds * 1e9);
  BenchResult result;

  for (int t : threads) {
    std::unique_ptr<Workload> workload =
        matrix ? make_spmv_workload(*matrix, SpmvParams{params.repeat, params.elen_bits, t})
               : make_stream_workload(static_cast<std::size_t>(params.n), params.elen_bits,
                                      params.op, t);
    for (Variant variant : variants) {
      auto measure = [&](std::uint64_t invocations, double jitter) {
        RoiSession session(events, factory(*workload, variant, invocations, jitter));
        auto record = run_instrumented(*workload, session, invocations, variant);
        for (const auto& w : session.warnings()) add_unique(result.warnings, w);
        return record;
      };

      // Scale inner invocations until one ROI is long enough.
      std::uint64_t invocations = 1;
      for (int probe = 0; probe < 64; ++probe) {
        auto probe_record = measure(invocations, 1.0);
        if (probe_record.wall_time_ns >= target_ns) break;
        double factor = probe_record.wall_time_ns == 0
                            ? 16.0
                            : 1.05 * static_cast<double>(target_ns) /
                                  static_cast<double>(probe_record.wall_time_ns);
        factor = std::clamp(factor, 1.25, 1e6);
        invocations = static_cast<std::uint64_t>(std::ceil(static_cast<double>(invocations) * factor));
      }

      std::vector<MeasurementRecord> runs;
      for (int r = 0; r < params.repetitions; ++r)
        runs.push_back(measure(invocations, jitter_factor(params.synthetic_jitter, r)));

      MeasurementRecord agg = runs.front();
      std::vector<std::string> noisy;
      std::vector<std::uint64_t> samples;
      for (auto& [name, value] : agg.counters) {
        samples.clear();
        for (const auto& run : runs) samples.push_back(run.counters.at(name));
        value = median(samples);
        if (rel_stddev(samples) > params.max_rel_stddev) noisy.push_back(name);
      }
      samples.clear();
      for (const auto& run : runs) samples.push_back(run.wall_time_ns);
      agg.wall_time_ns = median(samples);
      const double time_sd = rel_stddev(samples);
      if (time_sd > params.max_rel_stddev) noisy.insert(noisy.begin(), "wall_time");
      if (!noisy.empty()) {
        std::string names;
        for (const auto& n : noisy) names += (names.empty() ? "" : ", ") + n;
        result.warnings.push_back(fmt::format(
            "{} {} @ {} threads: relative standard deviation above {:.0f}% across {} "
            "repetitions ({}; wall time {:.1f}%)",
            agg.kernel_name, to_string(variant), t, params.max_rel_stddev * 100,
            params.repetitions, names, time_sd * 100));
      }
      result.records.push_back(std::move(agg));
    }
  }
  return result;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(fmt::format("cannot open '{}'", path.string()));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void emit(const RunPlan& plan, std::ostream& out, const std::string& text) {
  if (!plan.out) {
    out << text;
    return;
  }
  std::ofstream file(*plan.out, std::ios::binary | std::ios::trunc);
  if (!file) throw ParseError(fmt::format("cannot write '{}'", plan.out->string()));
  file << text;
  if (!file) throw ParseError(fmt::format("failed writing '{}'", plan.out->string()));
}

// Replays recorded measurement documents through the collector: each record
// becomes one ROI window on a replay session.
std::vector<MeasurementRecord> run_replay(const RunPlan& plan, std::vector<std::string>& warnings) {
  if (plan.inputs.empty())
    throw DomainError("bench with the replay backend needs recorded measurement files");
  std::vector<MeasurementRecord> out;
  for (const auto& path : plan.inputs) {
    auto records = load_measurements_file(path);
    for (const auto& record : records) {
      std::vector<std::string> names = plan.bench.events;
      if (names.empty())
        for (const auto& [name, value] : record.counters) names.push_back(name);
      RoiSession session = configure_measure(names, std::make_unique<ReplayBackend>(
                                                        std::vector<MeasurementRecord>{record}));
      start_measure(session);
      stop_measure(session);
      finish_measure(session);
      for (const auto& w : session.warnings()) add_unique(warnings, w);
      out.push_back(read_results(session));
    }
  }
  return out;
}

}  // namespace

int cmd_bench(const RunPlan& plan, std::ostream& out, std::ostream& err,
              const BackendFactory& factory) {
  const MachineModel model = resolve_machine_model(plan.machine);
  std::vector<MeasurementRecord> records;
  std::vector<std::string> warnings;
  if (plan.backend == BackendKind::replay) {
    records = run_replay(plan, warnings);
  } else {
    BenchResult r = run_bench(plan.bench, model, resolve_threads(plan.threads), plan.backend,
                              factory ? factory : default_backend_factory(plan.backend, model));
    records = std::move(r.records);
    warnings = std::move(r.warnings);
  }
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  emit(plan, out, to_json(records));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze / classify / roofline
// ---------------------------------------------------------------------------

namespace {

std::string opt_num(const std::optional<double>& v) {
  if (!v) return "";
  if (is_unbounded(*v)) return "unbounded";
  return fmt::format("{:.6g}", *v);
}

std::vector<MeasurementRecord> load_all_measurements(const RunPlan& plan) {
  std::vector<MeasurementRecord> all;
  for (const auto& path : plan.inputs) {
    std::vector<MeasurementRecord> part;
    try {
      part = load_measurements(read_file(path));
    } catch (const ParseError& e) {
      throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
    }
    std::move(part.begin(), part.end(), std::back_inserter(all));
  }
  return all;
}

bool thread_selected(const RunPlan& plan, int threads) {
  return plan.threads.empty() ||
         std::find(plan.threads.begin(), plan.threads.end(), threads) != plan.threads.end();
}

void report_errors(std::span<const AnalysisOutcome> outcomes, std::ostream& err) {
  for (const auto& o : outcomes)
    if (!o.analysis)
      err << fmt::format("error: {} @ {} threads: {}\n", o.kernel_name, o.threads, o.error);
}

// Accepts analysis documents or measurement documents (analyzed on the fly).
std::vector<KernelAnalysis> load_analysis_inputs(const RunPlan& plan, const MachineModel& model,
                                                 std::ostream& err) {
  std::vector<KernelAnalysis> all;
  for (const auto& path : plan.inputs) {
    const std::string text = read_file(path);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
    }
    const bool measurements = doc.is_array() && !doc.empty() && doc.front().is_object() &&
                              doc.front().contains("counters");
    try {
      if (measurements) {
        auto records = load_measurements(text);
        auto outcomes = analyze_all(records, model);
        report_errors(outcomes, err);
        for (auto& o : outcomes)
          if (o.analysis) all.push_back(std::move(*o.analysis));
      } else {
        auto part = load_analyses(text);
        std::move(part.begin(), part.end(), std::back_inserter(all));
      }
    } catch (const ParseError& e) {
      throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
    }
  }
  std::erase_if(all, [&](const KernelAnalysis& a) { return !thread_selected(plan, a.threads); });
  return all;
}

}  // namespace

std::string analyses_to_text(std::span<const AnalysisOutcome> outcomes) {
  std::size_t name_w = 6;
  for (const auto& o : outcomes) name_w = std::max(name_w, o.kernel_name.size());
  std::string out = fmt::format("{:<{}} {:>7} {:>4} {:>4} {:>9} {:>11} {:>11} {:>13} {:>10} {:>7}\n", "kernel",
                    name_w, "threads", "elen", "vb", "r_ins_sve", "r_ins_asimd", "speedup_sve",
                    "speedup_asimd", "ai_est", "r_llc");
  for (const auto& o : outcomes) {
    if (!o.analysis) continue;
    const auto& a = *o.analysis;
    out += fmt::format("{:<{}} {:>7} {:>4} {:>4} {:>9} {:>11} {:>11} {:>13} {:>10} {:>7}\n",
                       a.kernel_name, name_w, a.threads, a.elen_bits, fmt::format("{:g}", a.vb),
                       opt_num(a.r_ins_reduction_sve), opt_num(a.r_ins_reduction_asimd),
                       opt_num(a.speedup_sve), opt_num(a.speedup_asimd), opt_num(a.ai_est),
                       opt_num(a.r_llc));
  }
  for (const auto& o : outcomes)
    if (!o.analysis)
      out += fmt::format("error: {} @ {} threads: {}\n", o.kernel_name, o.threads, o.error);
  return out;
}

std::string analyses_to_csv(std::span<const AnalysisOutcome> outcomes) {
  std::string out =
      "kernel,threads,elen_bits,vb,r_ins_reduction_sve,r_ins_reduction_asimd,speedup_sve,"
      "speedup_asimd,ai_est,r_llc,error\n";
  for (const auto& o : outcomes) {
    if (o.analysis) {
      const auto& a = *o.analysis;
      out += fmt::format("{},{},{},{:g},{},{},{},{},{},{},\n", a.kernel_name, a.threads,
                         a.elen_bits, a.vb, opt_num(a.r_ins_reduction_sve),
                         opt_num(a.r_ins_reduction_asimd), opt_num(a.speedup_sve),
                         opt_num(a.speedup_asimd), opt_num(a.ai_est), opt_num(a.r_llc));
    } else {
      std::string msg = o.error;
      std::replace(msg.begin(), msg.end(), '"', '\'');
      out += fmt::format("{},{},,,,,,,,,\"{}\"\n", o.kernel_name, o.threads, msg);
    }
  }
  return out;
}

int cmd_analyze(const RunPlan& plan, std::ostream& out, std::ostream& err) {
  const MachineModel model = resolve_machine_model(plan.machine);
  const auto records = load_all_measurements(plan);
  auto outcomes = analyze_all(records, model);
  std::erase_if(outcomes, [&](const AnalysisOutcome& o) { return !thread_selected(plan, o.threads); });

  switch (plan.format) {
    case OutputFormat::text:
      emit(plan, out, analyses_to_text(outcomes));
      if (plan.out) report_errors(outcomes, err);
      break;
    case OutputFormat::csv:
      emit(plan, out, analyses_to_csv(outcomes));
      report_errors(outcomes, err);
      break;
    case OutputFormat::json: {
      std::vector<KernelAnalysis> ok;
      for (const auto& o : outcomes)
        if (o.analysis) ok.push_back(*o.analysis);
      emit(plan, out, to_json(ok));
      report_errors(outcomes, err);
      break;
    }
  }
  return kExitOk;
}

int cmd_classify(const RunPlan& plan, std::ostream& out, std::ostream& err) {
  const MachineModel model = resolve_machine_model(plan.machine);
  const auto analyses = load_analysis_inputs(plan, model, err);
  const auto table = classify_suite(analyses, model, plan.classifier);
  switch (plan.format) {
    case OutputFormat::text: emit(plan, out, to_text(table)); break;
    case OutputFormat::csv: emit(plan, out, to_csv(table)); break;
    case OutputFormat::json: emit(plan, out, to_json(table)); break;
  }
  if (plan.format != OutputFormat::text || plan.out)
    for (const auto& e : table.errors)
      err << fmt::format("error: {} @ {} threads: {}\n", e.kernel_name, e.threads, e.message);
  return kExitOk;
}

int cmd_roofline(const RunPlan& plan, std::ostream& out, std::ostream& err) {
  const MachineModel model = resolve_machine_model(plan.machine);
  const auto threads = resolve_threads(plan.threads);
  if (threads.size() != 1)
    throw DomainError("roofline draws one thread count at a time; pass a single --threads value");
  RooflineConfig config{model, plan.roofline_elen_bits, threads.front()};
  validate(config);

  RunPlan filtered = plan;
  filtered.threads = threads;
  const auto analyses = load_analysis_inputs(filtered, model, err);
  const auto dataset = roofline_dataset(config, analyses, plan.normalize);
  emit(plan, out, to_csv(dataset));
  if (plan.svg) {
    std::ofstream svg(*plan.svg, std::ios::binary | std::ios::trunc);
    if (!svg) throw ParseError(fmt::format("cannot write '{}'", plan.svg->string()));
    svg << to_svg(dataset);
  }
  return kExitOk;
}

int cmd_events(const RunPlan& plan, std::ostream& out, std::ostream&) {
  const auto registry = event_registry();
  std::string text;
  switch (plan.format) {
    case OutputFormat::text:
      text = fmt::format("{:<20} {:>7} {:<10}  {}\n", "event", "code", "status", "description");
      for (const auto& e : registry) {
        text += fmt::format("{:<20} {:>#7x} {:<10}  {}\n", e.name, e.hexcode,
                            e.reliable ? "reliable" : "unreliable", e.description);
        if (!e.note.empty()) text += fmt::format("{:<40}  note: {}\n", "", e.note);
      }
      text += fmt::format("At most {} events can be counted at once.\n", EventSet::kMaxEvents);
      break;
    case OutputFormat::csv:
      text = "event,code,reliable,description,note\n";
      for (const auto& e : registry)
        text += fmt::format("{},{:#x},{},\"{}\",\"{}\"\n", e.name, e.hexcode, e.reliable,
                            e.description, e.note);
      break;
    case OutputFormat::json: {
      nlohmann::ordered_json doc = nlohmann::ordered_json::array();
      for (const auto& e : registry)
        doc.push_back({{"name", e.name},
                       {"code", fmt::format("{:#x}", e.hexcode)},
                       {"reliable", e.reliable},
                       {"description", e.description},
                       {"note", e.note}});
      text = doc.dump(2) + "\n";
      break;
    }
  }
  emit(plan, out, text);
  return kExitOk;
}

int execute(const RunPlan& plan, std::ostream& out, std::ostream& err) {
  try {
    validate(plan);
    switch (plan.subcommand) {
      case Subcommand::bench: return cmd_bench(plan, out, err);
      case Subcommand::analyze: return cmd_analyze(plan, out, err);
      case Subcommand::classify: return cmd_classify(plan, out, err);
      case Subcommand::roofline: return cmd_roofline(plan, out, err);
      case Subcommand::events: return cmd_events(plan, out, err);
    }
  } catch (const BackendError& e) {
    err << "error: " << e.what() << "\n"
        << "hint: replay counters recorded on a supported host with '--backend replay "
           "<measurements.json>', or model them with '--backend synthetic'\n";
    return kExitBackendUnavailable;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

// ---------------------------------------------------------------------------
// Argument parsing
// ---------------------------------------------------------------------------

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunPlan plan;
  std::string backend = "live";
  std::string format = "text";
  std::string threads;
  std::string out_path;
  std::string matrix;
  std::string op = "triad";
  std::vector<std::string> variants;
  std::vector<std::string> inputs;
  std::string svg;
  std::string class_order;
  double rllc = 0.0;

  CLI::App app{"Vectorization performance analysis with hardware counters"};
  app.name(args.empty() ? "vecscope" : args.front());
  app.require_subcommand(1);
  app.add_option("--machine", plan.machine, "Machine model: built-in name or JSON file")
      ->capture_default_str();
  app.add_option("--backend", backend, "Counter backend")
      ->check(CLI::IsMember({"live", "replay", "synthetic"}))
      ->capture_default_str();
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();
  app.add_option("--threads", threads, "Thread counts, e.g. 1,72 (default: OMP_NUM_THREADS or 1)");
  app.add_option("--out", out_path, "Write the main output to this file");

  auto* bench = app.add_subcommand("bench", "Measure a built-in kernel");
  bench->add_option("--kernel", plan.bench.kernel, "spmv or stream")
      ->check(CLI::IsMember({"spmv", "stream"}))
      ->capture_default_str();
  bench->add_option("--n", plan.bench.n, "Matrix dimension or stream length")->capture_default_str();
  bench->add_option("--density", plan.bench.density, "Nonzero density of the generated matrix")
      ->capture_default_str();
  bench->add_option("--seed", plan.bench.seed, "Matrix generator seed")->capture_default_str();
  bench->add_option("--repeat", plan.bench.repeat, "Multiply-adds per nonzero")
      ->capture_default_str();
  bench->add_option("--elen", plan.bench.elen_bits, "Element width in bits")
      ->capture_default_str();
  bench->add_option("--op", op, "Stream operation")
      ->check(CLI::IsMember({"copy", "triad"}))
      ->capture_default_str();
  bench->add_option("--matrix", matrix, "Matrix Market file instead of the generator");
  bench->add_option("--variant", variants, "Variant label(s): baseline, asimd, sve");
  bench->add_option("--event", plan.bench.events, "Counter to collect (repeatable, at most 6)");
  bench->add_option("--repetitions", plan.bench.repetitions, "Measured repetitions (>= 5)")
      ->capture_default_str();
  bench->add_option("--min-roi-seconds", plan.bench.min_roi_seconds, "Minimum ROI wall time")
      ->capture_default_str();
  bench->add_option("--synthetic-jitter", plan.bench.synthetic_jitter,
                    "Scripted relative noise between synthetic repetitions")
      ->capture_default_str();
  bench->add_option("inputs", inputs, "Recorded measurement files (replay backend)");

  auto* analyze = app.add_subcommand("analyze", "Derive metrics from measurement documents");
  analyze->add_option("inputs", inputs, "Measurement documents")->required();

  auto* classify = app.add_subcommand("classify", "Classify kernels into performance classes");
  classify->add_option("inputs", inputs, "Analysis or measurement documents")->required();
  classify->add_option("--reduction-threshold", plan.classifier.reduction_threshold,
                       "Instruction reduction below which a kernel is not vectorized")
      ->capture_default_str();
  auto* rllc_opt = classify->add_option("--rllc-threshold", rllc,
                                        "LLC miss ratio separating bandwidth from latency bound "
                                        "(default: element bytes / cache line)");
  classify->add_option("--class-order", class_order,
                       "Comma-separated labels receiving class numbers 1..4");

  auto* roofline = app.add_subcommand("roofline", "Emit roofline data (CSV) and an optional SVG");
  roofline->add_option("inputs", inputs, "Analysis or measurement documents");
  roofline->add_option("--elen", plan.roofline_elen_bits, "Element width in bits")
      ->capture_default_str();
  roofline->add_flag("--normalize", plan.normalize, "Divide throughput by the scalar peak");
  roofline->add_option("--svg", svg, "Also write an SVG chart");

  auto* events = app.add_subcommand("events", "List known PMU events");

  for (auto* sub : {bench, analyze, classify, roofline, events}) sub->fallthrough();

  std::vector<const char*> argv;
  argv.push_back(args.empty() ? "vecscope" : args.front().c_str());
  for (std::size_t i = 1; i < args.size(); ++i) argv.push_back(args[i].c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (bench->parsed()) plan.subcommand = Subcommand::bench;
    if (analyze->parsed()) plan.subcommand = Subcommand::analyze;
    if (classify->parsed()) plan.subcommand = Subcommand::classify;
    if (roofline->parsed()) plan.subcommand = Subcommand::roofline;
    if (events->parsed()) plan.subcommand = Subcommand::events;

    plan.backend = *parse_backend_kind(backend);
    plan.format = format == "csv" ? OutputFormat::csv
                  : format == "json" ? OutputFormat::json
                                     : OutputFormat::text;
    if (!threads.empty()) plan.threads = parse_thread_list(threads);
    if (!out_path.empty()) plan.out = out_path;
    if (!matrix.empty()) plan.bench.matrix = matrix;
    if (!svg.empty()) plan.svg = svg;
    plan.bench.op = op == "copy" ? StreamOp::copy : StreamOp::triad;
    for (const auto& v : variants) {
      auto parsed = parse_variant(v);
      if (!parsed) throw DomainError(fmt::format("unknown variant '{}'", v));
      if (std::find(plan.bench.variants.begin(), plan.bench.variants.end(), *parsed) ==
          plan.bench.variants.end())
        plan.bench.variants.push_back(*parsed);
    }
    if (*rllc_opt) plan.classifier.rllc_threshold = rllc;
    if (!class_order.empty()) {
      std::vector<std::string> labels;
      std::string item;
      std::istringstream in(class_order);
      while (std::getline(in, item, ',')) labels.push_back(item);
      if (labels.size() != 4) throw DomainError("--class-order needs exactly four labels");
      for (std::size_t k = 0; k < 4; ++k) {
        auto c = parse_perf_class(labels[k]);
        if (!c) throw DomainError(fmt::format("unknown class label '{}'", labels[k]));
        plan.classifier.class_order[k] = *c;
      }
    }
    for (const auto& i : inputs) plan.inputs.emplace_back(i);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return execute(plan, out, err);
}

}  // namespace vecscope
