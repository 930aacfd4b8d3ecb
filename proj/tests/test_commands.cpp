// Copyright 2026 The vecscope Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vecscope/commands.hpp"
#include "vecscope/error.hpp"

using namespace vecscope;
namespace fs = std::filesystem;

namespace {

const std::string kSuite = std::string(VECSCOPE_FIXTURES) + "/suite_measurements.json";

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "vecscope");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "vecscope_test_commands";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("thread lists") {
  CHECK(parse_thread_list("1,72") == std::vector<int>{1, 72});
  CHECK(parse_thread_list(" 4 ") == std::vector<int>{4});
  CHECK_THROWS_AS(parse_thread_list("1,x"), DomainError);
  CHECK_THROWS_AS(parse_thread_list("0"), DomainError);
  CHECK(resolve_threads({8}) == std::vector<int>{8});

  ::setenv("OMP_NUM_THREADS", "3", 1);
  CHECK(resolve_threads({}) == std::vector<int>{3});
  ::unsetenv("OMP_NUM_THREADS");
  CHECK(resolve_threads({}) == std::vector<int>{1});
}

TEST_CASE("events listing") {
  auto r = cli({"events"});
  CHECK(r.code == 0);
  CHECK(r.out.find("INST_RETIRED") != std::string::npos);
  CHECK(r.out.find("unreliable") != std::string::npos);
  CHECK(cli({"--format", "json", "events"}).out.find("\"0x8006\"") != std::string::npos);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(cli({}).code == kExitInputError);
  CHECK(cli({"frobnicate"}).code == kExitInputError);
  CHECK(cli({"--format", "xml", "events"}).code == kExitInputError);
  CHECK(cli({"analyze", "/nonexistent.json"}).code == kExitInputError);
  CHECK(cli({"--backend", "synthetic", "bench", "--repetitions", "3"}).code == kExitInputError);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("unavailable live backend exits with 2 and suggests replay") {
  std::string reason;
  if (live_backend_available(&reason)) SKIP("a PMU is available on this host");
  auto r = cli({"--backend", "live", "bench", "--n", "64"});
  CHECK(r.code == kExitBackendUnavailable);
  CHECK(r.err.find("replay") != std::string::npos);
}

TEST_CASE("bench scales inner invocations to the minimum ROI time") {
  BenchParams p;
  p.n = 256;
  p.density = 0.05;
  const auto model = grace_model();
  auto r = run_bench(p, model, {1}, BackendKind::synthetic,
                     default_backend_factory(BackendKind::synthetic, model));
  REQUIRE(r.records.size() == 3);
  for (const auto& rec : r.records) {
    CHECK(rec.repetitions > 1);
    CHECK(rec.wall_time_ns >= 100'000'000u);
  }
  CHECK(r.warnings.empty());
  CHECK(r.records[0].variant == Variant::baseline);
  CHECK(r.records[2].variant == Variant::sve);
}

TEST_CASE("bench takes the median of at least five repetitions") {
  const auto model = grace_model();
  int calls = 0;
  std::vector<std::uint64_t> times = {300, 100, 500, 200, 400};
  BackendFactory factory = [&](const Workload&, Variant, std::uint64_t, double) {
    // The first call is the calibration probe; the rest are repetitions.
    const std::uint64_t ns = calls == 0 ? 1'000'000'000 : times[(calls - 1) % 5];
    ++calls;
    SyntheticWindow w{{{"INST_RETIRED", ns}, {"CPU_CYCLES", 7},
                       {"LL_CACHE_MISS_RD", 1}, {"MEM_ACCESS_RD", 2},
                       {"STALL_BACKEND", 3}, {"VFP_SPEC", 4}}, ns};
    return std::make_unique<SyntheticBackend>(std::vector<SyntheticWindow>{w});
  };
  BenchParams p;
  p.n = 32;
  p.variants = {Variant::baseline};
  auto r = run_bench(p, model, {1}, BackendKind::synthetic, factory);
  CHECK(calls == 6);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].wall_time_ns == 300);
  CHECK(r.records[0].counters.at("INST_RETIRED") == 300);
  CHECK(r.records[0].counters.at("CPU_CYCLES") == 7);
  REQUIRE(r.warnings.size() == 1);
}

TEST_CASE("noisy repetitions raise a warning") {
  CHECK(jitter_factor(0.1, 0) == 1.0);
  CHECK(jitter_factor(0.1, 1) == 1.1);
  CHECK(jitter_factor(0.1, 2) == 0.9);

  auto quiet = cli({"--backend", "synthetic", "bench", "--n", "128", "--synthetic-jitter", "0.02"});
  CHECK(quiet.code == 0);
  CHECK(quiet.err.find("standard deviation") == std::string::npos);

  auto noisy = cli({"--backend", "synthetic", "bench", "--n", "128", "--synthetic-jitter", "0.1"});
  CHECK(noisy.code == 0);
  CHECK(noisy.err.find("warning:") != std::string::npos);
  CHECK(noisy.err.find("standard deviation") != std::string::npos);
}

TEST_CASE("stream bench through the CLI") {
  auto r = cli({"--backend", "synthetic", "--threads", "1,4", "bench", "--kernel", "stream",
                "--n", "4096", "--op", "copy"});
  REQUIRE(r.code == 0);
  const auto records = load_measurements(r.out);
  CHECK(records.size() == 6);
  CHECK(records[0].kernel_name == "stream_copy_fp64");
  CHECK(records[3].threads == 4);
}

TEST_CASE("replay bench reproduces recorded measurements") {
  auto r = cli({"--backend", "replay", "bench", kSuite});
  REQUIRE(r.code == 0);
  CHECK(load_measurements(r.out) == load_measurements_file(kSuite));
}

TEST_CASE("analyze") {
  auto r = cli({"analyze", kSuite});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("QC simulator") != std::string::npos);

  auto csv = cli({"--format", "csv", "analyze", kSuite});
  std::size_t lines = 0;
  for (char c : csv.out) lines += c == '\n';
  CHECK(lines == 27);

  auto json = cli({"--format", "json", "analyze", kSuite});
  CHECK(load_analyses(json.out).size() == 26);

  auto empty = scratch("empty.json");
  std::ofstream(empty) << "[]\n";
  auto e = cli({"--format", "csv", "analyze", empty.string()});
  CHECK(e.code == 0);
  CHECK(std::count(e.out.begin(), e.out.end(), '\n') == 1);

  // A kernel without a baseline errors; the rest are analyzed.
  auto records = load_measurements_file(kSuite);
  records.erase(records.begin());  // YOLOv3 baseline at 1 thread
  auto partial = scratch("partial.json");
  std::ofstream(partial) << to_json(records);
  auto p = cli({"--format", "json", "analyze", partial.string()});
  CHECK(p.code == 0);
  CHECK(load_analyses(p.out).size() == 25);
  CHECK(p.err.find("no scalar reference") != std::string::npos);
}

TEST_CASE("classify accepts measurements or analyses") {
  auto from_measurements = cli({"--format", "csv", "classify", kSuite});
  REQUIRE(from_measurements.code == 0);
  auto analyses = scratch("analyses.json");
  REQUIRE(cli({"--format", "json", "--out", analyses.string(), "analyze", kSuite}).code == 0);
  auto from_analyses = cli({"--format", "csv", "classify", analyses.string()});
  CHECK(from_analyses.out == from_measurements.out);

  auto text = cli({"classify", kSuite});
  CHECK(text.out.find("72-thread") != std::string::npos);
}

TEST_CASE("threshold override flips a borderline kernel") {
  auto def = cli({"--format", "csv", "--threads", "1", "classify", kSuite});
  CHECK(def.out.find("STREAM,1,2,BandwidthBound") != std::string::npos);
  auto tight = cli({"--format", "csv", "--threads", "1", "classify", "--rllc-threshold", "0.1",
                    kSuite});
  CHECK(tight.out.find("STREAM,1,3,LatencyBound") != std::string::npos);
}

TEST_CASE("roofline output") {
  auto roofs = cli({"roofline"});
  REQUIRE(roofs.code == 0);
  CHECK(roofs.out.rfind("series,ai_flop_per_byte,gflops,label\n", 0) == 0);
  CHECK(roofs.out.find("kernel") == std::string::npos);

  auto svg = scratch("roofline.svg");
  auto r = cli({"--threads", "72", "roofline", "--svg", svg.string(), "--normalize", kSuite});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("DGEMM@72t") != std::string::npos);
  CHECK(slurp(svg).find("<svg") != std::string::npos);
  CHECK(cli({"--threads", "1,72", "roofline"}).code == kExitInputError);
}

TEST_CASE("output paths are checked") {
  CHECK(cli({"--out", "/nonexistent/dir/x.csv", "events"}).code == kExitInputError);
}
