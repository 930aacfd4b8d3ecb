// Copyright 2026 The vecscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "vecscope/machine_model.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "vecscope/error.hpp"

namespace vecscope {

using nlohmann::json;

MachineModel grace_model() {
  MachineModel m;
  m.name = "grace";
  m.vlen_bits = 128;
  m.freq_mhz = 3447.0;
  m.fpu_pipelines = 4;
  m.flops_per_pipeline_cycle = 2.0;
  m.bw_single_gbs = 30.0;
  m.bw_peak_gbs = 250.0;
  m.max_threads = 72;
  m.cache_line_bytes = 64;
  m.llc_bytes = 117ull * 1024 * 1024;
  return m;
}

void validate(const MachineModel& m) {
  auto fail = [&](const std::string& why) {
    throw DomainError(fmt::format("machine model '{}': {}", m.name, why));
  };
  if (m.vlen_bits < 128 || m.vlen_bits % 128 != 0)
    fail(fmt::format("vlen_bits must be a positive multiple of 128, got {}", m.vlen_bits));
  if (!(m.freq_mhz > 0)) fail("freq_mhz must be > 0");
  if (m.fpu_pipelines <= 0) fail("fpu_pipelines must be > 0");
  if (!(m.flops_per_pipeline_cycle > 0)) fail("flops_per_pipeline_cycle must be > 0");
  if (!(m.bw_single_gbs > 0)) fail("bw_single_gbs must be > 0");
  if (!(m.bw_peak_gbs > 0)) fail("bw_peak_gbs must be > 0");
  if (m.bw_single_gbs > m.bw_peak_gbs)
    fail(fmt::format("bw_single_gbs ({}) exceeds bw_peak_gbs ({})", m.bw_single_gbs,
                     m.bw_peak_gbs));
  if (m.max_threads <= 0) fail("max_threads must be > 0");
  if (m.cache_line_bytes <= 0) fail("cache_line_bytes must be > 0");
  if (m.llc_bytes == 0) fail("llc_bytes must be > 0");
}

static void check_threads(const MachineModel& m, int threads) {
  if (threads < 1 || threads > m.max_threads)
    throw DomainError(
        fmt::format("thread count {} outside [1, {}] for '{}'", threads, m.max_threads, m.name));
}

double bandwidth_at(const MachineModel& m, int threads) {
  check_threads(m, threads);
  return std::min(threads * m.bw_single_gbs, m.bw_peak_gbs);
}

double peak_scalar_flops(const MachineModel& m, int threads) {
  check_threads(m, threads);
  return m.freq_mhz / 1000.0 * m.fpu_pipelines * m.flops_per_pipeline_cycle * threads;
}

namespace {

constexpr std::array kModelKeys = {
    "name",          "vlen_bits",   "freq_mhz",    "fpu_pipelines",    "flops_per_pipeline_cycle",
    "bw_single_gbs", "bw_peak_gbs", "max_threads", "cache_line_bytes", "llc_bytes",
};

template <typename T>
T require(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(fmt::format("machine model: missing key '{}'", key));
  const json& v = doc.at(key);
  if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw ParseError(fmt::format("machine model: '{}' must be a string", key));
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw ParseError(fmt::format("machine model: '{}' must be a number", key));
  } else {
    if (!v.is_number_integer())
      throw ParseError(fmt::format("machine model: '{}' must be an integer", key));
    if (std::is_unsigned_v<T> && v.get<std::int64_t>() < 0)
      throw ParseError(fmt::format("machine model: '{}' must be non-negative", key));
  }
  return v.get<T>();
}

}  // namespace

MachineModel load_machine_model(std::string_view source) {
  if (source == "grace") return grace_model();

  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("machine model: malformed JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw ParseError("machine model: document must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (std::find(kModelKeys.begin(), kModelKeys.end(), key) == kModelKeys.end())
      throw ParseError(fmt::format("machine model: unknown key '{}'", key));
  }

  MachineModel m;
  m.name = require<std::string>(doc, "name");
  m.vlen_bits = require<int>(doc, "vlen_bits");
  m.freq_mhz = require<double>(doc, "freq_mhz");
  m.fpu_pipelines = require<int>(doc, "fpu_pipelines");
  if (doc.contains("flops_per_pipeline_cycle"))
    m.flops_per_pipeline_cycle = require<double>(doc, "flops_per_pipeline_cycle");
  m.bw_single_gbs = require<double>(doc, "bw_single_gbs");
  m.bw_peak_gbs = require<double>(doc, "bw_peak_gbs");
  m.max_threads = require<int>(doc, "max_threads");
  m.cache_line_bytes = require<int>(doc, "cache_line_bytes");
  m.llc_bytes = require<std::uint64_t>(doc, "llc_bytes");

  try {
    validate(m);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
  return m;
}

MachineModel resolve_machine_model(const std::string& name_or_path) {
  if (name_or_path == "grace") return grace_model();
  std::ifstream in(name_or_path);
  if (!in)
    throw ParseError(fmt::format("machine model '{}' is neither a built-in profile nor a "
                                 "readable file",
                                 name_or_path));
  std::stringstream buf;
  buf << in.rdbuf();
  return load_machine_model(buf.str());
}

std::string to_json(const MachineModel& m) {
  nlohmann::ordered_json doc = {
      {"name", m.name},
      {"vlen_bits", m.vlen_bits},
      {"freq_mhz", m.freq_mhz},
      {"fpu_pipelines", m.fpu_pipelines},
      {"flops_per_pipeline_cycle", m.flops_per_pipeline_cycle},
      {"bw_single_gbs", m.bw_single_gbs},
      {"bw_peak_gbs", m.bw_peak_gbs},
      {"max_threads", m.max_threads},
      {"cache_line_bytes", m.cache_line_bytes},
      {"llc_bytes", m.llc_bytes},
  };
  return doc.dump(2);
}

// ---------------------------------------------------------------------------
// Event registry
// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kUnstable =
    "validation showed run-to-run variance too high for metric computation";

constexpr std::array<PmuEvent, 9> kRegistry = {{
    {0x08, "INST_RETIRED", "Instruction architecturally executed", true, ""},
    {0x37, "LL_CACHE_MISS_RD", "Last level cache miss, read", true, ""},
    {0x66, "MEM_ACCESS_RD", "Data memory access, read", true, ""},
    {0x24, "STALL_BACKEND", "Cycles with no operation issued due to backend", true, ""},
    {0x11, "CPU_CYCLES", "Cycles", true, ""},
    {0x75, "VFP_SPEC", "Floating-point operation speculatively executed", true, ""},
    {0x4005, "STALL_BACKEND_MEM", "Backend stall cycles due to memory resources", false,
     kUnstable},
    {0x400B, "L3D_CACHE_LMISS_RD", "Level 3 data cache long-latency read miss", false,
     kUnstable},
    {0x8006, "SVE_INST_SPEC", "SVE instruction speculatively executed", false,
     "does not reflect the end-to-end instruction reduction"},
}};

}  // namespace

std::span<const PmuEvent> event_registry() { return kRegistry; }

const PmuEvent* find_event(std::string_view name) {
  auto it = std::find_if(kRegistry.begin(), kRegistry.end(),
                         [&](const PmuEvent& e) { return e.name == name; });
  return it == kRegistry.end() ? nullptr : &*it;
}

const PmuEvent* find_event(std::uint64_t hexcode) {
  auto it = std::find_if(kRegistry.begin(), kRegistry.end(),
                         [&](const PmuEvent& e) { return e.hexcode == hexcode; });
  return it == kRegistry.end() ? nullptr : &*it;
}

EventSet EventSet::from_names(std::span<const std::string> names) {
  if (names.empty()) throw DomainError("event set must contain at least one event");
  if (names.size() > kMaxEvents)
    throw CapacityError(fmt::format(
        "{} events requested but at most {} PMU counters can be collected simultaneously",
        names.size(), kMaxEvents));
  std::vector<const PmuEvent*> resolved;
  std::set<std::string_view> seen;
  for (const auto& n : names) {
    const PmuEvent* e = find_event(std::string_view(n));
    if (e == nullptr) throw DomainError(fmt::format("unknown PMU event '{}'", n));
    if (!seen.insert(e->name).second)
      throw DomainError(fmt::format("PMU event '{}' listed twice", n));
    resolved.push_back(e);
  }
  return EventSet(std::move(resolved));
}

EventSet EventSet::from_names(std::initializer_list<std::string_view> names) {
  std::vector<std::string> owned(names.begin(), names.end());
  return from_names(std::span<const std::string>(owned));
}

EventSet EventSet::default_set() {
  return from_names({events::kInstRetired, events::kLlCacheMissRd, events::kMemAccessRd,
                     events::kStallBackend, events::kCpuCycles, events::kVfpSpec});
}

bool EventSet::contains(std::string_view name) const {
  return std::any_of(events_.begin(), events_.end(),
                     [&](const PmuEvent* e) { return e->name == name; });
}

std::vector<std::string> EventSet::unreliable_names() const {
  std::vector<std::string> out;
  for (const PmuEvent* e : events_)
    if (!e->reliable) out.emplace_back(e->name);
  return out;
}

}  // namespace vecscope
