// Copyright 2026 The vecscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vecscope {

// Static description of the target platform. Immutable once validated.
struct MachineModel {
  std::string name;
  int vlen_bits = 0;
  double freq_mhz = 0.0;
  int fpu_pipelines = 0;
  double flops_per_pipeline_cycle = 2.0;  // FMA counted as two FLOPs
  double bw_single_gbs = 0.0;
  double bw_peak_gbs = 0.0;
  int max_threads = 0;
  int cache_line_bytes = 0;
  std::uint64_t llc_bytes = 0;

  bool operator==(const MachineModel&) const = default;
};

// 72-core Neoverse V2 with 128-bit SVE, STREAM triad 30 / 250 GB/s.
MachineModel grace_model();

// Throws DomainError describing the first violated invariant.
void validate(const MachineModel& model);

// Sustained memory bandwidth in GB/s with `threads` active threads:
// min(threads * bw_single, bw_peak).
double bandwidth_at(const MachineModel& model, int threads);

// Scalar peak GFLOP/s across `threads` cores.
double peak_scalar_flops(const MachineModel& model, int threads);

// `source` is either a built-in profile name ("grace") or a JSON document.
MachineModel load_machine_model(std::string_view source);

// Accepts a built-in profile name or a path to a JSON file.
MachineModel resolve_machine_model(const std::string& name_or_path);

std::string to_json(const MachineModel& model);

// ---------------------------------------------------------------------------
// PMU event registry
// ---------------------------------------------------------------------------

struct PmuEvent {
  std::uint64_t hexcode = 0;
  std::string_view name;
  std::string_view description;
  bool reliable = true;
  std::string_view note;  // why an event is flagged unreliable
};

namespace events {
inline constexpr std::string_view kInstRetired = "INST_RETIRED";
inline constexpr std::string_view kLlCacheMissRd = "LL_CACHE_MISS_RD";
inline constexpr std::string_view kMemAccessRd = "MEM_ACCESS_RD";
inline constexpr std::string_view kStallBackend = "STALL_BACKEND";
inline constexpr std::string_view kCpuCycles = "CPU_CYCLES";
inline constexpr std::string_view kVfpSpec = "VFP_SPEC";
}  // namespace events

std::span<const PmuEvent> event_registry();

// nullptr when unknown. Name lookup is exact (upper case).
const PmuEvent* find_event(std::string_view name);
const PmuEvent* find_event(std::uint64_t hexcode);

// Up to six events scheduled together on one PMU.
class EventSet {
 public:
  static constexpr std::size_t kMaxEvents = 6;

  // Throws DomainError when empty or an event name is unknown or repeated,
  // CapacityError above kMaxEvents.
  static EventSet from_names(std::span<const std::string> names);
  static EventSet from_names(std::initializer_list<std::string_view> names);

  // INST_RETIRED, LL_CACHE_MISS_RD, MEM_ACCESS_RD, STALL_BACKEND,
  // CPU_CYCLES, VFP_SPEC.
  static EventSet default_set();

  std::span<const PmuEvent* const> events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool contains(std::string_view name) const;
  // Names of requested events flagged unreliable in the registry.
  std::vector<std::string> unreliable_names() const;

 private:
  explicit EventSet(std::vector<const PmuEvent*> events) : events_(std::move(events)) {}

  std::vector<const PmuEvent*> events_;
};

}  // namespace vecscope
