// Copyright 2026 The vecscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vecscope/machine_model.hpp"
#include "vecscope/measurement.hpp"

namespace vecscope {

// Derived vectorization metrics for one kernel at one thread count.
struct KernelAnalysis {
  std::string kernel_name;
  int threads = 1;
  int elen_bits = 64;
  double vb = 1.0;
  std::optional<double> r_ins_reduction_sve;
  std::optional<double> r_ins_reduction_asimd;
  std::optional<double> speedup_sve;
  std::optional<double> speedup_asimd;
  // FLOP/byte; +infinity when the baseline run had no LLC read misses.
  std::optional<double> ai_est;
  std::optional<double> r_llc;

  bool operator==(const KernelAnalysis&) const = default;
};

inline constexpr double kUnboundedAi = std::numeric_limits<double>::infinity();

inline bool is_unbounded(double ai) { return ai == kUnboundedAi; }

// vlen_bits / elen_bits. Elements wider than the register are rejected.
double vectorization_bound(int vlen_bits, int elen_bits);

// Retired instructions of the scalar build over those of a vectorized build.
double instruction_reduction(double ins_nonvec, double ins_vec);

double speedup(double time_nonvec, double time_vec);

// fp_ops / (llc_read_misses * cache_line_bytes). Each read miss moves one
// line. Zero misses yield kUnboundedAi.
double estimated_ai(std::uint64_t fp_ops, std::uint64_t llc_read_misses, int cache_line_bytes);

// Throws DataQualityError when misses exceed accesses or accesses are zero.
double llc_miss_ratio(std::uint64_t llc_read_misses, std::uint64_t mem_access_rd);

// `records` must all describe the same kernel and thread count. The baseline
// record is mandatory; FP ops and LLC counts are taken from it so that the
// intensity reflects the work done, not the instruction encoding.
KernelAnalysis analyze(std::span<const MeasurementRecord> records, const MachineModel& model);

// Result of analyzing one (kernel, threads) group out of a larger document.
struct AnalysisOutcome {
  std::string kernel_name;
  int threads = 1;
  std::optional<KernelAnalysis> analysis;
  std::string error;  // set when analysis is empty
};

// Groups records by (kernel_name, threads) in first-appearance order and
// analyzes each group independently.
std::vector<AnalysisOutcome> analyze_all(std::span<const MeasurementRecord> records,
                                         const MachineModel& model);

std::string to_json(std::span<const KernelAnalysis> analyses);
std::vector<KernelAnalysis> load_analyses(std::string_view json_text);

}  // namespace vecscope
