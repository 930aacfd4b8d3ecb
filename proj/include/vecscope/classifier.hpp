// Copyright 2026 The vecscope Authors
// SPDX-License-Identifier: Apache-2.0

// Four-way decision tree for the performance impact of vectorization:
//
//   r_ins_reduction_sve < reduction_threshold      -> NotVectorized
//   ai_est >= AI_IRR                               -> Speedup
//     (warns when ai_est < AI_IRV: the vector roof turns it memory-bound)
//   r_llc <= rllc_threshold                        -> BandwidthBound
//   otherwise                                      -> LatencyBound

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vecscope/machine_model.hpp"
#include "vecscope/metrics.hpp"
#include "vecscope/roofline.hpp"

namespace vecscope {

enum class PerfClass { NotVectorized, BandwidthBound, LatencyBound, Speedup };

std::string_view to_string(PerfClass c);
std::optional<PerfClass> parse_perf_class(std::string_view s);

struct ClassifierConfig {
  double reduction_threshold = 1.2;
  // Unset: elen_bytes / cache_line_bytes of the analysis being classified.
  std::optional<double> rllc_threshold;
  bool use_vector_inflection_warning = true;
  // class_order[k] receives class number k + 1.
  std::array<PerfClass, 4> class_order = {PerfClass::NotVectorized, PerfClass::BandwidthBound,
                                          PerfClass::LatencyBound, PerfClass::Speedup};

  int class_number(PerfClass c) const;
};

// Throws DomainError for thresholds out of range or a non-permutation order.
void validate(const ClassifierConfig& config);

// Quantities compared on the path taken. Branches not reached stay empty.
struct Evidence {
  double r_ins_reduction = 0.0;
  double reduction_threshold = 0.0;
  std::optional<double> ai_est;
  std::optional<double> ai_irr;
  std::optional<double> ai_irv;
  std::optional<double> r_llc;
  std::optional<double> rllc_threshold;

  bool operator==(const Evidence&) const = default;
};

struct Classification {
  std::string kernel_name;
  int threads = 1;
  int elen_bits = 64;
  PerfClass label = PerfClass::NotVectorized;
  int class_number = 1;
  Evidence evidence;
  std::vector<std::string> warnings;

  bool operator==(const Classification&) const = default;
};

inline constexpr std::string_view kShiftedMemoryBoundWarning =
    "vectorization-shifted memory bound";

// Throws DomainError naming the missing field when r_ins_reduction_sve or
// (past branch 1) ai_est / r_llc are absent.
Classification classify(const KernelAnalysis& analysis, const RooflineConfig& config,
                        const ClassifierConfig& cconfig = {});

// Uses the analysis' own elen_bits and threads on `model`.
Classification classify(const KernelAnalysis& analysis, const MachineModel& model,
                        const ClassifierConfig& cconfig = {});

struct ClassificationError {
  std::size_t index = 0;
  std::string kernel_name;
  int threads = 0;
  std::string message;
};

struct ClassificationTable {
  std::vector<Classification> rows;
  std::vector<ClassificationError> errors;
};

ClassificationTable classify_suite(std::span<const KernelAnalysis> analyses,
                                   const MachineModel& model, const ClassifierConfig& cconfig = {});

// Kernel x thread-count grid of class numbers, followed by per-row evidence.
std::string to_text(const ClassificationTable& table);

// kernel,threads,class_number,label,r_ins_reduction,ai_est,ai_irr,ai_irv,r_llc,warnings
std::string to_csv(const ClassificationTable& table);

std::string to_json(const ClassificationTable& table);

}  // namespace vecscope
