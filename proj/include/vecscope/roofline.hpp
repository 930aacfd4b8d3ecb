// Copyright 2026 The vecscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vecscope/machine_model.hpp"
#include "vecscope/metrics.hpp"

namespace vecscope {

// Where an arithmetic intensity sits relative to the two ridge points.
// Boundaries are left-closed: [AI_IRR, AI_IRV) is the transition band.
enum class Region { memory_bound, transition, compute_bound };

std::string_view to_string(Region r);

struct RooflineConfig {
  MachineModel model;
  int elen_bits = 64;
  int threads = 1;
};

void validate(const RooflineConfig& config);

// Scalar ridge point: peak scalar GFLOP/s over bandwidth at config.threads.
double inflection_scalar(const RooflineConfig& config);

// Vector ridge point: the scalar ridge scaled by vlen/elen.
double inflection_vector(const RooflineConfig& config);

// Peak of the vector roof, vlen/elen times the scalar peak.
double peak_vector_flops(const RooflineConfig& config);

Region region_of(const RooflineConfig& config, double ai);

struct Attainable {
  double scalar_gflops = 0.0;
  double vector_gflops = 0.0;
  Region region = Region::memory_bound;
};

// ai may be kUnboundedAi, which sits on both plateaus.
Attainable attainable(const RooflineConfig& config, double ai);

struct RooflinePoint {
  std::string kernel_name;
  int threads = 1;
  double ai = 0.0;
  double attainable_scalar = 0.0;
  double attainable_vector = 0.0;
  Region region = Region::memory_bound;
};

// One CSV line.
struct RooflineRow {
  std::string series;
  double ai = 0.0;
  double gflops = 0.0;
  std::string label;
};

struct RooflineDataset {
  RooflineConfig config;
  bool normalized = false;
  double scale = 1.0;  // multiplier applied to every throughput value
  double ai_irr = 0.0;
  double ai_irv = 0.0;
  double ai_min = 0.0;  // plotted x range
  double ai_max = 0.0;
  std::vector<RooflinePoint> points;
  std::vector<RooflineRow> rows;
};

// Roof polylines, ridge markers and one point per analysis carrying an
// ai_est. With `normalize` every throughput is divided by the scalar peak at
// config.threads, so the scalar plateau is 1.
RooflineDataset roofline_dataset(const RooflineConfig& config,
                                 std::span<const KernelAnalysis> analyses, bool normalize);

// Columns: series,ai_flop_per_byte,gflops,label
std::string to_csv(const RooflineDataset& dataset);

// Standalone log-log SVG chart.
std::string to_svg(const RooflineDataset& dataset);

}  // namespace vecscope
