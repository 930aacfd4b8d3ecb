// Copyright 2026 The vecscope Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vecscope {

// Build flavour a measurement was taken with.
enum class Variant { baseline, asimd, sve };

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view s);

// Variant the running binary was compiled as (sve > asimd > baseline).
Variant build_variant();

// Counter totals and wall time for one (kernel, variant, thread-count) run.
struct MeasurementRecord {
  std::string kernel_name;
  Variant variant = Variant::baseline;
  int threads = 1;
  int elen_bits = 64;
  std::map<std::string, std::uint64_t> counters;
  std::uint64_t wall_time_ns = 0;
  std::uint64_t repetitions = 1;

  bool operator==(const MeasurementRecord&) const = default;

  std::optional<std::uint64_t> counter(std::string_view name) const;
};

// Throws DomainError naming the offending field.
void validate(const MeasurementRecord& record);

// Parses a measurement document (a JSON array of records). Schema violations
// raise ParseError naming the record index and the field.
std::vector<MeasurementRecord> load_measurements(std::string_view json_text);
std::vector<MeasurementRecord> load_measurements_file(const std::filesystem::path& path);

std::string to_json(std::span<const MeasurementRecord> records);

}  // namespace vecscope
