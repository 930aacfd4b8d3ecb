// Copyright 2026 The vecscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "vecscope/measurement.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "vecscope/error.hpp"
#include "vecscope/machine_model.hpp"

namespace vecscope {

using nlohmann::json;

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::baseline: return "baseline";
    case Variant::asimd: return "asimd";
    case Variant::sve: return "sve";
  }
  return "baseline";
}

std::optional<Variant> parse_variant(std::string_view s) {
  if (s == "baseline") return Variant::baseline;
  if (s == "asimd") return Variant::asimd;
  if (s == "sve") return Variant::sve;
  return std::nullopt;
}

Variant build_variant() {
#if defined(__ARM_FEATURE_SVE)
  return Variant::sve;
#elif defined(__ARM_NEON)
  return Variant::asimd;
#else
  return Variant::baseline;
#endif
}

std::optional<std::uint64_t> MeasurementRecord::counter(std::string_view name) const {
  auto it = counters.find(std::string(name));
  if (it == counters.end()) return std::nullopt;
  return it->second;
}

void validate(const MeasurementRecord& r) {
  if (r.kernel_name.empty()) throw DomainError("kernel_name: must not be empty");
  if (r.threads < 1) throw DomainError(fmt::format("threads: must be >= 1, got {}", r.threads));
  if (r.elen_bits != 16 && r.elen_bits != 32 && r.elen_bits != 64)
    throw DomainError(fmt::format("elen_bits: must be 16, 32 or 64, got {}", r.elen_bits));
  if (r.wall_time_ns == 0) throw DomainError("wall_time_ns: must be > 0");
  if (r.repetitions == 0) throw DomainError("repetitions: must be >= 1");
  for (std::string_view required : {events::kInstRetired, events::kCpuCycles}) {
    if (!r.counter(required))
      throw DomainError(fmt::format("counters: missing required event {}", required));
  }
}

namespace {

constexpr std::array kRecordKeys = {"kernel_name", "variant",      "threads",  "elen_bits",
                                    "repetitions", "wall_time_ns", "counters"};

MeasurementRecord parse_record(const json& obj, std::size_t index) {
  auto fail = [&](std::string_view field, std::string_view why) -> ParseError {
    return ParseError(fmt::format("measurement record {}: field '{}': {}", index, field, why));
  };
  if (!obj.is_object()) throw ParseError(fmt::format("measurement record {}: not an object", index));
  for (const auto& [key, _] : obj.items()) {
    if (std::find(kRecordKeys.begin(), kRecordKeys.end(), key) == kRecordKeys.end())
      throw fail(key, "unknown key");
  }
  auto field = [&](const char* key) -> const json& {
    if (!obj.contains(key)) throw fail(key, "missing");
    return obj.at(key);
  };
  auto integer = [&](const char* key) -> std::int64_t {
    const json& v = field(key);
    if (!v.is_number_integer()) throw fail(key, "must be an integer");
    return v.get<std::int64_t>();
  };

  MeasurementRecord r;
  const json& name = field("kernel_name");
  if (!name.is_string()) throw fail("kernel_name", "must be a string");
  r.kernel_name = name.get<std::string>();

  const json& variant = field("variant");
  if (!variant.is_string()) throw fail("variant", "must be a string");
  auto v = parse_variant(variant.get<std::string>());
  if (!v) throw fail("variant", "must be one of baseline, asimd, sve");
  r.variant = *v;

  std::int64_t threads = integer("threads");
  std::int64_t elen = integer("elen_bits");
  std::int64_t reps = integer("repetitions");
  std::int64_t wall = integer("wall_time_ns");
  if (threads < 1) throw fail("threads", "must be >= 1");
  if (elen != 16 && elen != 32 && elen != 64) throw fail("elen_bits", "must be 16, 32 or 64");
  if (reps < 1) throw fail("repetitions", "must be >= 1");
  if (wall <= 0) throw fail("wall_time_ns", "must be > 0");
  r.threads = static_cast<int>(threads);
  r.elen_bits = static_cast<int>(elen);
  r.repetitions = static_cast<std::uint64_t>(reps);
  r.wall_time_ns = static_cast<std::uint64_t>(wall);

  const json& counters = field("counters");
  if (!counters.is_object()) throw fail("counters", "must be an object");
  for (const auto& [event, value] : counters.items()) {
    if (!value.is_number_integer() || value.get<std::int64_t>() < 0)
      throw fail(fmt::format("counters.{}", event), "must be a non-negative integer");
    r.counters[event] = value.get<std::uint64_t>();
  }
  for (std::string_view required : {events::kInstRetired, events::kCpuCycles}) {
    if (!r.counter(required))
      throw fail(fmt::format("counters.{}", required), "required event missing");
  }
  return r;
}

}  // namespace

std::vector<MeasurementRecord> load_measurements(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("measurement document: malformed JSON: {}", e.what()));
  }
  if (!doc.is_array()) throw ParseError("measurement document: top level must be an array");
  std::vector<MeasurementRecord> out;
  out.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) out.push_back(parse_record(doc[i], i));
  return out;
}

std::vector<MeasurementRecord> load_measurements_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open measurement file '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return load_measurements(buf.str());
}

std::string to_json(std::span<const MeasurementRecord> records) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json counters = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.counters) counters[k] = v;
    doc.push_back({
        {"kernel_name", r.kernel_name},
        {"variant", std::string(to_string(r.variant))},
        {"threads", r.threads},
        {"elen_bits", r.elen_bits},
        {"repetitions", r.repetitions},
        {"wall_time_ns", r.wall_time_ns},
        {"counters", counters},
    });
  }
  return doc.dump(2) + "\n";
}

}  // namespace vecscope
