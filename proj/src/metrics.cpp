// Copyright 2026 The vecscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "vecscope/metrics.hpp"

#include <algorithm>
#include <array>
#include <map>

#include <fmt/format.h>
#include <json.hpp>

#include "vecscope/error.hpp"

namespace vecscope {

double vectorization_bound(int vlen_bits, int elen_bits) {
  if (vlen_bits <= 0 || elen_bits <= 0)
    throw DomainError(fmt::format("vector and element widths must be positive ({}, {})",
                                  vlen_bits, elen_bits));
  if (elen_bits > vlen_bits)
    throw DomainError(fmt::format("element width {} exceeds vector length {}", elen_bits,
                                  vlen_bits));
  return static_cast<double>(vlen_bits) / static_cast<double>(elen_bits);
}

double instruction_reduction(double ins_nonvec, double ins_vec) {
  if (!(ins_nonvec > 0) || !(ins_vec > 0))
    throw DomainError(fmt::format("instruction counts must be positive ({}, {})", ins_nonvec,
                                  ins_vec));
  return ins_nonvec / ins_vec;
}

double speedup(double time_nonvec, double time_vec) {
  if (!(time_nonvec > 0) || !(time_vec > 0))
    throw DomainError(fmt::format("times must be positive ({}, {})", time_nonvec, time_vec));
  return time_nonvec / time_vec;
}

double estimated_ai(std::uint64_t fp_ops, std::uint64_t llc_read_misses, int cache_line_bytes) {
  if (cache_line_bytes <= 0) throw DomainError("cache_line_bytes must be positive");
  if (llc_read_misses == 0) return kUnboundedAi;
  return static_cast<double>(fp_ops) /
         (static_cast<double>(llc_read_misses) * static_cast<double>(cache_line_bytes));
}

double llc_miss_ratio(std::uint64_t llc_read_misses, std::uint64_t mem_access_rd) {
  if (mem_access_rd == 0)
    throw DataQualityError("MEM_ACCESS_RD is zero; LLC miss ratio undefined");
  if (llc_read_misses > mem_access_rd)
    throw DataQualityError(fmt::format(
        "LL_CACHE_MISS_RD ({}) exceeds MEM_ACCESS_RD ({}); counters are inconsistent",
        llc_read_misses, mem_access_rd));
  return static_cast<double>(llc_read_misses) / static_cast<double>(mem_access_rd);
}

namespace {

double per_rep(std::uint64_t value, const MeasurementRecord& r) {
  return static_cast<double>(value) / static_cast<double>(r.repetitions);
}

}  // namespace

KernelAnalysis analyze(std::span<const MeasurementRecord> records, const MachineModel& model) {
  if (records.empty()) throw DomainError("no records to analyze");

  const MeasurementRecord* base = nullptr;
  const MeasurementRecord* sve = nullptr;
  const MeasurementRecord* asimd = nullptr;
  const auto& first = records.front();
  for (const auto& r : records) {
    if (r.kernel_name != first.kernel_name || r.threads != first.threads)
      throw DomainError(fmt::format("records mix ({}, {} threads) and ({}, {} threads)",
                                    first.kernel_name, first.threads, r.kernel_name,
                                    r.threads));
    if (r.elen_bits != first.elen_bits)
      throw DomainError(fmt::format("'{}': variants disagree on elen_bits ({} vs {})",
                                    r.kernel_name, first.elen_bits, r.elen_bits));
    const MeasurementRecord** slot = r.variant == Variant::baseline ? &base
                                     : r.variant == Variant::sve    ? &sve
                                                                    : &asimd;
    if (*slot != nullptr)
      throw DomainError(fmt::format("'{}': duplicate {} record at {} threads", r.kernel_name,
                                    to_string(r.variant), r.threads));
    *slot = &r;
  }
  if (base == nullptr)
    throw DomainError(
        fmt::format("'{}' at {} threads: no scalar reference (baseline record missing)",
                    first.kernel_name, first.threads));

  KernelAnalysis a;
  a.kernel_name = base->kernel_name;
  a.threads = base->threads;
  a.elen_bits = base->elen_bits;
  a.vb = vectorization_bound(model.vlen_bits, base->elen_bits);

  const double base_ins = per_rep(*base->counter(events::kInstRetired), *base);
  const double base_time = per_rep(base->wall_time_ns, *base);
  auto fill = [&](const MeasurementRecord* vec, std::optional<double>& reduction,
                  std::optional<double>& gain) {
    if (vec == nullptr) return;
    reduction = instruction_reduction(base_ins, per_rep(*vec->counter(events::kInstRetired), *vec));
    gain = speedup(base_time, per_rep(vec->wall_time_ns, *vec));
  };
  fill(sve, a.r_ins_reduction_sve, a.speedup_sve);
  fill(asimd, a.r_ins_reduction_asimd, a.speedup_asimd);

  auto fp = base->counter(events::kVfpSpec);
  auto misses = base->counter(events::kLlCacheMissRd);
  auto reads = base->counter(events::kMemAccessRd);
  if (fp && misses) a.ai_est = estimated_ai(*fp, *misses, model.cache_line_bytes);
  if (misses && reads) a.r_llc = llc_miss_ratio(*misses, *reads);
  return a;
}

std::vector<AnalysisOutcome> analyze_all(std::span<const MeasurementRecord> records,
                                         const MachineModel& model) {
  std::vector<std::pair<std::string, int>> order;
  std::map<std::pair<std::string, int>, std::vector<MeasurementRecord>> groups;
  for (const auto& r : records) {
    auto key = std::make_pair(r.kernel_name, r.threads);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(r);
  }
  std::vector<AnalysisOutcome> out;
  out.reserve(order.size());
  for (const auto& key : order) {
    AnalysisOutcome o;
    o.kernel_name = key.first;
    o.threads = key.second;
    try {
      o.analysis = analyze(groups.at(key), model);
    } catch (const Error& e) {
      o.error = e.what();
    }
    out.push_back(std::move(o));
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json opt(const std::optional<double>& v) {
  if (!v) return nullptr;
  if (is_unbounded(*v)) return "unbounded";
  return *v;
}

constexpr std::array kAnalysisKeys = {
    "kernel_name",  "threads",       "elen_bits", "vb",     "r_ins_reduction_sve",
    "r_ins_reduction_asimd", "speedup_sve", "speedup_asimd", "ai_est", "r_llc",
};

}  // namespace

std::string to_json(std::span<const KernelAnalysis> analyses) {
  ordered_json doc = ordered_json::array();
  for (const auto& a : analyses) {
    doc.push_back({
        {"kernel_name", a.kernel_name},
        {"threads", a.threads},
        {"elen_bits", a.elen_bits},
        {"vb", a.vb},
        {"r_ins_reduction_sve", opt(a.r_ins_reduction_sve)},
        {"r_ins_reduction_asimd", opt(a.r_ins_reduction_asimd)},
        {"speedup_sve", opt(a.speedup_sve)},
        {"speedup_asimd", opt(a.speedup_asimd)},
        {"ai_est", opt(a.ai_est)},
        {"r_llc", opt(a.r_llc)},
    });
  }
  return doc.dump(2) + "\n";
}

std::vector<KernelAnalysis> load_analyses(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("analysis document: malformed JSON: {}", e.what()));
  }
  if (!doc.is_array()) throw ParseError("analysis document: top level must be an array");
  std::vector<KernelAnalysis> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& o = doc[i];
    auto fail = [&](std::string_view field, std::string_view why) {
      return ParseError(fmt::format("analysis {}: field '{}': {}", i, field, why));
    };
    if (!o.is_object()) throw ParseError(fmt::format("analysis {}: not an object", i));
    for (const auto& [key, _] : o.items())
      if (std::find(kAnalysisKeys.begin(), kAnalysisKeys.end(), key) == kAnalysisKeys.end())
        throw fail(key, "unknown key");
    auto number = [&](const char* key) -> std::optional<double> {
      if (!o.contains(key) || o.at(key).is_null()) return std::nullopt;
      const json& v = o.at(key);
      if (v.is_string() && v.get<std::string>() == "unbounded") return kUnboundedAi;
      if (!v.is_number()) throw fail(key, "must be a number or null");
      return v.get<double>();
    };
    KernelAnalysis a;
    if (!o.contains("kernel_name") || !o.at("kernel_name").is_string())
      throw fail("kernel_name", "must be a string");
    a.kernel_name = o.at("kernel_name").get<std::string>();
    for (const char* key : {"threads", "elen_bits"})
      if (!o.contains(key) || !o.at(key).is_number_integer()) throw fail(key, "must be an integer");
    a.threads = o.at("threads").get<int>();
    a.elen_bits = o.at("elen_bits").get<int>();
    auto vb = number("vb");
    if (!vb) throw fail("vb", "missing");
    a.vb = *vb;
    a.r_ins_reduction_sve = number("r_ins_reduction_sve");
    a.r_ins_reduction_asimd = number("r_ins_reduction_asimd");
    a.speedup_sve = number("speedup_sve");
    a.speedup_asimd = number("speedup_asimd");
    a.ai_est = number("ai_est");
    a.r_llc = number("r_llc");
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace vecscope
