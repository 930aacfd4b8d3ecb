// Copyright 2026 The vecscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "vecscope/classifier.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "vecscope/error.hpp"

namespace vecscope {

std::string_view to_string(PerfClass c) {
  switch (c) {
    case PerfClass::NotVectorized: return "NotVectorized";
    case PerfClass::BandwidthBound: return "BandwidthBound";
    case PerfClass::LatencyBound: return "LatencyBound";
    case PerfClass::Speedup: return "Speedup";
  }
  return "NotVectorized";
}

std::optional<PerfClass> parse_perf_class(std::string_view s) {
  for (PerfClass c : {PerfClass::NotVectorized, PerfClass::BandwidthBound,
                      PerfClass::LatencyBound, PerfClass::Speedup})
    if (to_string(c) == s) return c;
  return std::nullopt;
}

int ClassifierConfig::class_number(PerfClass c) const {
  auto it = std::find(class_order.begin(), class_order.end(), c);
  return static_cast<int>(it - class_order.begin()) + 1;
}

void validate(const ClassifierConfig& c) {
  if (!(c.reduction_threshold > 1.0))
    throw DomainError(fmt::format("reduction_threshold must be > 1, got {}", c.reduction_threshold));
  if (c.rllc_threshold && !(*c.rllc_threshold > 0.0 && *c.rllc_threshold < 1.0))
    throw DomainError(fmt::format("rllc_threshold must lie in (0, 1), got {}", *c.rllc_threshold));
  std::set<PerfClass> seen(c.class_order.begin(), c.class_order.end());
  if (seen.size() != c.class_order.size())
    throw DomainError("class_order must list each of the four classes exactly once");
}

Classification classify(const KernelAnalysis& a, const RooflineConfig& config,
                        const ClassifierConfig& cc) {
  validate(cc);
  auto missing = [&](std::string_view field) {
    return DomainError(fmt::format("'{}' at {} threads: {} is required for classification",
                                   a.kernel_name, a.threads, field));
  };
  if (!a.r_ins_reduction_sve) throw missing("r_ins_reduction_sve");

  Classification c;
  c.kernel_name = a.kernel_name;
  c.threads = a.threads;
  c.elen_bits = a.elen_bits;
  c.evidence.r_ins_reduction = *a.r_ins_reduction_sve;
  c.evidence.reduction_threshold = cc.reduction_threshold;

  auto finish = [&](PerfClass label) {
    c.label = label;
    c.class_number = cc.class_number(label);
    return c;
  };

  if (*a.r_ins_reduction_sve < cc.reduction_threshold) return finish(PerfClass::NotVectorized);

  if (!a.ai_est) throw missing("ai_est");
  const double irr = inflection_scalar(config);
  const double irv = inflection_vector(config);
  c.evidence.ai_est = *a.ai_est;
  c.evidence.ai_irr = irr;
  if (*a.ai_est >= irr) {
    c.evidence.ai_irv = irv;
    if (cc.use_vector_inflection_warning && *a.ai_est < irv)
      c.warnings.emplace_back(kShiftedMemoryBoundWarning);
    return finish(PerfClass::Speedup);
  }

  if (!a.r_llc) throw missing("r_llc");
  const double threshold =
      cc.rllc_threshold.value_or(static_cast<double>(a.elen_bits) / 8.0 /
                                 static_cast<double>(config.model.cache_line_bytes));
  c.evidence.r_llc = *a.r_llc;
  c.evidence.rllc_threshold = threshold;
  return finish(*a.r_llc <= threshold ? PerfClass::BandwidthBound : PerfClass::LatencyBound);
}

Classification classify(const KernelAnalysis& a, const MachineModel& model,
                        const ClassifierConfig& cc) {
  return classify(a, RooflineConfig{model, a.elen_bits, a.threads}, cc);
}

ClassificationTable classify_suite(std::span<const KernelAnalysis> analyses,
                                   const MachineModel& model, const ClassifierConfig& cc) {
  ClassificationTable t;
  for (std::size_t i = 0; i < analyses.size(); ++i) {
    try {
      t.rows.push_back(classify(analyses[i], model, cc));
    } catch (const Error& e) {
      t.errors.push_back({i, analyses[i].kernel_name, analyses[i].threads, e.what()});
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

std::string num(const std::optional<double>& v) {
  if (!v) return "";
  if (is_unbounded(*v)) return "unbounded";
  return fmt::format("{:.6g}", *v);
}

std::string joined(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += sep;
    out += s;
  }
  return out;
}

}  // namespace

std::string to_text(const ClassificationTable& t) {
  std::vector<std::string> kernels;
  std::set<int> thread_counts;
  std::map<std::pair<std::string, int>, int> cell;
  for (const auto& r : t.rows) {
    if (std::find(kernels.begin(), kernels.end(), r.kernel_name) == kernels.end())
      kernels.push_back(r.kernel_name);
    thread_counts.insert(r.threads);
    cell[{r.kernel_name, r.threads}] = r.class_number;
  }

  std::size_t name_w = 11;
  for (const auto& k : kernels) name_w = std::max(name_w, k.size());

  std::string out;
  out += fmt::format("{:>3}  {:<{}}", "SN", "Application", name_w);
  for (int th : thread_counts) out += fmt::format("  {:>14}", fmt::format("{}-thread", th));
  out += "\n";
  for (std::size_t i = 0; i < kernels.size(); ++i) {
    out += fmt::format("{:>3}  {:<{}}", i + 1, kernels[i], name_w);
    for (int th : thread_counts) {
      auto it = cell.find({kernels[i], th});
      out += fmt::format("  {:>14}", it == cell.end() ? "-" : fmt::format("Class {}", it->second));
    }
    out += "\n";
  }

  if (!t.rows.empty()) {
    out += "\n";
    out += fmt::format("{:<{}} {:>7} {:>5} {:<14} {:>8} {:>10} {:>8} {:>8} {:>7}  {}\n", "kernel",
                       name_w, "threads", "class", "label", "r_ins", "ai_est", "ai_irr", "ai_irv",
                       "r_llc", "warnings");
    for (const auto& r : t.rows) {
      out += fmt::format("{:<{}} {:>7} {:>5} {:<14} {:>8} {:>10} {:>8} {:>8} {:>7}  {}\n",
                         r.kernel_name, name_w, r.threads, r.class_number, to_string(r.label),
                         num(r.evidence.r_ins_reduction), num(r.evidence.ai_est),
                         num(r.evidence.ai_irr), num(r.evidence.ai_irv), num(r.evidence.r_llc),
                         joined(r.warnings, "; "));
    }
  }
  for (const auto& e : t.errors)
    out += fmt::format("error: item {} ({} @ {} threads): {}\n", e.index, e.kernel_name, e.threads,
                       e.message);
  return out;
}

std::string to_csv(const ClassificationTable& t) {
  std::string out = "kernel,threads,class_number,label,r_ins_reduction,ai_est,ai_irr,ai_irv,r_llc,warnings\n";
  for (const auto& r : t.rows) {
    std::string warn = joined(r.warnings, ";");
    if (warn.find(',') != std::string::npos) warn = "\"" + warn + "\"";
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.kernel_name, r.threads, r.class_number,
                       to_string(r.label), num(r.evidence.r_ins_reduction), num(r.evidence.ai_est),
                       num(r.evidence.ai_irr), num(r.evidence.ai_irv), num(r.evidence.r_llc), warn);
  }
  return out;
}

std::string to_json(const ClassificationTable& t) {
  using nlohmann::ordered_json;
  auto opt = [](const std::optional<double>& v) -> ordered_json {
    if (!v) return nullptr;
    if (is_unbounded(*v)) return "unbounded";
    return *v;
  };
  ordered_json rows = ordered_json::array();
  for (const auto& r : t.rows) {
    rows.push_back({
        {"kernel", r.kernel_name},
        {"threads", r.threads},
        {"elen_bits", r.elen_bits},
        {"class_number", r.class_number},
        {"label", std::string(to_string(r.label))},
        {"evidence",
         {{"r_ins_reduction", r.evidence.r_ins_reduction},
          {"reduction_threshold", r.evidence.reduction_threshold},
          {"ai_est", opt(r.evidence.ai_est)},
          {"ai_irr", opt(r.evidence.ai_irr)},
          {"ai_irv", opt(r.evidence.ai_irv)},
          {"r_llc", opt(r.evidence.r_llc)},
          {"rllc_threshold", opt(r.evidence.rllc_threshold)}}},
        {"warnings", r.warnings},
    });
  }
  ordered_json errors = ordered_json::array();
  for (const auto& e : t.errors)
    errors.push_back({{"index", e.index},
                      {"kernel", e.kernel_name},
                      {"threads", e.threads},
                      {"message", e.message}});
  ordered_json doc = {{"classifications", rows}, {"errors", errors}};
  return doc.dump(2) + "\n";
}

}  // namespace vecscope
