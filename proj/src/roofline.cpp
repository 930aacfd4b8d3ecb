// Copyright 2026 The vecscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "vecscope/roofline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "vecscope/error.hpp"

namespace vecscope {

std::string_view to_string(Region r) {
  switch (r) {
    case Region::memory_bound: return "memory_bound";
    case Region::transition: return "transition";
    case Region::compute_bound: return "compute_bound";
  }
  return "memory_bound";
}

void validate(const RooflineConfig& c) {
  validate(c.model);
  if (c.threads < 1 || c.threads > c.model.max_threads)
    throw DomainError(fmt::format("roofline threads {} outside [1, {}]", c.threads,
                                  c.model.max_threads));
  vectorization_bound(c.model.vlen_bits, c.elen_bits);
}

double inflection_scalar(const RooflineConfig& c) {
  validate(c);
  return peak_scalar_flops(c.model, c.threads) / bandwidth_at(c.model, c.threads);
}

double inflection_vector(const RooflineConfig& c) {
  return inflection_scalar(c) * vectorization_bound(c.model.vlen_bits, c.elen_bits);
}

double peak_vector_flops(const RooflineConfig& c) {
  return peak_scalar_flops(c.model, c.threads) *
         vectorization_bound(c.model.vlen_bits, c.elen_bits);
}

Region region_of(const RooflineConfig& c, double ai) {
  if (std::isnan(ai) || ai < 0) throw DomainError("arithmetic intensity must be >= 0");
  if (ai < inflection_scalar(c)) return Region::memory_bound;
  if (ai < inflection_vector(c)) return Region::transition;
  return Region::compute_bound;
}

Attainable attainable(const RooflineConfig& c, double ai) {
  Attainable out;
  out.region = region_of(c, ai);
  const double peak = peak_scalar_flops(c.model, c.threads);
  const double vpeak = peak_vector_flops(c);
  const double bw = bandwidth_at(c.model, c.threads);
  // Past a ridge the plateau value is used verbatim so the roof equals the
  // peak exactly at the ridge despite rounding in ai * bw.
  const double ramp = is_unbounded(ai) ? vpeak : ai * bw;
  out.scalar_gflops = out.region == Region::memory_bound ? std::min(peak, ramp) : peak;
  out.vector_gflops = out.region == Region::compute_bound
                          ? vpeak
                          : std::max(out.scalar_gflops, std::min(vpeak, ramp));
  return out;
}

namespace {

double decade_floor(double v) { return std::pow(10.0, std::floor(std::log10(v))); }
double decade_ceil(double v) { return std::pow(10.0, std::ceil(std::log10(v))); }

}  // namespace

RooflineDataset roofline_dataset(const RooflineConfig& config,
                                 std::span<const KernelAnalysis> analyses, bool normalize) {
  validate(config);
  RooflineDataset d;
  d.config = config;
  d.normalized = normalize;
  d.ai_irr = inflection_scalar(config);
  d.ai_irv = inflection_vector(config);
  const double peak = peak_scalar_flops(config.model, config.threads);
  const double vpeak = peak_vector_flops(config);
  d.scale = normalize ? 1.0 / peak : 1.0;

  double lo = std::min(0.01, d.ai_irr / 10.0);
  double hi = std::max(100.0, d.ai_irv * 10.0);
  for (const auto& a : analyses) {
    if (!a.ai_est || is_unbounded(*a.ai_est)) continue;
    if (*a.ai_est > 0) lo = std::min(lo, *a.ai_est / 2.0);
    hi = std::max(hi, *a.ai_est * 2.0);
  }
  d.ai_min = decade_floor(lo);
  d.ai_max = decade_ceil(hi);

  auto row = [&](std::string series, double ai, double gflops, std::string label) {
    d.rows.push_back({std::move(series), ai, gflops * d.scale, std::move(label)});
  };
  const double bw = bandwidth_at(config.model, config.threads);
  row("scalar_roof", d.ai_min, std::min(peak, d.ai_min * bw), "scalar");
  row("scalar_roof", d.ai_irr, peak, "scalar");
  row("scalar_roof", d.ai_max, peak, "scalar");
  row("vector_roof", d.ai_min, std::min(vpeak, d.ai_min * bw), fmt::format("vector_fp{}", config.elen_bits));
  row("vector_roof", d.ai_irv, vpeak, fmt::format("vector_fp{}", config.elen_bits));
  row("vector_roof", d.ai_max, vpeak, fmt::format("vector_fp{}", config.elen_bits));
  const double floor_gflops = std::min(peak, d.ai_min * bw);
  row("inflection_irr", d.ai_irr, floor_gflops, "AI_IRR");
  row("inflection_irr", d.ai_irr, peak, "AI_IRR");
  row("inflection_irv", d.ai_irv, floor_gflops, "AI_IRV");
  row("inflection_irv", d.ai_irv, vpeak, "AI_IRV");

  for (const auto& a : analyses) {
    if (!a.ai_est) continue;
    RooflineConfig own = config;
    own.elen_bits = a.elen_bits;
    Attainable at = attainable(own, *a.ai_est);
    d.points.push_back({a.kernel_name, a.threads, *a.ai_est, at.scalar_gflops * d.scale,
                        at.vector_gflops * d.scale, at.region});
    const bool unbounded = is_unbounded(*a.ai_est);
    row("kernel", unbounded ? d.ai_max : *a.ai_est, at.scalar_gflops,
        fmt::format("{}@{}t:{}{}", a.kernel_name, a.threads, to_string(at.region),
                    unbounded ? ":unbounded" : ""));
  }
  return d;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string to_csv(const RooflineDataset& d) {
  std::string out = "series,ai_flop_per_byte,gflops,label\n";
  for (const auto& r : d.rows)
    out += fmt::format("{},{:.9g},{:.9g},{}\n", r.series, r.ai, r.gflops, csv_field(r.label));
  return out;
}

std::string to_svg(const RooflineDataset& d) {
  constexpr double kWidth = 800, kHeight = 520;
  constexpr double kLeft = 80, kRight = 30, kTop = 40, kBottom = 60;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  double y_lo = std::numeric_limits<double>::max();
  double y_hi = 0;
  for (const auto& r : d.rows) {
    if (r.gflops > 0) y_lo = std::min(y_lo, r.gflops);
    y_hi = std::max(y_hi, r.gflops);
  }
  y_lo = decade_floor(y_lo);
  y_hi = decade_ceil(y_hi * 1.5);
  const double x_lo = d.ai_min, x_hi = d.ai_max;

  auto px = [&](double ai) {
    double c = std::clamp(ai, x_lo, x_hi);
    return kLeft + (std::log10(c) - std::log10(x_lo)) / (std::log10(x_hi) - std::log10(x_lo)) * plot_w;
  };
  auto py = [&](double g) {
    double c = std::clamp(g, y_lo, y_hi);
    return kTop + plot_h - (std::log10(c) - std::log10(y_lo)) / (std::log10(y_hi) - std::log10(y_lo)) * plot_h;
  };

  std::string s;
  s += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "viewBox=\"0 0 {} {}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      kWidth, kHeight, kWidth, kHeight);
  s += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth,
                   kHeight);
  s += fmt::format(
      "<text x=\"{:.1f}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">Roofline: {} "
      "FP{} {} thread(s){}</text>\n",
      kWidth / 2, xml_escape(d.config.model.name), d.config.elen_bits, d.config.threads,
      d.normalized ? " (normalized)" : "");

  // Decade grid and tick labels.
  for (double x = x_lo; x <= x_hi * 1.0001; x *= 10) {
    s += fmt::format(
        "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"#ddd\"/>\n",
        px(x), kTop, kTop + plot_h);
    s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:g}</text>\n", px(x),
                     kTop + plot_h + 18, x);
  }
  for (double y = y_lo; y <= y_hi * 1.0001; y *= 10) {
    s += fmt::format(
        "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"#ddd\"/>\n",
        kLeft, py(y), kLeft + plot_w);
    s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:g}</text>\n", kLeft - 6,
                     py(y) + 4, y);
  }
  s += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
      kLeft, kTop, plot_w, plot_h);
  s += fmt::format(
      "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">Arithmetic intensity "
      "(FLOP/byte)</text>\n",
      kLeft + plot_w / 2, kHeight - 15);
  s += fmt::format(
      "<text x=\"20\" y=\"{:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {:.1f})\">{}"
      "</text>\n",
      kTop + plot_h / 2, kTop + plot_h / 2, d.normalized ? "Relative throughput" : "GFLOP/s");

  auto polyline = [&](std::string_view series, std::string_view style) {
    std::string pts;
    for (const auto& r : d.rows) {
      if (r.series != series) continue;
      if (!pts.empty()) pts += ' ';
      pts += fmt::format("{:.1f},{:.1f}", px(r.ai), py(r.gflops));
    }
    s += fmt::format("<polyline points=\"{}\" fill=\"none\" {}/>\n", pts, style);
  };
  polyline("vector_roof", "stroke=\"#2a7\" stroke-width=\"2\"");
  polyline("scalar_roof", "stroke=\"#237\" stroke-width=\"2\"");
  polyline("inflection_irr", "stroke=\"#555\" stroke-dasharray=\"5,4\"");
  polyline("inflection_irv", "stroke=\"#555\" stroke-dasharray=\"5,4\"");

  for (const auto& r : d.rows) {
    if (r.series != "kernel") continue;
    s += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"4\" fill=\"#c33\"/>\n", px(r.ai),
                     py(r.gflops));
    s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", px(r.ai) + 6, py(r.gflops) - 6,
                     xml_escape(r.label));
  }
  s += "</svg>\n";
  return s;
}

}  // namespace vecscope
