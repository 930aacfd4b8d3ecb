// Copyright 2026 The vecscope Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "vecscope/error.hpp"
#include "vecscope/roofline.hpp"

using namespace vecscope;
using Catch::Approx;

namespace {

RooflineConfig random_config(std::mt19937_64& rng) {
  MachineModel m = grace_model();
  m.name = "random";
  m.vlen_bits = 128 * static_cast<int>(1 + rng() % 16);
  m.freq_mhz = std::uniform_real_distribution<double>(500, 5000)(rng);
  m.fpu_pipelines = static_cast<int>(1 + rng() % 8);
  m.bw_single_gbs = std::uniform_real_distribution<double>(1, 100)(rng);
  m.bw_peak_gbs = m.bw_single_gbs * std::uniform_real_distribution<double>(1, 50)(rng);
  m.max_threads = static_cast<int>(1 + rng() % 256);
  const int elens[] = {16, 32, 64};
  return {m, elens[rng() % 3], static_cast<int>(1 + rng() % m.max_threads)};
}

}  // namespace

TEST_CASE("vector inflection is the scalar one times the vectorization bound") {
  std::mt19937_64 rng(2026);
  for (int i = 0; i < 1000; ++i) {
    const auto c = random_config(rng);
    const double irr = inflection_scalar(c);
    const double irv = inflection_vector(c);
    const double vb = static_cast<double>(c.model.vlen_bits) / c.elen_bits;
    const double expected = vb * irr;
    CHECK(std::abs(irv - expected) <= std::nextafter(expected, INFINITY) - expected);
    CHECK(irr == Approx(c.model.freq_mhz / 1000 * c.model.fpu_pipelines * 2 * c.threads /
                        std::min(c.threads * c.model.bw_single_gbs, c.model.bw_peak_gbs)));
  }
}

TEST_CASE("grace inflection points") {
  const RooflineConfig c{grace_model(), 64, 1};
  CHECK(inflection_scalar(c) == Approx(27.576 / 30));
  CHECK(inflection_vector(c) == Approx(2 * 27.576 / 30));
  const RooflineConfig c72{grace_model(), 64, 72};
  CHECK(inflection_scalar(c72) == Approx(27.576 * 72 / 250));
}

TEST_CASE("regions partition the intensity axis") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto c = random_config(rng);
    const double irr = inflection_scalar(c), irv = inflection_vector(c);
    CHECK(region_of(c, 0.0) == Region::memory_bound);
    CHECK(region_of(c, std::nextafter(irr, 0.0)) == Region::memory_bound);
    CHECK(region_of(c, irr) == Region::transition);
    CHECK(region_of(c, std::nextafter(irv, 0.0)) == Region::transition);
    CHECK(region_of(c, irv) == Region::compute_bound);
    CHECK(region_of(c, kUnboundedAi) == Region::compute_bound);
  }
  CHECK_THROWS_AS(region_of({grace_model(), 64, 1}, -1.0), DomainError);
}

TEST_CASE("attainable throughput is monotone, continuous and bounded") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto c = random_config(rng);
    const double peak = peak_scalar_flops(c.model, c.threads);
    const double vpeak = peak_vector_flops(c);
    const double vb = static_cast<double>(c.model.vlen_bits) / c.elen_bits;
    double prev_s = 0, prev_v = 0;
    for (double ai = 1e-3; ai < 1e4; ai *= 1.01) {
      const auto a = attainable(c, ai);
      CHECK(a.scalar_gflops >= prev_s);
      CHECK(a.vector_gflops >= prev_v);
      CHECK(a.vector_gflops >= a.scalar_gflops);
      CHECK(a.vector_gflops <= vb * a.scalar_gflops * (1 + 1e-12));
      CHECK(a.scalar_gflops <= peak);
      CHECK(a.vector_gflops <= vpeak);
      prev_s = a.scalar_gflops;
      prev_v = a.vector_gflops;
    }
    for (double ridge : {inflection_scalar(c), inflection_vector(c)}) {
      const auto below = attainable(c, std::nextafter(ridge, 0.0));
      const auto at = attainable(c, ridge);
      CHECK(at.scalar_gflops == Approx(below.scalar_gflops).epsilon(1e-12));
      CHECK(at.vector_gflops == Approx(below.vector_gflops).epsilon(1e-12));
    }
    CHECK(attainable(c, inflection_scalar(c)).scalar_gflops == peak);
    CHECK(attainable(c, inflection_vector(c)).vector_gflops == vpeak);
    CHECK(attainable(c, kUnboundedAi).vector_gflops == vpeak);
  }
}

TEST_CASE("roofs-only dataset") {
  const RooflineConfig c{grace_model(), 64, 1};
  const auto d = roofline_dataset(c, {}, false);
  CHECK(d.points.empty());
  CHECK(d.rows.size() == 10);
  const auto csv = to_csv(d);
  CHECK(csv.rfind("series,ai_flop_per_byte,gflops,label\n", 0) == 0);
  CHECK(csv == to_csv(roofline_dataset(c, {}, false)));
  const auto svg = to_svg(d);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg == to_svg(roofline_dataset(c, {}, false)));
}

TEST_CASE("vector plateau ratios") {
  auto plateau = [](const RooflineDataset& d, std::string_view series) {
    double best = 0;
    for (const auto& r : d.rows)
      if (r.series == series) best = std::max(best, r.gflops);
    return best;
  };
  const auto fp32 = roofline_dataset({grace_model(), 32, 1}, {}, false);
  CHECK(plateau(fp32, "vector_roof") == 4 * plateau(fp32, "scalar_roof"));

  const auto fp64n = roofline_dataset({grace_model(), 64, 1}, {}, true);
  CHECK(fp64n.normalized);
  CHECK(plateau(fp64n, "scalar_roof") == 1.0);
  CHECK(plateau(fp64n, "vector_roof") == 2.0);
}

TEST_CASE("normalization rescales every value by the scalar peak") {
  const RooflineConfig c{grace_model(), 64, 8};
  KernelAnalysis a;
  a.kernel_name = "k";
  a.threads = 8;
  a.ai_est = 3.0;
  std::vector<KernelAnalysis> as = {a};
  const auto raw = roofline_dataset(c, as, false);
  const auto norm = roofline_dataset(c, as, true);
  REQUIRE(raw.rows.size() == norm.rows.size());
  const double peak = peak_scalar_flops(c.model, c.threads);
  CHECK(norm.scale == Approx(1.0 / peak));
  for (std::size_t i = 0; i < raw.rows.size(); ++i) {
    CHECK(norm.rows[i].ai == raw.rows[i].ai);
    CHECK(norm.rows[i].gflops == Approx(raw.rows[i].gflops / peak));
  }
  REQUIRE(raw.points.size() == 1);
  CHECK(raw.points[0].region == region_of(c, 3.0));
}
