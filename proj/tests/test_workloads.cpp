// Copyright 2026 The vecscope Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include "vecscope/error.hpp"
#include "vecscope/metrics.hpp"
#include "vecscope/workloads.hpp"

using namespace vecscope;
using Catch::Approx;

namespace {

std::vector<double> dense_oracle(const CsrMatrix<double>& a, const std::vector<double>& x) {
  const auto d = to_dense(a);
  std::vector<double> y(a.n_rows, 0.0);
  for (int i = 0; i < a.n_rows; ++i)
    for (int j = 0; j < a.n_cols; ++j) y[i] += d[static_cast<std::size_t>(i) * a.n_cols + j] * x[j];
  return y;
}

}  // namespace

TEST_CASE("two by two example") {
  CsrMatrix<double> a;
  a.n_rows = a.n_cols = 2;
  a.row_ptr = {0, 2, 4};
  a.col_ind = {0, 1, 0, 1};
  a.val = {1, 2, 3, 4};
  validate(a);
  std::vector<double> x = {2, 1};
  // [1 2; 3 4] * [2 1] = [4 10]; check a symmetric case too.
  CHECK(spmv<double>(a, x, {1, 64, 1}) == std::vector<double>{4, 10});
  CHECK(spmv<double>(a, x, {3, 64, 1}) == std::vector<double>{12, 30});

  a.val = {10, 20, 20, 10};
  x = {2, 2};
  CHECK(spmv<double>(a, x, {1, 64, 1}) == std::vector<double>{60, 60});
}

TEST_CASE("kernel equals repeat times the dense product") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int n = 1 + static_cast<int>(seed % 64);
    const auto a = generate_matrix(n, 0.05 + 0.9 * ((seed * 37) % 100) / 100.0, seed);
    validate(a);
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = 0.5 + (i % 5) * 0.25;
    const auto ref = dense_oracle(a, x);
    for (int repeat : {1, 3, 20}) {
      const auto y = spmv<double>(a, x, {repeat, 64, 1});
      for (int i = 0; i < n; ++i)
        CHECK(y[i] == Approx(repeat * ref[i]).epsilon(1e-12).margin(1e-300));

      const auto a32 = to_fp32(a);
      std::vector<float> x32(x.begin(), x.end());
      const auto y32 = spmv<float>(a32, x32, {repeat, 32, 1});
      for (int i = 0; i < n; ++i) CHECK(y32[i] == Approx(repeat * ref[i]).epsilon(1e-5));
    }
  }
}

TEST_CASE("thread count does not change results") {
  const auto a = generate_matrix(300, 0.05, 3);
  std::vector<double> x(300, 1.25);
  const auto y1 = spmv<double>(a, x, {4, 64, 1});
  for (int t : {2, 3, 7, 16}) CHECK(spmv<double>(a, x, {4, 64, t}) == y1);
}

TEST_CASE("generator") {
  const auto a = generate_matrix(200, 0.1, 1);
  CHECK(a == generate_matrix(200, 0.1, 1));
  CHECK_FALSE(a == generate_matrix(200, 0.1, 2));
  for (double v : a.val) {
    CHECK(v >= 0.5);
    CHECK(v < 1.5);
  }
  const auto dense = generate_matrix(10, 1.0, 0);
  CHECK(dense.nnz() == 100);
  CHECK(identity_matrix(5).nnz() == 5);
  CHECK_THROWS_AS(generate_matrix(0, 0.5, 0), DomainError);
  CHECK_THROWS_AS(generate_matrix(10, 0.0, 0), DomainError);
  CHECK_THROWS_AS(generate_matrix(10, 1.5, 0), DomainError);
}

TEST_CASE("invalid CSR and inputs are rejected") {
  auto a = identity_matrix(3);
  a.col_ind[1] = 5;
  CHECK_THROWS_AS(validate(a), DomainError);
  const auto ok = identity_matrix(3);
  std::vector<double> x(2, 1.0);
  CHECK_THROWS_AS(spmv<double>(ok, x, {1, 64, 1}), DomainError);
  CHECK_THROWS_AS(validate(SpmvParams{0, 64, 1}), DomainError);
  CHECK_THROWS_AS(validate(SpmvParams{1, 16, 1}), DomainError);
}

TEST_CASE("matrix market round trip") {
  const auto a = generate_matrix(40, 0.2, 9);
  std::stringstream ss;
  write_matrix_market(ss, a);
  CHECK(read_matrix_market(ss) == a);
}

TEST_CASE("matrix market variants") {
  std::istringstream sym(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "% comment\n"
      "3 3 3\n"
      "1 1 2.0\n"
      "3 1 5.0\n"
      "2 2 1.5\n");
  const auto s = read_matrix_market(sym);
  CHECK(s.nnz() == 4);
  CHECK(to_dense(s) == std::vector<double>{2, 0, 5, 0, 1.5, 0, 5, 0, 0});

  std::istringstream pattern(
      "%%MatrixMarket matrix coordinate pattern general\n2 2 2\n1 2\n2 1\n");
  CHECK(to_dense(read_matrix_market(pattern)) == std::vector<double>{0, 1, 1, 0});

  std::istringstream bad_banner("%%MatrixMarket matrix array real general\n2 2\n");
  CHECK_THROWS_AS(read_matrix_market(bad_banner), ParseError);
  std::istringstream short_file("%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1\n");
  CHECK_THROWS_AS(read_matrix_market(short_file), ParseError);
  std::istringstream out_of_range(
      "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n");
  CHECK_THROWS_AS(read_matrix_market(out_of_range), ParseError);
}

TEST_CASE("stream kernels") {
  const std::size_t n = 1000;
  auto copy = stream_kernel(n, 64, StreamOp::copy);
  CHECK(copy.supported);
  CHECK(copy.bytes == 2 * n * 8);
  double expect_copy = 0;
  for (std::size_t i = 0; i < n; ++i) expect_copy += static_cast<double>(i % 16 + 1);
  CHECK(copy.checksum == expect_copy);

  auto triad = stream_kernel(n, 32, StreamOp::triad, 3.0, 4);
  CHECK(triad.bytes == 3 * n * 4);
  double expect_triad = 0;
  for (std::size_t i = 0; i < n; ++i)
    expect_triad += static_cast<double>(i % 8 + 1) + 3.0 * static_cast<double>(i % 4 + 1);
  CHECK(triad.checksum == expect_triad);
  CHECK(stream_kernel(n, 64, StreamOp::triad, 3.0, 1).checksum == expect_triad);

  auto half = stream_kernel(n, 16, StreamOp::copy);
  CHECK(half.supported == half_precision_supported());
  if (half_precision_supported()) {
    CHECK(half.checksum == expect_copy);
  } else {
    CHECK_THROWS_AS(make_stream_workload(n, 16, StreamOp::copy, 1), DomainError);
  }
  CHECK_THROWS_AS(stream_kernel(n, 8, StreamOp::copy), DomainError);
}

TEST_CASE("analytic SpMV model") {
  CHECK(spmv_flops_per_nonzero(1) == 2.0);
  CHECK(spmv_flops_per_nonzero(20) == 40.0);
  CHECK(spmv_model_intensity(1, 64) == Approx(2.0 / 12));
  CHECK(spmv_model_intensity(20, 64) == Approx(40.0 / 12));
  CHECK(spmv_model_intensity(20, 64) == Approx(20 * spmv_model_intensity(1, 64)));

  const auto p = spmv_profile(1000, 100, 20, 64, 64);
  CHECK(p.fp_ops == 40000);
  CHECK_FALSE(p.regular_trip_counts);
}

TEST_CASE("synthetic counters follow the profile") {
  const auto m = grace_model();
  const auto p = spmv_profile(10000, 1000, 1, 64, 64);
  const auto base = synthetic_window(p, Variant::baseline, m, 64, 1, 10);
  const auto sve = synthetic_window(p, Variant::sve, m, 64, 1, 10);
  const auto asimd = synthetic_window(p, Variant::asimd, m, 64, 1, 10);
  CHECK(base.increments.at("VFP_SPEC") == 10 * 20000);
  CHECK(sve.increments.at("INST_RETIRED") < base.increments.at("INST_RETIRED"));
  // Irregular trip counts keep the fixed-width build scalar.
  CHECK(asimd.increments.at("INST_RETIRED") == base.increments.at("INST_RETIRED"));
  CHECK(base.wall_time_ns > 0);

  const auto doubled = synthetic_window(p, Variant::baseline, m, 64, 1, 20);
  CHECK(doubled.increments.at("INST_RETIRED") == 2 * base.increments.at("INST_RETIRED"));

  const double ai = estimated_ai(base.increments.at("VFP_SPEC"),
                                 base.increments.at("LL_CACHE_MISS_RD"), 64);
  const auto p20 = spmv_profile(10000, 1000, 20, 64, 64);
  const auto base20 = synthetic_window(p20, Variant::baseline, m, 64, 1, 10);
  const double ai20 = estimated_ai(base20.increments.at("VFP_SPEC"),
                                   base20.increments.at("LL_CACHE_MISS_RD"), 64);
  CHECK(ai20 == Approx(20 * ai));
}

TEST_CASE("instrumented run") {
  const auto m = grace_model();
  auto w = make_spmv_workload(generate_matrix(64, 0.1, 1), {2, 64, 1});
  CHECK(w->name() == "spmv_fp64_r2");
  auto window = synthetic_window(w->profile(m), Variant::baseline, m, 64, 1, 5);
  auto session = configure_measure(EventSet::default_set(),
                                   std::make_unique<SyntheticBackend>(
                                       std::vector<SyntheticWindow>{window}));
  const auto rec = run_instrumented(*w, session, 5, Variant::baseline);
  CHECK(rec.kernel_name == "spmv_fp64_r2");
  CHECK(rec.repetitions == 5);
  CHECK(rec.counters.at("INST_RETIRED") == window.increments.at("INST_RETIRED"));
  CHECK(rec.wall_time_ns == window.wall_time_ns);
  CHECK(session.state() == SessionState::stopped);
  CHECK_THROWS_AS(run_instrumented(*w, session, 5, Variant::baseline), StateError);
}
