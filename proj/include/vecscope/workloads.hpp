// Copyright 2026 The vecscope Authors
// SPDX-License-Identifier: Apache-2.0

// Built-in calibration kernels: a CSR SpMV whose multiply-add is repeated a
// configurable number of times per nonzero, and STREAM copy/triad.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "vecscope/collector.hpp"
#include "vecscope/machine_model.hpp"
#include "vecscope/measurement.hpp"

namespace vecscope {

template <typename T>
struct CsrMatrix {
  int n_rows = 0;
  int n_cols = 0;
  std::vector<std::int64_t> row_ptr;  // n_rows + 1 offsets
  std::vector<std::int32_t> col_ind;
  std::vector<T> val;

  std::size_t nnz() const { return val.size(); }
  bool operator==(const CsrMatrix&) const = default;
};

// Throws DomainError on broken offsets, out-of-range or unsorted columns.
template <typename T>
void validate(const CsrMatrix<T>& m);

CsrMatrix<double> identity_matrix(int n);

// Seeded random pattern. Row lengths follow a geometric distribution with mean
// density * n (clamped to n) so loop trip counts vary row to row; density 1
// yields a fully dense matrix. Values are uniform in [0.5, 1.5).
CsrMatrix<double> generate_matrix(int n, double density, std::uint64_t seed);

CsrMatrix<float> to_fp32(const CsrMatrix<double>& m);

// Dense row-major copy, for oracles.
std::vector<double> to_dense(const CsrMatrix<double>& m);

// Matrix Market coordinate format (real, integer or pattern; general,
// symmetric or skew-symmetric). Duplicate entries are summed.
CsrMatrix<double> read_matrix_market(std::istream& in);
CsrMatrix<double> read_matrix_market_file(const std::filesystem::path& path);
void write_matrix_market(std::ostream& out, const CsrMatrix<double>& m);

struct SpmvParams {
  int repeat = 1;
  int elen_bits = 64;  // 32 or 64
  int threads = 1;
};

void validate(const SpmvParams& p);

// y[i] = sum over row i of val[j] * x[col[j]], with the multiply-add executed
// `repeat` times per nonzero. Rows are split into contiguous blocks, one per
// thread, so the result does not depend on the thread count.
template <typename T>
void spmv_kernel(const CsrMatrix<T>& a, std::span<const T> x, std::span<T> y,
                 const SpmvParams& params);

template <typename T>
std::vector<T> spmv(const CsrMatrix<T>& a, std::span<const T> x, const SpmvParams& params);

enum class StreamOp { copy, triad };

std::string_view to_string(StreamOp op);

// True when this build has a native half-precision type.
bool half_precision_supported();

struct StreamResult {
  bool supported = true;
  std::uint64_t bytes = 0;  // 2 (copy) or 3 (triad) arrays of n elements
  double checksum = 0.0;    // sum of the destination array
};

// copy: c = a.  triad: a = b + scalar * c.  Arrays hold small integers so the
// checksum is exact and independent of summation order.
StreamResult stream_kernel(std::size_t n, int elen_bits, StreamOp op, double scalar = 3.0,
                           int threads = 1);

// Per-invocation instruction and traffic model of a kernel's scalar build.
struct KernelProfile {
  double fp_ops = 0;           // one scalar FP instruction per operation
  double other_insts = 0;      // loads, stores, index and loop control
  double vectorizable_insts = 0;  // part of other_insts that shrinks with vectors
  double mem_reads = 0;
  double llc_read_misses = 0;
  bool regular_trip_counts = true;  // fixed-width SIMD covers the loop cleanly
};

// Fraction of x[col[j]] gathers assumed to miss the LLC.
inline constexpr double kSpmvGatherMissRate = 0.25;

KernelProfile spmv_profile(std::size_t nnz, int n_rows, int repeat, int elen_bits,
                           int cache_line_bytes);
KernelProfile stream_profile(std::size_t n, int elen_bits, StreamOp op, int cache_line_bytes);

// Predicted FP operations per nonzero of the repeated SpMV (multiply + add).
inline constexpr double spmv_flops_per_nonzero(int repeat) { return 2.0 * repeat; }

// Operational intensity of the repeated SpMV when x stays cache resident and
// only val and col_ind stream from memory.
double spmv_model_intensity(int repeat, int elen_bits);

// Counter values and modeled wall time for `invocations` calls of a kernel
// built as `variant`, scaled by `jitter`.
SyntheticWindow synthetic_window(const KernelProfile& profile, Variant variant,
                                 const MachineModel& model, int elen_bits, int threads,
                                 std::uint64_t invocations, double jitter = 1.0);

class Workload {
 public:
  virtual ~Workload() = default;

  virtual std::string name() const = 0;
  virtual int elen_bits() const = 0;
  virtual int threads() const = 0;
  virtual void run() = 0;
  virtual double checksum() const = 0;
  virtual KernelProfile profile(const MachineModel& model) const = 0;
};

std::unique_ptr<Workload> make_spmv_workload(const CsrMatrix<double>& a, const SpmvParams& params);

// Throws DomainError when elen_bits is 16 and the build lacks half precision.
std::unique_ptr<Workload> make_stream_workload(std::size_t n, int elen_bits, StreamOp op,
                                               int threads);

// Runs `invocations` kernel calls inside one ROI window of a configured
// session. Setup stays outside the window. Backends that do not observe
// execution get a single call, since their counts already cover all
// invocations.
MeasurementRecord run_instrumented(Workload& workload, RoiSession& session,
                                   std::uint64_t invocations, Variant variant);

}  // namespace vecscope
