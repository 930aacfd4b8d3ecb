// Copyright 2026 The vecscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "vecscope/workloads.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "vecscope/error.hpp"

namespace vecscope {

// ---------------------------------------------------------------------------
// CSR construction
// ---------------------------------------------------------------------------

template <typename T>
void validate(const CsrMatrix<T>& m) {
  if (m.n_rows < 0 || m.n_cols < 0) throw DomainError("CSR dimensions must be non-negative");
  if (m.row_ptr.size() != static_cast<std::size_t>(m.n_rows) + 1)
    throw DomainError("CSR row_ptr must have n_rows + 1 entries");
  if (m.row_ptr.front() != 0) throw DomainError("CSR row_ptr[0] must be 0");
  if (m.row_ptr.back() != static_cast<std::int64_t>(m.val.size()) ||
      m.col_ind.size() != m.val.size())
    throw DomainError("CSR row_ptr[n_rows] must equal nnz");
  for (int i = 0; i < m.n_rows; ++i) {
    if (m.row_ptr[i + 1] < m.row_ptr[i]) throw DomainError("CSR row_ptr must be nondecreasing");
    for (std::int64_t j = m.row_ptr[i]; j < m.row_ptr[i + 1]; ++j) {
      if (m.col_ind[j] < 0 || m.col_ind[j] >= m.n_cols)
        throw DomainError(fmt::format("CSR column {} out of range in row {}", m.col_ind[j], i));
      if (j > m.row_ptr[i] && m.col_ind[j] <= m.col_ind[j - 1])
        throw DomainError(fmt::format("CSR columns not strictly increasing in row {}", i));
    }
  }
}

template void validate(const CsrMatrix<double>&);
template void validate(const CsrMatrix<float>&);

CsrMatrix<double> identity_matrix(int n) {
  if (n < 1) throw DomainError("matrix dimension must be >= 1");
  CsrMatrix<double> m;
  m.n_rows = m.n_cols = n;
  m.row_ptr.resize(n + 1);
  for (int i = 0; i <= n; ++i) m.row_ptr[i] = i;
  m.col_ind.resize(n);
  for (int i = 0; i < n; ++i) m.col_ind[i] = i;
  m.val.assign(n, 1.0);
  return m;
}

CsrMatrix<double> generate_matrix(int n, double density, std::uint64_t seed) {
  if (n < 1) throw DomainError("matrix dimension must be >= 1");
  if (!(density > 0.0) || density > 1.0)
    throw DomainError(fmt::format("density must lie in (0, 1], got {}", density));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(0.5, 1.5);
  CsrMatrix<double> m;
  m.n_rows = m.n_cols = n;
  m.row_ptr.reserve(n + 1);
  m.row_ptr.push_back(0);

  const bool dense = density == 1.0;
  const double mean = density * n;
  std::geometric_distribution<int> length(1.0 / (mean + 1.0));
  std::set<int> cols;
  for (int i = 0; i < n; ++i) {
    const int len = dense ? n : std::min(n, length(rng));
    cols.clear();
    // Floyd's sampling of `len` distinct columns.
    for (int j = n - len; j < n; ++j) {
      int t = std::uniform_int_distribution<int>(0, j)(rng);
      if (!cols.insert(t).second) cols.insert(j);
    }
    for (int c : cols) {
      m.col_ind.push_back(c);
      m.val.push_back(value(rng));
    }
    m.row_ptr.push_back(static_cast<std::int64_t>(m.val.size()));
  }
  return m;
}

CsrMatrix<float> to_fp32(const CsrMatrix<double>& m) {
  CsrMatrix<float> out;
  out.n_rows = m.n_rows;
  out.n_cols = m.n_cols;
  out.row_ptr = m.row_ptr;
  out.col_ind = m.col_ind;
  out.val.assign(m.val.begin(), m.val.end());
  return out;
}

std::vector<double> to_dense(const CsrMatrix<double>& m) {
  std::vector<double> d(static_cast<std::size_t>(m.n_rows) * m.n_cols, 0.0);
  for (int i = 0; i < m.n_rows; ++i)
    for (std::int64_t j = m.row_ptr[i]; j < m.row_ptr[i + 1]; ++j)
      d[static_cast<std::size_t>(i) * m.n_cols + m.col_ind[j]] = m.val[j];
  return d;
}

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

namespace {

// Splits [0, n) into `threads` contiguous blocks and runs body(begin, end) on each.
template <typename F>
void parallel_blocks(int threads, std::size_t n, F&& body) {
  if (threads <= 1 || n < 2) {
    body(std::size_t{0}, n);
    return;
  }
  const auto t = static_cast<std::size_t>(threads);
  std::vector<std::jthread> pool;
  pool.reserve(t - 1);
  for (std::size_t k = 1; k < t; ++k) {
    std::size_t b = n * k / t, e = n * (k + 1) / t;
    pool.emplace_back([&body, b, e] { body(b, e); });
  }
  body(std::size_t{0}, n / t);
}

}  // namespace

void validate(const SpmvParams& p) {
  if (p.repeat < 1) throw DomainError(fmt::format("repeat must be >= 1, got {}", p.repeat));
  if (p.elen_bits != 32 && p.elen_bits != 64)
    throw DomainError(fmt::format("SpMV element width must be 32 or 64, got {}", p.elen_bits));
  if (p.threads < 1) throw DomainError("threads must be >= 1");
}

template <typename T>
void spmv_kernel(const CsrMatrix<T>& a, std::span<const T> x, std::span<T> y,
                 const SpmvParams& params) {
  if (params.repeat < 1) throw DomainError("repeat must be >= 1");
  if (x.size() != static_cast<std::size_t>(a.n_cols))
    throw DomainError(fmt::format("x has {} entries, matrix has {} columns", x.size(), a.n_cols));
  if (y.size() != static_cast<std::size_t>(a.n_rows))
    throw DomainError(fmt::format("y has {} entries, matrix has {} rows", y.size(), a.n_rows));

  const int repeat = params.repeat;
  const T* val = a.val.data();
  const std::int32_t* col = a.col_ind.data();
  const std::int64_t* row_ptr = a.row_ptr.data();
  const T* xp = x.data();
  T* yp = y.data();

  parallel_blocks(params.threads, static_cast<std::size_t>(a.n_rows),
                  [=](std::size_t begin, std::size_t end) {
                    for (std::size_t i = begin; i < end; ++i) {
                      T temp = 0;
                      for (std::int64_t j = row_ptr[i]; j < row_ptr[i + 1]; ++j) {
                        // The multiply-add is re-executed `repeat` times; without
                        // reassociation the compiler cannot fold it.
#pragma GCC unroll 1
                        for (int r = 0; r < repeat; ++r) temp = val[j] * xp[col[j]] + temp;
                      }
                      yp[i] = temp;
                    }
                  });
}

template <typename T>
std::vector<T> spmv(const CsrMatrix<T>& a, std::span<const T> x, const SpmvParams& params) {
  std::vector<T> y(a.n_rows);
  spmv_kernel<T>(a, x, y, params);
  return y;
}

template void spmv_kernel(const CsrMatrix<double>&, std::span<const double>, std::span<double>,
                          const SpmvParams&);
template void spmv_kernel(const CsrMatrix<float>&, std::span<const float>, std::span<float>,
                          const SpmvParams&);
template std::vector<double> spmv(const CsrMatrix<double>&, std::span<const double>,
                                  const SpmvParams&);
template std::vector<float> spmv(const CsrMatrix<float>&, std::span<const float>,
                                 const SpmvParams&);

std::string_view to_string(StreamOp op) { return op == StreamOp::copy ? "copy" : "triad"; }

bool half_precision_supported() {
#if defined(__FLT16_MAX__)
  return true;
#else
  return false;
#endif
}

namespace {

template <typename T>
class StreamArrays {
 public:
  StreamArrays(std::size_t n, StreamOp op, double scalar, int threads)
      : a_(n), b_(n), c_(n), op_(op), scalar_(static_cast<T>(scalar)), threads_(threads) {
    for (std::size_t i = 0; i < n; ++i) {
      a_[i] = static_cast<T>(i % 16 + 1);
      b_[i] = static_cast<T>(i % 8 + 1);
      c_[i] = static_cast<T>(i % 4 + 1);
    }
  }

  void run() {
    T* a = a_.data();
    T* b = b_.data();
    T* c = c_.data();
    const T s = scalar_;
    if (op_ == StreamOp::copy) {
      parallel_blocks(threads_, a_.size(), [=](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) c[i] = a[i];
      });
    } else {
      parallel_blocks(threads_, a_.size(), [=](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) a[i] = b[i] + s * c[i];
      });
    }
  }

  double checksum() const {
    const auto& dst = op_ == StreamOp::copy ? c_ : a_;
    double sum = 0;
    for (T v : dst) sum += static_cast<double>(v);
    return sum;
  }

  const std::vector<T>& a() const { return a_; }
  const std::vector<T>& b() const { return b_; }

 private:
  std::vector<T> a_, b_, c_;
  StreamOp op_;
  T scalar_;
  int threads_;
};

std::uint64_t stream_bytes(std::size_t n, int elen_bits, StreamOp op) {
  return (op == StreamOp::copy ? 2u : 3u) * static_cast<std::uint64_t>(n) * (elen_bits / 8);
}

template <typename T>
StreamResult run_stream(std::size_t n, int elen_bits, StreamOp op, double scalar, int threads) {
  StreamArrays<T> arrays(n, op, scalar, threads);
  arrays.run();
  return {true, stream_bytes(n, elen_bits, op), arrays.checksum()};
}

}  // namespace

StreamResult stream_kernel(std::size_t n, int elen_bits, StreamOp op, double scalar, int threads) {
  if (n < 1) throw DomainError("stream length must be >= 1");
  switch (elen_bits) {
    case 64: return run_stream<double>(n, elen_bits, op, scalar, threads);
    case 32: return run_stream<float>(n, elen_bits, op, scalar, threads);
    case 16:
#if defined(__FLT16_MAX__)
      return run_stream<_Float16>(n, elen_bits, op, scalar, threads);
#else
      return {false, 0, 0.0};
#endif
    default:
      throw DomainError(fmt::format("stream element width must be 16, 32 or 64, got {}",
                                    elen_bits));
  }
}

// ---------------------------------------------------------------------------
// Analytic counter model
// ---------------------------------------------------------------------------

KernelProfile spmv_profile(std::size_t nnz, int n_rows, int repeat, int elen_bits,
                           int cache_line_bytes) {
  const double z = static_cast<double>(nnz);
  KernelProfile p;
  p.fp_ops = spmv_flops_per_nonzero(repeat) * z;
  // Per nonzero: loads of val, col_ind and x, index increment, branch.
  // Per row: two row_ptr loads, the y store, loop control.
  p.vectorizable_insts = 5.0 * z;
  p.other_insts = p.vectorizable_insts + 4.0 * n_rows;
  p.mem_reads = 3.0 * z + 2.0 * n_rows;
  const double streamed = z * (elen_bits / 8.0 + sizeof(std::int32_t));
  p.llc_read_misses = std::ceil(streamed / cache_line_bytes) + kSpmvGatherMissRate * z;
  p.regular_trip_counts = false;
  return p;
}

KernelProfile stream_profile(std::size_t n, int elen_bits, StreamOp op, int cache_line_bytes) {
  const double len = static_cast<double>(n);
  const double read_arrays = op == StreamOp::copy ? 1.0 : 2.0;
  KernelProfile p;
  p.fp_ops = op == StreamOp::copy ? 0.0 : 2.0 * len;
  p.vectorizable_insts = (read_arrays + 3.0) * len;  // loads, store, index, branch
  p.other_insts = p.vectorizable_insts;
  p.mem_reads = read_arrays * len;
  p.llc_read_misses = std::ceil(read_arrays * len * (elen_bits / 8.0) / cache_line_bytes);
  p.regular_trip_counts = true;
  return p;
}

double spmv_model_intensity(int repeat, int elen_bits) {
  return spmv_flops_per_nonzero(repeat) / (elen_bits / 8.0 + sizeof(std::int32_t));
}

SyntheticWindow synthetic_window(const KernelProfile& p, Variant variant,
                                 const MachineModel& model, int elen_bits, int threads,
                                 std::uint64_t invocations, double jitter) {
  double fp = p.fp_ops;
  double insts = p.fp_ops + p.other_insts;
  double reads = p.mem_reads;
  const bool vectorized =
      variant == Variant::sve || (variant == Variant::asimd && p.regular_trip_counts);
  if (vectorized) {
    // ASIMD registers are fixed at 128 bits; SVE uses the model's length.
    const int vlen = variant == Variant::asimd ? 128 : model.vlen_bits;
    const double lanes = static_cast<double>(vlen) / elen_bits;
    fp /= lanes;
    insts = (p.fp_ops + p.vectorizable_insts) / lanes + (p.other_insts - p.vectorizable_insts);
    reads /= lanes;
  }

  const double ghz = model.freq_mhz / 1000.0;
  const double compute_ns = insts / (model.fpu_pipelines * ghz * threads);
  const double memory_ns =
      p.llc_read_misses * model.cache_line_bytes / bandwidth_at(model, threads);
  const double wall_ns = std::max(compute_ns, memory_ns);

  const double scale = static_cast<double>(invocations) * jitter;
  auto count = [&](double v) { return static_cast<std::uint64_t>(std::llround(v * scale)); };

  SyntheticWindow w;
  w.increments[std::string(events::kInstRetired)] = count(insts);
  w.increments[std::string(events::kVfpSpec)] = count(fp);
  w.increments[std::string(events::kMemAccessRd)] = count(reads);
  w.increments[std::string(events::kLlCacheMissRd)] = count(p.llc_read_misses);
  w.increments[std::string(events::kCpuCycles)] = count(wall_ns * ghz * threads);
  w.increments[std::string(events::kStallBackend)] =
      count((wall_ns - compute_ns) * ghz * threads);
  w.wall_time_ns = std::max<std::uint64_t>(1, count(wall_ns));
  return w;
}

// ---------------------------------------------------------------------------
// Workloads
// ---------------------------------------------------------------------------

namespace {

template <typename T>
class SpmvWorkload final : public Workload {
 public:
  SpmvWorkload(CsrMatrix<T> a, const SpmvParams& params)
      : a_(std::move(a)), x_(a_.n_cols), y_(a_.n_rows), params_(params) {
    for (int i = 0; i < a_.n_cols; ++i) x_[i] = static_cast<T>(1.0 + (i % 7) * 0.125);
  }

  std::string name() const override {
    return fmt::format("spmv_fp{}_r{}", params_.elen_bits, params_.repeat);
  }
  int elen_bits() const override { return params_.elen_bits; }
  int threads() const override { return params_.threads; }
  void run() override { spmv_kernel<T>(a_, x_, y_, params_); }
  double checksum() const override {
    double s = 0;
    for (T v : y_) s += static_cast<double>(v);
    return s;
  }
  KernelProfile profile(const MachineModel& model) const override {
    return spmv_profile(a_.nnz(), a_.n_rows, params_.repeat, params_.elen_bits,
                        model.cache_line_bytes);
  }

 private:
  CsrMatrix<T> a_;
  std::vector<T> x_;
  std::vector<T> y_;
  SpmvParams params_;
};

template <typename T>
class StreamWorkload final : public Workload {
 public:
  StreamWorkload(std::size_t n, int elen_bits, StreamOp op, int threads)
      : arrays_(n, op, 3.0, threads), n_(n), elen_bits_(elen_bits), op_(op), threads_(threads) {}

  std::string name() const override {
    return fmt::format("stream_{}_fp{}", to_string(op_), elen_bits_);
  }
  int elen_bits() const override { return elen_bits_; }
  int threads() const override { return threads_; }
  void run() override { arrays_.run(); }
  double checksum() const override { return arrays_.checksum(); }
  KernelProfile profile(const MachineModel& model) const override {
    return stream_profile(n_, elen_bits_, op_, model.cache_line_bytes);
  }

 private:
  StreamArrays<T> arrays_;
  std::size_t n_;
  int elen_bits_;
  StreamOp op_;
  int threads_;
};

}  // namespace

std::unique_ptr<Workload> make_spmv_workload(const CsrMatrix<double>& a, const SpmvParams& params) {
  validate(params);
  validate(a);
  if (params.elen_bits == 32) return std::make_unique<SpmvWorkload<float>>(to_fp32(a), params);
  return std::make_unique<SpmvWorkload<double>>(a, params);
}

std::unique_ptr<Workload> make_stream_workload(std::size_t n, int elen_bits, StreamOp op,
                                               int threads) {
  if (n < 1) throw DomainError("stream length must be >= 1");
  if (threads < 1) throw DomainError("threads must be >= 1");
  switch (elen_bits) {
    case 64: return std::make_unique<StreamWorkload<double>>(n, elen_bits, op, threads);
    case 32: return std::make_unique<StreamWorkload<float>>(n, elen_bits, op, threads);
    case 16:
#if defined(__FLT16_MAX__)
      return std::make_unique<StreamWorkload<_Float16>>(n, elen_bits, op, threads);
#else
      throw DomainError("FP16 stream kernel unsupported: this build has no half-precision type");
#endif
    default:
      throw DomainError(fmt::format("stream element width must be 16, 32 or 64, got {}",
                                    elen_bits));
  }
}

MeasurementRecord run_instrumented(Workload& workload, RoiSession& session,
                                   std::uint64_t invocations, Variant variant) {
  if (session.state() != SessionState::configured)
    throw StateError(fmt::format("run_instrumented needs a configured session, got {}",
                                 to_string(session.state())));
  if (invocations == 0) throw DomainError("invocations must be >= 1");
  const std::uint64_t calls = session.observes_execution() ? invocations : 1;
  start_measure(session);
  for (std::uint64_t i = 0; i < calls; ++i) workload.run();
  stop_measure(session);
  finish_measure(session);
  RecordMetadata meta{workload.name(), variant, workload.threads(), workload.elen_bits(),
                      invocations};
  return read_results(session, meta);
}

}  // namespace vecscope
