// Copyright 2026 The vecscope Authors
// SPDX-License-Identifier: Apache-2.0

#include <cerrno>
#include <cstring>

#include <fmt/format.h>

#include "vecscope/collector.hpp"
#include "vecscope/error.hpp"

#if defined(__linux__)
#include <linux/perf_event.h>
#include <sys/ioctl.h>
#include <sys/syscall.h>
#include <unistd.h>
#endif

namespace vecscope {

#if defined(__linux__) && defined(__aarch64__)

namespace {

// Layout for read_format = TOTAL_TIME_ENABLED | TOTAL_TIME_RUNNING.
struct CounterValue {
  std::uint64_t value;
  std::uint64_t time_enabled;
  std::uint64_t time_running;
};

int open_raw_event(std::uint64_t hexcode, int group_fd) {
  perf_event_attr attr;
  std::memset(&attr, 0, sizeof attr);
  attr.size = sizeof attr;
  attr.type = PERF_TYPE_RAW;
  attr.config = hexcode;
  // Only the leader starts disabled; siblings follow its enable state.
  attr.disabled = group_fd == -1 ? 1 : 0;
  attr.inherit = 1;
  attr.exclude_kernel = 1;
  attr.exclude_hv = 1;
  attr.read_format = PERF_FORMAT_TOTAL_TIME_ENABLED | PERF_FORMAT_TOTAL_TIME_RUNNING;
  return static_cast<int>(syscall(__NR_perf_event_open, &attr, 0, -1, group_fd, 0));
}

[[noreturn]] void throw_open_error(int err, std::string_view event) {
  if (err == EACCES || err == EPERM)
    throw BackendError(BackendError::Kind::permission,
                       fmt::format("perf_event_open({}) denied: {}. Lower "
                                   "/proc/sys/kernel/perf_event_paranoid or grant CAP_PERFMON",
                                   event, std::strerror(err)));
  throw BackendError(BackendError::Kind::capability,
                     fmt::format("perf_event_open({}) failed: {}. The PMU does not expose this "
                                 "raw event",
                                 event, std::strerror(err)));
}

class LiveBackend final : public CounterBackend {
 public:
  ~LiveBackend() override { close_all(); }

  BackendKind kind() const override { return BackendKind::live; }

  void open(const EventSet& events) override {
    close_all();
    for (const PmuEvent* e : events.events()) {
      int fd = open_raw_event(e->hexcode, fds_.empty() ? -1 : fds_.front());
      if (fd < 0) {
        int err = errno;
        close_all();
        throw_open_error(err, e->name);
      }
      fds_.push_back(fd);
    }
    before_.assign(fds_.size(), {});
  }

  void begin_window() override {
    for (std::size_t i = 0; i < fds_.size(); ++i) before_[i] = read_fd(fds_[i]);
    ioctl(fds_.front(), PERF_EVENT_IOC_ENABLE, PERF_IOC_FLAG_GROUP);
  }

  WindowSample end_window() override {
    ioctl(fds_.front(), PERF_EVENT_IOC_DISABLE, PERF_IOC_FLAG_GROUP);
    WindowSample s;
    for (std::size_t i = 0; i < fds_.size(); ++i) {
      CounterValue after = read_fd(fds_[i]);
      s.deltas.push_back(after.value - before_[i].value);
      if (after.time_running < after.time_enabled) s.multiplexed = true;
    }
    return s;
  }

 private:
  static CounterValue read_fd(int fd) {
    CounterValue v{};
    if (::read(fd, &v, sizeof v) != static_cast<ssize_t>(sizeof v))
      throw DataQualityError(fmt::format("short read from counter fd: {}", std::strerror(errno)));
    return v;
  }

  void close_all() {
    for (int fd : fds_) ::close(fd);
    fds_.clear();
  }

  std::vector<int> fds_;
  std::vector<CounterValue> before_;
};

}  // namespace

bool live_backend_available(std::string* reason) {
  int fd = open_raw_event(0x08, -1);
  if (fd < 0) {
    if (reason)
      *reason = fmt::format("perf_event_open(INST_RETIRED) failed: {}", std::strerror(errno));
    return false;
  }
  ::close(fd);
  return true;
}

std::unique_ptr<CounterBackend> make_live_backend() {
  int fd = open_raw_event(0x08, -1);
  if (fd < 0) throw_open_error(errno, "INST_RETIRED");
  ::close(fd);
  return std::make_unique<LiveBackend>();
}

#else

namespace {

std::string unavailable_reason() {
#if defined(__linux__)
  return "the live backend programs raw ARM PMU event codes and needs an aarch64 host";
#else
  return "the live backend needs the Linux perf_event interface";
#endif
}

}  // namespace

bool live_backend_available(std::string* reason) {
  if (reason) *reason = unavailable_reason();
  return false;
}

std::unique_ptr<CounterBackend> make_live_backend() {
  throw BackendError(BackendError::Kind::capability, unavailable_reason());
}

#endif

}  // namespace vecscope
