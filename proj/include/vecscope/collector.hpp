// Copyright 2026 The vecscope Authors
// SPDX-License-Identifier: Apache-2.0

// Region-of-interest counter collection.
//
//   auto session = configure_measure(EventSet::default_set(), make_live_backend());
//   start_measure(session);
//   kernel();
//   stop_measure(session);
//   MeasurementRecord r = read_results(session, meta);
//
// start/stop pairs accumulate; a session can be resumed any number of times
// until finish_measure() moves it to the terminal stopped state.

#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vecscope/machine_model.hpp"
#include "vecscope/measurement.hpp"

namespace vecscope {

enum class BackendKind { live, replay, synthetic };

std::string_view to_string(BackendKind kind);
std::optional<BackendKind> parse_backend_kind(std::string_view s);

// Metadata attached to a record when it is read out of a session.
struct RecordMetadata {
  std::string kernel_name = "roi";
  Variant variant = Variant::baseline;
  int threads = 1;
  int elen_bits = 64;
  std::uint64_t repetitions = 1;
};

// Counter deltas for one start/stop window, in EventSet order.
struct WindowSample {
  std::vector<std::uint64_t> deltas;
  // Set by backends that model or replay time; otherwise the session clock is used.
  std::optional<std::uint64_t> elapsed_ns;
  std::optional<RecordMetadata> metadata;
  bool multiplexed = false;
};

class CounterBackend {
 public:
  virtual ~CounterBackend() = default;

  virtual BackendKind kind() const = 0;
  virtual void open(const EventSet& events) = 0;
  virtual void begin_window() = 0;
  virtual WindowSample end_window() = 0;

  // False for backends whose counts do not depend on the code executed inside
  // the ROI (replay, synthetic).
  virtual bool observes_execution() const { return kind() == BackendKind::live; }
};

// Scripted window increments. Window k emits script[k % script.size()].
struct SyntheticWindow {
  std::map<std::string, std::uint64_t> increments;
  std::uint64_t wall_time_ns = 0;  // 0: measure with the session clock
};

class SyntheticBackend final : public CounterBackend {
 public:
  explicit SyntheticBackend(std::vector<SyntheticWindow> script);

  BackendKind kind() const override { return BackendKind::synthetic; }
  void open(const EventSet& events) override;
  void begin_window() override {}
  WindowSample end_window() override;

 private:
  std::vector<SyntheticWindow> script_;
  std::vector<std::string> names_;
  std::size_t next_ = 0;
};

// Emits one stored record per window, in order.
class ReplayBackend final : public CounterBackend {
 public:
  explicit ReplayBackend(std::vector<MeasurementRecord> records);

  BackendKind kind() const override { return BackendKind::replay; }
  void open(const EventSet& events) override;
  void begin_window() override {}
  WindowSample end_window() override;

 private:
  std::vector<MeasurementRecord> records_;
  std::vector<std::string> names_;
  std::size_t next_ = 0;
};

// perf_event_open with PERF_TYPE_RAW ARM PMU codes. Available only on aarch64
// Linux; `reason` receives the explanation when it is not.
bool live_backend_available(std::string* reason = nullptr);

// Throws BackendError (permission or capability) when unavailable.
std::unique_ptr<CounterBackend> make_live_backend();

enum class SessionState { configured, counting, paused, stopped };

std::string_view to_string(SessionState s);

class RoiSession {
 public:
  RoiSession(EventSet events, std::unique_ptr<CounterBackend> backend);

  RoiSession(RoiSession&&) noexcept = default;
  RoiSession& operator=(RoiSession&&) noexcept = default;

  SessionState state() const { return state_; }
  const EventSet& event_set() const { return events_; }
  BackendKind backend_kind() const { return backend_->kind(); }
  bool observes_execution() const { return backend_->observes_execution(); }
  const std::vector<std::uint64_t>& accumulated() const { return accumulated_; }
  std::uint64_t wall_time_ns() const { return wall_time_ns_; }
  std::size_t windows() const { return windows_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  void start();   // configured|paused -> counting
  void stop();    // counting -> paused
  void finish();  // paused -> stopped

  // Counter totals by event name; requires at least one completed window.
  std::map<std::string, std::uint64_t> counts() const;
  const std::optional<RecordMetadata>& replayed_metadata() const { return replayed_; }

 private:
  EventSet events_;
  std::unique_ptr<CounterBackend> backend_;
  SessionState state_ = SessionState::configured;
  std::vector<std::uint64_t> accumulated_;
  std::uint64_t wall_time_ns_ = 0;
  std::size_t windows_ = 0;
  std::chrono::steady_clock::time_point window_start_{};
  std::optional<RecordMetadata> replayed_;
  std::vector<std::string> warnings_;
};

// Throws DomainError for an empty set, CapacityError beyond six events.
RoiSession configure_measure(const std::vector<std::string>& event_names,
                             std::unique_ptr<CounterBackend> backend);
RoiSession configure_measure(EventSet events, std::unique_ptr<CounterBackend> backend);

void start_measure(RoiSession& session);
void stop_measure(RoiSession& session);
void finish_measure(RoiSession& session);

// Requires a paused or stopped session. Metadata defaults to what a replay
// backend supplied, else `meta`.
MeasurementRecord read_results(const RoiSession& session, const RecordMetadata& meta = {});

}  // namespace vecscope
