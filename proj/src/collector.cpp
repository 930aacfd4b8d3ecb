// Copyright 2026 The vecscope Authors
// SPDX-License-Identifier: Apache-2.0

#include "vecscope/collector.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "vecscope/error.hpp"

namespace vecscope {

std::string_view to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::live: return "live";
    case BackendKind::replay: return "replay";
    case BackendKind::synthetic: return "synthetic";
  }
  return "synthetic";
}

std::optional<BackendKind> parse_backend_kind(std::string_view s) {
  if (s == "live") return BackendKind::live;
  if (s == "replay") return BackendKind::replay;
  if (s == "synthetic") return BackendKind::synthetic;
  return std::nullopt;
}

std::string_view to_string(SessionState s) {
  switch (s) {
    case SessionState::configured: return "configured";
    case SessionState::counting: return "counting";
    case SessionState::paused: return "paused";
    case SessionState::stopped: return "stopped";
  }
  return "stopped";
}

// ---------------------------------------------------------------------------

SyntheticBackend::SyntheticBackend(std::vector<SyntheticWindow> script)
    : script_(std::move(script)) {
  if (script_.empty()) script_.emplace_back();
}

void SyntheticBackend::open(const EventSet& events) {
  names_.clear();
  for (const PmuEvent* e : events.events()) names_.emplace_back(e->name);
}

WindowSample SyntheticBackend::end_window() {
  const SyntheticWindow& w = script_[next_ % script_.size()];
  ++next_;
  WindowSample s;
  s.deltas.reserve(names_.size());
  for (const auto& n : names_) {
    auto it = w.increments.find(n);
    s.deltas.push_back(it == w.increments.end() ? 0 : it->second);
  }
  if (w.wall_time_ns > 0) s.elapsed_ns = w.wall_time_ns;
  return s;
}

ReplayBackend::ReplayBackend(std::vector<MeasurementRecord> records)
    : records_(std::move(records)) {}

void ReplayBackend::open(const EventSet& events) {
  names_.clear();
  for (const PmuEvent* e : events.events()) names_.emplace_back(e->name);
}

WindowSample ReplayBackend::end_window() {
  if (next_ >= records_.size())
    throw StateError(fmt::format("replay exhausted after {} record(s)", records_.size()));
  const MeasurementRecord& r = records_[next_++];
  WindowSample s;
  for (const auto& n : names_) {
    auto v = r.counter(n);
    if (!v)
      throw DataQualityError(
          fmt::format("replayed record '{}' has no value for configured event {}",
                      r.kernel_name, n));
    s.deltas.push_back(*v);
  }
  s.elapsed_ns = r.wall_time_ns;
  s.metadata = RecordMetadata{r.kernel_name, r.variant, r.threads, r.elen_bits, r.repetitions};
  return s;
}

// ---------------------------------------------------------------------------

RoiSession::RoiSession(EventSet events, std::unique_ptr<CounterBackend> backend)
    : events_(std::move(events)), backend_(std::move(backend)) {
  if (!backend_) throw DomainError("RoiSession requires a backend");
  accumulated_.assign(events_.size(), 0);
  backend_->open(events_);
  for (const auto& name : events_.unreliable_names())
    warnings_.push_back(fmt::format("event {} is flagged unreliable", name));
}

void RoiSession::start() {
  if (state_ != SessionState::configured && state_ != SessionState::paused)
    throw StateError(fmt::format("start_measure: illegal in state {}", to_string(state_)));
  state_ = SessionState::counting;
  window_start_ = std::chrono::steady_clock::now();
  backend_->begin_window();
}

void RoiSession::stop() {
  if (state_ != SessionState::counting)
    throw StateError(fmt::format("stop_measure: illegal in state {}", to_string(state_)));
  WindowSample sample = backend_->end_window();
  auto now = std::chrono::steady_clock::now();
  if (sample.deltas.size() != accumulated_.size())
    throw DataQualityError("backend returned a sample of the wrong width");
  for (std::size_t i = 0; i < accumulated_.size(); ++i) accumulated_[i] += sample.deltas[i];
  if (sample.elapsed_ns) {
    wall_time_ns_ += *sample.elapsed_ns;
  } else {
    auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(now - window_start_).count();
    wall_time_ns_ += static_cast<std::uint64_t>(std::max<std::int64_t>(ns, 1));
  }
  if (sample.metadata) replayed_ = sample.metadata;
  if (sample.multiplexed)
    warnings_.push_back("counters were multiplexed; group did not fit on the PMU");
  ++windows_;
  state_ = SessionState::paused;
}

void RoiSession::finish() {
  if (state_ != SessionState::paused)
    throw StateError(fmt::format("finish_measure: illegal in state {}", to_string(state_)));
  state_ = SessionState::stopped;
}

std::map<std::string, std::uint64_t> RoiSession::counts() const {
  if (state_ != SessionState::paused && state_ != SessionState::stopped)
    throw StateError(fmt::format("cannot read counters in state {}", to_string(state_)));
  std::map<std::string, std::uint64_t> out;
  auto evs = events_.events();
  for (std::size_t i = 0; i < evs.size(); ++i) out[std::string(evs[i]->name)] = accumulated_[i];
  return out;
}

// ---------------------------------------------------------------------------

RoiSession configure_measure(const std::vector<std::string>& event_names,
                             std::unique_ptr<CounterBackend> backend) {
  return RoiSession(EventSet::from_names(std::span<const std::string>(event_names)),
                    std::move(backend));
}

RoiSession configure_measure(EventSet events, std::unique_ptr<CounterBackend> backend) {
  return RoiSession(std::move(events), std::move(backend));
}

void start_measure(RoiSession& session) { session.start(); }
void stop_measure(RoiSession& session) { session.stop(); }
void finish_measure(RoiSession& session) { session.finish(); }

MeasurementRecord read_results(const RoiSession& session, const RecordMetadata& meta) {
  MeasurementRecord r;
  r.counters = session.counts();
  const RecordMetadata& m = session.replayed_metadata() ? *session.replayed_metadata() : meta;
  r.kernel_name = m.kernel_name;
  r.variant = m.variant;
  r.threads = m.threads;
  r.elen_bits = m.elen_bits;
  r.repetitions = m.repetitions;
  r.wall_time_ns = session.wall_time_ns();
  validate(r);
  return r;
}

}  // namespace vecscope
