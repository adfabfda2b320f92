#pragma once

// Deterministic discrete-event scheduler. Envelopes are totally ordered by
// (deliver_at, seq); seq is a global send counter, so two envelopes due at
// the same tick are delivered in send order.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "vcsim/core.hpp"
#include "vcsim/envelope.hpp"
#include "vcsim/inventory.hpp"

namespace vcsim::sim {

enum class SimErrc { SchedulesInPast, UnknownRecipient, DuplicateAgent, EventBudgetExceeded };

std::string_view to_string(SimErrc e);

using SimError = Error<SimErrc>;

// 64-bit linear congruential generator with the fixed constants below. The
// stream is part of the scenario contract: any implementation must produce
// the same values for the same seed.
class Lcg64 {
 public:
  static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;
  static constexpr std::uint64_t kIncrement = 1442695040888963407ULL;

  explicit Lcg64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ = state_ * kMultiplier + kIncrement;
    return state_;
  }

  // Upper 32 bits of the next state reduced into [lo, hi].
  std::uint64_t next_in(std::uint64_t lo, std::uint64_t hi) noexcept {
    return lo + (next() >> 32) % (hi - lo + 1);
  }

 private:
  std::uint64_t state_;
};

class LatencyTable {
 public:
  explicit LatencyTable(std::uint64_t default_ticks = 1) : default_(default_ticks) {}

  void set(const PartyId& from, const PartyId& to, std::uint64_t ticks) { table_[{from, to}] = ticks; }

  std::uint64_t between(const PartyId& from, const PartyId& to) const {
    auto it = table_.find({from, to});
    return it == table_.end() ? default_ : it->second;
  }

  std::uint64_t default_ticks() const noexcept { return default_; }
  const std::map<std::pair<PartyId, PartyId>, std::uint64_t>& entries() const noexcept { return table_; }

  bool operator==(const LatencyTable&) const = default;

 private:
  std::uint64_t default_;
  std::map<std::pair<PartyId, PartyId>, std::uint64_t> table_;
};

struct Note {
  SimTime at;
  std::string text;
};

struct EndMarker {
  SimTime final_time;
  std::uint64_t event_count = 0;
};

using LogEntry = std::variant<Envelope, Note, inventory::HistoryRow, EndMarker>;

std::string render(const LogEntry& entry);

// Append-only run record. Rendered line formats:
//   MSG <time> <seq> <from> <to> <variant> <fields...>
//   NOTE <time> <text>
//   INV <time> <op> <sku> <delta>
//   END <final_time> <event_count>
class EventLog {
 public:
  void append(LogEntry entry);

  const std::vector<LogEntry>& entries() const noexcept { return entries_; }
  std::uint64_t delivered_count() const noexcept { return delivered_; }
  bool complete() const noexcept { return !entries_.empty() && std::holds_alternative<EndMarker>(entries_.back()); }

  std::string render() const;

 private:
  std::vector<LogEntry> entries_;
  std::uint64_t delivered_ = 0;
};

struct DispatchContext {
  SimTime now;
  const LatencyFn& latency;
};

class Agent {
 public:
  virtual ~Agent() = default;
  virtual Reaction handle(const Envelope& incoming, const DispatchContext& ctx) = 0;
  // Agents owning stock expose it so the engine can log inventory movements.
  virtual const inventory::Ledger* ledger() const { return nullptr; }
};

struct EnvelopeOrder {
  bool operator()(const Envelope& a, const Envelope& b) const noexcept {
    if (a.deliver_at != b.deliver_at) return a.deliver_at > b.deliver_at;
    return a.seq > b.seq;
  }
};

class EventQueue {
 public:
  void push(Envelope e) { heap_.push(std::move(e)); }
  Envelope pop();
  const Envelope& top() const { return heap_.top(); }
  bool empty() const noexcept { return heap_.empty(); }
  std::size_t size() const noexcept { return heap_.size(); }

 private:
  std::priority_queue<Envelope, std::vector<Envelope>, EnvelopeOrder> heap_;
};

class Simulation {
 public:
  static constexpr std::uint64_t kDefaultMaxEvents = 10000;

  explicit Simulation(LatencyTable latency = LatencyTable{});

  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  void add_agent(const PartyId& id, std::unique_ptr<Agent> agent);
  Agent* agent(const PartyId& id) const;

  // Enqueues a fully formed envelope. Rejects deliveries before the clock.
  void schedule(Envelope envelope);

  // Builds, numbers and schedules an envelope sent now. Without an explicit
  // time the pairwise latency applies. Returns the assigned seq.
  std::uint64_t send(const PartyId& from, const PartyId& to, protocol::Message payload,
                     std::optional<SimTime> deliver_at = std::nullopt);

  void note(std::string text);
  void note_inventory(const inventory::HistoryRow& row);

  // Delivers the next envelope, or returns nullopt when the queue is empty.
  std::optional<Envelope> step();

  // Steps to quiescence and closes the log with END. Throws
  // EventBudgetExceeded if more than `max_events` deliveries would be needed.
  const EventLog& run(std::uint64_t max_events = kDefaultMaxEvents);

  void set_interaction_sink(std::function<void(const Interaction&)> sink) { interaction_sink_ = std::move(sink); }

  SimTime now() const noexcept { return clock_; }
  std::size_t queue_size() const noexcept { return queue_.size(); }
  std::uint64_t next_seq() const noexcept { return next_seq_; }
  const EventLog& log() const noexcept { return log_; }
  const LatencyTable& latency() const noexcept { return latency_; }
  const std::map<PartyId, std::unique_ptr<Agent>>& agents() const noexcept { return agents_; }

 private:
  LatencyTable latency_;
  LatencyFn latency_fn_;
  std::map<PartyId, std::unique_ptr<Agent>> agents_;
  EventQueue queue_;
  SimTime clock_;
  std::uint64_t next_seq_ = 0;
  EventLog log_;
  std::function<void(const Interaction&)> interaction_sink_;
};

}  // namespace vcsim::sim
