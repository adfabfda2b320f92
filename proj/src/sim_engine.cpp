#include "vcsim/sim_engine.hpp"

namespace vcsim::sim {

std::string_view to_string(SimErrc e) {
  switch (e) {
    case SimErrc::SchedulesInPast: return "SchedulesInPast";
    case SimErrc::UnknownRecipient: return "UnknownRecipient";
    case SimErrc::DuplicateAgent: return "DuplicateAgent";
    case SimErrc::EventBudgetExceeded: return "EventBudgetExceeded";
  }
  return "?";
}

namespace {

[[noreturn]] void fail(SimErrc code, const std::string& detail) {
  throw SimError(code, std::string(to_string(code)) + ": " + detail);
}

}  // namespace

std::string render(const Envelope& e) {
  return "MSG " + std::to_string(e.deliver_at.ticks) + " " + std::to_string(e.seq) + " " + e.from.str() + " " +
         e.to.str() + " " + protocol::render(e.payload);
}

std::string render(const LogEntry& entry) {
  struct Visitor {
    std::string operator()(const Envelope& e) const { return sim::render(e); }
    std::string operator()(const Note& n) const { return "NOTE " + std::to_string(n.at.ticks) + " " + n.text; }
    std::string operator()(const inventory::HistoryRow& r) const { return inventory::render(r); }
    std::string operator()(const EndMarker& m) const {
      return "END " + std::to_string(m.final_time.ticks) + " " + std::to_string(m.event_count);
    }
  };
  return std::visit(Visitor{}, entry);
}

void EventLog::append(LogEntry entry) {
  if (complete()) throw std::logic_error("event log already closed");
  if (std::holds_alternative<Envelope>(entry)) ++delivered_;
  entries_.push_back(std::move(entry));
}

std::string EventLog::render() const {
  std::string out;
  for (const auto& entry : entries_) {
    out += sim::render(entry);
    out += '\n';
  }
  return out;
}

Envelope EventQueue::pop() {
  Envelope e = heap_.top();
  heap_.pop();
  return e;
}

Simulation::Simulation(LatencyTable latency)
    : latency_(std::move(latency)),
      latency_fn_([this](const PartyId& from, const PartyId& to) { return latency_.between(from, to); }) {}

void Simulation::add_agent(const PartyId& id, std::unique_ptr<Agent> agent) {
  if (agents_.contains(id)) fail(SimErrc::DuplicateAgent, id.str());
  agents_.emplace(id, std::move(agent));
}

Agent* Simulation::agent(const PartyId& id) const {
  auto it = agents_.find(id);
  return it == agents_.end() ? nullptr : it->second.get();
}

void Simulation::schedule(Envelope envelope) {
  if (envelope.deliver_at < clock_) {
    fail(SimErrc::SchedulesInPast, "deliver_at " + std::to_string(envelope.deliver_at.ticks) + " < clock " +
                                       std::to_string(clock_.ticks));
  }
  protocol::validate(envelope.payload);
  queue_.push(std::move(envelope));
}

std::uint64_t Simulation::send(const PartyId& from, const PartyId& to, protocol::Message payload,
                               std::optional<SimTime> deliver_at) {
  Envelope e;
  e.deliver_at = deliver_at.value_or(clock_ + latency_.between(from, to));
  e.seq = next_seq_;
  e.from = from;
  e.to = to;
  e.payload = std::move(payload);
  e.sent_at = clock_;
  schedule(std::move(e));
  return next_seq_++;
}

void Simulation::note(std::string text) { log_.append(Note{clock_, std::move(text)}); }

void Simulation::note_inventory(const inventory::HistoryRow& row) { log_.append(row); }

std::optional<Envelope> Simulation::step() {
  if (queue_.empty()) return std::nullopt;
  if (!agents_.contains(queue_.top().to)) {
    fail(SimErrc::UnknownRecipient, "envelope " + std::to_string(queue_.top().seq) + " for " + queue_.top().to.str());
  }
  Envelope delivered = queue_.pop();
  clock_ = delivered.deliver_at;
  Agent& target = *agents_.at(delivered.to);

  const inventory::Ledger* ledger = target.ledger();
  const std::size_t history_before = ledger ? ledger->history().size() : 0;

  Reaction reaction = target.handle(delivered, DispatchContext{clock_, latency_fn_});

  log_.append(delivered);
  for (auto& text : reaction.notes) note(std::move(text));
  if (ledger) {
    const auto& history = ledger->history();
    for (std::size_t i = history_before; i < history.size(); ++i) note_inventory(history[i]);
  }
  for (auto& out : reaction.outgoing) {
    Envelope e;
    e.deliver_at = out.deliver_at.value_or(clock_ + latency_.between(delivered.to, out.to));
    e.seq = next_seq_++;
    e.from = delivered.to;
    e.to = std::move(out.to);
    e.payload = std::move(out.payload);
    e.sent_at = clock_;
    e.cause = delivered.seq;
    schedule(std::move(e));
  }
  if (interaction_sink_) {
    for (const auto& interaction : reaction.interactions) interaction_sink_(interaction);
  }
  return delivered;
}

const EventLog& Simulation::run(std::uint64_t max_events) {
  while (!queue_.empty()) {
    if (log_.delivered_count() >= max_events) {
      fail(SimErrc::EventBudgetExceeded, std::to_string(max_events) + " events delivered, queue still holds " +
                                             std::to_string(queue_.size()));
    }
    step();
  }
  log_.append(EndMarker{clock_, log_.delivered_count()});
  return log_;
}

}  // namespace vcsim::sim
