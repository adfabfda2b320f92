#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vcsim/core.hpp"
#include "vcsim/messages.hpp"

namespace vcsim::sim {

struct Envelope {
  SimTime deliver_at;
  std::uint64_t seq = 0;  // global send counter
  PartyId from;
  PartyId to;
  protocol::Message payload;
  // Not rendered; kept for causality checks.
  SimTime sent_at;
  std::optional<std::uint64_t> cause;
};

// `MSG <time> <seq> <from> <to> <variant> <fields...>`
std::string render(const Envelope& e);

// A message a handler wants sent. Without `deliver_at` the engine applies the
// pairwise latency.
struct Outgoing {
  PartyId to;
  protocol::Message payload;
  std::optional<SimTime> deliver_at;
};

// A completed sale, fed back into the customer pattern buckets.
struct Interaction {
  PartyId buyer;
  SimTime at;
  Money value = 0;
};

struct Reaction {
  std::vector<Outgoing> outgoing;
  std::vector<std::string> notes;
  std::vector<Interaction> interactions;
};

using LatencyFn = std::function<std::uint64_t(const PartyId& from, const PartyId& to)>;

}  // namespace vcsim::sim
