#include "doctest.h"
#include "support/oracles.hpp"
#include "vcsim/sim_engine.hpp"

using namespace vcsim;
using namespace vcsim::sim;

namespace {

const PartyId X{"X"}, Y{"Y"};
const Sku A{"A"};

protocol::Message shipped(std::int64_t qty) { return protocol::GoodsShipped{protocol::OrderId("O1"), A, qty}; }

// Records deliveries and answers each with `fanout` messages back to the sender.
class Echo final : public Agent {
 public:
  explicit Echo(int fanout, int budget = 1) : fanout_(fanout), budget_(budget) {}

  Reaction handle(const Envelope& in, const DispatchContext& ctx) override {
    seen.push_back(in.seq);
    times.push_back(ctx.now.ticks);
    Reaction r;
    if (budget_-- > 0) {
      for (int i = 0; i < fanout_; ++i) r.outgoing.push_back({in.from, shipped(i + 1), std::nullopt});
    }
    r.notes.push_back("echo " + std::to_string(in.seq));
    return r;
  }

  std::vector<std::uint64_t> seen;
  std::vector<std::uint64_t> times;

 private:
  int fanout_;
  int budget_;
};

}  // namespace

TEST_SUITE("sim_engine") {

TEST_CASE("schedule rejects the past") {
  Simulation sim;
  sim.add_agent(X, std::make_unique<Echo>(0));
  sim.add_agent(Y, std::make_unique<Echo>(0));
  sim.send(X, Y, shipped(1), SimTime{3});
  sim.step();
  CHECK(sim.now() == SimTime{3});
  CHECK_NOTHROW(sim.send(X, Y, shipped(1), SimTime{5}));
  try {
    sim.send(X, Y, shipped(1), SimTime{2});
    FAIL("expected SchedulesInPast");
  } catch (const SimError& e) {
    CHECK(e.code() == SimErrc::SchedulesInPast);
  }
}

TEST_CASE("same-time envelopes leave in seq order") {
  Simulation sim;
  auto echo = std::make_unique<Echo>(0);
  Echo* y = echo.get();
  sim.add_agent(Y, std::move(echo));
  sim.add_agent(X, std::make_unique<Echo>(0));
  sim.send(X, Y, shipped(1), SimTime{4});
  sim.send(X, Y, shipped(2), SimTime{2});
  sim.send(X, Y, shipped(3), SimTime{4});
  sim.run();
  CHECK(y->seen == std::vector<std::uint64_t>{1, 0, 2});
}

TEST_CASE("empty queue is quiescent") {
  Simulation sim;
  CHECK_FALSE(sim.step().has_value());
  const auto& log = sim.run();
  CHECK(log.render() == "END 0 0\n");
}

TEST_CASE("a handler emitting three envelopes grows the queue by three and the log by one delivery") {
  Simulation sim(LatencyTable(2));
  sim.add_agent(X, std::make_unique<Echo>(0));
  sim.add_agent(Y, std::make_unique<Echo>(3));
  sim.send(X, Y, shipped(1), SimTime{0});
  CHECK(sim.queue_size() == 1);
  sim.step();
  CHECK(sim.queue_size() == 3);
  CHECK(sim.log().delivered_count() == 1);
  const auto* e = std::get_if<Envelope>(&sim.log().entries().front());
  REQUIRE(e != nullptr);
  CHECK(render(*e) == "MSG 0 0 X Y GoodsShipped O1 A 1");
}

TEST_CASE("outgoing envelopes get latency, cause and fresh seqs") {
  LatencyTable table(1);
  table.set(Y, X, 5);
  Simulation sim(table);
  sim.add_agent(X, std::make_unique<Echo>(0));
  sim.add_agent(Y, std::make_unique<Echo>(2));
  sim.send(X, Y, shipped(1), SimTime{1});
  sim.run();
  std::vector<const Envelope*> all;
  for (const auto& entry : sim.log().entries()) {
    if (const auto* e = std::get_if<Envelope>(&entry)) all.push_back(e);
  }
  REQUIRE(all.size() == 3);
  CHECK(all[1]->deliver_at == SimTime{6});
  CHECK(all[1]->cause == 0u);
  CHECK(all[1]->seq == 1u);
  CHECK(all[2]->seq == 2u);
  CHECK(sim.log().render().ends_with("END 6 3\n"));
}

TEST_CASE("unknown recipients halt the run") {
  Simulation sim;
  sim.add_agent(X, std::make_unique<Echo>(0));
  sim.send(X, Y, shipped(1), SimTime{0});
  try {
    sim.step();
    FAIL("expected UnknownRecipient");
  } catch (const SimError& e) {
    CHECK(e.code() == SimErrc::UnknownRecipient);
  }
  CHECK(sim.queue_size() == 1);
  CHECK_THROWS_AS(sim.add_agent(X, std::make_unique<Echo>(0)), SimError);
}

TEST_CASE("event budget stops a livelock") {
  Simulation sim;
  sim.add_agent(X, std::make_unique<Echo>(1, 1'000'000));
  sim.add_agent(Y, std::make_unique<Echo>(1, 1'000'000));
  sim.send(X, Y, shipped(1), SimTime{0});
  try {
    sim.run(50);
    FAIL("expected EventBudgetExceeded");
  } catch (const SimError& e) {
    CHECK(e.code() == SimErrc::EventBudgetExceeded);
  }
  CHECK(sim.log().delivered_count() == 50);
  CHECK_FALSE(sim.log().complete());
}

TEST_CASE("invalid payloads are refused at schedule time") {
  Simulation sim;
  sim.add_agent(Y, std::make_unique<Echo>(0));
  CHECK_THROWS_AS(sim.send(X, Y, shipped(0), SimTime{0}), protocol::ProtocolError);
  CHECK(sim.queue_size() == 0);
}

TEST_CASE("clock never decreases") {
  LatencyTable table(3);
  table.set(X, Y, 1);
  Simulation sim(table);
  auto ex = std::make_unique<Echo>(2, 20);
  auto ey = std::make_unique<Echo>(2, 20);
  Echo* x = ex.get();
  Echo* y = ey.get();
  sim.add_agent(X, std::move(ex));
  sim.add_agent(Y, std::move(ey));
  sim.send(X, Y, shipped(1), SimTime{0});
  sim.send(Y, X, shipped(1), SimTime{2});
  sim.run();
  std::uint64_t last = 0;
  for (const auto& entry : sim.log().entries()) {
    if (const auto* e = std::get_if<Envelope>(&entry)) {
      CHECK(e->deliver_at.ticks >= last);
      last = e->deliver_at.ticks;
    }
  }
  CHECK(x->seen.size() + y->seen.size() == sim.log().delivered_count());
}

TEST_CASE("closed log refuses appends") {
  EventLog log;
  log.append(Note{SimTime{0}, "hello"});
  log.append(EndMarker{SimTime{0}, 0});
  CHECK(log.complete());
  CHECK_THROWS_AS(log.append(Note{SimTime{0}, "late"}), std::logic_error);
  CHECK(log.render() == "NOTE 0 hello\nEND 0 0\n");
}

TEST_CASE("Lcg64 matches the limb implementation") {
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xFFFFFFFFFFFFFFFFULL, 0x123456789ABCDEFULL}) {
    Lcg64 a(seed);
    testing::LimbLcg b(seed);
    for (int i = 0; i < 10000; ++i) REQUIRE(a.next() == b.next());
  }
  Lcg64 c(7);
  testing::LimbLcg d(7);
  for (int i = 0; i < 1000; ++i) {
    const auto v = c.next_in(2, 9);
    CHECK(v == d.next_in(2, 9));
    CHECK(v >= 2);
    CHECK(v <= 9);
  }
}

TEST_CASE("Lcg64 first outputs are pinned") {
  Lcg64 g(0);
  CHECK(g.next() == 1442695040888963407ULL);
  CHECK(g.next() == 1442695040888963407ULL * 6364136223846793005ULL + 1442695040888963407ULL);
}

}
