#include <doctest.h>

#include <random>

#include "occ/context.hpp"
#include "occ/error.hpp"
#include "occ/replay.hpp"
#include "support.hpp"

using namespace occ;
using namespace occ::test;

namespace {

using Seqs = std::vector<Context::Counted>;

// Converts an engine context to the oracle's shape.
oracle::RawContext to_raw(const Context& c) {
  oracle::RawContext r;
  for (const auto& entry : c.types())
    for (const auto& [seq, count] : entry.sequences)
      for (std::size_t i = 0; i < count; ++i) r[entry.type].push_back(seq);
  for (auto& [type, seqs] : r) std::ranges::sort(seqs);
  return r;
}

}  // namespace

TEST_CASE("event-object graph edges point forward and share an object") {
  std::mt19937 rng(11);
  for (int round = 0; round < 100; ++round) {
    const auto log = random_log(rng);
    const EventObjectGraph graph(log);
    for (auto [from, to] : graph.edges()) {
      CHECK(from < to);
      const auto& a = log.event(from).omap;
      const auto& b = log.event(to).omap;
      CHECK(std::ranges::any_of(a, [&](auto o) { return std::ranges::find(b, o) != b.end(); }));
    }
    for (std::size_t e = 0; e < graph.size(); ++e) {
      CHECK_FALSE(graph.in_preset(EventIdx(e), EventIdx(e)));
      for (auto p : graph.immediate_predecessors(EventIdx(e))) CHECK(graph.is_edge(p, EventIdx(e)));
    }
  }
}

TEST_CASE("presets match the transitive closure oracle and are transitive") {
  std::mt19937 rng(12);
  for (int round = 0; round < 200; ++round) {
    const auto log = random_log(rng);
    const EventObjectGraph graph(log);
    const auto reach = oracle::transitive_closure(raw(log));
    for (std::size_t e = 0; e < log.size(); ++e) {
      for (std::size_t p = 0; p < log.size(); ++p) CHECK(graph.in_preset(EventIdx(e), EventIdx(p)) == reach[p][e]);
      // e' in preset(e) implies preset(e') is a subset of preset(e).
      for (auto p : graph.preset(EventIdx(e)))
        CHECK(graph.preset_bits(p).is_subset_of(graph.preset_bits(EventIdx(e))));
    }
  }
}

TEST_CASE("presets of the running example") {
  const auto log = l1();
  const auto graph = build_graph(log);
  using V = std::vector<std::string>;
  CHECK(event_ids(log, graph.preset(ev(log, "e5"))) == V{"e1", "e2", "e3", "e4"});
  CHECK(event_ids(log, event_preset(log, graph, "e1")).empty());
  CHECK(event_ids(log, event_preset(log, graph, "e9")) == V{"e1", "e2", "e3", "e4", "e5", "e6"});
  CHECK(event_ids(log, event_preset(log, graph, "e14")) == V{"e10", "e11", "e12", "e13"});
  CHECK_THROWS_AS(event_preset(log, graph, "e99"), InputError);
  CHECK_THROWS_AS(event_preset(graph, EventIdx(99)), InputError);
}

TEST_CASE("object prefixes") {
  const auto log = l1();
  const auto graph = build_graph(log);
  const auto preset = graph.preset(ev(log, "e5"));
  using V = ActivitySequence;
  CHECK(object_prefix(log, preset, *log.find_object("p1")) == V{"Fuel plane", "Load cargo"});
  CHECK(object_prefix(log, preset, *log.find_object("b1")) == V{"Check-in", "Load cargo"});
  CHECK(object_prefix(log, preset, *log.find_object("p2")).empty());
}

TEST_CASE("contexts of the running example") {
  const auto log = l1();
  const auto graph = build_graph(log);

  const auto c5 = context_of_event(log, graph, ev(log, "e5"));
  CHECK(*c5.of_type("plane") == Seqs{{{"Fuel plane", "Load cargo"}, 1}});
  CHECK(*c5.of_type("baggage") == Seqs{{{"Check-in", "Load cargo"}, 2}});
  CHECK(c5.to_string() == "baggage: [<Check-in, Load cargo>^2], plane: [<Fuel plane, Load cargo>]");

  const auto c1 = context_of_event(log, graph, ev(log, "e1"));
  CHECK(*c1.of_type("plane") == Seqs{{{}, 1}});
  CHECK(c1.of_type("baggage") == nullptr);

  CHECK(context_of_event(log, graph, ev(log, "e14")) == c5);
  CHECK(context_of_event(log, graph, ev(log, "e6")) != c5);
}

TEST_CASE("context groups and enabled log activities") {
  const auto log = l1();
  const auto graph = build_graph(log);
  const ContextIndex index(log, graph);
  using V = std::vector<std::string>;
  CHECK(event_ids(log, index.group_for(ev(log, "e5")).events) == V{"e5", "e14"});
  CHECK(event_ids(log, index.group_for(ev(log, "e1")).events) == V{"e1", "e10"});
  CHECK(enabled_log_activities(index, ev(log, "e5")) == V{"Lift off"});
  CHECK(enabled_log_activities(log, graph, ev(log, "e2")) == V{"Check-in"});
  CHECK(index.groups().front().events.front() == ev(log, "e1"));

  std::size_t covered = 0;
  for (const auto& g : index.groups()) covered += g.events.size();
  CHECK(covered == log.size());
}

TEST_CASE("contexts and enabled log activities match the oracle on random logs") {
  std::mt19937 rng(13);
  for (int round = 0; round < 200; ++round) {
    const auto log = random_log(rng);
    const auto graph = build_graph(log);
    const auto r = raw(log);
    const auto expected = oracle::contexts(r);
    const auto expected_en = oracle::enabled_log(r);
    const ContextIndex index(log, graph);
    for (std::size_t e = 0; e < log.size(); ++e) {
      CHECK(to_raw(context_of_event(log, graph, EventIdx(e))) == expected[e]);
      const auto en = enabled_log_activities(index, EventIdx(e));
      CHECK(std::set<std::string>(en.begin(), en.end()) == expected_en[e]);
    }
  }
}

TEST_CASE("canonical form is deterministic and faithful") {
  std::mt19937 rng(14);
  for (int round = 0; round < 200; ++round) {
    std::vector<std::pair<std::string, ActivitySequence>> prefixes;
    const auto n = rng() % 6;
    for (std::size_t i = 0; i < n; ++i) {
      ActivitySequence seq;
      for (auto k = rng() % 3; k > 0; --k) seq.push_back(std::string(1, static_cast<char>('A' + rng() % 3)));
      prefixes.emplace_back(rng() % 2 == 0 ? "a" : "b", seq);
    }
    auto shuffled = prefixes;
    std::ranges::shuffle(shuffled, rng);
    const auto c = Context::from_prefixes(prefixes);
    const auto d = Context::from_prefixes(shuffled);
    CHECK(c == d);
    CHECK(c.canonical() == d.canonical());
    CHECK(c.digest() == d.digest());
    CHECK(c.digest().size() == 16);
    CHECK(ContextHash{}(c) == ContextHash{}(d));

    if (!prefixes.empty()) {
      auto changed = prefixes;
      changed.front().second.push_back("Z");
      CHECK(Context::from_prefixes(changed).canonical() != c.canonical());
    }
  }
}

TEST_CASE("log contexts agree with binding-sequence contexts of recorded bindings") {
  const auto log = l1();
  const auto net = ocpn1();
  const auto graph = build_graph(log);
  const Replayer replayer(net, log, graph);
  for (std::size_t i = 0; i < log.size(); ++i) {
    const EventIdx e(i);
    std::vector<Binding> sequence;
    for (auto p : graph.preset(e)) sequence.push_back(replayer.recorded_binding(p).value());
    const auto members = replayer.replay_objects(e);
    CHECK(binding_sequence_context(net, replayer.objects(), sequence, members) == context_of_event(log, graph, e));
  }
}
