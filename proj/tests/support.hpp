#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "occ/metrics.hpp"
#include "occ/ocel.hpp"
#include "occ/ocpn.hpp"
#include "oracles.hpp"

namespace occ::test {

inline std::string fixture(const std::string& name) { return std::string(OCC_FIXTURES_DIR) + "/" + name; }

inline EventLog l1() { return read_log_file(fixture("l1.json")); }
inline AcceptingOCPN ocpn1() { return read_model_file(fixture("ocpn1.json")); }
inline AcceptingOCPN restricted() { return read_model_file(fixture("restricted.json")); }

inline EventIdx ev(const EventLog& log, const std::string& id) { return log.find_event(id).value(); }

inline std::vector<EventIdx> events(const EventLog& log, std::initializer_list<const char*> ids) {
  std::vector<EventIdx> out;
  for (const auto* id : ids) out.push_back(ev(log, id));
  return out;
}

inline std::vector<std::string> event_ids(const EventLog& log, const std::vector<EventIdx>& es) {
  std::vector<std::string> out;
  for (auto e : es) out.push_back(log.event(e).id);
  return out;
}

/// Marking from (place id, object id) pairs, objects resolved in `objects`.
inline Marking marking(const AcceptingOCPN& net, const ObjectTable& objects,
                       std::initializer_list<std::pair<const char*, const char*>> tokens) {
  Marking m;
  for (const auto& [p, o] : tokens) {
    ObjectIdx idx;
    for (std::size_t i = 0; i < objects.size(); ++i)
      if (objects.id(ObjectIdx(i)) == o) idx = ObjectIdx(i);
    m.add({net.find_place(p).value(), idx});
  }
  return m;
}

inline ObjectIdx object(const ObjectTable& objects, const std::string& id) {
  for (std::size_t i = 0; i < objects.size(); ++i)
    if (objects.id(ObjectIdx(i)) == id) return ObjectIdx(i);
  return {};
}

/// Binding of the transition with id `tid`; objects given per type name.
inline Binding binding(const AcceptingOCPN& net, const ObjectTable& objects, const char* tid,
                       std::initializer_list<std::pair<const char*, std::vector<std::string>>> per_type) {
  Binding b{net.find_transition(tid).value(), {}};
  for (const auto& [type, ids] : per_type) {
    std::vector<ObjectIdx> objs;
    for (const auto& id : ids) objs.push_back(object(objects, id));
    std::ranges::sort(objs);
    b.objects.emplace_back(net.find_type(type).value(), std::move(objs));
  }
  std::ranges::sort(b.objects, {}, [](const auto& e) { return e.first; });
  return b;
}

inline std::string log_json(std::string body_events, std::string objects = R"({"p1":"plane","b1":"baggage"})") {
  return R"({"object_types":["plane","baggage"],"objects":)" + objects + R"(,"events":[)" + body_events + "]}";
}

/// Plain-string copy of a log for the oracles.
inline oracle::RawLog raw(const EventLog& log) {
  oracle::RawLog r;
  for (std::size_t i = 0; i < log.num_objects(); ++i)
    r.object_type[log.object_id(ObjectIdx(i))] = log.type_name(log.object_type(ObjectIdx(i)));
  for (const auto& e : log.events()) {
    oracle::RawEvent re{e.id, e.activity, {}};
    for (auto o : e.omap) re.objects.insert(log.object_id(o));
    r.events.push_back(std::move(re));
  }
  return r;
}

/// Random log over types "a" and "b" with up to `max_events` events.
inline EventLog random_log(std::mt19937& rng, std::size_t max_events = 12, std::size_t max_objects = 5,
                           std::size_t max_activities = 4) {
  const std::size_t n_objects = 1 + rng() % max_objects;
  nlohmann::json doc;
  doc["object_types"] = {"a", "b"};
  doc["objects"] = nlohmann::json::object();
  for (std::size_t o = 0; o < n_objects; ++o) doc["objects"]["o" + std::to_string(o)] = o % 2 == 0 ? "a" : "b";
  doc["events"] = nlohmann::json::array();
  const std::size_t n_events = 1 + rng() % max_events;
  for (std::size_t e = 0; e < n_events; ++e) {
    nlohmann::json omap = nlohmann::json::array();
    const std::size_t first = rng() % n_objects;
    omap.push_back("o" + std::to_string(first));
    for (std::size_t o = 0; o < n_objects; ++o)
      if (o != first && rng() % 3 == 0) omap.push_back("o" + std::to_string(o));
    doc["events"].push_back({{"id", "e" + std::to_string(e + 1)},
                             {"activity", std::string(1, static_cast<char>('A' + rng() % max_activities))},
                             {"omap", omap}});
  }
  return parse_log(doc.dump());
}

}  // namespace occ::test
