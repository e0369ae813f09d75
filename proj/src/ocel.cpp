#include "occ/ocel.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "occ/error.hpp"

namespace occ {

namespace {

using nlohmann::json;

std::string join_violations(const std::vector<std::string>& violations) {
  std::string out = "invalid log: ";
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i > 0) out += "; ";
    out += violations[i];
  }
  return out;
}

const json& require(const json& j, const char* key, const char* where) {
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string("missing \"") + key + "\" in " + where);
  return *it;
}

std::string require_string(const json& j, const char* what) {
  if (!j.is_string()) throw InputError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

}  // namespace

std::vector<std::string> validate_log(const LogData& data) {
  std::vector<std::string> violations;

  std::unordered_set<std::string> types;
  for (const auto& t : data.object_types) {
    if (t.empty()) violations.push_back("empty object type name");
    else if (!types.insert(t).second) violations.push_back("duplicate object type " + t);
  }

  std::unordered_map<std::string, std::string> object_types;
  for (const auto& o : data.objects) {
    if (o.id.empty()) {
      violations.push_back("empty object id");
      continue;
    }
    if (!types.contains(o.type)) violations.push_back("object " + o.id + " has unknown type " + o.type);
    if (!object_types.emplace(o.id, o.type).second) violations.push_back("duplicate object id " + o.id);
  }

  std::unordered_set<std::string> event_ids;
  for (const auto& e : data.events) {
    if (e.id.empty()) violations.push_back("empty event id");
    else if (!event_ids.insert(e.id).second) violations.push_back("duplicate event id " + e.id);
    if (e.activity.empty()) violations.push_back("event " + e.id + " has an empty activity");
    if (e.omap.empty()) violations.push_back("event " + e.id + " has an empty omap");
    std::unordered_set<std::string> seen;
    for (const auto& ref : e.omap) {
      auto it = object_types.find(ref.id);
      if (it == object_types.end()) {
        violations.push_back("event " + e.id + " references unknown object " + ref.id);
        continue;
      }
      if (!seen.insert(ref.id).second) violations.push_back("event " + e.id + " lists object " + ref.id + " twice");
      if (ref.type && *ref.type != it->second) {
        violations.push_back("object " + ref.id + " is typed " + it->second + " but used as " + *ref.type + " in event " +
                             e.id);
      }
    }
  }
  return violations;
}

EventLog EventLog::from_data(const LogData& data) {
  if (auto violations = validate_log(data); !violations.empty()) throw InputError(join_violations(violations));

  EventLog log;
  log.types_ = data.object_types;

  std::vector<const LogData::Object*> sorted;
  for (const auto& o : data.objects) sorted.push_back(&o);
  std::ranges::sort(sorted, {}, [](const auto* o) { return o->id; });
  for (const auto* o : sorted) {
    ObjectIdx idx(log.objects_.size());
    log.objects_.push_back({o->id, *log.find_type(o->type), o->attributes});
    log.object_lookup_.emplace(o->id, idx);
  }

  log.events_.reserve(data.events.size());
  for (const auto& e : data.events) {
    Event ev{e.id, e.activity, {}, EventIdx(log.events_.size()), e.timestamp};
    for (const auto& ref : e.omap) ev.omap.push_back(log.object_lookup_.at(ref.id));
    std::ranges::sort(ev.omap);
    log.event_lookup_.emplace(e.id, ev.index);
    log.events_.push_back(std::move(ev));
  }
  return log;
}

std::optional<TypeIdx> EventLog::find_type(std::string_view name) const {
  auto it = std::ranges::find(types_, name);
  if (it == types_.end()) return std::nullopt;
  return TypeIdx(static_cast<std::size_t>(it - types_.begin()));
}

std::optional<ObjectIdx> EventLog::find_object(std::string_view id) const {
  auto it = object_lookup_.find(std::string(id));
  if (it == object_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<EventIdx> EventLog::find_event(std::string_view id) const {
  auto it = event_lookup_.find(std::string(id));
  if (it == event_lookup_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> EventLog::activities() const {
  std::set<std::string> acts;
  for (const auto& e : events_) acts.insert(e.activity);
  return {acts.begin(), acts.end()};
}

LogData parse_log_data(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw InputError(std::string("malformed JSON: ") + err.what());
  }
  if (!doc.is_object()) throw InputError("log document must be a JSON object");

  LogData data;
  const auto& types = require(doc, "object_types", "log");
  if (!types.is_array()) throw InputError("\"object_types\" must be an array");
  for (const auto& t : types) data.object_types.push_back(require_string(t, "object type"));

  const auto& objects = require(doc, "objects", "log");
  if (!objects.is_object()) throw InputError("\"objects\" must be an object");
  for (const auto& [id, value] : objects.items()) {
    LogData::Object obj{id, {}, nullptr};
    if (value.is_string()) {
      obj.type = value.get<std::string>();
    } else if (value.is_object()) {
      obj.type = require_string(require(value, "type", "object"), "object type");
      obj.attributes = value;
      obj.attributes.erase("type");
    } else {
      throw InputError("object " + id + " must map to a type name");
    }
    data.objects.push_back(std::move(obj));
  }

  const auto& events = require(doc, "events", "log");
  if (!events.is_array()) throw InputError("\"events\" must be an array");
  for (const auto& e : events) {
    if (!e.is_object()) throw InputError("event entries must be objects");
    LogData::Event ev;
    ev.id = require_string(require(e, "id", "event"), "event id");
    ev.activity = require_string(require(e, "activity", "event"), "activity");
    const auto& omap = require(e, "omap", "event");
    if (!omap.is_array()) throw InputError("omap of event " + ev.id + " must be an array");
    for (const auto& ref : omap) {
      if (ref.is_string()) {
        ev.omap.push_back({ref.get<std::string>(), std::nullopt});
      } else if (ref.is_object()) {
        ev.omap.push_back({require_string(require(ref, "id", "omap entry"), "object id"),
                           require_string(require(ref, "type", "omap entry"), "object type")});
      } else {
        throw InputError("omap entries of event " + ev.id + " must be object ids");
      }
    }
    if (auto ts = e.find("timestamp"); ts != e.end() && !ts->is_null()) ev.timestamp = require_string(*ts, "timestamp");
    data.events.push_back(std::move(ev));
  }
  return data;
}

EventLog parse_log(std::string_view text) { return EventLog::from_data(parse_log_data(text)); }

nlohmann::json log_to_json(const EventLog& log) {
  json doc;
  doc["object_types"] = log.object_types();
  json objects = json::object();
  for (std::size_t i = 0; i < log.num_objects(); ++i) {
    const auto& o = log.object(ObjectIdx(i));
    const auto& type = log.type_name(o.type);
    if (o.attributes.is_object() && !o.attributes.empty()) {
      json value = o.attributes;
      value["type"] = type;
      objects[o.id] = std::move(value);
    } else {
      objects[o.id] = type;
    }
  }
  doc["objects"] = std::move(objects);
  json events = json::array();
  for (const auto& e : log.events()) {
    json ev{{"id", e.id}, {"activity", e.activity}};
    json omap = json::array();
    for (auto o : e.omap) omap.push_back(log.object_id(o));
    ev["omap"] = std::move(omap);
    if (e.timestamp) ev["timestamp"] = *e.timestamp;
    events.push_back(std::move(ev));
  }
  doc["events"] = std::move(events);
  return doc;
}

std::string serialize_log(const EventLog& log) { return log_to_json(log).dump(2) + "\n"; }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("cannot write " + path);
}

EventLog read_log_file(const std::string& path) { return parse_log(read_text_file(path)); }

}  // namespace occ
