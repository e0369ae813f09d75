#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "occ/ids.hpp"

namespace occ {

/// Unvalidated log content as read from a document. `validate_log` checks
/// it, `EventLog::from_data` turns it into the indexed immutable form.
struct LogData {
  struct ObjectRef {
    std::string id;
    // Only set when the producer states the type at the point of use.
    std::optional<std::string> type;
  };
  struct Object {
    std::string id;
    std::string type;
    // Extra OCEL object attributes; carried through untouched.
    nlohmann::json attributes;
  };
  struct Event {
    std::string id;
    std::string activity;
    std::vector<ObjectRef> omap;
    std::optional<std::string> timestamp;
  };

  std::vector<std::string> object_types;
  std::vector<Object> objects;
  std::vector<Event> events;
};

/// Returns one message per broken invariant; empty means valid.
std::vector<std::string> validate_log(const LogData& data);

struct ObjectInfo {
  std::string id;
  TypeIdx type;
  nlohmann::json attributes;
};

struct Event {
  std::string id;
  std::string activity;
  // Sorted by object index.
  std::vector<ObjectIdx> omap;
  EventIdx index;
  std::optional<std::string> timestamp;
};

/// An object-centric event log. Array order of `events()` is the total
/// order of the log. Immutable once built.
class EventLog {
 public:
  EventLog() = default;

  /// Throws InputError listing every violation if `data` is invalid.
  static EventLog from_data(const LogData& data);

  const std::vector<std::string>& object_types() const { return types_; }
  const std::string& type_name(TypeIdx t) const { return types_.at(t.get()); }
  std::optional<TypeIdx> find_type(std::string_view name) const;

  std::size_t num_objects() const { return objects_.size(); }
  const ObjectInfo& object(ObjectIdx o) const { return objects_.at(o.get()); }
  const std::string& object_id(ObjectIdx o) const { return objects_.at(o.get()).id; }
  TypeIdx object_type(ObjectIdx o) const { return objects_.at(o.get()).type; }
  std::optional<ObjectIdx> find_object(std::string_view id) const;

  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  std::span<const Event> events() const { return events_; }
  const Event& event(EventIdx e) const { return events_.at(e.get()); }
  std::optional<EventIdx> find_event(std::string_view id) const;

  /// Distinct activity labels, sorted.
  std::vector<std::string> activities() const;

 private:
  std::vector<std::string> types_;
  std::vector<ObjectInfo> objects_;
  std::vector<Event> events_;
  std::unordered_map<std::string, ObjectIdx> object_lookup_;
  std::unordered_map<std::string, EventIdx> event_lookup_;
};

/// Reads the log-JSON document structure without checking log invariants.
LogData parse_log_data(std::string_view text);

/// parse_log_data + validation. Throws InputError.
EventLog parse_log(std::string_view text);

nlohmann::json log_to_json(const EventLog& log);
std::string serialize_log(const EventLog& log);

EventLog read_log_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace occ
