#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "occ/ids.hpp"
#include "occ/ocel.hpp"

namespace occ {

/// Dependency DAG over events: e' precedes e when e' comes earlier in the
/// log and shares an object with e. Only the immediate predecessor per
/// shared object is stored; presets are the transitive closure.
class EventObjectGraph {
 public:
  EventObjectGraph() = default;
  explicit EventObjectGraph(const EventLog& log);

  std::size_t size() const { return preds_.size(); }

  /// Last earlier occurrence of each object of `e`, deduplicated, sorted.
  std::span<const EventIdx> immediate_predecessors(EventIdx e) const { return preds_.at(e.get()); }

  /// Full edge relation: `from` is earlier than `to` and they share an object.
  bool is_edge(EventIdx from, EventIdx to) const;
  /// All edges of the full relation. Quadratic; meant for inspection and tests.
  std::vector<std::pair<EventIdx, EventIdx>> edges() const;

  /// All events with a path to `e`, as a bitset over event indices.
  const boost::dynamic_bitset<>& preset_bits(EventIdx e) const { return presets_.at(e.get()); }
  /// Same as preset_bits, sorted by log order.
  std::vector<EventIdx> preset(EventIdx e) const;
  bool in_preset(EventIdx e, EventIdx candidate) const { return presets_.at(e.get()).test(candidate.get()); }

 private:
  std::vector<std::vector<ObjectIdx>> omaps_;
  std::vector<std::vector<EventIdx>> preds_;
  std::vector<boost::dynamic_bitset<>> presets_;
};

EventObjectGraph build_graph(const EventLog& log);

/// Throws InputError for an unknown event.
std::vector<EventIdx> event_preset(const EventObjectGraph& graph, EventIdx e);
std::vector<EventIdx> event_preset(const EventLog& log, const EventObjectGraph& graph, std::string_view event_id);

using ActivitySequence = std::vector<std::string>;

/// Activities of the events in `preset` that involve `o`, in log order.
ActivitySequence object_prefix(const EventLog& log, std::span<const EventIdx> preset, ObjectIdx o);

/// Per object type, a multiset of activity sequences. Stored canonically:
/// types sorted by name, sequences sorted with their multiplicities, and
/// no empty types. Equal contexts have equal representations.
class Context {
 public:
  using Counted = std::pair<ActivitySequence, std::size_t>;
  struct TypeEntry {
    std::string type;
    std::vector<Counted> sequences;

    friend auto operator<=>(const TypeEntry&, const TypeEntry&) = default;
  };

  Context() = default;
  /// One (type, sequence) pair per object.
  static Context from_prefixes(std::vector<std::pair<std::string, ActivitySequence>> prefixes);

  const std::vector<TypeEntry>& types() const { return types_; }
  /// nullptr when the type has no sequences.
  const std::vector<Counted>* of_type(std::string_view type) const;
  bool empty() const { return types_.empty(); }

  /// Deterministic JSON rendering; byte-equal iff the contexts are equal.
  std::string canonical() const;
  /// 16 hex digits of FNV-1a-64 over canonical().
  std::string digest() const;
  /// plane: [<Fuel plane, Load cargo>], baggage: [<Check-in, Load cargo>^2]
  std::string to_string() const;

  friend auto operator<=>(const Context&, const Context&) = default;

 private:
  std::vector<TypeEntry> types_;
};

struct ContextHash {
  std::size_t operator()(const Context& c) const;
};

Context context_of_event(const EventLog& log, const EventObjectGraph& graph, EventIdx e);

struct ContextGroup {
  Context context;
  // Log order.
  std::vector<EventIdx> events;
  // Activities of the group's events, sorted.
  std::vector<std::string> enabled_log;
};

/// Partition of the log's events by context.
class ContextIndex {
 public:
  ContextIndex() = default;
  ContextIndex(const EventLog& log, const EventObjectGraph& graph);

  /// Ordered by the first event of each group.
  std::span<const ContextGroup> groups() const { return groups_; }
  std::size_t group_of(EventIdx e) const { return group_of_.at(e.get()); }
  const ContextGroup& group_for(EventIdx e) const { return groups_.at(group_of(e)); }

 private:
  std::vector<ContextGroup> groups_;
  std::vector<std::size_t> group_of_;
};

ContextIndex group_by_context(const EventLog& log, const EventObjectGraph& graph);

/// Activities of all events whose context equals that of `e`, sorted.
std::vector<std::string> enabled_log_activities(const ContextIndex& index, EventIdx e);
std::vector<std::string> enabled_log_activities(const EventLog& log, const EventObjectGraph& graph, EventIdx e);

}  // namespace occ
