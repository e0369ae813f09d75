#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "occ/context.hpp"
#include "occ/ocel.hpp"
#include "occ/ocpn.hpp"

namespace occ {

/// One event of a preset seen as a visible binding: its activity and its
/// objects grouped by object type name.
struct VisibleBindingStep {
  EventIdx event;
  std::string activity;
  std::vector<std::pair<std::string, std::vector<ObjectIdx>>> objects;
};

/// Events of the preset of `e`, in log order.
std::vector<VisibleBindingStep> binding_sequence_of_preset(const EventLog& log, const EventObjectGraph& graph,
                                                           EventIdx e);

struct ReplayConfig {
  std::size_t max_states = 100000;
  VariableMode silent_variable_mode = VariableMode::singleton;
  std::size_t subset_cap = 8;
  // Also try silent moves when the next recorded binding is enabled.
  bool silent_always = false;
  // Enqueue successors in reverse order. Only useful to check that results
  // do not depend on queue order.
  bool reverse_successor_order = false;

  /// Throws InputError when a cap is zero.
  void validate() const;
};

const char* to_string(VariableMode mode);
/// Throws InputError for anything but "singleton" and "subsets".
VariableMode parse_variable_mode(std::string_view text);

struct ReplayOutcome {
  // Sorted labels enabled in some fully replayed state.
  std::vector<std::string> enabled;
  // Some state replayed the whole binding sequence.
  bool replayed = false;
  // After the event's own binding, some silent successor is final.
  bool reached_final = false;
  // The state cap was hit.
  bool truncated = false;
  // Fully replayed markings, sorted, deduplicated.
  std::vector<Marking> states;
};

struct EventReplay {
  EventIdx event;
  ReplayOutcome outcome;
};

struct GroupReplay {
  // Union over the group's events; reached_final is true if any event's is.
  // States reached by several events are kept once, up to renaming objects.
  ReplayOutcome combined;
  std::vector<EventReplay> per_event;
};

/// Replays recorded binding sequences on a net, exploring silent
/// transitions breadth-first where the next recorded binding is blocked.
class Replayer {
 public:
  /// `net`, `log` and `graph` must outlive the replayer.
  Replayer(const AcceptingOCPN& net, const EventLog& log, const EventObjectGraph& graph, ReplayConfig config = {});

  const ObjectTable& objects() const { return objects_; }
  const ReplayConfig& config() const { return config_; }

  /// The net binding recorded by `e`, if its activity and objects match a
  /// visible transition.
  std::optional<Binding> recorded_binding(EventIdx e) const;

  /// Objects of the preset of `e` and of `e` itself, sorted.
  std::vector<ObjectIdx> replay_objects(EventIdx e) const;

  ReplayOutcome replay_event(EventIdx e) const;
  GroupReplay replay_group(const ContextGroup& group) const;

 private:
  const AcceptingOCPN* net_;
  const EventLog* log_;
  const EventObjectGraph* graph_;
  ReplayConfig config_;
  ObjectTable objects_;
  std::vector<TransitionIdx> silent_;
};

ReplayOutcome enabled_model_activities(const AcceptingOCPN& net, const EventLog& log, const EventObjectGraph& graph,
                                       const ContextGroup& group, const ReplayConfig& config = {});

/// Markings reached after replaying the group's binding sequences,
/// including silent successors. States an earlier event of the group already
/// reached under other object names are not repeated.
std::vector<Marking> states_for_context(const AcceptingOCPN& net, const EventLog& log, const EventObjectGraph& graph,
                                        const ContextGroup& group, const ReplayConfig& config = {});

/// Context produced by a binding sequence: each object's projected label
/// sequence (silent bindings project to nothing), grouped by type.
/// `members` lists every object to account for, even ones never bound.
Context binding_sequence_context(const AcceptingOCPN& net, const ObjectTable& objects,
                                 std::span<const Binding> sequence, std::span<const ObjectIdx> members);

}  // namespace occ
