#include "occ/replay.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <ranges>
#include <set>
#include <unordered_set>

#include "occ/error.hpp"

namespace occ {

namespace {

struct State {
  Marking marking;
  std::size_t cursor;

  friend bool operator==(const State&, const State&) = default;
};

struct StateHash {
  std::size_t operator()(const State& s) const noexcept { return s.marking.hash() * 31 + s.cursor; }
};

template <class T>
void sort_unique(std::vector<T>& v) {
  std::ranges::sort(v);
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

void ReplayConfig::validate() const {
  if (max_states == 0) throw InputError("max_states must be positive");
  if (subset_cap == 0) throw InputError("subset_cap must be positive");
}

const char* to_string(VariableMode mode) { return mode == VariableMode::singleton ? "singleton" : "subsets"; }

VariableMode parse_variable_mode(std::string_view text) {
  if (text == "singleton") return VariableMode::singleton;
  if (text == "subsets") return VariableMode::subsets;
  throw InputError("unknown silent variable mode " + std::string(text));
}

std::vector<VisibleBindingStep> binding_sequence_of_preset(const EventLog& log, const EventObjectGraph& graph,
                                                           EventIdx e) {
  std::vector<VisibleBindingStep> steps;
  for (auto p : graph.preset(e)) {
    const auto& ev = log.event(p);
    std::map<std::string, std::vector<ObjectIdx>> grouped;
    for (auto o : ev.omap) grouped[log.type_name(log.object_type(o))].push_back(o);
    steps.push_back({p, ev.activity, {grouped.begin(), grouped.end()}});
  }
  return steps;
}

Replayer::Replayer(const AcceptingOCPN& net, const EventLog& log, const EventObjectGraph& graph, ReplayConfig config)
    : net_(&net), log_(&log), graph_(&graph), config_(config), objects_(log, net) {
  config_.validate();
  for (std::size_t i = 0; i < net.transitions().size(); ++i)
    if (net.transitions()[i].silent()) silent_.emplace_back(i);
}

std::optional<Binding> Replayer::recorded_binding(EventIdx e) const {
  const auto& ev = log_->event(e);
  std::map<TypeIdx, std::vector<ObjectIdx>> grouped;
  for (auto o : ev.omap) {
    auto type = objects_.type(o);
    if (!type.valid()) return std::nullopt;
    grouped[type].push_back(o);
  }
  for (auto t : net_->transitions_labeled(ev.activity)) {
    auto types = net_->types_of(t);
    if (!std::ranges::equal(types, grouped | std::views::keys)) continue;
    Binding b{t, {grouped.begin(), grouped.end()}};
    if (binding_well_formed(*net_, objects_, b)) return b;
  }
  return std::nullopt;
}

std::vector<ObjectIdx> Replayer::replay_objects(EventIdx e) const {
  std::vector<ObjectIdx> members(log_->event(e).omap);
  for (auto p : graph_->preset(e)) {
    const auto& omap = log_->event(p).omap;
    members.insert(members.end(), omap.begin(), omap.end());
  }
  sort_unique(members);
  return members;
}

ReplayOutcome Replayer::replay_event(EventIdx e) const {
  const auto& net = *net_;
  ReplayOutcome out;

  const auto members = replay_objects(e);
  for (auto o : members)
    if (!net.initial_place(objects_.type(o))) return out;

  std::vector<std::optional<Binding>> steps;
  for (auto p : graph_->preset(e)) steps.push_back(recorded_binding(p));
  const auto own = recorded_binding(e);
  const BindingEnumeration how{config_.silent_variable_mode, config_.subset_cap};

  auto silent_successors = [&](const Marking& m, std::vector<Marking>& succ) {
    for (auto t : silent_) {
      for (const auto& b : enabled_bindings(net, m, t, objects_, members, how))
        succ.push_back(execute_binding(net, m, b));
    }
  };

  std::unordered_set<State, StateHash> visited;
  std::deque<State> queue;
  State start{initial_marking_for(net, objects_, members), 0};
  visited.insert(start);
  queue.push_back(std::move(start));

  std::vector<Marking> full;
  std::vector<std::string> enabled;
  std::vector<State> successors;
  std::vector<Marking> silent;
  while (!queue.empty()) {
    State s = std::move(queue.front());
    queue.pop_front();

    if (s.cursor == steps.size()) {
      out.replayed = true;
      auto labels = enabled_visible_labels(net, s.marking);
      enabled.insert(enabled.end(), labels.begin(), labels.end());
      full.push_back(s.marking);
    }

    successors.clear();
    const auto* next = s.cursor < steps.size() && steps[s.cursor] ? &*steps[s.cursor] : nullptr;
    const bool next_enabled = next != nullptr && binding_enabled(net, s.marking, *next);
    if (next_enabled) successors.push_back({execute_binding(net, s.marking, *next), s.cursor + 1});
    if (!next_enabled || config_.silent_always) {
      silent.clear();
      silent_successors(s.marking, silent);
      for (auto& m : silent) successors.push_back({std::move(m), s.cursor});
    }
    if (config_.reverse_successor_order) std::ranges::reverse(successors);

    for (auto& succ : successors) {
      if (visited.contains(succ)) continue;
      if (visited.size() >= config_.max_states) {
        out.truncated = true;
        break;
      }
      visited.insert(succ);
      queue.push_back(std::move(succ));
    }
  }

  sort_unique(enabled);
  sort_unique(full);
  out.enabled = std::move(enabled);
  out.states = std::move(full);

  // Diagnostic: fire the event's own binding and look for a final marking
  // in the silent closure.
  if (own) {
    std::unordered_set<Marking, MarkingHash> seen;
    std::deque<Marking> pending;
    for (const auto& m : out.states) {
      if (!binding_enabled(net, m, *own)) continue;
      auto after = execute_binding(net, m, *own);
      if (seen.insert(after).second) pending.push_back(std::move(after));
    }
    while (!pending.empty() && !out.reached_final) {
      Marking m = std::move(pending.front());
      pending.pop_front();
      if (is_final(net, m)) {
        out.reached_final = true;
        break;
      }
      silent.clear();
      silent_successors(m, silent);
      for (auto& next : silent) {
        if (seen.size() >= config_.max_states) {
          out.truncated = true;
          break;
        }
        if (seen.insert(next).second) pending.push_back(std::move(next));
      }
    }
  }
  return out;
}

GroupReplay Replayer::replay_group(const ContextGroup& group) const {
  GroupReplay result;
  // Identical recorded sequences over identical objects replay identically.
  std::map<std::string, ReplayOutcome> memo;
  std::vector<std::string> enabled;
  for (auto e : group.events) {
    std::string key;
    auto append = [&key](const std::optional<Binding>& b) {
      if (!b) {
        key += "!;";
        return;
      }
      key += std::to_string(b->transition.value) + ":";
      for (const auto& [type, objs] : b->objects) {
        key += std::to_string(type.value) + "=";
        for (auto o : objs) key += std::to_string(o.value) + ",";
      }
      key += ";";
    };
    for (auto o : replay_objects(e)) key += std::to_string(o.value) + ",";
    key += "|";
    for (auto p : graph_->preset(e)) append(recorded_binding(p));
    key += "|";
    append(recorded_binding(e));

    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(key, replay_event(e)).first;
    const auto& outcome = it->second;

    auto& c = result.combined;
    c.replayed = c.replayed || outcome.replayed;
    c.reached_final = c.reached_final || outcome.reached_final;
    c.truncated = c.truncated || outcome.truncated;
    enabled.insert(enabled.end(), outcome.enabled.begin(), outcome.enabled.end());
    result.per_event.push_back({e, outcome});
  }
  sort_unique(enabled);
  result.combined.enabled = std::move(enabled);

  // States of different events differ only in object names. A later
  // event contributes only states whose shape no earlier event reached;
  // within one event, distinct markings stay distinct.
  std::set<MarkingShape> seen_shapes;
  for (const auto& ev : result.per_event) {
    std::set<MarkingShape> shapes;
    for (const auto& m : ev.outcome.states) {
      auto shape = marking_shape(m);
      if (!seen_shapes.contains(shape)) result.combined.states.push_back(m);
      shapes.insert(std::move(shape));
    }
    seen_shapes.merge(shapes);
  }
  sort_unique(result.combined.states);
  return result;
}

ReplayOutcome enabled_model_activities(const AcceptingOCPN& net, const EventLog& log, const EventObjectGraph& graph,
                                       const ContextGroup& group, const ReplayConfig& config) {
  return Replayer(net, log, graph, config).replay_group(group).combined;
}

std::vector<Marking> states_for_context(const AcceptingOCPN& net, const EventLog& log, const EventObjectGraph& graph,
                                        const ContextGroup& group, const ReplayConfig& config) {
  return enabled_model_activities(net, log, graph, group, config).states;
}

Context binding_sequence_context(const AcceptingOCPN& net, const ObjectTable& objects,
                                 std::span<const Binding> sequence, std::span<const ObjectIdx> members) {
  std::map<ObjectIdx, ActivitySequence> prefixes;
  for (auto o : members) prefixes.try_emplace(o);
  for (const auto& b : sequence) {
    const auto& t = net.transition(b.transition);
    for (const auto& [type, objs] : b.objects) {
      for (auto o : objs) {
        auto& seq = prefixes[o];
        if (t.label) seq.push_back(*t.label);
      }
    }
  }
  std::vector<std::pair<std::string, ActivitySequence>> typed;
  for (auto& [o, seq] : prefixes) typed.emplace_back(net.type_name(objects.type(o)), std::move(seq));
  return Context::from_prefixes(std::move(typed));
}

}  // namespace occ
