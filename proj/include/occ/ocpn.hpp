#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "occ/ids.hpp"
#include "occ/marking.hpp"

namespace occ {

class EventLog;

/// Model content as written in a model-JSON document, before validation.
struct NetData {
  struct Place {
    std::string id;
    std::string object_type;
    bool initial = false;
    bool final = false;
  };
  struct Transition {
    std::string id;
    std::optional<std::string> label;
  };
  struct Arc {
    std::string source;
    std::string target;
    bool variable = false;
  };

  std::vector<std::string> object_types;
  std::vector<Place> places;
  std::vector<Transition> transitions;
  std::vector<Arc> arcs;
};

struct Place {
  std::string id;
  TypeIdx type;
  bool initial = false;
  bool final = false;
};

struct Transition {
  std::string id;
  std::optional<std::string> label;

  bool silent() const { return !label.has_value(); }
};

struct Arc {
  PlaceIdx place;
  TransitionIdx transition;
  bool input;  // place -> transition
  bool variable;
};

/// An object-centric Petri net with initial and final places per object
/// type. Validated on construction and immutable afterwards.
class AcceptingOCPN {
 public:
  AcceptingOCPN() = default;

  /// Throws InputError naming the offending element.
  static AcceptingOCPN from_data(const NetData& data);
  NetData to_data() const;

  const std::vector<std::string>& object_types() const { return types_; }
  const std::string& type_name(TypeIdx t) const { return types_.at(t.get()); }
  std::optional<TypeIdx> find_type(std::string_view name) const;

  std::span<const Place> places() const { return places_; }
  const Place& place(PlaceIdx p) const { return places_.at(p.get()); }
  std::optional<PlaceIdx> find_place(std::string_view id) const;

  std::span<const Transition> transitions() const { return transitions_; }
  const Transition& transition(TransitionIdx t) const { return transitions_.at(t.get()); }
  std::optional<TransitionIdx> find_transition(std::string_view id) const;
  /// Visible transitions carrying `label`, in declaration order.
  std::vector<TransitionIdx> transitions_labeled(std::string_view label) const;

  std::span<const Arc> arcs() const { return arcs_; }

  /// Input places of `t`, sorted.
  std::span<const PlaceIdx> preset(TransitionIdx t) const { return nodes_.at(t.get()).preset; }
  /// Output places of `t`, sorted.
  std::span<const PlaceIdx> postset(TransitionIdx t) const { return nodes_.at(t.get()).postset; }
  /// Object types touched by `t`, sorted.
  std::span<const TypeIdx> types_of(TransitionIdx t) const { return nodes_.at(t.get()).types; }
  bool is_variable(TransitionIdx t, TypeIdx type) const;
  std::vector<TypeIdx> non_variable_types(TransitionIdx t) const;

  std::optional<PlaceIdx> initial_place(TypeIdx type) const;

 private:
  struct Node {
    std::vector<PlaceIdx> preset;
    std::vector<PlaceIdx> postset;
    std::vector<TypeIdx> types;
    std::vector<TypeIdx> variable_types;
  };

  std::vector<std::string> types_;
  std::vector<Place> places_;
  std::vector<Transition> transitions_;
  std::vector<Arc> arcs_;
  std::vector<Node> nodes_;
  std::vector<std::optional<PlaceIdx>> initial_places_;
  std::unordered_map<std::string, PlaceIdx> place_lookup_;
  std::unordered_map<std::string, TransitionIdx> transition_lookup_;
};

/// Objects taking part in a replay or simulation run, typed against the
/// net. Objects whose type the net does not know carry an invalid TypeIdx.
class ObjectTable {
 public:
  ObjectTable() = default;
  /// Same indices as the log's objects.
  ObjectTable(const EventLog& log, const AcceptingOCPN& net);

  ObjectIdx add(std::string id, TypeIdx type);

  std::size_t size() const { return ids_.size(); }
  const std::string& id(ObjectIdx o) const { return ids_.at(o.get()); }
  TypeIdx type(ObjectIdx o) const { return types_.at(o.get()); }

 private:
  std::vector<std::string> ids_;
  std::vector<TypeIdx> types_;
};

/// A transition plus, per associated object type, the objects it moves.
struct Binding {
  TransitionIdx transition;
  // Sorted by type; object lists sorted and non-empty.
  std::vector<std::pair<TypeIdx, std::vector<ObjectIdx>>> objects;

  const std::vector<ObjectIdx>* objects_of(TypeIdx type) const;

  friend bool operator==(const Binding&, const Binding&) = default;
};

/// Checks the binding invariants: the domain equals the transition's
/// types, non-variable types bind exactly one object, object types match.
bool binding_well_formed(const AcceptingOCPN& net, const ObjectTable& objects, const Binding& binding);

std::vector<TypeIdx> tpl(const AcceptingOCPN& net, TransitionIdx t);

Marking consumed_tokens(const AcceptingOCPN& net, const Binding& binding);
Marking produced_tokens(const AcceptingOCPN& net, const Binding& binding);

bool binding_enabled(const AcceptingOCPN& net, const Marking& marking, const Binding& binding);

/// Fires an enabled binding. Throws std::invalid_argument otherwise.
Marking execute_binding(const AcceptingOCPN& net, const Marking& marking, const Binding& binding);

/// Whether some binding of `t` is enabled. Types with input places need
/// one object sitting in every input place of that type; output-only types
/// can always be bound.
bool transition_enabled(const AcceptingOCPN& net, const Marking& marking, TransitionIdx t);

/// Labels of visible transitions with at least one enabled binding, sorted.
std::vector<std::string> enabled_visible_labels(const AcceptingOCPN& net, const Marking& marking);

enum class VariableMode { singleton, subsets };

struct BindingEnumeration {
  VariableMode variable_mode = VariableMode::singleton;
  // Largest object set bound to one variable type in `subsets` mode.
  std::size_t subset_cap = 8;
};

/// Enabled bindings of `t` in `marking`. Types with input places draw from
/// the objects present in all those places; output-only types draw from
/// `universe`. Results are in a deterministic order.
std::vector<Binding> enabled_bindings(const AcceptingOCPN& net, const Marking& marking, TransitionIdx t,
                                      const ObjectTable& objects, std::span<const ObjectIdx> universe,
                                      const BindingEnumeration& how);

/// One token per object in its type's initial place. Throws InputError for
/// objects whose type has no initial place in the net.
Marking initial_marking_for(const AcceptingOCPN& net, const ObjectTable& objects, std::span<const ObjectIdx> members);

/// Every token lies in a final place. The empty marking is final.
bool is_final(const AcceptingOCPN& net, const Marking& marking);

/// One place per object type, initial and final, with every activity of the
/// log as a self-looping transition. Throws InputError on an empty log.
AcceptingOCPN flower_model(const EventLog& log);

NetData parse_model_data(std::string_view text);
AcceptingOCPN parse_model(std::string_view text);
nlohmann::json model_to_json(const AcceptingOCPN& net);
std::string serialize_model(const AcceptingOCPN& net);
AcceptingOCPN read_model_file(const std::string& path);

/// "[(pl5,p1),(pl6,b1)]", tokens ordered by place id then object id.
std::string format_marking(const AcceptingOCPN& net, const ObjectTable& objects, const Marking& marking);

}  // namespace occ
