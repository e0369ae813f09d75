#include "occ/ocpn.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "occ/error.hpp"
#include "occ/ocel.hpp"

namespace occ {

namespace {

using nlohmann::json;

template <class T>
void sort_unique(std::vector<T>& v) {
  std::ranges::sort(v);
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Objects sitting in every input place of `type`, or nullopt if `t` has no
// input place of that type.
std::optional<std::vector<ObjectIdx>> input_candidates(const AcceptingOCPN& net, const Marking& marking,
                                                       TransitionIdx t, TypeIdx type) {
  std::optional<std::vector<ObjectIdx>> result;
  for (auto p : net.preset(t)) {
    if (net.place(p).type != type) continue;
    std::vector<ObjectIdx> here;
    for (const auto& e : marking.in_place(p)) here.push_back(e.token.object);
    if (!result) {
      result = std::move(here);
    } else {
      std::vector<ObjectIdx> both;
      std::ranges::set_intersection(*result, here, std::back_inserter(both));
      *result = std::move(both);
    }
  }
  return result;
}

void combinations(std::span<const ObjectIdx> pool, std::size_t k, std::size_t start, std::vector<ObjectIdx>& current,
                  std::vector<std::vector<ObjectIdx>>& out) {
  if (current.size() == k) {
    out.push_back(current);
    return;
  }
  for (std::size_t i = start; i + (k - current.size()) <= pool.size(); ++i) {
    current.push_back(pool[i]);
    combinations(pool, k, i + 1, current, out);
    current.pop_back();
  }
}

const json& require(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string("missing \"") + key + "\" in " + where);
  return *it;
}

std::string require_string(const json& j, const std::string& what) {
  if (!j.is_string()) throw InputError(what + " must be a string");
  return j.get<std::string>();
}

bool optional_bool(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return false;
  if (!it->is_boolean()) throw InputError(std::string("\"") + key + "\" of " + where + " must be a boolean");
  return it->get<bool>();
}

std::string sanitize(std::string_view text) {
  std::string out;
  for (char c : text) out += (std::isalnum(static_cast<unsigned char>(c)) != 0) ? c : '_';
  return out;
}

}  // namespace

AcceptingOCPN AcceptingOCPN::from_data(const NetData& data) {
  AcceptingOCPN net;

  for (const auto& t : data.object_types) {
    if (t.empty()) throw InputError("empty object type name");
    if (net.find_type(t)) throw InputError("duplicate object type " + t);
    net.types_.push_back(t);
  }

  for (const auto& p : data.places) {
    if (p.id.empty()) throw InputError("place with empty id");
    auto type = net.find_type(p.object_type);
    if (!type) throw InputError("place " + p.id + " has unknown object type \"" + p.object_type + "\"");
    if (!net.place_lookup_.emplace(p.id, PlaceIdx(net.places_.size())).second)
      throw InputError("duplicate place id " + p.id);
    net.places_.push_back({p.id, *type, p.initial, p.final});
  }

  for (const auto& t : data.transitions) {
    if (t.id.empty()) throw InputError("transition with empty id");
    if (net.place_lookup_.contains(t.id)) throw InputError("id " + t.id + " names both a place and a transition");
    if (t.label && t.label->empty()) throw InputError("transition " + t.id + " has an empty label");
    if (!net.transition_lookup_.emplace(t.id, TransitionIdx(net.transitions_.size())).second)
      throw InputError("duplicate transition id " + t.id);
    net.transitions_.push_back({t.id, t.label});
  }
  net.nodes_.resize(net.transitions_.size());

  std::set<std::pair<std::string, std::string>> seen_arcs;
  // (transition, type) -> variable status of the first arc seen
  std::map<std::pair<TransitionIdx, TypeIdx>, bool> status;
  for (const auto& a : data.arcs) {
    if (!seen_arcs.emplace(a.source, a.target).second)
      throw InputError("duplicate arc " + a.source + " -> " + a.target);
    auto src_place = net.find_place(a.source);
    auto src_trans = net.find_transition(a.source);
    auto dst_place = net.find_place(a.target);
    auto dst_trans = net.find_transition(a.target);
    Arc arc{};
    if (src_place && dst_trans) {
      arc = {*src_place, *dst_trans, true, a.variable};
    } else if (src_trans && dst_place) {
      arc = {*dst_place, *src_trans, false, a.variable};
    } else if (!(src_place || src_trans) || !(dst_place || dst_trans)) {
      throw InputError("dangling arc endpoint in arc " + a.source + " -> " + a.target);
    } else {
      throw InputError("arc " + a.source + " -> " + a.target + " must connect a place and a transition");
    }
    auto type = net.places_[arc.place.get()].type;
    auto [it, inserted] = status.emplace(std::pair{arc.transition, type}, arc.variable);
    if (!inserted && it->second != arc.variable) {
      throw InputError("mixed variable status for transition " + net.transitions_[arc.transition.get()].id +
                       " and object type " + net.types_[type.get()]);
    }
    auto& node = net.nodes_[arc.transition.get()];
    (arc.input ? node.preset : node.postset).push_back(arc.place);
    node.types.push_back(type);
    if (arc.variable) node.variable_types.push_back(type);
    net.arcs_.push_back(arc);
  }
  for (auto& node : net.nodes_) {
    sort_unique(node.preset);
    sort_unique(node.postset);
    sort_unique(node.types);
    sort_unique(node.variable_types);
  }

  net.initial_places_.assign(net.types_.size(), std::nullopt);
  std::vector<bool> used(net.types_.size(), false);
  for (std::size_t i = 0; i < net.places_.size(); ++i) {
    const auto& p = net.places_[i];
    used[p.type.get()] = true;
    if (!p.initial) continue;
    auto& slot = net.initial_places_[p.type.get()];
    if (slot) throw InputError("object type " + net.types_[p.type.get()] + " has more than one initial place");
    slot = PlaceIdx(i);
  }
  for (std::size_t t = 0; t < net.types_.size(); ++t) {
    if (used[t] && !net.initial_places_[t]) throw InputError("object type " + net.types_[t] + " has no initial place");
  }

  // Visible labels must identify a transition; the same label is only
  // allowed on transitions over different object type sets.
  std::set<std::pair<std::string, std::vector<TypeIdx>>> labels;
  for (std::size_t i = 0; i < net.transitions_.size(); ++i) {
    const auto& t = net.transitions_[i];
    if (t.label && !labels.emplace(*t.label, net.nodes_[i].types).second)
      throw InputError("duplicate visible label " + *t.label);
  }
  return net;
}

NetData AcceptingOCPN::to_data() const {
  NetData data;
  data.object_types = types_;
  for (const auto& p : places_) data.places.push_back({p.id, types_[p.type.get()], p.initial, p.final});
  for (const auto& t : transitions_) data.transitions.push_back({t.id, t.label});
  for (const auto& a : arcs_) {
    const auto& pid = places_[a.place.get()].id;
    const auto& tid = transitions_[a.transition.get()].id;
    if (a.input) data.arcs.push_back({pid, tid, a.variable});
    else data.arcs.push_back({tid, pid, a.variable});
  }
  return data;
}

std::optional<TypeIdx> AcceptingOCPN::find_type(std::string_view name) const {
  auto it = std::ranges::find(types_, name);
  if (it == types_.end()) return std::nullopt;
  return TypeIdx(static_cast<std::size_t>(it - types_.begin()));
}

std::optional<PlaceIdx> AcceptingOCPN::find_place(std::string_view id) const {
  auto it = place_lookup_.find(std::string(id));
  if (it == place_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<TransitionIdx> AcceptingOCPN::find_transition(std::string_view id) const {
  auto it = transition_lookup_.find(std::string(id));
  if (it == transition_lookup_.end()) return std::nullopt;
  return it->second;
}

std::vector<TransitionIdx> AcceptingOCPN::transitions_labeled(std::string_view label) const {
  std::vector<TransitionIdx> out;
  for (std::size_t i = 0; i < transitions_.size(); ++i)
    if (transitions_[i].label && *transitions_[i].label == label) out.emplace_back(i);
  return out;
}

bool AcceptingOCPN::is_variable(TransitionIdx t, TypeIdx type) const {
  return std::ranges::binary_search(nodes_.at(t.get()).variable_types, type);
}

std::vector<TypeIdx> AcceptingOCPN::non_variable_types(TransitionIdx t) const {
  std::vector<TypeIdx> out;
  const auto& node = nodes_.at(t.get());
  std::ranges::set_difference(node.types, node.variable_types, std::back_inserter(out));
  return out;
}

std::optional<PlaceIdx> AcceptingOCPN::initial_place(TypeIdx type) const {
  if (!type.valid() || type.get() >= initial_places_.size()) return std::nullopt;
  return initial_places_[type.get()];
}

ObjectTable::ObjectTable(const EventLog& log, const AcceptingOCPN& net) {
  for (std::size_t i = 0; i < log.num_objects(); ++i) {
    const auto& o = log.object(ObjectIdx(i));
    add(o.id, net.find_type(log.type_name(o.type)).value_or(TypeIdx{}));
  }
}

ObjectIdx ObjectTable::add(std::string id, TypeIdx type) {
  ids_.push_back(std::move(id));
  types_.push_back(type);
  return ObjectIdx(ids_.size() - 1);
}

const std::vector<ObjectIdx>* Binding::objects_of(TypeIdx type) const {
  auto it = std::ranges::lower_bound(objects, type, {}, [](const auto& entry) { return entry.first; });
  if (it == objects.end() || it->first != type) return nullptr;
  return &it->second;
}

bool binding_well_formed(const AcceptingOCPN& net, const ObjectTable& objects, const Binding& binding) {
  if (!binding.transition.valid() || binding.transition.get() >= net.transitions().size()) return false;
  auto types = net.types_of(binding.transition);
  if (types.size() != binding.objects.size()) return false;
  for (std::size_t i = 0; i < types.size(); ++i) {
    const auto& [type, objs] = binding.objects[i];
    if (type != types[i] || objs.empty()) return false;
    if (!std::ranges::is_sorted(objs) || std::ranges::adjacent_find(objs) != objs.end()) return false;
    if (!net.is_variable(binding.transition, type) && objs.size() != 1) return false;
    for (auto o : objs)
      if (o.get() >= objects.size() || objects.type(o) != type) return false;
  }
  return true;
}

std::vector<TypeIdx> tpl(const AcceptingOCPN& net, TransitionIdx t) {
  auto types = net.types_of(t);
  return {types.begin(), types.end()};
}

namespace {

Marking tokens_for(const AcceptingOCPN& net, const Binding& binding, std::span<const PlaceIdx> places) {
  Marking m;
  for (auto p : places) {
    if (const auto* objs = binding.objects_of(net.place(p).type)) {
      for (auto o : *objs) m.add({p, o});
    }
  }
  return m;
}

}  // namespace

Marking consumed_tokens(const AcceptingOCPN& net, const Binding& binding) {
  return tokens_for(net, binding, net.preset(binding.transition));
}

Marking produced_tokens(const AcceptingOCPN& net, const Binding& binding) {
  return tokens_for(net, binding, net.postset(binding.transition));
}

bool binding_enabled(const AcceptingOCPN& net, const Marking& marking, const Binding& binding) {
  for (auto p : net.preset(binding.transition)) {
    const auto* objs = binding.objects_of(net.place(p).type);
    if (objs == nullptr) return false;
    for (auto o : *objs)
      if (marking.count({p, o}) == 0) return false;
  }
  return true;
}

Marking execute_binding(const AcceptingOCPN& net, const Marking& marking, const Binding& binding) {
  if (!binding_enabled(net, marking, binding))
    throw std::invalid_argument("binding of " + net.transition(binding.transition).id + " is not enabled");
  Marking next = marking;
  next -= consumed_tokens(net, binding);
  next += produced_tokens(net, binding);
  return next;
}

bool transition_enabled(const AcceptingOCPN& net, const Marking& marking, TransitionIdx t) {
  for (auto type : net.types_of(t)) {
    auto candidates = input_candidates(net, marking, t, type);
    if (candidates && candidates->empty()) return false;
  }
  return true;
}

std::vector<std::string> enabled_visible_labels(const AcceptingOCPN& net, const Marking& marking) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < net.transitions().size(); ++i) {
    const auto& t = net.transitions()[i];
    if (t.label && transition_enabled(net, marking, TransitionIdx(i))) labels.push_back(*t.label);
  }
  sort_unique(labels);
  return labels;
}

std::vector<Binding> enabled_bindings(const AcceptingOCPN& net, const Marking& marking, TransitionIdx t,
                                      const ObjectTable& objects, std::span<const ObjectIdx> universe,
                                      const BindingEnumeration& how) {
  std::vector<std::pair<TypeIdx, std::vector<std::vector<ObjectIdx>>>> choices;
  for (auto type : net.types_of(t)) {
    std::vector<ObjectIdx> pool;
    if (auto candidates = input_candidates(net, marking, t, type)) {
      pool = std::move(*candidates);
    } else {
      for (auto o : universe)
        if (objects.type(o) == type) pool.push_back(o);
      sort_unique(pool);
    }
    std::vector<std::vector<ObjectIdx>> sets;
    std::size_t max_size = 1;
    if (net.is_variable(t, type) && how.variable_mode == VariableMode::subsets)
      max_size = std::min(how.subset_cap, pool.size());
    for (std::size_t k = 1; k <= max_size; ++k) {
      std::vector<ObjectIdx> current;
      combinations(pool, k, 0, current, sets);
    }
    if (sets.empty()) return {};
    choices.emplace_back(type, std::move(sets));
  }

  std::vector<Binding> out;
  std::vector<std::size_t> pick(choices.size(), 0);
  while (true) {
    Binding b{t, {}};
    for (std::size_t i = 0; i < choices.size(); ++i) b.objects.emplace_back(choices[i].first, choices[i].second[pick[i]]);
    out.push_back(std::move(b));
    std::size_t i = choices.size();
    while (i > 0) {
      --i;
      if (++pick[i] < choices[i].second.size()) break;
      pick[i] = 0;
      if (i == 0) return out;
    }
    if (choices.empty()) return out;
  }
}

Marking initial_marking_for(const AcceptingOCPN& net, const ObjectTable& objects, std::span<const ObjectIdx> members) {
  Marking m;
  for (auto o : members) {
    auto place = net.initial_place(objects.type(o));
    if (!place) throw InputError("object " + objects.id(o) + " has a type without an initial place in the model");
    m.add({*place, o});
  }
  return m;
}

bool is_final(const AcceptingOCPN& net, const Marking& marking) {
  return std::ranges::all_of(marking.entries(), [&](const auto& e) { return net.place(e.token.place).final; });
}

AcceptingOCPN flower_model(const EventLog& log) {
  if (log.empty()) throw InputError("cannot build a flower model from an empty log");

  // activity -> observed type sets; activity -> types seen with >= 2 objects
  std::map<std::string, std::set<std::vector<TypeIdx>>> type_sets;
  std::map<std::string, std::set<TypeIdx>> variable;
  for (const auto& e : log.events()) {
    std::map<TypeIdx, std::size_t> per_type;
    for (auto o : e.omap) ++per_type[log.object_type(o)];
    std::vector<TypeIdx> types;
    for (const auto& [type, n] : per_type) {
      types.push_back(type);
      if (n >= 2) variable[e.activity].insert(type);
    }
    type_sets[e.activity].insert(std::move(types));
  }

  NetData data;
  std::vector<bool> used(log.object_types().size(), false);
  for (const auto& [act, sets] : type_sets)
    for (const auto& s : sets)
      for (auto t : s) used[t.get()] = true;
  for (std::size_t t = 0; t < log.object_types().size(); ++t) {
    if (!used[t]) continue;
    data.object_types.push_back(log.object_types()[t]);
    data.places.push_back({"p_" + sanitize(log.object_types()[t]), log.object_types()[t], true, true});
  }
  std::set<std::string> ids;
  for (const auto& [act, sets] : type_sets) {
    std::size_t k = 0;
    for (const auto& types : sets) {
      std::string id = "t_" + sanitize(act);
      if (sets.size() > 1) id += "_" + std::to_string(++k);
      while (!ids.insert(id).second) id += "_";
      data.transitions.push_back({id, act});
      for (auto type : types) {
        const auto place = "p_" + sanitize(log.type_name(type));
        bool var = variable[act].contains(type);
        data.arcs.push_back({place, id, var});
        data.arcs.push_back({id, place, var});
      }
    }
  }
  return AcceptingOCPN::from_data(data);
}

NetData parse_model_data(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw InputError(std::string("malformed JSON: ") + err.what());
  }
  if (!doc.is_object()) throw InputError("model document must be a JSON object");

  NetData data;
  const auto& types = require(doc, "object_types", "model");
  if (!types.is_array()) throw InputError("\"object_types\" must be an array");
  for (const auto& t : types) data.object_types.push_back(require_string(t, "object type"));

  const auto& places = require(doc, "places", "model");
  if (!places.is_array()) throw InputError("\"places\" must be an array");
  for (const auto& p : places) {
    if (!p.is_object()) throw InputError("place entries must be objects");
    NetData::Place place;
    place.id = require_string(require(p, "id", "place"), "place id");
    place.object_type = require_string(require(p, "object_type", "place " + place.id), "object type of place " + place.id);
    place.initial = optional_bool(p, "initial", "place " + place.id);
    place.final = optional_bool(p, "final", "place " + place.id);
    data.places.push_back(std::move(place));
  }

  const auto& transitions = require(doc, "transitions", "model");
  if (!transitions.is_array()) throw InputError("\"transitions\" must be an array");
  for (const auto& t : transitions) {
    if (!t.is_object()) throw InputError("transition entries must be objects");
    NetData::Transition tr;
    tr.id = require_string(require(t, "id", "transition"), "transition id");
    if (auto label = t.find("label"); label != t.end() && !label->is_null())
      tr.label = require_string(*label, "label of transition " + tr.id);
    data.transitions.push_back(std::move(tr));
  }

  const auto& arcs = require(doc, "arcs", "model");
  if (!arcs.is_array()) throw InputError("\"arcs\" must be an array");
  for (const auto& a : arcs) {
    if (!a.is_object()) throw InputError("arc entries must be objects");
    NetData::Arc arc;
    arc.source = require_string(require(a, "source", "arc"), "arc source");
    arc.target = require_string(require(a, "target", "arc"), "arc target");
    arc.variable = optional_bool(a, "variable", "arc " + arc.source + " -> " + arc.target);
    data.arcs.push_back(std::move(arc));
  }
  return data;
}

AcceptingOCPN parse_model(std::string_view text) { return AcceptingOCPN::from_data(parse_model_data(text)); }

nlohmann::json model_to_json(const AcceptingOCPN& net) {
  const auto data = net.to_data();
  json doc;
  doc["object_types"] = data.object_types;
  json places = json::array();
  for (const auto& p : data.places)
    places.push_back({{"id", p.id}, {"object_type", p.object_type}, {"initial", p.initial}, {"final", p.final}});
  doc["places"] = std::move(places);
  json transitions = json::array();
  for (const auto& t : data.transitions)
    transitions.push_back({{"id", t.id}, {"label", t.label ? json(*t.label) : json(nullptr)}});
  doc["transitions"] = std::move(transitions);
  json arcs = json::array();
  for (const auto& a : data.arcs) arcs.push_back({{"source", a.source}, {"target", a.target}, {"variable", a.variable}});
  doc["arcs"] = std::move(arcs);
  return doc;
}

std::string serialize_model(const AcceptingOCPN& net) { return model_to_json(net).dump(2) + "\n"; }

AcceptingOCPN read_model_file(const std::string& path) { return parse_model(read_text_file(path)); }

std::string format_marking(const AcceptingOCPN& net, const ObjectTable& objects, const Marking& marking) {
  std::vector<std::pair<std::string, std::string>> tokens;
  for (const auto& e : marking.entries())
    for (std::uint32_t i = 0; i < e.count; ++i) tokens.emplace_back(net.place(e.token.place).id, objects.id(e.token.object));
  std::ranges::sort(tokens);
  std::string out = "[";
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ",";
    out += "(" + tokens[i].first + "," + tokens[i].second + ")";
  }
  return out + "]";
}

}  // namespace occ
