#include "occ/context.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "occ/error.hpp"

namespace occ {

EventObjectGraph::EventObjectGraph(const EventLog& log) {
  const auto n = log.size();
  omaps_.reserve(n);
  preds_.resize(n);
  presets_.reserve(n);

  std::vector<EventIdx> last(log.num_objects());
  for (const auto& e : log.events()) {
    omaps_.push_back(e.omap);
    auto& preds = preds_[e.index.get()];
    for (auto o : e.omap) {
      if (last[o.get()].valid()) preds.push_back(last[o.get()]);
      last[o.get()] = e.index;
    }
    std::ranges::sort(preds);
    preds.erase(std::unique(preds.begin(), preds.end()), preds.end());

    // Predecessors come earlier, so their presets are already final.
    boost::dynamic_bitset<> bits(n);
    for (auto p : preds) {
      bits |= presets_[p.get()];
      bits.set(p.get());
    }
    presets_.push_back(std::move(bits));
  }
}

bool EventObjectGraph::is_edge(EventIdx from, EventIdx to) const {
  if (!(from < to)) return false;
  const auto& a = omaps_.at(from.get());
  const auto& b = omaps_.at(to.get());
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i;
    else ++j;
  }
  return false;
}

std::vector<std::pair<EventIdx, EventIdx>> EventObjectGraph::edges() const {
  std::vector<std::pair<EventIdx, EventIdx>> out;
  for (std::size_t to = 0; to < size(); ++to)
    for (std::size_t from = 0; from < to; ++from)
      if (is_edge(EventIdx(from), EventIdx(to))) out.emplace_back(EventIdx(from), EventIdx(to));
  return out;
}

std::vector<EventIdx> EventObjectGraph::preset(EventIdx e) const {
  std::vector<EventIdx> out;
  const auto& bits = presets_.at(e.get());
  for (auto i = bits.find_first(); i != boost::dynamic_bitset<>::npos; i = bits.find_next(i)) out.emplace_back(i);
  return out;
}

EventObjectGraph build_graph(const EventLog& log) { return EventObjectGraph(log); }

std::vector<EventIdx> event_preset(const EventObjectGraph& graph, EventIdx e) {
  if (!e.valid() || e.get() >= graph.size()) throw InputError("unknown event index " + std::to_string(e.value));
  return graph.preset(e);
}

std::vector<EventIdx> event_preset(const EventLog& log, const EventObjectGraph& graph, std::string_view event_id) {
  auto e = log.find_event(event_id);
  if (!e) throw InputError("unknown event " + std::string(event_id));
  return graph.preset(*e);
}

ActivitySequence object_prefix(const EventLog& log, std::span<const EventIdx> preset, ObjectIdx o) {
  ActivitySequence seq;
  for (auto e : preset) {
    const auto& ev = log.event(e);
    if (std::ranges::binary_search(ev.omap, o)) seq.push_back(ev.activity);
  }
  return seq;
}

Context Context::from_prefixes(std::vector<std::pair<std::string, ActivitySequence>> prefixes) {
  std::map<std::string, std::map<ActivitySequence, std::size_t>> grouped;
  for (auto& [type, seq] : prefixes) ++grouped[type][std::move(seq)];
  Context c;
  for (auto& [type, seqs] : grouped) {
    TypeEntry entry{type, {}};
    for (auto& [seq, n] : seqs) entry.sequences.emplace_back(seq, n);
    c.types_.push_back(std::move(entry));
  }
  return c;
}

const std::vector<Context::Counted>* Context::of_type(std::string_view type) const {
  for (const auto& t : types_)
    if (t.type == type) return &t.sequences;
  return nullptr;
}

std::string Context::canonical() const {
  // Arrays rather than objects so that ordering is ours, not the library's.
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& t : types_) {
    nlohmann::json seqs = nlohmann::json::array();
    for (const auto& [seq, n] : t.sequences) seqs.push_back({seq, n});
    doc.push_back({t.type, std::move(seqs)});
  }
  return doc.dump();
}

std::string Context::digest() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string Context::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < types_.size(); ++i) {
    if (i > 0) out += ", ";
    out += types_[i].type + ": [";
    for (std::size_t j = 0; j < types_[i].sequences.size(); ++j) {
      const auto& [seq, n] = types_[i].sequences[j];
      if (j > 0) out += ", ";
      out += "<";
      for (std::size_t k = 0; k < seq.size(); ++k) {
        if (k > 0) out += ", ";
        out += seq[k];
      }
      out += ">";
      if (n > 1) out += "^" + std::to_string(n);
    }
    out += "]";
  }
  return out;
}

std::size_t ContextHash::operator()(const Context& c) const { return std::hash<std::string>{}(c.canonical()); }

Context context_of_event(const EventLog& log, const EventObjectGraph& graph, EventIdx e) {
  std::map<ObjectIdx, ActivitySequence> prefixes;
  const auto& bits = graph.preset_bits(e);
  for (auto i = bits.find_first(); i != boost::dynamic_bitset<>::npos; i = bits.find_next(i)) {
    const auto& ev = log.event(EventIdx(i));
    for (auto o : ev.omap) prefixes[o].push_back(ev.activity);
  }
  for (auto o : log.event(e).omap) prefixes.try_emplace(o);

  std::vector<std::pair<std::string, ActivitySequence>> typed;
  typed.reserve(prefixes.size());
  for (auto& [o, seq] : prefixes) typed.emplace_back(log.type_name(log.object_type(o)), std::move(seq));
  return Context::from_prefixes(std::move(typed));
}

ContextIndex::ContextIndex(const EventLog& log, const EventObjectGraph& graph) {
  std::unordered_map<Context, std::size_t, ContextHash> lookup;
  group_of_.resize(log.size());
  for (const auto& ev : log.events()) {
    auto ctx = context_of_event(log, graph, ev.index);
    auto [it, inserted] = lookup.try_emplace(std::move(ctx), groups_.size());
    if (inserted) groups_.push_back({it->first, {}, {}});
    auto& group = groups_[it->second];
    group.events.push_back(ev.index);
    group.enabled_log.push_back(ev.activity);
    group_of_[ev.index.get()] = it->second;
  }
  for (auto& g : groups_) {
    std::ranges::sort(g.enabled_log);
    g.enabled_log.erase(std::unique(g.enabled_log.begin(), g.enabled_log.end()), g.enabled_log.end());
  }
}

ContextIndex group_by_context(const EventLog& log, const EventObjectGraph& graph) { return {log, graph}; }

std::vector<std::string> enabled_log_activities(const ContextIndex& index, EventIdx e) {
  return index.group_for(e).enabled_log;
}

std::vector<std::string> enabled_log_activities(const EventLog& log, const EventObjectGraph& graph, EventIdx e) {
  return enabled_log_activities(ContextIndex(log, graph), e);
}

}  // namespace occ
