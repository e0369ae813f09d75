#include "occ/simulate.hpp"

#include <random>

#include "occ/error.hpp"

namespace occ {

namespace {

// Unbiased draw in [0, n) straight from the engine so that sequences do not
// depend on the standard library's distribution implementations.
std::size_t draw(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t bound = n;
  const std::uint64_t limit = std::mt19937_64::max() - (std::mt19937_64::max() % bound);
  std::uint64_t x = 0;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

bool chance(std::mt19937_64& rng, double p) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

}  // namespace

SimulationResult simulate(const AcceptingOCPN& net, const SimulationConfig& config) {
  if (config.instances == 0) throw InputError("instances must be positive");
  if (config.max_objects == 0) throw InputError("max_objects must be positive");

  const auto& types = net.object_types();
  std::vector<bool> used(types.size(), false);
  std::vector<bool> variable(types.size(), false);
  std::vector<bool> has_final(types.size(), false);
  for (std::size_t t = 0; t < net.transitions().size(); ++t) {
    for (auto type : net.types_of(TransitionIdx(t))) {
      used[type.get()] = true;
      if (net.is_variable(TransitionIdx(t), type)) variable[type.get()] = true;
    }
  }
  for (const auto& p : net.places())
    if (p.final) has_final[p.type.get()] = true;
  for (std::size_t t = 0; t < types.size(); ++t)
    if (used[t] && !has_final[t]) throw InputError("object type " + types[t] + " has no final place");

  const std::size_t max_steps = config.max_steps.value_or(10 * net.transitions().size());
  const BindingEnumeration how{VariableMode::subsets, config.max_objects};
  std::mt19937_64 rng(config.seed);

  SimulationResult result;
  LogData data;
  for (std::size_t t = 0; t < types.size(); ++t)
    if (used[t]) data.object_types.push_back(types[t]);

  const std::size_t max_attempts = config.instances * config.attempts_per_instance;
  std::size_t attempts = 0;
  while (result.accepted < config.instances && attempts < max_attempts) {
    ++attempts;
    ObjectTable objects;
    std::vector<ObjectIdx> members;
    for (std::size_t t = 0; t < types.size(); ++t) {
      if (!used[t]) continue;
      const std::size_t count = variable[t] ? 1 + draw(rng, config.max_objects) : 1;
      for (std::size_t k = 1; k <= count; ++k)
        members.push_back(objects.add(types[t] + "-" + std::to_string(attempts) + "-" + std::to_string(k), TypeIdx(t)));
    }

    Marking marking = initial_marking_for(net, objects, members);
    std::vector<std::pair<std::string, std::vector<ObjectIdx>>> events;
    std::size_t steps = 0;
    bool accepted = false;
    while (true) {
      std::vector<Binding> options;
      for (std::size_t t = 0; t < net.transitions().size(); ++t) {
        auto bs = enabled_bindings(net, marking, TransitionIdx(t), objects, members, how);
        options.insert(options.end(), std::make_move_iterator(bs.begin()), std::make_move_iterator(bs.end()));
      }
      if (steps == 0 && options.empty()) throw InputError("the model enables no binding in its initial marking");

      const bool final = steps > 0 && is_final(net, marking);
      if (final && (options.empty() || chance(rng, config.stop_probability))) {
        accepted = true;
        break;
      }
      if (options.empty()) {
        result.warnings.push_back("instance " + std::to_string(attempts) + " deadlocked; discarded");
        break;
      }
      if (steps == max_steps) {
        result.warnings.push_back("instance " + std::to_string(attempts) + " exceeded " + std::to_string(max_steps) +
                                  " steps; discarded");
        break;
      }

      const auto& chosen = options[draw(rng, options.size())];
      marking = execute_binding(net, marking, chosen);
      ++steps;
      if (const auto& label = net.transition(chosen.transition).label) {
        std::vector<ObjectIdx> omap;
        for (const auto& [type, objs] : chosen.objects) omap.insert(omap.end(), objs.begin(), objs.end());
        events.emplace_back(*label, std::move(omap));
      }
    }

    if (!accepted) {
      ++result.discarded;
      continue;
    }
    ++result.accepted;
    for (auto o : members) data.objects.push_back({objects.id(o), types[objects.type(o).get()], nullptr});
    for (auto& [activity, omap] : events) {
      LogData::Event ev{"e" + std::to_string(data.events.size() + 1), activity, {}, std::nullopt};
      for (auto o : omap) ev.omap.push_back({objects.id(o), std::nullopt});
      data.events.push_back(std::move(ev));
    }
  }
  if (result.accepted < config.instances) {
    result.warnings.push_back("generated " + std::to_string(result.accepted) + " of " +
                              std::to_string(config.instances) + " instances");
  }
  result.log = EventLog::from_data(data);
  return result;
}

}  // namespace occ
