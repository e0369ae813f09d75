#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "occ/ocel.hpp"
#include "occ/ocpn.hpp"

namespace occ {

struct SimulationConfig {
  std::size_t instances = 50;
  std::uint64_t seed = 1;
  // Objects per instance for types on variable arcs are drawn from [1, max_objects].
  std::size_t max_objects = 3;
  // Default: 10 * number of transitions.
  std::optional<std::size_t> max_steps;
  // Chance of ending an instance at a final marking that still enables bindings.
  double stop_probability = 0.5;
  // Give up after instances * attempts_per_instance tries.
  std::size_t attempts_per_instance = 100;
};

struct SimulationResult {
  EventLog log;
  std::size_t accepted = 0;
  std::size_t discarded = 0;
  std::vector<std::string> warnings;
};

/// Generates a log of random runs from the accepted behavior of `net`:
/// fresh objects per instance, uniformly random enabled bindings (silent
/// ones included) until a final marking. Only visible bindings become
/// events; instances are appended one after another. Deterministic for a
/// given seed. Throws InputError if the net is dead in its initial marking
/// or an object type lacks a final place.
SimulationResult simulate(const AcceptingOCPN& net, const SimulationConfig& config);

}  // namespace occ
