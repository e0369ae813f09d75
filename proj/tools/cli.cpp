#include "cli.hpp"

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "occ/context.hpp"
#include "occ/error.hpp"
#include "occ/metrics.hpp"
#include "occ/ocel.hpp"
#include "occ/ocpn.hpp"
#include "occ/replay.hpp"
#include "occ/simulate.hpp"

namespace occ::cli {

namespace {

constexpr std::size_t kMaxListedStates = 20;

struct Options {
  std::string log_path;
  std::string model_path;
  std::string output_path;
  std::string event_id;
  std::size_t instances = 50;
  std::uint64_t seed = 1;
  std::size_t max_objects = 3;
  std::size_t max_steps = 0;
  unsigned decimals = 2;
  std::string silent_mode = "singleton";
  ReplayConfig replay;
};

void add_replay_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--max-states", opt.replay.max_states, "State cap per replayed binding sequence")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--silent-variable-mode", opt.silent_mode, "Bindings tried for silent variable arcs")
      ->check(CLI::IsMember({"singleton", "subsets"}));
  cmd->add_option("--subset-cap", opt.replay.subset_cap, "Largest object set tried in subsets mode")
      ->check(CLI::PositiveNumber);
}

std::string join(const std::vector<std::string>& items) {
  std::string out = "{";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    out += items[i];
  }
  return out + "}";
}

int cmd_check(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto log = read_log_file(opt.log_path);
  const auto net = read_model_file(opt.model_path);
  const auto report = check(log, net, opt.replay);
  if (!opt.output_path.empty()) write_text_file(opt.output_path, report_to_json(report).dump(2) + "\n");
  out << summary_line(report, opt.decimals) << "\n";
  if (report.truncated) err << "warning: the state cap was reached; enabled model activities may be incomplete\n";
  return kOk;
}

int cmd_explain(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto log = read_log_file(opt.log_path);
  const auto net = read_model_file(opt.model_path);
  const auto e = log.find_event(opt.event_id);
  if (!e) throw InputError("unknown event " + opt.event_id);

  const auto graph = build_graph(log);
  const ContextIndex index(log, graph);
  const auto& group = index.group_for(*e);
  const Replayer replayer(net, log, graph, opt.replay);
  const auto replay = replayer.replay_group(group);

  std::vector<std::string> names;
  for (auto p : graph.preset(*e)) names.push_back(log.event(p).id);
  out << "event: " << log.event(*e).id << " (" << log.event(*e).activity << ")\n";
  out << "preset: " << join(names) << "\n";
  out << "context: " << group.context.to_string() << "\n";
  out << "context digest: " << group.context.digest() << "\n";
  names.clear();
  for (auto g : group.events) names.push_back(log.event(g).id);
  out << "context group: " << join(names) << "\n";

  const auto& states = replay.combined.states;
  out << "reached states: " << states.size() << "\n";
  for (std::size_t i = 0; i < states.size() && i < kMaxListedStates; ++i)
    out << "  " << format_marking(net, replayer.objects(), states[i]) << "\n";
  if (states.size() > kMaxListedStates) out << "  ... " << states.size() - kMaxListedStates << " more\n";

  out << "en_log: " << join(group.enabled_log) << "\n";
  out << "en_model: " << join(replay.combined.enabled) << "\n";
  out << "replayable: " << (replay.combined.enabled.empty() ? "no" : "yes") << "\n";
  if (replay.combined.truncated) err << "warning: the state cap was reached\n";
  return kOk;
}

int cmd_flower(const Options& opt, std::ostream& out) {
  const auto log = read_log_file(opt.log_path);
  const auto text = serialize_model(flower_model(log));
  if (opt.output_path.empty()) out << text;
  else write_text_file(opt.output_path, text);
  return kOk;
}

int cmd_simulate(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto net = read_model_file(opt.model_path);
  SimulationConfig cfg;
  cfg.instances = opt.instances;
  cfg.seed = opt.seed;
  cfg.max_objects = opt.max_objects;
  if (opt.max_steps > 0) cfg.max_steps = opt.max_steps;
  const auto result = simulate(net, cfg);
  for (const auto& w : result.warnings) err << "warning: " << w << "\n";
  const auto text = serialize_log(result.log);
  if (opt.output_path.empty()) out << text;
  else write_text_file(opt.output_path, text);
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Object-centric conformance checking: fitness and precision of object-centric Petri nets"};
  app.require_subcommand(1);

  auto* check = app.add_subcommand("check", "Compute fitness and precision of a model for a log");
  check->add_option("log,--log", opt.log_path, "Log-JSON file")->required();
  check->add_option("model,--model", opt.model_path, "Model-JSON file")->required();
  check->add_option("-o,--output", opt.output_path, "Write the report as JSON");
  check->add_option("--decimals", opt.decimals, "Decimals in the summary line");
  add_replay_flags(check, opt);

  auto* explain = app.add_subcommand("explain", "Show context, reached states and enabled activities of one event");
  explain->add_option("log,--log", opt.log_path, "Log-JSON file")->required();
  explain->add_option("model,--model", opt.model_path, "Model-JSON file")->required();
  explain->add_option("--event", opt.event_id, "Event id")->required();
  add_replay_flags(explain, opt);

  auto* flower = app.add_subcommand("flower", "Write the flower model of a log");
  flower->add_option("log,--log", opt.log_path, "Log-JSON file")->required();
  flower->add_option("-o,--output", opt.output_path, "Model-JSON output (default: stdout)");

  auto* simulate_cmd = app.add_subcommand("simulate", "Generate a log from random runs of a model");
  simulate_cmd->add_option("model,--model", opt.model_path, "Model-JSON file")->required();
  simulate_cmd->add_option("--instances", opt.instances, "Process instances")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--seed", opt.seed, "Random seed")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--max-objects", opt.max_objects, "Objects per variable type, at most")
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--max-steps", opt.max_steps, "Steps per instance (default 10 x transitions)")
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("-o,--output", opt.output_path, "Log-JSON output (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    opt.replay.silent_variable_mode = parse_variable_mode(opt.silent_mode);
    if (check->parsed()) return cmd_check(opt, out, err);
    if (explain->parsed()) return cmd_explain(opt, out, err);
    if (flower->parsed()) return cmd_flower(opt, out);
    return cmd_simulate(opt, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace occ::cli
