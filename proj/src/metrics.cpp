#include "occ/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "occ/context.hpp"
#include "occ/error.hpp"

namespace occ {

namespace {

using boost::multiprecision::cpp_int;
using nlohmann::json;

std::size_t intersection_size(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> both;
  std::ranges::set_intersection(a, b, std::back_inserter(both));
  return both.size();
}

Rational from_double(double v) {
  // Doubles are dyadic rationals, so this is exact.
  int exp = 0;
  double mant = std::frexp(v, &exp);
  auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  Rational r(scaled);
  exp -= 53;
  cpp_int pow = cpp_int(1) << std::abs(exp);
  return exp >= 0 ? r * Rational(pow) : r / Rational(pow);
}

}  // namespace

ConformanceReport check(const EventLog& log, const AcceptingOCPN& net, const ReplayConfig& config) {
  if (log.empty()) throw InputError("the log has no events");

  const auto graph = build_graph(log);
  const ContextIndex index(log, graph);
  const Replayer replayer(net, log, graph, config);

  ConformanceReport report;
  report.config = config;
  report.num_events = log.size();
  report.per_event.resize(log.size());

  Rational fitness_sum = 0;
  Rational precision_sum = 0;
  for (const auto& group : index.groups()) {
    const auto replay = replayer.replay_group(group);
    const auto& en_model = replay.combined.enabled;
    const auto digest = group.context.digest();
    const auto common = intersection_size(group.enabled_log, en_model);
    const bool replayable = !en_model.empty();
    report.truncated = report.truncated || replay.combined.truncated;

    for (const auto& ev : replay.per_event) {
      auto& d = report.per_event[ev.event.get()];
      d.id = log.event(ev.event).id;
      d.context_digest = digest;
      d.en_log = group.enabled_log;
      d.en_model = en_model;
      d.replayable = replayable;
      d.truncated = replay.combined.truncated;
      d.reached_final = ev.outcome.reached_final;

      fitness_sum += Rational(common, group.enabled_log.size());
      if (replayable) {
        ++report.num_replayable;
        precision_sum += Rational(common, en_model.size());
      }
    }
  }

  report.fitness = fitness_sum / log.size();
  if (report.num_replayable > 0) report.precision = precision_sum / report.num_replayable;
  report.skipped_fraction = 1 - Rational(report.num_replayable, report.num_events);
  return report;
}

Rational fitness(const EventLog& log, const AcceptingOCPN& net, const ReplayConfig& config) {
  return check(log, net, config).fitness;
}

std::optional<Rational> precision(const EventLog& log, const AcceptingOCPN& net, const ReplayConfig& config) {
  return check(log, net, config).precision;
}

std::string format_decimal(const Rational& value, unsigned decimals) {
  cpp_int scale = 1;
  for (unsigned i = 0; i < decimals; ++i) scale *= 10;
  const bool negative = value < 0;
  Rational magnitude = negative ? Rational(-value) : value;
  Rational shifted = magnitude * scale + Rational(1, 2);
  cpp_int rounded = numerator(shifted) / denominator(shifted);

  std::string digits = rounded.str();
  if (decimals > 0) {
    if (digits.size() <= decimals) digits.insert(0, decimals + 1 - digits.size(), '0');
    digits.insert(digits.size() - decimals, ".");
  }
  if (negative && rounded != 0) digits.insert(0, "-");
  return digits;
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

json report_to_json(const ConformanceReport& report) {
  json doc;
  doc["fitness"] = to_double(report.fitness);
  doc["precision"] = report.precision ? json(to_double(*report.precision)) : json(nullptr);
  doc["num_events"] = report.num_events;
  doc["num_replayable"] = report.num_replayable;
  doc["skipped_fraction"] = to_double(report.skipped_fraction);
  doc["truncated"] = report.truncated;
  json events = json::array();
  for (const auto& d : report.per_event) {
    events.push_back({{"id", d.id},
                      {"context_digest", d.context_digest},
                      {"en_log", d.en_log},
                      {"en_model", d.en_model},
                      {"replayable", d.replayable},
                      {"reached_final", d.reached_final}});
  }
  doc["per_event"] = std::move(events);
  doc["config"] = {{"max_states", report.config.max_states},
                   {"silent_variable_mode", to_string(report.config.silent_variable_mode)},
                   {"subset_cap", report.config.subset_cap}};
  return doc;
}

ConformanceReport report_from_json(const json& doc) {
  try {
    ConformanceReport r;
    r.fitness = from_double(doc.at("fitness").get<double>());
    if (!doc.at("precision").is_null()) r.precision = from_double(doc.at("precision").get<double>());
    r.num_events = doc.at("num_events").get<std::size_t>();
    r.num_replayable = doc.at("num_replayable").get<std::size_t>();
    r.skipped_fraction = from_double(doc.at("skipped_fraction").get<double>());
    r.truncated = doc.at("truncated").get<bool>();
    for (const auto& e : doc.at("per_event")) {
      EventDiagnostic d;
      d.id = e.at("id").get<std::string>();
      d.context_digest = e.at("context_digest").get<std::string>();
      d.en_log = e.at("en_log").get<std::vector<std::string>>();
      d.en_model = e.at("en_model").get<std::vector<std::string>>();
      d.replayable = e.at("replayable").get<bool>();
      d.reached_final = e.at("reached_final").get<bool>();
      d.truncated = r.truncated;
      r.per_event.push_back(std::move(d));
    }
    const auto& cfg = doc.at("config");
    r.config.max_states = cfg.at("max_states").get<std::size_t>();
    r.config.silent_variable_mode = parse_variable_mode(cfg.at("silent_variable_mode").get<std::string>());
    r.config.subset_cap = cfg.at("subset_cap").get<std::size_t>();
    return r;
  } catch (const json::exception& err) {
    throw InputError(std::string("malformed report: ") + err.what());
  }
}

std::string summary_line(const ConformanceReport& report, unsigned decimals) {
  std::string line = "fitness=" + format_decimal(report.fitness, decimals);
  line += " precision=" + (report.precision ? format_decimal(*report.precision, decimals) : std::string("undefined"));
  line += " skipped=" + format_decimal(report.skipped_fraction * 100, 0) + "%";
  return line;
}

}  // namespace occ
