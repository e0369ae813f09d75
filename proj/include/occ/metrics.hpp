#pragma once

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "occ/ocel.hpp"
#include "occ/ocpn.hpp"
#include "occ/replay.hpp"

namespace occ {

using Rational = boost::multiprecision::cpp_rational;

struct EventDiagnostic {
  std::string id;
  std::string context_digest;
  std::vector<std::string> en_log;
  std::vector<std::string> en_model;
  bool replayable = false;
  bool truncated = false;
  bool reached_final = false;
};

struct ConformanceReport {
  Rational fitness;
  // Unset when no event is replayable.
  std::optional<Rational> precision;
  std::size_t num_events = 0;
  std::size_t num_replayable = 0;
  Rational skipped_fraction;
  bool truncated = false;
  // Log order.
  std::vector<EventDiagnostic> per_event;
  ReplayConfig config;
};

/// Replays every context group once and computes both metrics. Throws
/// InputError on an empty log.
ConformanceReport check(const EventLog& log, const AcceptingOCPN& net, const ReplayConfig& config = {});

Rational fitness(const EventLog& log, const AcceptingOCPN& net, const ReplayConfig& config = {});
std::optional<Rational> precision(const EventLog& log, const AcceptingOCPN& net, const ReplayConfig& config = {});

/// Decimal rendering rounded half-up, e.g. 16/18 at 2 decimals -> "0.89".
std::string format_decimal(const Rational& value, unsigned decimals = 2);
double to_double(const Rational& value);

nlohmann::json report_to_json(const ConformanceReport& report);
/// Inverse of report_to_json up to the precision of JSON numbers; the
/// rationals come back as doubles converted exactly.
ConformanceReport report_from_json(const nlohmann::json& doc);

/// "fitness=1.00 precision=0.89 skipped=0%"
std::string summary_line(const ConformanceReport& report, unsigned decimals = 2);

}  // namespace occ
