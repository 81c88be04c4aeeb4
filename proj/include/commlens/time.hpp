#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace commlens {

// UTC instant, seconds since the Unix epoch. All timestamps in the pipeline
// carry seconds precision; fractional seconds in input are truncated.
using Timestamp = std::int64_t;

constexpr std::int64_t kSecondsPerDay = 86400;

// Parses "YYYY-MM-DDTHH:MM:SS" with an optional fractional part and an
// optional zone suffix: "Z", "+HH:MM", "-HH:MM", "+HHMM" or "-HHMM".
// A missing suffix means UTC. Returns nullopt on any malformation.
std::optional<Timestamp> parse_iso8601(std::string_view text);

// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(Timestamp t);

std::int64_t days_from_civil(int year, unsigned month, unsigned day);
void civil_from_days(std::int64_t days, int& year, unsigned& month, unsigned& day);

}  // namespace commlens
