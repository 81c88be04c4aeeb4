#include "commlens/time.hpp"

#include <cctype>
#include <cstdio>

namespace commlens {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

}  // namespace

std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& year, unsigned& month, unsigned& day) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  day = doy - (153 * mp + 2) / 5 + 1;
  month = mp + (mp < 10 ? 3 : -9);
  year = static_cast<int>(y + (month <= 2));
}

std::optional<Timestamp> parse_iso8601(std::string_view s) {
  // Minimal shape: 2013-11-01T10:00:00
  if (s.size() < 19) return std::nullopt;
  if (s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != 't' && s[10] != ' ') ||
      s[13] != ':' || s[16] != ':')
    return std::nullopt;
  if (!all_digits(s.substr(0, 4)) || !all_digits(s.substr(5, 2)) ||
      !all_digits(s.substr(8, 2)) || !all_digits(s.substr(11, 2)) ||
      !all_digits(s.substr(14, 2)) || !all_digits(s.substr(17, 2)))
    return std::nullopt;

  const int year = to_int(s.substr(0, 4));
  const unsigned month = static_cast<unsigned>(to_int(s.substr(5, 2)));
  const unsigned day = static_cast<unsigned>(to_int(s.substr(8, 2)));
  const int hour = to_int(s.substr(11, 2));
  const int minute = to_int(s.substr(14, 2));
  const int second = to_int(s.substr(17, 2));

  if (month < 1 || month > 12 || day < 1 || day > 31) return std::nullopt;
  if (hour > 23 || minute > 59 || second > 60) return std::nullopt;

  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    std::size_t frac = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      ++pos;
      ++frac;
    }
    if (frac == 0) return std::nullopt;
  }

  std::int64_t offset = 0;
  if (pos < s.size()) {
    const char c = s[pos];
    if (c == 'Z' || c == 'z') {
      ++pos;
    } else if (c == '+' || c == '-') {
      std::string_view tail = s.substr(pos + 1);
      int oh = 0, om = 0;
      if (tail.size() == 5 && tail[2] == ':' && all_digits(tail.substr(0, 2)) &&
          all_digits(tail.substr(3, 2))) {
        oh = to_int(tail.substr(0, 2));
        om = to_int(tail.substr(3, 2));
        pos += 6;
      } else if (tail.size() == 4 && all_digits(tail)) {
        oh = to_int(tail.substr(0, 2));
        om = to_int(tail.substr(2, 2));
        pos += 5;
      } else {
        return std::nullopt;
      }
      if (oh > 23 || om > 59) return std::nullopt;
      offset = (c == '+' ? 1 : -1) * (oh * 3600 + om * 60);
    } else {
      return std::nullopt;
    }
  }
  if (pos != s.size()) return std::nullopt;

  const std::int64_t days = days_from_civil(year, month, day);
  // Leap second input clamps to :59.
  const int sec = second == 60 ? 59 : second;
  return days * kSecondsPerDay + hour * 3600 + minute * 60 + sec - offset;
}

std::string format_iso8601(Timestamp t) {
  std::int64_t days = t / kSecondsPerDay;
  std::int64_t rem = t % kSecondsPerDay;
  if (rem < 0) {
    rem += kSecondsPerDay;
    --days;
  }
  int year;
  unsigned month, day;
  civil_from_days(days, year, month, day);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", year, month, day,
                static_cast<int>(rem / 3600), static_cast<int>((rem % 3600) / 60),
                static_cast<int>(rem % 60));
  return buf;
}

}  // namespace commlens
