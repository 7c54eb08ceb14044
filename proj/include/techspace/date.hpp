#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace techspace {

/// Calendar date stored as days since 1970-01-01.
struct Date {
  std::int32_t days = 0;

  auto operator<=>(const Date&) const = default;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(days);
  }
};

/// Parses a strict ISO 8601 calendar date (YYYY-MM-DD). Returns nullopt for
/// anything else, including impossible dates such as 2001-02-29.
std::optional<Date> parse_iso_date(std::string_view text);

Date make_date(int year, unsigned month, unsigned day);

std::string to_iso_string(Date date);

}  // namespace techspace
