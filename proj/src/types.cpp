#include "techspace/types.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "techspace/errors.hpp"

namespace techspace {
namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

template <class Enum, std::size_t N>
Enum parse_enum(std::string_view text, const std::array<Enum, N>& values, const char* what) {
  const std::string key = lower(text);
  for (Enum v : values) {
    if (lower(to_string(v)) == key) return v;
  }
  std::string valid;
  for (Enum v : values) {
    if (!valid.empty()) valid += ", ";
    valid += to_string(v);
  }
  throw InputError("unknown " + std::string(what) + " '" + std::string(text) +
                   "'; valid names: " + valid);
}

}  // namespace

std::string_view to_string(ClassLevel level) {
  return level == ClassLevel::Cpc3 ? "cpc3" : "cpc4";
}

std::string_view to_string(AgentKind kind) {
  return kind == AgentKind::Inventor ? "inventor" : "assignee";
}

std::string_view to_string(DataChoice choice) {
  switch (choice) {
    case DataChoice::RefPat: return "RefPat";
    case DataChoice::RefClass: return "RefClass";
    case DataChoice::CoPat: return "CoPat";
    case DataChoice::CoClass: return "CoClass";
  }
  return "?";
}

std::string_view to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::Jaccard: return "jaccard";
    case MeasureKind::Cosine: return "cosine";
    case MeasureKind::Pearson: return "pearson";
    case MeasureKind::Entropy: return "entropy";
  }
  return "?";
}

ClassLevel parse_class_level(std::string_view text) {
  return parse_enum(text, std::array{ClassLevel::Cpc3, ClassLevel::Cpc4}, "classification level");
}

AgentKind parse_agent_kind(std::string_view text) {
  return parse_enum(text, std::array{AgentKind::Inventor, AgentKind::Assignee}, "agent kind");
}

DataChoice parse_data_choice(std::string_view text) {
  return parse_enum(text, kAllDataChoices, "data choice");
}

MeasureKind parse_measure_kind(std::string_view text) {
  return parse_enum(text, kAllMeasures, "measure");
}

std::string MeasureId::id() const {
  std::string out(to_string(data));
  out += '.';
  out += to_string(measure);
  return out;
}

MeasureId parse_measure_id(std::string_view text) {
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) {
    throw InputError("measure id '" + std::string(text) + "' must look like RefPat.jaccard");
  }
  return MeasureId{parse_data_choice(text.substr(0, dot)), parse_measure_kind(text.substr(dot + 1))};
}

}  // namespace techspace
