#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace techspace {

using ClassIndex = std::uint32_t;
using PatentIndex = std::uint32_t;

/// Key into the reference token space of a corpus. Values below the patent
/// count are in-corpus patents; the rest index external (out-of-corpus) ids.
using RefKey = std::uint32_t;

enum class ClassLevel { Cpc3, Cpc4 };

enum class AgentKind { Inventor, Assignee };

/// Which raw signal feeds a proximity measure.
enum class DataChoice { RefPat, RefClass, CoPat, CoClass };

enum class MeasureKind { Jaccard, Cosine, Pearson, Entropy };

inline constexpr std::array<DataChoice, 4> kAllDataChoices = {
    DataChoice::RefPat, DataChoice::RefClass, DataChoice::CoPat, DataChoice::CoClass};

inline constexpr std::array<MeasureKind, 4> kAllMeasures = {
    MeasureKind::Jaccard, MeasureKind::Cosine, MeasureKind::Pearson, MeasureKind::Entropy};

std::string_view to_string(ClassLevel level);
std::string_view to_string(AgentKind kind);
std::string_view to_string(DataChoice choice);
std::string_view to_string(MeasureKind kind);

// Case-insensitive parsers. Each throws InputError listing the valid names.
ClassLevel parse_class_level(std::string_view text);
AgentKind parse_agent_kind(std::string_view text);
DataChoice parse_data_choice(std::string_view text);
MeasureKind parse_measure_kind(std::string_view text);

inline std::size_t code_length(ClassLevel level) { return level == ClassLevel::Cpc3 ? 3 : 4; }

/// Reference-based choices cite other patents; co-classification ones do not.
inline bool is_reference_based(DataChoice choice) {
  return choice == DataChoice::RefPat || choice == DataChoice::RefClass;
}

/// Class-to-patent choices key features by patent; class-to-class by class.
inline bool is_patent_keyed(DataChoice choice) {
  return choice == DataChoice::RefPat || choice == DataChoice::CoPat;
}

/// One (data choice, measure) combination. Its id ("RefPat.jaccard") is the
/// lexicographic tie-break key when picking optimal measures.
struct MeasureId {
  DataChoice data = DataChoice::RefPat;
  MeasureKind measure = MeasureKind::Jaccard;

  std::string id() const;
  auto operator<=>(const MeasureId&) const = default;
};

MeasureId parse_measure_id(std::string_view text);

struct AgentId {
  std::string id;
  AgentKind kind = AgentKind::Inventor;

  auto operator<=>(const AgentId& other) const {
    if (auto c = kind <=> other.kind; c != 0) return c;
    return id <=> other.id;
  }
  bool operator==(const AgentId&) const = default;

  template <class Archive>
  void serialize(Archive& ar) {
    ar(id, kind);
  }
};

}  // namespace techspace
