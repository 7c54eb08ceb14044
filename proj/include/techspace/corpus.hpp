#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "techspace/date.hpp"
#include "techspace/types.hpp"

namespace techspace {

/// Truncates a CPC symbol such as "H04L 12/28" to its class ("H04") or
/// subclass ("H04L") prefix, uppercased. Whitespace is ignored. Throws
/// InputError if the symbol does not start with a section letter followed by
/// two digits (and, for CPC4, a subclass letter).
std::string truncate_cpc(std::string_view raw_code, ClassLevel level);

// Raw rows as they appear in the four input tables. `line` is the 1-based
// line number in the source file, used only for diagnostics.
struct PatentRow {
  std::string patent_id;
  std::string filing_date;
  std::size_t line = 0;
};

struct ClassRow {
  std::string patent_id;
  std::string cpc_code;
  std::size_t line = 0;
};

struct CitationRow {
  std::string citing_id;
  std::string cited_id;
  std::size_t line = 0;
};

struct AgentRow {
  std::string patent_id;
  std::string agent_id;
  AgentKind kind = AgentKind::Inventor;
  std::size_t line = 0;
};

struct CorpusRows {
  std::vector<PatentRow> patents;
  std::vector<ClassRow> classes;
  std::vector<CitationRow> citations;
  std::vector<AgentRow> agents;

  // Names used in error messages.
  std::string patents_source = "patents.tsv";
  std::string classes_source = "patent_classes.tsv";
  std::string citations_source = "citations.tsv";
  std::string agents_source = "patent_agents.tsv";
};

struct CorpusPaths {
  std::filesystem::path patents;
  std::filesystem::path classes;
  std::filesystem::path citations;
  std::filesystem::path agents;

  /// The canonical file names inside one directory.
  static CorpusPaths in_directory(const std::filesystem::path& dir);
};

struct IngestOptions {
  ClassLevel level = ClassLevel::Cpc4;
  /// Classes with fewer patents are removed before the vocabulary is fixed.
  /// Zero disables the filter.
  std::size_t min_patents_per_class = 0;
};

/// Row and drop counts reported by ingestion.
struct IngestSummary {
  std::size_t patent_rows = 0;
  std::size_t patents_missing_date = 0;
  std::size_t patents_duplicate = 0;
  std::size_t patents_without_class = 0;

  std::size_t class_rows = 0;
  std::size_t class_unknown_patent = 0;
  std::size_t class_malformed_code = 0;
  std::size_t class_duplicate = 0;
  std::size_t classes_below_min_patents = 0;

  std::size_t citation_rows = 0;
  std::size_t citation_unknown_citing = 0;
  std::size_t citation_duplicate = 0;
  std::size_t citation_external = 0;

  std::size_t agent_rows = 0;
  std::size_t agent_unknown_patent = 0;
  std::size_t agent_duplicate = 0;

  std::size_t patents = 0;
  std::size_t classes = 0;
  std::size_t citations = 0;
  std::size_t external_references = 0;
  std::size_t inventors = 0;
  std::size_t assignees = 0;

  std::string to_json() const;
};

struct AgentRecord {
  AgentId agent;
  std::vector<PatentIndex> patents;  // sorted, unique

  template <class Archive>
  void serialize(Archive& ar) {
    ar(agent, patents);
  }
};

struct PortfolioEntry {
  ClassIndex cls = 0;
  Date first_entry;

  bool operator==(const PortfolioEntry&) const = default;
};

class CorpusBuilder;

/// Normalized, immutable patent corpus. Patents are ordered by id, the class
/// vocabulary is sorted, and all per-patent lists are sorted and unique, so
/// equal inputs always give byte-identical corpora.
class Corpus {
 public:
  Corpus() = default;

  ClassLevel level() const { return level_; }

  std::size_t num_patents() const { return patent_ids_.size(); }
  std::size_t num_classes() const { return vocabulary_.size(); }
  std::size_t num_external_refs() const { return external_refs_.size(); }
  /// Size of the reference token space: patents plus external ids.
  std::size_t num_ref_keys() const { return num_patents() + num_external_refs(); }
  std::size_t num_citations() const { return ref_keys_.size(); }

  std::span<const std::string> vocabulary() const { return vocabulary_; }
  const std::string& class_code(ClassIndex cls) const { return vocabulary_[cls]; }
  std::optional<ClassIndex> find_class(std::string_view code) const;

  const std::string& patent_id(PatentIndex p) const { return patent_ids_[p]; }
  Date filing_date(PatentIndex p) const { return filing_dates_[p]; }
  std::span<const ClassIndex> classes(PatentIndex p) const;
  std::span<const RefKey> references(PatentIndex p) const;
  std::optional<PatentIndex> find_patent(std::string_view id) const;

  bool is_internal_ref(RefKey key) const { return key < num_patents(); }
  /// Patent id for internal keys, the opaque external token otherwise.
  const std::string& ref_token(RefKey key) const;

  std::span<const AgentRecord> agents() const { return agents_; }
  std::optional<std::size_t> find_agent(const AgentId& agent) const;

  /// Number of patents carrying each class.
  std::vector<std::size_t> class_patent_counts() const;

  /// SHA-256 of the canonical binary serialization.
  std::string digest() const;

  /// Canonical binary serialization (also the cache payload).
  std::string to_bytes() const;
  static Corpus from_bytes(std::string_view bytes);

  template <class Archive>
  void serialize(Archive& ar) {
    ar(level_, vocabulary_, patent_ids_, filing_dates_, class_offsets_, class_indices_,
       ref_offsets_, ref_keys_, external_refs_, agents_);
  }

 private:
  friend class CorpusBuilder;

  ClassLevel level_ = ClassLevel::Cpc4;
  std::vector<std::string> vocabulary_;
  std::vector<std::string> patent_ids_;
  std::vector<Date> filing_dates_;
  std::vector<std::uint64_t> class_offsets_{0};
  std::vector<ClassIndex> class_indices_;
  std::vector<std::uint64_t> ref_offsets_{0};
  std::vector<RefKey> ref_keys_;
  std::vector<std::string> external_refs_;
  std::vector<AgentRecord> agents_;
};

struct IngestResult {
  Corpus corpus;
  IngestSummary summary;
};

/// Validates and normalizes raw rows. Drop rules: patents without a filing
/// date or without any parsable class are dropped; class, citation and agent
/// rows naming unknown patents are dropped; duplicates are collapsed. Cited
/// ids outside the corpus are kept as external reference tokens. A non-empty
/// but unparsable date, an empty patent id, or a patent listed twice with
/// different dates is a hard InputError naming source and line.
IngestResult build_corpus(const CorpusRows& rows, const IngestOptions& options);

/// Reads the four TSV tables (in parallel) and builds the corpus. Missing or
/// unreadable files and malformed headers/rows raise InputError naming the
/// file and line.
IngestResult load_corpus(const CorpusPaths& paths, const IngestOptions& options);

/// Parses the TSV tables without building the corpus.
CorpusRows read_corpus_rows(const CorpusPaths& paths);

/// Writes rows back out in the canonical TSV layout.
void write_corpus_rows(const CorpusRows& rows, const CorpusPaths& paths);

/// Earliest filing date per class among the agent's patents, ordered by date
/// then class code. Throws InputError for unknown agents or agents without
/// patents.
std::vector<PortfolioEntry> build_agent_portfolio(const Corpus& corpus, const AgentId& agent);

}  // namespace techspace
