#include "techspace/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <future>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <utility>

#include <cereal/archives/binary.hpp>
#include <cereal/types/common.hpp>
#include <cereal/types/string.hpp>
#include <cereal/types/vector.hpp>
#include "json.hpp"

#include "techspace/digest.hpp"
#include "techspace/errors.hpp"
#include "techspace/io.hpp"

namespace techspace {

std::string truncate_cpc(std::string_view raw_code, ClassLevel level) {
  std::string compact;
  compact.reserve(raw_code.size());
  for (char c : raw_code) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      compact += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
  }
  const std::size_t len = code_length(level);
  const auto is_alpha = [](char c) { return c >= 'A' && c <= 'Z'; };
  const auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  const bool ok = compact.size() >= len && is_alpha(compact[0]) && is_digit(compact[1]) &&
                  is_digit(compact[2]) && (len == 3 || is_alpha(compact[3]));
  if (!ok) {
    throw InputError("malformed CPC code '" + std::string(raw_code) + "' for level " +
                     std::string(to_string(level)));
  }
  compact.resize(len);
  return compact;
}

CorpusPaths CorpusPaths::in_directory(const std::filesystem::path& dir) {
  return {dir / "patents.tsv", dir / "patent_classes.tsv", dir / "citations.tsv",
          dir / "patent_agents.tsv"};
}

std::string IngestSummary::to_json() const {
  nlohmann::ordered_json j;
  j["rows"] = {{"patents", patent_rows},
               {"patent_classes", class_rows},
               {"citations", citation_rows},
               {"patent_agents", agent_rows}};
  j["dropped"] = {{"patents_missing_date", patents_missing_date},
                  {"patents_duplicate", patents_duplicate},
                  {"patents_without_class", patents_without_class},
                  {"class_unknown_patent", class_unknown_patent},
                  {"class_malformed_code", class_malformed_code},
                  {"class_duplicate", class_duplicate},
                  {"classes_below_min_patents", classes_below_min_patents},
                  {"citation_unknown_citing", citation_unknown_citing},
                  {"citation_duplicate", citation_duplicate},
                  {"agent_unknown_patent", agent_unknown_patent},
                  {"agent_duplicate", agent_duplicate}};
  j["retained"] = {{"patents", patents},
                   {"classes", classes},
                   {"citations", citations},
                   {"citations_to_external_ids", citation_external},
                   {"external_reference_ids", external_references},
                   {"inventors", inventors},
                   {"assignees", assignees}};
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Corpus accessors

std::optional<ClassIndex> Corpus::find_class(std::string_view code) const {
  auto it = std::lower_bound(vocabulary_.begin(), vocabulary_.end(), code);
  if (it == vocabulary_.end() || *it != code) return std::nullopt;
  return static_cast<ClassIndex>(it - vocabulary_.begin());
}

std::span<const ClassIndex> Corpus::classes(PatentIndex p) const {
  return std::span<const ClassIndex>(class_indices_).subspan(
      class_offsets_[p], class_offsets_[p + 1] - class_offsets_[p]);
}

std::span<const RefKey> Corpus::references(PatentIndex p) const {
  return std::span<const RefKey>(ref_keys_).subspan(ref_offsets_[p],
                                                    ref_offsets_[p + 1] - ref_offsets_[p]);
}

std::optional<PatentIndex> Corpus::find_patent(std::string_view id) const {
  auto it = std::lower_bound(patent_ids_.begin(), patent_ids_.end(), id);
  if (it == patent_ids_.end() || *it != id) return std::nullopt;
  return static_cast<PatentIndex>(it - patent_ids_.begin());
}

const std::string& Corpus::ref_token(RefKey key) const {
  return is_internal_ref(key) ? patent_ids_[key] : external_refs_[key - num_patents()];
}

std::optional<std::size_t> Corpus::find_agent(const AgentId& agent) const {
  auto it = std::lower_bound(agents_.begin(), agents_.end(), agent,
                             [](const AgentRecord& r, const AgentId& a) { return r.agent < a; });
  if (it == agents_.end() || it->agent != agent) return std::nullopt;
  return static_cast<std::size_t>(it - agents_.begin());
}

std::vector<std::size_t> Corpus::class_patent_counts() const {
  std::vector<std::size_t> counts(num_classes(), 0);
  for (ClassIndex c : class_indices_) ++counts[c];
  return counts;
}

std::string Corpus::to_bytes() const {
  std::ostringstream os(std::ios::binary);
  {
    cereal::BinaryOutputArchive ar(os);
    ar(*this);
  }
  return std::move(os).str();
}

Corpus Corpus::from_bytes(std::string_view bytes) {
  std::istringstream is(std::string(bytes), std::ios::binary);
  Corpus corpus;
  try {
    cereal::BinaryInputArchive ar(is);
    ar(corpus);
  } catch (const cereal::Exception& e) {
    throw InputError(std::string("corrupt corpus cache: ") + e.what());
  }
  return corpus;
}

std::string Corpus::digest() const { return sha256_hex(to_bytes()); }

// ---------------------------------------------------------------------------
// Construction from rows

class CorpusBuilder {
 public:
  static IngestResult build(const CorpusRows& rows, const IngestOptions& options);
};

namespace {

[[noreturn]] void fail_at(const std::string& source, std::size_t line, const std::string& what) {
  throw InputError(source + ":" + std::to_string(line) + ": " + what);
}

template <class T>
std::size_t sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  const auto before = v.size();
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return before - v.size();
}

}  // namespace

IngestResult CorpusBuilder::build(const CorpusRows& rows, const IngestOptions& options) {
  IngestResult result;
  IngestSummary& s = result.summary;
  Corpus& corpus = result.corpus;
  corpus.level_ = options.level;

  // Patents and dates.
  std::unordered_map<std::string, Date> dates;
  dates.reserve(rows.patents.size());
  s.patent_rows = rows.patents.size();
  for (const auto& row : rows.patents) {
    if (row.patent_id.empty()) fail_at(rows.patents_source, row.line, "empty patent_id");
    if (row.filing_date.empty()) {
      ++s.patents_missing_date;
      continue;
    }
    const auto date = parse_iso_date(row.filing_date);
    if (!date) {
      fail_at(rows.patents_source, row.line, "unparsable filing_date '" + row.filing_date + "'");
    }
    auto [it, inserted] = dates.emplace(row.patent_id, *date);
    if (!inserted) {
      if (it->second != *date) {
        fail_at(rows.patents_source, row.line,
                "patent " + row.patent_id + " listed with conflicting filing dates");
      }
      ++s.patents_duplicate;
    }
  }

  // Class assignments, truncated to the configured level.
  std::unordered_map<std::string, std::vector<std::string>> patent_classes;
  s.class_rows = rows.classes.size();
  for (const auto& row : rows.classes) {
    if (row.patent_id.empty()) fail_at(rows.classes_source, row.line, "empty patent_id");
    if (!dates.contains(row.patent_id)) {
      ++s.class_unknown_patent;
      continue;
    }
    std::string code;
    try {
      code = truncate_cpc(row.cpc_code, options.level);
    } catch (const InputError&) {
      ++s.class_malformed_code;
      continue;
    }
    patent_classes[row.patent_id].push_back(std::move(code));
  }
  std::map<std::string, std::size_t> class_counts;
  for (auto& [id, codes] : patent_classes) {
    s.class_duplicate += sort_unique(codes);
    for (const auto& code : codes) ++class_counts[code];
  }

  if (options.min_patents_per_class > 0) {
    std::set<std::string> rare;
    for (const auto& [code, count] : class_counts) {
      if (count < options.min_patents_per_class) rare.insert(code);
    }
    s.classes_below_min_patents = rare.size();
    for (auto& [id, codes] : patent_classes) {
      std::erase_if(codes, [&](const std::string& c) { return rare.contains(c); });
    }
    for (const auto& code : rare) class_counts.erase(code);
  }

  for (const auto& [code, count] : class_counts) corpus.vocabulary_.push_back(code);

  for (const auto& [id, date] : dates) {
    auto it = patent_classes.find(id);
    if (it == patent_classes.end() || it->second.empty()) {
      ++s.patents_without_class;
    } else {
      corpus.patent_ids_.push_back(id);
    }
  }
  std::sort(corpus.patent_ids_.begin(), corpus.patent_ids_.end());
  const std::size_t n = corpus.patent_ids_.size();

  std::unordered_map<std::string_view, PatentIndex> index_of;
  index_of.reserve(n);
  for (PatentIndex p = 0; p < n; ++p) index_of.emplace(corpus.patent_ids_[p], p);

  corpus.filing_dates_.reserve(n);
  corpus.class_offsets_.assign(1, 0);
  corpus.class_offsets_.reserve(n + 1);
  for (PatentIndex p = 0; p < n; ++p) {
    const std::string& id = corpus.patent_ids_[p];
    corpus.filing_dates_.push_back(dates.at(id));
    for (const auto& code : patent_classes.at(id)) {
      corpus.class_indices_.push_back(*corpus.find_class(code));
    }
    corpus.class_offsets_.push_back(corpus.class_indices_.size());
  }

  // Citations. Cited ids outside the corpus become external tokens.
  s.citation_rows = rows.citations.size();
  std::vector<std::pair<PatentIndex, std::string_view>> citations;
  citations.reserve(rows.citations.size());
  std::vector<std::string_view> external;
  for (const auto& row : rows.citations) {
    if (row.citing_id.empty() || row.cited_id.empty()) {
      fail_at(rows.citations_source, row.line, "empty patent id");
    }
    auto it = index_of.find(row.citing_id);
    if (it == index_of.end()) {
      ++s.citation_unknown_citing;
      continue;
    }
    citations.emplace_back(it->second, row.cited_id);
    if (!index_of.contains(row.cited_id)) external.push_back(row.cited_id);
  }
  s.citation_duplicate = sort_unique(citations);
  sort_unique(external);
  corpus.external_refs_.assign(external.begin(), external.end());

  std::vector<std::vector<RefKey>> refs(n);
  for (const auto& [citing, cited] : citations) {
    RefKey key;
    if (auto it = index_of.find(cited); it != index_of.end()) {
      key = it->second;
    } else {
      auto ext = std::lower_bound(external.begin(), external.end(), cited);
      key = static_cast<RefKey>(n + static_cast<std::size_t>(ext - external.begin()));
      ++s.citation_external;
    }
    refs[citing].push_back(key);
  }
  corpus.ref_offsets_.assign(1, 0);
  corpus.ref_offsets_.reserve(n + 1);
  for (auto& r : refs) {
    std::sort(r.begin(), r.end());
    corpus.ref_keys_.insert(corpus.ref_keys_.end(), r.begin(), r.end());
    corpus.ref_offsets_.push_back(corpus.ref_keys_.size());
  }

  // Agent links.
  s.agent_rows = rows.agents.size();
  std::map<AgentId, std::vector<PatentIndex>> agents;
  for (const auto& row : rows.agents) {
    if (row.patent_id.empty() || row.agent_id.empty()) {
      fail_at(rows.agents_source, row.line, "empty patent_id or agent_id");
    }
    auto it = index_of.find(row.patent_id);
    if (it == index_of.end()) {
      ++s.agent_unknown_patent;
      continue;
    }
    agents[AgentId{row.agent_id, row.kind}].push_back(it->second);
  }
  for (auto& [agent, patents] : agents) {
    s.agent_duplicate += sort_unique(patents);
    (agent.kind == AgentKind::Inventor ? s.inventors : s.assignees) += 1;
    corpus.agents_.push_back(AgentRecord{agent, std::move(patents)});
  }

  s.patents = n;
  s.classes = corpus.vocabulary_.size();
  s.citations = corpus.ref_keys_.size();
  s.external_references = corpus.external_refs_.size();
  return result;
}

IngestResult build_corpus(const CorpusRows& rows, const IngestOptions& options) {
  return CorpusBuilder::build(rows, options);
}

// ---------------------------------------------------------------------------
// TSV reading and writing

namespace {

template <std::size_t N, class Fn>
void parse_table(const std::filesystem::path& path, const std::array<std::string_view, N>& header,
                 Fn&& on_row) {
  const std::string buffer = read_text_file(path);
  const std::string source = path.string();
  bool seen_header = false;
  for_each_line(buffer, [&](std::size_t line_no, std::string_view line) {
    if (!seen_header) {
      const auto fields = split(line, '\t');
      bool ok = fields.size() == N;
      for (std::size_t i = 0; ok && i < N; ++i) ok = trim(fields[i]) == header[i];
      if (!ok) {
        std::string expected;
        for (auto h : header) expected += (expected.empty() ? "" : "\\t") + std::string(h);
        fail_at(source, line_no, "malformed header, expected '" + expected + "'");
      }
      seen_header = true;
      return;
    }
    if (trim(line).empty()) return;
    const auto fields = split(line, '\t');
    if (fields.size() != N) {
      fail_at(source, line_no,
              "expected " + std::to_string(N) + " fields, found " + std::to_string(fields.size()));
    }
    std::array<std::string_view, N> cells;
    for (std::size_t i = 0; i < N; ++i) cells[i] = trim(fields[i]);
    on_row(line_no, cells);
  });
  if (!seen_header) fail_at(source, 1, "missing header row");
}

}  // namespace

CorpusRows read_corpus_rows(const CorpusPaths& paths) {
  for (const auto* p : {&paths.patents, &paths.classes, &paths.citations, &paths.agents}) {
    if (!std::filesystem::is_regular_file(*p)) throw InputError("missing input file " + p->string());
  }
  CorpusRows rows;
  rows.patents_source = paths.patents.string();
  rows.classes_source = paths.classes.string();
  rows.citations_source = paths.citations.string();
  rows.agents_source = paths.agents.string();

  auto patents = std::async(std::launch::async, [&] {
    std::vector<PatentRow> out;
    parse_table(paths.patents, std::array<std::string_view, 2>{"patent_id", "filing_date"},
                [&](std::size_t line, const auto& c) {
                  out.push_back({std::string(c[0]), std::string(c[1]), line});
                });
    return out;
  });
  auto classes = std::async(std::launch::async, [&] {
    std::vector<ClassRow> out;
    parse_table(paths.classes, std::array<std::string_view, 2>{"patent_id", "cpc_code"},
                [&](std::size_t line, const auto& c) {
                  out.push_back({std::string(c[0]), std::string(c[1]), line});
                });
    return out;
  });
  auto citations = std::async(std::launch::async, [&] {
    std::vector<CitationRow> out;
    parse_table(paths.citations,
                std::array<std::string_view, 2>{"citing_patent_id", "cited_patent_id"},
                [&](std::size_t line, const auto& c) {
                  out.push_back({std::string(c[0]), std::string(c[1]), line});
                });
    return out;
  });
  auto agents = std::async(std::launch::async, [&] {
    std::vector<AgentRow> out;
    parse_table(paths.agents,
                std::array<std::string_view, 3>{"patent_id", "agent_id", "agent_kind"},
                [&](std::size_t line, const auto& c) {
                  AgentKind kind;
                  try {
                    kind = parse_agent_kind(c[2]);
                  } catch (const InputError& e) {
                    fail_at(paths.agents.string(), line, e.what());
                  }
                  out.push_back({std::string(c[0]), std::string(c[1]), kind, line});
                });
    return out;
  });

  rows.patents = patents.get();
  rows.classes = classes.get();
  rows.citations = citations.get();
  rows.agents = agents.get();
  return rows;
}

IngestResult load_corpus(const CorpusPaths& paths, const IngestOptions& options) {
  return build_corpus(read_corpus_rows(paths), options);
}

void write_corpus_rows(const CorpusRows& rows, const CorpusPaths& paths) {
  std::string out = "patent_id\tfiling_date\n";
  for (const auto& r : rows.patents) out += r.patent_id + '\t' + r.filing_date + '\n';
  write_text_file(paths.patents, out);

  out = "patent_id\tcpc_code\n";
  for (const auto& r : rows.classes) out += r.patent_id + '\t' + r.cpc_code + '\n';
  write_text_file(paths.classes, out);

  out = "citing_patent_id\tcited_patent_id\n";
  for (const auto& r : rows.citations) out += r.citing_id + '\t' + r.cited_id + '\n';
  write_text_file(paths.citations, out);

  out = "patent_id\tagent_id\tagent_kind\n";
  for (const auto& r : rows.agents) {
    out += r.patent_id + '\t' + r.agent_id + '\t' + std::string(to_string(r.kind)) + '\n';
  }
  write_text_file(paths.agents, out);
}

// ---------------------------------------------------------------------------

std::vector<PortfolioEntry> build_agent_portfolio(const Corpus& corpus, const AgentId& agent) {
  const auto slot = corpus.find_agent(agent);
  if (!slot) {
    throw InputError("unknown " + std::string(to_string(agent.kind)) + " '" + agent.id + "'");
  }
  const auto& record = corpus.agents()[*slot];
  if (record.patents.empty()) {
    throw InputError(std::string(to_string(agent.kind)) + " '" + agent.id + "' has no patents");
  }
  std::map<ClassIndex, Date> first;
  for (PatentIndex p : record.patents) {
    const Date d = corpus.filing_date(p);
    for (ClassIndex c : corpus.classes(p)) {
      auto [it, inserted] = first.emplace(c, d);
      if (!inserted && d < it->second) it->second = d;
    }
  }
  std::vector<PortfolioEntry> entries;
  entries.reserve(first.size());
  for (const auto& [cls, date] : first) entries.push_back({cls, date});
  // Class indices follow the sorted vocabulary, so index order is code order.
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.first_entry < b.first_entry;
  });
  return entries;
}

}  // namespace techspace
