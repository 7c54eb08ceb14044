#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "techspace/corpus.hpp"
#include "techspace/io.hpp"

namespace testing {

inline std::filesystem::path fixture_dir(const std::string& name) {
  return std::filesystem::path(TECHSPACE_FIXTURE_DIR) / name;
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("techspace-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Writes the four tables (bodies without headers) into `dir`.
inline techspace::CorpusPaths write_tables(const std::filesystem::path& dir,
                                           const std::string& patents, const std::string& classes,
                                           const std::string& citations,
                                           const std::string& agents) {
  const auto paths = techspace::CorpusPaths::in_directory(dir);
  techspace::write_text_file(paths.patents, "patent_id\tfiling_date\n" + patents);
  techspace::write_text_file(paths.classes, "patent_id\tcpc_code\n" + classes);
  techspace::write_text_file(paths.citations, "citing_patent_id\tcited_patent_id\n" + citations);
  techspace::write_text_file(paths.agents, "patent_id\tagent_id\tagent_kind\n" + agents);
  return paths;
}

inline techspace::Corpus corpus_from(const techspace::CorpusRows& rows,
                                     techspace::ClassLevel level = techspace::ClassLevel::Cpc4) {
  return techspace::build_corpus(rows, techspace::IngestOptions{level, 0}).corpus;
}

}  // namespace testing
