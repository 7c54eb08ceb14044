#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace techspace {

/// Reads a whole file. Throws InputError naming the path on failure.
std::string read_text_file(const std::filesystem::path& path);

/// Writes a whole file, creating parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

/// Shortest round-trip decimal form ("0.5", "-inf", "1e-09").
std::string format_double(double value);

/// Parses a full string as a double (accepts "inf", "-inf"). Throws InputError.
double parse_double(std::string_view text);

/// Splits on a single-character delimiter without trimming.
std::vector<std::string_view> split(std::string_view line, char delimiter);

std::string_view trim(std::string_view text);

/// Iterates lines of a text buffer, stripping a trailing '\r'. The callback
/// receives the 1-based line number.
template <class Fn>
void for_each_line(std::string_view buffer, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < buffer.size()) {
    std::size_t end = buffer.find('\n', pos);
    if (end == std::string_view::npos) end = buffer.size();
    std::string_view line = buffer.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(++line_no, line);
    pos = end + 1;
  }
}

}  // namespace techspace
