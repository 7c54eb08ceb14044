#include "techspace/matrix_io.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "techspace/errors.hpp"
#include "techspace/io.hpp"

namespace techspace {

std::string write_matrix_csv(const ProximityMatrix& matrix) {
  std::string out = "class_i,class_j,score\n";
  const auto classes = matrix.classes();
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    for (std::size_t j = i + 1; j < matrix.size(); ++j) {
      out += classes[i];
      out += ',';
      out += classes[j];
      out += ',';
      out += format_double(matrix.score(i, j));
      out += '\n';
    }
  }
  return out;
}

ProximityMatrix read_matrix_csv(std::string_view text, MeasureId id, double epsilon) {
  struct Row {
    std::string_view a, b;
    double score;
  };
  std::vector<Row> rows;
  std::set<std::string_view> names;
  bool header = true;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (header) {
      if (line != "class_i,class_j,score") throw InputError("matrix csv: unexpected header");
      header = false;
      return;
    }
    if (line.empty()) return;
    const auto f = split(line, ',');
    if (f.size() != 3 || f[0] == f[1]) {
      throw InputError("matrix csv line " + std::to_string(line_no) + ": malformed row");
    }
    rows.push_back({f[0], f[1], parse_double(f[2])});
    names.insert(f[0]);
    names.insert(f[1]);
  });

  std::vector<std::string> classes(names.begin(), names.end());
  const std::size_t n = classes.size();
  if (rows.size() != n * (n - 1) / 2) {
    throw InputError("matrix csv: expected " + std::to_string(n * (n - 1) / 2) + " pairs, found " +
                     std::to_string(rows.size()));
  }
  ProximityMatrix m(classes, id, epsilon);
  std::vector<char> seen(n * n, 0);
  const auto index = [&](std::string_view name) {
    return static_cast<std::size_t>(std::lower_bound(classes.begin(), classes.end(), name) -
                                    classes.begin());
  };
  for (const auto& r : rows) {
    const std::size_t i = index(r.a);
    const std::size_t j = index(r.b);
    const std::size_t key = std::min(i, j) * n + std::max(i, j);
    if (seen[key]) throw InputError("matrix csv: duplicate pair " + std::string(r.a) + "," + std::string(r.b));
    seen[key] = 1;
    m.set(i, j, r.score);
  }
  return m;
}

}  // namespace techspace
