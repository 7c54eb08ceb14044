#include "oracle.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace oracle {

using techspace::DataChoice;
using techspace::MeasureKind;

double jaccard(const DenseVector& a, const DenseVector& b) {
  std::size_t inter = 0, uni = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    inter += (a[k] > 0 && b[k] > 0);
    uni += (a[k] > 0 || b[k] > 0);
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double cosine(const DenseVector& a, const DenseVector& b) {
  double dot = 0, qa = 0, qb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    qa += a[k] * a[k];
    qb += b[k] * b[k];
  }
  if (qa == 0 || qb == 0) return 0.0;
  return dot / std::sqrt(qa * qb);
}

double pearson(const DenseVector& a, const DenseVector& b) {
  const long double n = static_cast<long double>(a.size());
  long double ma = 0, mb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ma += a[k];
    mb += b[k];
  }
  ma /= n;
  mb /= n;
  long double cov = 0, va = 0, vb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    cov += (a[k] - ma) * (b[k] - mb);
    va += (a[k] - ma) * (a[k] - ma);
    vb += (b[k] - mb) * (b[k] - mb);
  }
  if (va == 0 || vb == 0) return 0.0;
  return static_cast<double>(cov / std::sqrt(va * vb));
}

double pearson_exact(const DenseVector& a, const DenseVector& b) {
  using i128 = __int128;
  const i128 n = static_cast<i128>(a.size());
  i128 sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const auto x = static_cast<i128>(a[k]), y = static_cast<i128>(b[k]);
    sa += x;
    sb += y;
    saa += x * x;
    sbb += y * y;
    sab += x * y;
  }
  const i128 va = n * saa - sa * sa, vb = n * sbb - sb * sb;
  if (va <= 0 || vb <= 0) return 0.0;
  const double r = static_cast<double>(n * sab - sa * sb) /
                   std::sqrt(static_cast<double>(va) * static_cast<double>(vb));
  return std::clamp(r, -1.0, 1.0);
}

double relative_entropy(const DenseVector& a, const DenseVector& b, double epsilon) {
  std::vector<std::size_t> support;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] > 0 || b[k] > 0) support.push_back(k);
  }
  if (support.empty()) throw std::domain_error("both vectors empty");
  long double za = 0, zb = 0;
  for (auto k : support) {
    za += a[k] + epsilon;
    zb += b[k] + epsilon;
  }
  long double forward = 0, backward = 0;
  for (auto k : support) {
    const long double p = (a[k] + epsilon) / za;
    const long double q = (b[k] + epsilon) / zb;
    forward += p * std::log(p / q);
    backward += q * std::log(q / p);
  }
  return static_cast<double>((forward + backward) / 2);
}

namespace {

std::string normalize_code(const std::string& raw, techspace::ClassLevel level) {
  std::string s;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      s += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
  }
  const std::size_t len = level == techspace::ClassLevel::Cpc3 ? 3 : 4;
  if (s.size() < len) return {};
  if (!std::isalpha(static_cast<unsigned char>(s[0])) ||
      !std::isdigit(static_cast<unsigned char>(s[1])) ||
      !std::isdigit(static_cast<unsigned char>(s[2]))) {
    return {};
  }
  if (len == 4 && !std::isalpha(static_cast<unsigned char>(s[3]))) return {};
  return s.substr(0, len);
}

}  // namespace

RawFeatures raw_features(const techspace::CorpusRows& rows, techspace::ClassLevel level,
                         DataChoice data) {
  std::set<std::string> dated;
  for (const auto& p : rows.patents) {
    if (!p.patent_id.empty() && !p.filing_date.empty()) dated.insert(p.patent_id);
  }
  std::map<std::string, std::set<std::string>> classes_of;
  for (const auto& r : rows.classes) {
    if (!dated.count(r.patent_id)) continue;
    const std::string code = normalize_code(r.cpc_code, level);
    if (!code.empty()) classes_of[r.patent_id].insert(code);
  }
  std::set<std::string> vocabulary;
  for (const auto& [p, cs] : classes_of) vocabulary.insert(cs.begin(), cs.end());

  std::set<std::pair<std::string, std::string>> citations;
  std::set<std::string> external;
  for (const auto& c : rows.citations) {
    if (!classes_of.count(c.citing_id)) continue;
    citations.insert({c.citing_id, c.cited_id});
    if (!classes_of.count(c.cited_id)) external.insert(c.cited_id);
  }

  RawFeatures out;
  out.classes.assign(vocabulary.begin(), vocabulary.end());
  if (data == DataChoice::RefPat) {
    for (const auto& [p, cs] : classes_of) out.keys.push_back(p);
    out.keys.insert(out.keys.end(), external.begin(), external.end());
  } else if (data == DataChoice::CoPat) {
    for (const auto& [p, cs] : classes_of) out.keys.push_back(p);
  } else {
    out.keys = out.classes;
  }
  std::map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < out.keys.size(); ++i) slot[out.keys[i]] = i;
  for (const auto& c : out.classes) out.per_class[c].assign(out.keys.size(), 0.0);

  switch (data) {
    case DataChoice::RefPat:
      for (const auto& [citing, cited] : citations) {
        for (const auto& c : classes_of[citing]) out.per_class[c][slot[cited]] += 1;
      }
      break;
    case DataChoice::RefClass:
      for (const auto& [citing, cited] : citations) {
        if (!classes_of.count(cited)) continue;
        for (const auto& c : classes_of[citing]) {
          for (const auto& d : classes_of[cited]) out.per_class[c][slot[d]] += 1;
        }
      }
      break;
    case DataChoice::CoPat:
      for (const auto& [p, cs] : classes_of) {
        for (const auto& c : cs) out.per_class[c][slot[p]] = 1;
      }
      break;
    case DataChoice::CoClass:
      for (const auto& [p, cs] : classes_of) {
        for (const auto& c : cs) {
          for (const auto& d : cs) {
            if (c != d) out.per_class[c][slot[d]] += 1;
          }
        }
      }
      break;
  }
  return out;
}

double pair_score(const RawFeatures& f, const std::string& a, const std::string& b,
                  MeasureKind measure, double epsilon) {
  const DenseVector& x = f.per_class.at(a);
  const DenseVector& y = f.per_class.at(b);
  switch (measure) {
    case MeasureKind::Jaccard:
      return jaccard(x, y);
    case MeasureKind::Cosine:
      return cosine(x, y);
    case MeasureKind::Pearson:
      return pearson(x, y);
    case MeasureKind::Entropy: {
      const bool empty = std::all_of(x.begin(), x.end(), [](double v) { return v == 0; }) &&
                         std::all_of(y.begin(), y.end(), [](double v) { return v == 0; });
      if (empty) return -std::numeric_limits<double>::infinity();
      return -relative_entropy(x, y, epsilon);
    }
  }
  return 0.0;
}

double max_spanning_tree_weight(const std::vector<std::vector<double>>& w) {
  const std::size_t n = w.size();
  if (n <= 1) return 0.0;
  const double none = -std::numeric_limits<double>::infinity();
  // best[S][r]: heaviest tree spanning vertex set S, rooted at r in S.
  std::vector<std::vector<double>> best(std::size_t{1} << n, std::vector<double>(n, none));
  for (std::size_t r = 0; r < n; ++r) best[std::size_t{1} << r][r] = 0.0;
  for (std::size_t s = 1; s < (std::size_t{1} << n); ++s) {
    for (std::size_t r = 0; r < n; ++r) {
      if (!(s >> r & 1) || s == (std::size_t{1} << r)) continue;
      const std::size_t rest = s & ~(std::size_t{1} << r);
      const std::size_t low = rest & (~rest + 1);
      // Subtree t hanging off r holds the lowest remaining vertex.
      for (std::size_t t = rest; t; t = (t - 1) & rest) {
        if (!(t & low)) continue;
        const double outer = best[s & ~t][r];
        if (outer == none) continue;
        for (std::size_t c = 0; c < n; ++c) {
          if (!(t >> c & 1) || best[t][c] == none) continue;
          best[s][r] = std::max(best[s][r], outer + best[t][c] + w[r][c]);
        }
      }
    }
  }
  return best[(std::size_t{1} << n) - 1][0];
}

double max_spanning_tree_weight_pruefer(const std::vector<std::vector<double>>& w) {
  const std::size_t n = w.size();
  if (n <= 1) return 0.0;
  if (n == 2) return w[0][1];
  std::vector<std::size_t> seq(n - 2, 0);
  double best = -std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<std::size_t> degree(n, 1);
    for (auto x : seq) ++degree[x];
    double total = 0.0;
    for (auto x : seq) {
      std::size_t leaf = 0;
      while (degree[leaf] != 1) ++leaf;
      total += w[leaf][x];
      --degree[leaf];
      --degree[x];
    }
    std::size_t u = n, v = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (degree[i] == 1) (u == n ? u : v) = i;
    }
    total += w[u][v];
    best = std::max(best, total);

    std::size_t pos = 0;
    while (pos < seq.size() && ++seq[pos] == n) seq[pos++] = 0;
    if (pos == seq.size()) break;
  }
  return best;
}

}  // namespace oracle
