#include "techspace/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "techspace/errors.hpp"

namespace techspace::synthetic {
namespace {

constexpr char kSections[] = "ABCDEFGHY";

std::string patent_name(std::size_t p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "P%08zu", p);
  return buf;
}

std::size_t ring_offset(std::mt19937_64& rng, std::size_t cls, std::size_t n, double sigma) {
  std::normal_distribution<double> normal(0.0, sigma);
  long offset = 0;
  while (offset == 0) offset = std::lround(normal(rng));
  const long m = static_cast<long>(n);
  return static_cast<std::size_t>(((static_cast<long>(cls) + offset) % m + m) % m);
}

}  // namespace

std::string class_code(std::size_t index, ClassLevel level) {
  std::string code;
  code += kSections[index % 9];
  const std::size_t digits = (index / 9) % 100;
  code += static_cast<char>('0' + digits / 10);
  code += static_cast<char>('0' + digits % 10);
  if (level == ClassLevel::Cpc4) code += static_cast<char>('A' + (index / 900) % 26);
  return code;
}

CorpusRows generate_corpus_rows(const CorpusSpec& spec) {
  if (spec.num_classes < 2) throw InputError("synthetic corpus needs at least 2 classes");
  const std::size_t limit = spec.level == ClassLevel::Cpc3 ? 900 : 900 * 26;
  if (spec.num_classes > limit) throw InputError("too many synthetic classes for the level");

  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<std::size_t> any_class(0, spec.num_classes - 1);
  std::geometric_distribution<int> extra_count(1.0 / (1.0 + spec.extra_class_rate));
  std::poisson_distribution<int> ref_count(spec.mean_references);
  std::bernoulli_distribution external(spec.external_share);
  std::uniform_int_distribution<std::size_t> external_id(0, std::max<std::size_t>(1, spec.num_patents / 2));
  std::uniform_int_distribution<int> group(1, 99);

  std::vector<double> popularity;
  if (spec.popularity_skew > 0.0) {
    std::vector<std::size_t> rank(spec.num_classes);
    std::iota(rank.begin(), rank.end(), 0);
    std::shuffle(rank.begin(), rank.end(), rng);
    for (std::size_t r : rank) {
      popularity.push_back(std::pow(static_cast<double>(r + 1), -spec.popularity_skew));
    }
  }
  std::discrete_distribution<std::size_t> popular_class(popularity.begin(), popularity.end());

  CorpusRows rows;
  std::vector<std::vector<std::size_t>> class_members(spec.num_classes);
  std::vector<std::vector<std::size_t>> patent_classes(spec.num_patents);
  const Date start = make_date(1976, 1, 1);
  const double span_days = 41.0 * 365.0;

  for (std::size_t p = 0; p < spec.num_patents; ++p) {
    const std::string id = patent_name(p);
    const Date filed{start.days + static_cast<std::int32_t>(
                                      span_days * static_cast<double>(p) /
                                      static_cast<double>(std::max<std::size_t>(1, spec.num_patents)))};
    rows.patents.push_back({id, to_iso_string(filed), p + 2});

    const std::size_t primary = popularity.empty() ? any_class(rng) : popular_class(rng);
    std::vector<std::size_t> classes{primary};
    const int extras = extra_count(rng);
    for (int e = 0; e < extras; ++e) {
      classes.push_back(ring_offset(rng, primary, spec.num_classes, spec.locality));
    }
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    for (std::size_t c : classes) {
      std::string raw = class_code(c, spec.level);
      if (spec.level == ClassLevel::Cpc3) raw += 'A';
      raw += ' ' + std::to_string(group(rng)) + "/00";
      rows.classes.push_back({id, raw, rows.classes.size() + 2});
    }

    const int refs = ref_count(rng);
    for (int r = 0; r < refs; ++r) {
      if (external(rng)) {
        rows.citations.push_back({id, "X" + std::to_string(external_id(rng)), rows.citations.size() + 2});
        continue;
      }
      const std::size_t target = ring_offset(rng, primary, spec.num_classes, spec.locality * 1.5);
      const auto& pool = class_members[target];
      if (pool.empty()) continue;
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      rows.citations.push_back({id, patent_name(pool[pick(rng)]), rows.citations.size() + 2});
    }
    for (std::size_t c : classes) class_members[c].push_back(p);
    patent_classes[p] = std::move(classes);
  }

  // Agents wander along the ring, picking existing patents of nearby classes.
  for (std::size_t a = 0; a < spec.num_agents; ++a) {
    const AgentKind kind = a % 2 == 0 ? AgentKind::Inventor : AgentKind::Assignee;
    const std::string agent = (kind == AgentKind::Inventor ? "inv" : "asg") + std::to_string(a);
    std::size_t cls = any_class(rng);
    for (std::size_t k = 0; k < spec.patents_per_agent; ++k) {
      const auto& pool = class_members[cls];
      if (!pool.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        rows.agents.push_back({patent_name(pool[pick(rng)]), agent, kind, rows.agents.size() + 2});
      }
      cls = ring_offset(rng, cls, spec.num_classes, spec.locality);
    }
  }
  return rows;
}

void plant_agents(CorpusRows& rows, const Corpus& base, const ProximityMatrix& preference,
                  const PlantedAgentsSpec& spec) {
  const std::size_t v = base.num_classes();
  if (preference.size() != v) throw InputError("preference matrix does not match the corpus");
  if (spec.min_entries > spec.max_entries || spec.max_entries > v) {
    throw InputError("planted agents: invalid entry range");
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<std::size_t> entry_count(spec.min_entries, spec.max_entries);
  const Date start = make_date(2000, 1, 1);

  // Single-class base patents per class, by filing date.
  std::vector<std::vector<std::pair<std::int32_t, PatentIndex>>> pool(v);
  if (spec.reuse_patents) {
    for (PatentIndex p = 0; p < base.num_patents(); ++p) {
      const auto cs = base.classes(p);
      if (cs.size() == 1) pool[cs[0]].push_back({base.filing_date(p).days, p});
    }
    for (auto& list : pool) std::sort(list.begin(), list.end());
  }
  const auto next_patent = [&](std::size_t cls, std::int32_t after) {
    const auto& list = pool[cls];
    const auto it = std::upper_bound(
        list.begin(), list.end(), std::pair<std::int32_t, PatentIndex>{after, ~PatentIndex{0}});
    return it == list.end() ? nullptr : &*it;
  };

  std::vector<double> summed(v);
  std::vector<char> entered(v);
  std::vector<char> blocked(v);
  std::vector<double> weights(v);
  for (std::size_t a = 0; a < spec.num_agents; ++a) {
    const std::string agent = spec.id_prefix + std::to_string(a);
    const std::size_t entries = entry_count(rng);
    std::fill(summed.begin(), summed.end(), 0.0);
    std::fill(entered.begin(), entered.end(), 0);
    std::int32_t last = std::numeric_limits<std::int32_t>::min();
    for (std::size_t k = 0; k < entries; ++k) {
      for (std::size_t c = 0; c < v; ++c) {
        blocked[c] = entered[c] || (spec.reuse_patents && !next_patent(c, last));
      }
      double lo = 0.0;
      for (std::size_t c = 0; c < v; ++c) {
        if (!blocked[c] && std::isfinite(summed[c])) lo = std::min(lo, summed[c]);
      }
      double total = 0.0;
      for (std::size_t c = 0; c < v; ++c) {
        const bool usable = !blocked[c] && std::isfinite(summed[c]);
        weights[c] = usable ? std::pow(summed[c] - lo, spec.beta) : 0.0;
        if (k == 0 || spec.beta == 0.0) weights[c] = blocked[c] ? 0.0 : 1.0;
        total += weights[c];
      }
      if (!(total > 0.0)) {
        total = 0.0;
        for (std::size_t c = 0; c < v; ++c) total += weights[c] = blocked[c] ? 0.0 : 1.0;
        if (total == 0.0) break;
      }
      std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
      const std::size_t cls = pick(rng);
      entered[cls] = 1;
      for (std::size_t c = 0; c < v; ++c) {
        if (c != cls) summed[c] += preference.score(c, cls);
      }

      if (spec.reuse_patents) {
        const auto* hit = next_patent(cls, last);
        last = hit->first;
        rows.agents.push_back({base.patent_id(hit->second), agent, spec.kind, rows.agents.size() + 2});
        continue;
      }
      const std::string patent = spec.id_prefix + std::to_string(a) + "-" + std::to_string(k);
      const Date filed{start.days + static_cast<std::int32_t>(30 * k)};
      rows.patents.push_back({patent, to_iso_string(filed), rows.patents.size() + 2});
      rows.classes.push_back({patent, base.class_code(static_cast<ClassIndex>(cls)) +
                                          (base.level() == ClassLevel::Cpc3 ? "A 1/00" : " 1/00"),
                              rows.classes.size() + 2});
      rows.agents.push_back({patent, agent, spec.kind, rows.agents.size() + 2});
    }
  }
}

}  // namespace techspace::synthetic
