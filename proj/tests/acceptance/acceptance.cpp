// Acceptance suite: one PASS/FAIL/SKIP line per criterion.
//
//   acceptance [--only N[,N...]] [--allow-fail N[,N...]]
//
// Exit status is 0 when every criterion passes or is skipped, ignoring the
// ones named by --allow-fail (they still print FAIL).

#include <sys/resource.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "oracle.hpp"
#include "techspace/corpus.hpp"
#include "techspace/evaluation.hpp"
#include "techspace/features.hpp"
#include "techspace/io.hpp"
#include "techspace/mapping.hpp"
#include "techspace/matrix_io.hpp"
#include "techspace/measures.hpp"
#include "techspace/report_io.hpp"
#include "techspace/synthetic.hpp"

using namespace techspace;

namespace {

enum class Status { Pass, Fail, Skip };

struct Outcome {
  Outcome() = default;
  Outcome(Status s, std::string d, std::string a = {})
      : status(s), detail(std::move(d)), artifact(std::move(a)) {}

  Status status = Status::Pass;
  std::string detail;
  std::string artifact;  // serialized outputs compared across worker counts
};

std::string fmt(double x, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<ProximityMatrix> all_matrices(const Corpus& corpus, int workers) {
  std::vector<ProximityMatrix> out;
  for (DataChoice d : kAllDataChoices) {
    const FeatureSet f = build_features(corpus, d, workers);
    for (MeasureKind m : kAllMeasures) {
      out.push_back(build_proximity_matrix(f, corpus.vocabulary(), m, {kDefaultEpsilon, workers}));
    }
  }
  return out;
}

std::string report_artifact(const EvaluationReport& r) {
  return report_json(r, "{}") + pooled_curves_csv(r) + agent_mean_curves_csv(r) + optima_csv(r);
}

// ---------------------------------------------------------------------------

Outcome fig3_percentiles(int) {
  // A, B, C entered first; D, E, F are the candidates at D's entry.
  CorpusRows rows;
  const std::vector<std::string> codes{"A01B", "B22F", "C07D", "D01F", "E04H", "F16K"};
  for (std::size_t i = 0; i < codes.size(); ++i) {
    const std::string id = "P" + std::to_string(i);
    rows.patents.push_back({id, i < 3 ? "1980-01-01" : "1990-01-01"});
    rows.classes.push_back({id, codes[i]});
  }
  for (const char* p : {"P0", "P1", "P2", "P3"}) rows.agents.push_back({p, "agent", AgentKind::Assignee});
  const Corpus corpus = testing::corpus_from(rows);

  ProximityMatrix m(codes, {DataChoice::RefPat, MeasureKind::Jaccard});
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = i + 1; j < 6; ++j) m.set(i, j, 0.0);
  }
  m.set(3, 0, 0.10), m.set(3, 1, 0.08), m.set(3, 2, 0.05);  // D: 0.23
  m.set(4, 0, 0.01), m.set(4, 1, 0.01);                     // E: 0.02
  m.set(5, 2, 0.01);                                        // F: 0.01

  const std::vector<ClassIndex> portfolio{0, 1, 2};
  std::vector<double> sums;
  for (ClassIndex c : {3u, 4u, 5u}) sums.push_back(portfolio_proximity(m, c, portfolio));
  const std::array<double, 3> expected{1.0, 2.0 / 3.0, 1.0 / 3.0};
  double worst = 0.0;
  std::string got;
  for (std::size_t k = 0; k < 3; ++k) {
    const double p = rank_percentile(sums, k);
    worst = std::max(worst, std::abs(p - expected[k]));
    got += (k ? ", " : "") + fmt(p, 10);
  }
  const auto seq = entry_sequence(corpus, AgentId{"agent", AgentKind::Assignee});
  const auto eval = evaluate_agent(m, seq);
  const bool pipeline = eval.events.size() == 1 && std::abs(eval.events[0].percentile - 1.0) < 1e-9;
  const bool ok = worst < 1e-9 && pipeline && std::abs(sums[0] - 0.23) < 1e-12;
  return {ok ? Status::Pass : Status::Fail,
          "percentiles D,E,F = " + got + "; max error " + fmt(worst, 3) +
              "; D scored through entry_sequence/evaluate_agent = " +
              fmt(eval.events.empty() ? -1 : eval.events[0].percentile)};
}

SparseFeature sparse(const std::vector<double>& dense) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::size_t k = 0; k < dense.size(); ++k) {
    pairs.emplace_back(static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(dense[k]));
  }
  return SparseFeature::from_pairs(pairs);
}

Outcome measure_oracles(int) {
  double worst = 0.0;
  std::size_t compared = 0;
  const auto compare = [&](double got, double want) {
    worst = std::max(worst, std::abs(got - want));
    ++compared;
  };
  const auto all = [&](const std::vector<double>& a, const std::vector<double>& b) {
    const auto fa = sparse(a), fb = sparse(b);
    compare(jaccard(fa, fb), oracle::jaccard(a, b));
    compare(cosine(fa, fb), oracle::cosine(a, b));
    compare(pearson(fa, fb, a.size()), oracle::pearson(a, b));
    if (!fa.empty() || !fb.empty()) {
      compare(relative_entropy(fa, fb, 1e-9), oracle::relative_entropy(a, b, 1e-9));
    }
  };
  // Worked examples.
  all({1, 1, 1, 0}, {0, 1, 1, 1});
  all({1, 1, 1}, {1, 1, 1});
  all({1, 1, 0}, {0, 0, 1});
  all({1, 1}, {2, 2});
  all({1, 2, 0}, {2, 1, 2});
  all({2, 4, 0, 6}, {1, 2, 0, 3});
  all({3, 3, 3}, {1, 2, 0});
  all({1, 0}, {0, 1});
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> dim(1, 12);
  std::uniform_int_distribution<int> cell(-3, 5);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t n = dim(rng);
    std::vector<double> a(n), b(n);
    for (auto& x : a) x = std::max(0, cell(rng));
    for (auto& x : b) x = std::max(0, cell(rng));
    all(a, b);
  }
  const double jac = jaccard(sparse({1, 1, 1, 0}), sparse({0, 1, 1, 1}));
  const double cos = cosine(sparse({1, 2, 0}), sparse({2, 1, 2}));
  const double pea = pearson(sparse({1, 2, 0}), sparse({2, 1, 2}), 3);
  const double ent = relative_entropy(sparse({1, 0}), sparse({0, 1}), 1e-9);
  const bool examples = jac == 0.5 && std::abs(cos - 4.0 / (std::sqrt(5.0) * 3.0)) < 1e-12 &&
                        std::abs(pea + std::sqrt(3.0) / 2.0) < 1e-12 &&
                        std::abs(ent - 20.72) < 5e-3;
  return {worst < 1e-12 && examples ? Status::Pass : Status::Fail,
          std::to_string(compared) + " comparisons, max |library - brute force| = " +
              fmt(worst, 3) + "; jaccard {x,y,z}/{y,z,w} = " + fmt(jac) +
              ", cosine (1,2,0)/(2,1,2) = " + fmt(cos) + ", pearson = " + fmt(pea) +
              " (= -sqrt(3)/2), entropy (1,0)/(0,1) = " + fmt(ent)};
}

Outcome micro_pipeline(int workers) {
  const auto start = std::chrono::steady_clock::now();
  const auto paths = CorpusPaths::in_directory(testing::fixture_dir("micro"));
  const CorpusRows rows = read_corpus_rows(paths);
  const Corpus corpus = build_corpus(rows, {}).corpus;
  const auto matrices = all_matrices(corpus, workers);

  std::size_t pairs = 0, bitwise = 0;
  double entropy_worst = 0.0;
  bool ok = corpus.num_patents() <= 20 && corpus.num_classes() <= 6;
  std::string artifact;
  for (const auto& m : matrices) {
    artifact += write_matrix_csv(m);
    const auto raw = oracle::raw_features(rows, ClassLevel::Cpc4, m.id().data);
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = i + 1; j < m.size(); ++j) {
        ++pairs;
        const auto& x = raw.per_class.at(raw.classes[i]);
        const auto& y = raw.per_class.at(raw.classes[j]);
        const double got = m.score(i, j);
        double want = 0.0;
        switch (m.id().measure) {
          case MeasureKind::Jaccard: want = oracle::jaccard(x, y); break;
          case MeasureKind::Cosine: want = oracle::cosine(x, y); break;
          case MeasureKind::Pearson: want = oracle::pearson_exact(x, y); break;
          case MeasureKind::Entropy:
            want = oracle::pair_score(raw, raw.classes[i], raw.classes[j], MeasureKind::Entropy,
                                      kDefaultEpsilon);
            break;
        }
        if (m.id().measure == MeasureKind::Entropy && std::isfinite(want)) {
          entropy_worst = std::max(entropy_worst, std::abs(got - want));
          ok = ok && std::abs(got - want) < 1e-12;
        } else {
          const bool same = std::memcmp(&got, &want, sizeof got) == 0;
          bitwise += same;
          ok = ok && same;
        }
        if (m.id().measure == MeasureKind::Pearson) {
          const double textbook = oracle::pearson(x, y);
          ok = ok && std::abs(got - textbook) < 1e-12;
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  ok = ok && elapsed < 1.0;
  return {ok ? Status::Pass : Status::Fail,
          std::to_string(corpus.num_patents()) + " patents, " +
              std::to_string(corpus.num_classes()) + " classes, " +
              std::to_string(corpus.num_external_refs()) + " external ids; " +
              std::to_string(pairs) + " pair scores, " + std::to_string(bitwise) +
              " bit-identical (jaccard/cosine/pearson), entropy max diff " +
              fmt(entropy_worst, 3) + "; " + fmt(elapsed, 3) + " s",
          artifact};
}

Outcome auc_identity(int) {
  std::mt19937_64 rng(100);
  std::uniform_int_distribution<std::size_t> size(1, 500);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> coarse(1, 7);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> p(size(rng));
    for (auto& x : p) x = t % 3 == 0 ? coarse(rng) / 7.0 : 1.0 - u(rng);
    const double mean = std::accumulate(p.begin(), p.end(), 0.0) / static_cast<double>(p.size());
    worst = std::max(worst, std::abs(explanatory_power(p) - mean));
  }
  return {worst < 1e-6 ? Status::Pass : Status::Fail,
          "100 multisets, max |trapezoid AUC - mean| = " + fmt(worst, 3)};
}

Outcome null_calibration(int workers) {
  const auto start = std::chrono::steady_clock::now();
  synthetic::CorpusSpec spec;
  spec.num_classes = 100;
  spec.num_patents = 4000;
  spec.seed = 55;
  CorpusRows rows = synthetic::generate_corpus_rows(spec);
  const Corpus base = testing::corpus_from(rows);
  synthetic::PlantedAgentsSpec agents;
  agents.num_agents = 1000;
  agents.min_entries = 10;
  agents.max_entries = 20;
  agents.beta = 0.0;
  agents.seed = 56;
  synthetic::plant_agents(rows, base,
                          build_proximity_matrix(base, {DataChoice::RefPat, MeasureKind::Jaccard}),
                          agents);
  const Corpus corpus = testing::corpus_from(rows);
  const auto matrices = all_matrices(corpus, workers);
  const auto report = pooled_evaluation(corpus, matrices, AgentKind::Inventor, {10, 101, workers});
  double lo = 1.0, hi = 0.0;
  for (const auto& m : report.measures) {
    lo = std::min(lo, m.pooled_auc);
    hi = std::max(hi, m.pooled_auc);
  }
  const bool ok = report.agents_included == 1000 && lo >= 0.48 && hi <= 0.52;
  return {ok ? Status::Pass : Status::Fail,
          std::to_string(report.agents_included) + " agents, " +
              std::to_string(report.events_scored) + " events, vocabulary " +
              std::to_string(corpus.num_classes()) + "; pooled AUC over 16 measures in [" +
              fmt(lo, 4) + ", " + fmt(hi, 4) + "]; " + fmt(seconds_since(start), 3) + " s",
          report_artifact(report)};
}

Outcome planted_recovery(int workers) {
  const auto start = std::chrono::steady_clock::now();
  std::string detail, artifact;
  std::size_t recovered = 0, total = 0;
  std::uint64_t seed = 600;
  for (DataChoice d : kAllDataChoices) {
    for (MeasureKind mk : kAllMeasures) {
      const MeasureId planted{d, mk};
      synthetic::CorpusSpec spec;
      spec.num_classes = 60;
      spec.num_patents = 4000;
      spec.popularity_skew = 1.0;
      spec.seed = ++seed;
      CorpusRows rows = synthetic::generate_corpus_rows(spec);
      const Corpus base = testing::corpus_from(rows);
      synthetic::PlantedAgentsSpec agents;
      agents.num_agents = 600;
      agents.beta = 2.0;
      agents.reuse_patents = true;
      agents.seed = ++seed;
      synthetic::plant_agents(rows, base, build_proximity_matrix(base, planted, {kDefaultEpsilon, workers}),
                              agents);
      const Corpus corpus = testing::corpus_from(rows);
      const auto matrices = all_matrices(corpus, workers);
      const auto report = pooled_evaluation(corpus, matrices, AgentKind::Inventor, {10, 101, workers});
      artifact += report_artifact(report);

      std::vector<std::size_t> order(report.measures.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return report.measures[a].pooled_auc > report.measures[b].pooled_auc;
      });
      std::size_t rank = 0;
      while (report.measures[order[rank]].id != planted) ++rank;
      ++total;
      recovered += rank < 2;
      detail += (detail.empty() ? "" : ", ") + planted.id() + " #" + std::to_string(rank + 1);
      if (rank >= 2) {
        detail += " (behind";
        for (std::size_t k = 0; k < rank; ++k) {
          const auto& s = report.measures[order[k]];
          detail += " " + s.id.id() + " " + fmt(s.pooled_auc, 5);
        }
        detail += " vs " + fmt(report.measures[order[rank]].pooled_auc, 5) + ")";
      }
    }
  }
  return {recovered == total ? Status::Pass : Status::Fail,
          std::to_string(recovered) + "/" + std::to_string(total) +
              " planted measures in the top 2 of 16 (beta 2): " + detail + "; " +
              fmt(seconds_since(start), 3) + " s",
          artifact};
}

Outcome transform_invariance(int workers) {
  synthetic::CorpusSpec spec;
  spec.num_classes = 60;
  spec.num_patents = 4000;
  spec.seed = 700;
  CorpusRows rows = synthetic::generate_corpus_rows(spec);
  const Corpus base = testing::corpus_from(rows);
  synthetic::PlantedAgentsSpec agents;
  agents.num_agents = 300;
  agents.seed = 701;
  synthetic::plant_agents(rows, base,
                          build_proximity_matrix(base, {DataChoice::RefPat, MeasureKind::Jaccard}),
                          agents);
  const Corpus corpus = testing::corpus_from(rows);

  // Scores in [0, 1]: the jaccard and cosine matrices.
  std::vector<ProximityMatrix> plain, cubed;
  for (DataChoice d : kAllDataChoices) {
    for (MeasureKind m : {MeasureKind::Jaccard, MeasureKind::Cosine}) {
      plain.push_back(build_proximity_matrix(corpus, {d, m}, {kDefaultEpsilon, workers}));
      cubed.push_back(plain.back().transformed([](double x) { return x * x * x; }));
    }
  }

  std::size_t backbone_same = 0;
  for (std::size_t i = 0; i < plain.size(); ++i) {
    const auto a = extract_backbone(plain[i], 100), b = extract_backbone(cubed[i], 100);
    bool same = a.tree_edges.size() == b.tree_edges.size() &&
                a.extra_edges.size() == b.extra_edges.size();
    for (std::size_t k = 0; same && k < a.tree_edges.size(); ++k) {
      same = a.tree_edges[k].u == b.tree_edges[k].u && a.tree_edges[k].v == b.tree_edges[k].v;
    }
    for (std::size_t k = 0; same && k < a.extra_edges.size(); ++k) {
      same = a.extra_edges[k].u == b.extra_edges[k].u && a.extra_edges[k].v == b.extra_edges[k].v;
    }
    backbone_same += same;
  }

  std::size_t single_total = 0, single_changed = 0, multi_total = 0, multi_changed = 0;
  for (std::size_t i = 0; i < plain.size(); ++i) {
    for (const auto& rec : corpus.agents()) {
      const auto seq = entry_sequence(corpus, rec.agent);
      if (seq.events.empty()) continue;
      const auto ea = evaluate_agent(plain[i], seq), eb = evaluate_agent(cubed[i], seq);
      for (std::size_t e = 0; e < ea.events.size(); ++e) {
        const bool changed = ea.events[e].percentile != eb.events[e].percentile;
        if (ea.events[e].prior_count == 1) {
          ++single_total;
          single_changed += changed;
        } else {
          ++multi_total;
          multi_changed += changed;
        }
      }
    }
  }
  const auto ra = pooled_evaluation(corpus, plain, AgentKind::Inventor, {10, 101, workers});
  const auto rb = pooled_evaluation(corpus, cubed, AgentKind::Inventor, {10, 101, workers});
  std::size_t auc_changed = 0, optimum_changed = 0;
  for (std::size_t i = 0; i < ra.measures.size(); ++i) {
    auc_changed += ra.measures[i].pooled_auc != rb.measures[i].pooled_auc;
  }
  for (std::size_t a = 0; a < ra.agents.size(); ++a) {
    optimum_changed += ra.agents[a].optimal != rb.agents[a].optimal;
  }

  const bool ok = backbone_same == plain.size() && single_changed == 0 && multi_changed == 0 &&
                  auc_changed == 0 && optimum_changed == 0;
  return {ok ? Status::Pass : Status::Fail,
          "x^3 on 8 matrices with scores in [0,1]: backbone edge sets identical " +
              std::to_string(backbone_same) + "/" + std::to_string(plain.size()) +
              "; percentiles changed for " + std::to_string(single_changed) + "/" +
              std::to_string(single_total) + " single-class-portfolio events and " +
              std::to_string(multi_changed) + "/" + std::to_string(multi_total) +
              " multi-class-portfolio events (portfolio proximity is a sum of scores); pooled "
              "AUC changed for " +
              std::to_string(auc_changed) + "/8 measures, optimal measure for " +
              std::to_string(optimum_changed) + "/" + std::to_string(ra.agents.size()) +
              " agents"};
}

Outcome forest_optimality(int) {
  std::mt19937_64 rng(800);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto random_matrix = [&](std::size_t n) {
    std::vector<std::string> codes;
    for (std::size_t i = 0; i < n; ++i) codes.push_back(synthetic::class_code(i, ClassLevel::Cpc3));
    ProximityMatrix m(codes, {});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) m.set(i, j, u(rng) + 1e-3);
    }
    return m;
  };
  double worst = 0.0;
  bool sizes = true;
  for (int t = 0; t < 50; ++t) {
    const ProximityMatrix m = random_matrix(10);
    std::vector<std::vector<double>> w(10, std::vector<double>(10, 0.0));
    for (std::size_t i = 0; i < 10; ++i) {
      for (std::size_t j = 0; j < 10; ++j) w[i][j] = i == j ? 0.0 : m.score(i, j);
    }
    const auto forest = maximum_spanning_forest(m);
    double total = 0.0;
    for (const auto& e : forest) total += e.weight;
    worst = std::max(worst, std::abs(total - oracle::max_spanning_tree_weight(w)));
    sizes = sizes && forest.size() == 9;
  }
  // The subset search itself, against literal enumeration of all labelled trees.
  double oracle_gap = 0.0;
  for (int t = 0; t < 10; ++t) {
    const ProximityMatrix m = random_matrix(7);
    std::vector<std::vector<double>> w(7, std::vector<double>(7, 0.0));
    for (std::size_t i = 0; i < 7; ++i) {
      for (std::size_t j = 0; j < 7; ++j) w[i][j] = i == j ? 0.0 : m.score(i, j);
    }
    oracle_gap = std::max(oracle_gap, std::abs(oracle::max_spanning_tree_weight(w) -
                                               oracle::max_spanning_tree_weight_pruefer(w)));
  }
  const auto big = maximum_spanning_forest(random_matrix(122));
  const bool ok = worst < 1e-12 && sizes && oracle_gap < 1e-12 && big.size() == 121;
  return {ok ? Status::Pass : Status::Fail,
          "50 graphs on 10 nodes, max |forest - exhaustive maximum| = " + fmt(worst, 3) +
              ", all with 9 edges: " + (sizes ? "yes" : "no") + "; 122 nodes -> " +
              std::to_string(big.size()) + " edges"};
}

Outcome full_data(int workers) {
  const char* dir = std::getenv("TECHSPACE_FULL_DATA_DIR");
  if (!dir || !*dir) return {Status::Skip, "set TECHSPACE_FULL_DATA_DIR to a complete PatentsView ingest"};

  // Paper values (jaccard, cosine, pearson, entropy) per data choice in
  // RefClass, RefPat, CoClass, CoPat order, used for loose reporting only.
  const std::map<std::pair<ClassLevel, AgentKind>, std::array<std::array<double, 4>, 4>> paper{
      {{ClassLevel::Cpc3, AgentKind::Assignee},
       {{{0.665, 0.623, 0.636, 0.370}, {0.803, 0.771, 0.686, 0.692},
         {0.746, 0.648, 0.668, 0.412}, {0.794, 0.786, 0.741, 0.740}}}},
      {{ClassLevel::Cpc4, AgentKind::Assignee},
       {{{0.795, 0.720, 0.724, 0.316}, {0.870, 0.846, 0.633, 0.735},
         {0.818, 0.709, 0.715, 0.359}, {0.864, 0.858, 0.827, 0.780}}}},
      {{ClassLevel::Cpc3, AgentKind::Inventor},
       {{{0.655, 0.673, 0.688, 0.339}, {0.844, 0.815, 0.747, 0.700},
         {0.769, 0.678, 0.709, 0.396}, {0.834, 0.827, 0.786, 0.776}}}},
      {{ClassLevel::Cpc4, AgentKind::Inventor},
       {{{0.830, 0.793, 0.797, 0.271}, {0.913, 0.892, 0.726, 0.735},
         {0.858, 0.775, 0.784, 0.271}, {0.906, 0.900, 0.877, 0.817}}}},
  };
  const std::array<DataChoice, 4> row_order{DataChoice::RefClass, DataChoice::RefPat,
                                            DataChoice::CoClass, DataChoice::CoPat};
  bool ok = true;
  std::string detail;
  std::size_t within = 0, cells = 0;
  for (ClassLevel level : {ClassLevel::Cpc3, ClassLevel::Cpc4}) {
    const Corpus corpus = load_corpus(CorpusPaths::in_directory(dir), {level, 0}).corpus;
    const auto matrices = all_matrices(corpus, workers);
    for (AgentKind kind : {AgentKind::Assignee, AgentKind::Inventor}) {
      const auto r = pooled_evaluation(corpus, matrices, kind, {10, 101, workers});
      const auto auc = [&](DataChoice d, MeasureKind m) {
        for (const auto& s : r.measures) {
          if (s.id == MeasureId{d, m}) return s.pooled_auc;
        }
        return 0.0;
      };
      double best = 0.0;
      for (const auto& s : r.measures) best = std::max(best, s.pooled_auc);
      const bool top = auc(DataChoice::RefPat, MeasureKind::Jaccard) == best;
      bool family = true;
      for (DataChoice d : kAllDataChoices) {
        family = family && auc(d, MeasureKind::Jaccard) >= auc(d, MeasureKind::Cosine);
      }
      ok = ok && top && family;
      const auto& table = paper.at({level, kind});
      for (std::size_t row = 0; row < 4; ++row) {
        for (std::size_t col = 0; col < 4; ++col) {
          ++cells;
          within += std::abs(auc(row_order[row], kAllMeasures[col]) - table[row][col]) <= 0.05;
        }
      }
      detail += std::string(detail.empty() ? "" : "; ") + std::string(to_string(level)) + "/" +
                std::string(to_string(kind)) + " " + std::to_string(r.agents_included) +
                " agents, RefPat.jaccard top: " + (top ? "yes" : "no") +
                ", jaccard >= cosine: " + (family ? "yes" : "no");
    }
  }
  detail += "; cells within 0.05 of the paper (not gating): " + std::to_string(within) + "/" +
            std::to_string(cells);
  return {ok ? Status::Pass : Status::Fail, detail};
}

Outcome desk_scale(int workers) {
  const auto start = std::chrono::steady_clock::now();
  synthetic::CorpusSpec spec;
  spec.num_classes = 654;
  spec.num_patents = 100000;
  spec.num_agents = 6000;
  spec.patents_per_agent = 25;
  spec.seed = 1100;
  const CorpusRows rows = synthetic::generate_corpus_rows(spec);
  const Corpus corpus = testing::corpus_from(rows);
  const double t_ingest = seconds_since(start);

  std::size_t feature_entries = 0;
  std::vector<ProximityMatrix> matrices;
  for (DataChoice d : kAllDataChoices) {
    const FeatureSet f = build_features(corpus, d, workers);
    for (const auto& v : f.per_class) feature_entries += v.keys.size();
    for (MeasureKind m : kAllMeasures) {
      matrices.push_back(
          build_proximity_matrix(f, corpus.vocabulary(), m, {kDefaultEpsilon, workers}));
    }
  }
  const double t_matrices = seconds_since(start) - t_ingest;
  std::size_t agents = 0;
  for (AgentKind kind : {AgentKind::Inventor, AgentKind::Assignee}) {
    agents += pooled_evaluation(corpus, matrices, kind, {10, 101, workers}).agents_included;
  }
  const double total = seconds_since(start);

  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  const double peak_mb = static_cast<double>(usage.ru_maxrss) / 1024.0;
  const double dense_mb =
      16.0 * static_cast<double>(corpus.num_classes() * corpus.num_classes()) * 8.0 / 1048576.0;
  const double sparse_mb = static_cast<double>(feature_entries) * 8.0 / 1048576.0;
  return {total < 600.0 ? Status::Pass : Status::Fail,
          std::to_string(corpus.num_patents()) + " patents, " +
              std::to_string(corpus.num_classes()) + " classes, " +
              std::to_string(corpus.num_citations()) + " citations, " + std::to_string(agents) +
              " evaluated agents; build " + fmt(t_ingest, 3) + " s, 16 matrices " +
              fmt(t_matrices, 3) + " s, evaluation " + fmt(total - t_ingest - t_matrices, 3) +
              " s, total " + fmt(total, 3) + " s (limit 600); peak RSS " + fmt(peak_mb, 4) +
              " MB (sparse features " + fmt(sparse_mb, 3) + " MB, 16 dense " +
              std::to_string(corpus.num_classes()) + "^2 matrices " + fmt(dense_mb, 3) + " MB)"};
}

// ---------------------------------------------------------------------------

struct Criterion {
  int number;
  const char* title;
  std::function<Outcome(int)> run;
};

std::set<int> parse_set(const std::string& text) {
  std::set<int> out;
  for (auto part : split(text, ',')) {
    if (!trim(part).empty()) out.insert(std::stoi(std::string(trim(part))));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only, allowed;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if ((arg == "--only" || arg == "--allow-fail") && i + 1 < argc) {
      (arg == "--only" ? only : allowed) = parse_set(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--only N,...] [--allow-fail N,...]\n";
      return 2;
    }
  }

  std::map<int, Outcome> results;
  const std::vector<Criterion> criteria{
      {1, "rank percentiles of the three-candidate example", fig3_percentiles},
      {2, "measure oracles", measure_oracles},
      {3, "micro-corpus pipeline oracle", micro_pipeline},
      {4, "AUC equals mean percentile", auc_identity},
      {5, "null calibration", null_calibration},
      {6, "planted-preference recovery", planted_recovery},
      {7, "monotone-transform invariance", transform_invariance},
      {8, "spanning-forest optimality", forest_optimality},
      {9, "determinism across worker counts",
       [&](int) -> Outcome {
         std::string detail;
         bool ok = true;
         for (int c : {3, 5, 6}) {
           const auto& fn = c == 3 ? micro_pipeline : c == 5 ? null_calibration : planted_recovery;
           const std::string reference = results.count(c) ? results[c].artifact : fn(1).artifact;
           bool same = !reference.empty();
           for (int workers : {1, 4, 8}) same = same && fn(workers).artifact == reference;
           ok = ok && same;
           detail += std::string(detail.empty() ? "" : "; ") + "criterion " + std::to_string(c) +
                     " (" + std::to_string(reference.size()) + " bytes): " +
                     (same ? "identical" : "DIFFERS") + " at 1, 4, 8 workers";
         }
         return {ok ? Status::Pass : Status::Fail, detail};
       }},
      {10, "full-data ordering (optional)", full_data},
      {11, "desk-scale performance", desk_scale},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.number)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(1);
    } catch (const std::exception& e) {
      o = {Status::Fail, std::string("exception: ") + e.what()};
    }
    const char* label = o.status == Status::Pass ? "PASS" : o.status == Status::Fail ? "FAIL" : "SKIP";
    std::cout << "[" << label << "] " << c.number << ". " << c.title << " -- " << o.detail << " ("
              << fmt(seconds_since(start), 3) << " s)";
    if (o.status == Status::Fail && allowed.count(c.number)) std::cout << " [allowed to fail]";
    std::cout << std::endl;
    if (o.status == Status::Fail && !allowed.count(c.number)) ++failures;
    results[c.number] = std::move(o);
  }
  return failures == 0 ? 0 : 1;
}
