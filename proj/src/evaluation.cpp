#include "techspace/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include <omp.h>

#include "techspace/errors.hpp"

namespace techspace {
namespace {

// Percentiles within this distance of a threshold count as reaching it.
constexpr double kCaptureTolerance = 1e-12;

// Smallest grid index whose q captures a percentile x (x >= 1 - q).
std::size_t first_capturing_index(std::span<const double> grid, double x) {
  const auto it = std::lower_bound(grid.begin(), grid.end(), 1.0 - x - kCaptureTolerance);
  return static_cast<std::size_t>(it - grid.begin());
}

/// Reusable buffers for scoring one agent against one matrix.
struct Scratch {
  std::vector<double> summed;
  std::vector<char> entered;
  std::vector<double> candidate_scores;
};

// Fills `percentiles` (one per event). Running sums add portfolio members in
// entry order, matching portfolio_proximity exactly.
void score_events(const ProximityMatrix& matrix, const EntrySequence& seq, Scratch& scratch,
                  std::vector<double>& percentiles) {
  const std::size_t v = matrix.size();
  scratch.summed.assign(v, 0.0);
  scratch.entered.assign(v, 0);
  percentiles.clear();
  std::size_t added = 0;
  for (const EntryEvent& ev : seq.events) {
    while (added < ev.prior_count) {
      const ClassIndex p = seq.entries[added].cls;
      scratch.entered[p] = 1;
      const auto row = matrix.row(p);
      for (std::size_t c = 0; c < v; ++c) {
        if (c != p) scratch.summed[c] += row[c];
      }
      ++added;
    }
    scratch.candidate_scores.clear();
    std::size_t target = 0;
    for (std::size_t c = 0; c < v; ++c) {
      if (scratch.entered[c]) continue;
      if (c == ev.cls) target = scratch.candidate_scores.size();
      scratch.candidate_scores.push_back(scratch.summed[c]);
    }
    percentiles.push_back(rank_percentile(scratch.candidate_scores, target));
  }
}

double mean(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

}  // namespace

EntrySequence entry_sequence(AgentId agent, std::vector<PortfolioEntry> entries,
                             std::size_t vocabulary_size) {
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.first_entry < b.first_entry || (a.first_entry == b.first_entry && a.cls < b.cls);
  });
  EntrySequence seq;
  seq.agent = std::move(agent);
  seq.entries = std::move(entries);
  std::size_t batch_start = 0;
  for (std::size_t i = 0; i < seq.entries.size(); ++i) {
    if (i > 0 && seq.entries[i].first_entry != seq.entries[i - 1].first_entry) batch_start = i;
    if (batch_start == 0) {
      ++seq.skipped;
      continue;
    }
    EntryEvent ev;
    ev.cls = seq.entries[i].cls;
    ev.entry_date = seq.entries[i].first_entry;
    ev.prior_count = batch_start;
    ev.candidate_count = vocabulary_size - batch_start;
    seq.events.push_back(ev);
  }
  return seq;
}

EntrySequence entry_sequence(const Corpus& corpus, const AgentId& agent) {
  return entry_sequence(agent, build_agent_portfolio(corpus, agent), corpus.num_classes());
}

double portfolio_proximity(const ProximityMatrix& matrix, ClassIndex candidate,
                           std::span<const ClassIndex> portfolio) {
  if (portfolio.empty()) throw InputError("portfolio_proximity: empty portfolio");
  double sum = 0.0;
  for (ClassIndex p : portfolio) {
    if (p == candidate) {
      throw InputError("portfolio_proximity: candidate " + std::string(matrix.classes()[candidate]) +
                       " is already in the portfolio");
    }
    sum += matrix.score(candidate, p);
  }
  return sum;
}

double rank_percentile(std::span<const double> scores, std::size_t target) {
  if (target >= scores.size()) throw InputError("rank_percentile: target out of range");
  const double t = scores[target];
  std::size_t less = 0;
  std::size_t equal = 0;
  for (double s : scores) {
    if (s < t) {
      ++less;
    } else if (s == t) {
      ++equal;
    }
  }
  const double midrank = static_cast<double>(less) + static_cast<double>(equal + 1) / 2.0;
  return midrank / static_cast<double>(scores.size());
}

AgentEvaluation evaluate_agent(const ProximityMatrix& matrix, const EntrySequence& sequence) {
  if (sequence.events.empty()) {
    throw ComputationError("agent '" + sequence.agent.id + "' has no scorable entry events");
  }
  Scratch scratch;
  std::vector<double> percentiles;
  score_events(matrix, sequence, scratch, percentiles);
  AgentEvaluation out;
  out.agent = sequence.agent;
  out.measure = matrix.id();
  out.events = sequence.events;
  for (std::size_t e = 0; e < percentiles.size(); ++e) out.events[e].percentile = percentiles[e];
  out.auc = mean(percentiles);
  return out;
}

std::vector<double> uniform_grid(std::size_t points) {
  if (points < 2) throw InputError("curve grid needs at least 2 points");
  std::vector<double> grid(points);
  for (std::size_t g = 0; g < points; ++g) {
    grid[g] = static_cast<double>(g) / static_cast<double>(points - 1);
  }
  return grid;
}

std::vector<CurvePoint> cumulative_curve(std::span<const double> percentiles,
                                         std::span<const double> grid) {
  if (percentiles.empty()) throw InputError("cumulative_curve: no percentiles");
  std::vector<std::size_t> hits(grid.size() + 1, 0);
  for (double x : percentiles) ++hits[first_capturing_index(grid, x)];
  std::vector<CurvePoint> curve;
  curve.reserve(grid.size());
  std::size_t captured = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    captured += hits[g];
    curve.push_back({grid[g], static_cast<double>(captured) /
                                  static_cast<double>(percentiles.size())});
  }
  return curve;
}

double explanatory_power(std::span<const double> percentiles) {
  if (percentiles.empty()) throw InputError("explanatory_power: no percentiles");
  const double n = static_cast<double>(percentiles.size());

  // Step positions: the curve F(q) = share of x >= 1 - q jumps at q = 1 - x.
  std::vector<double> steps;
  steps.reserve(percentiles.size());
  for (double x : percentiles) steps.push_back(1.0 - x);
  std::sort(steps.begin(), steps.end());

  std::vector<double> qs;
  qs.reserve(1001 + steps.size());
  for (double q : uniform_grid(1001)) qs.push_back(q);
  for (double q : steps) qs.push_back(q);
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());

  // Sample both sides of every jump so each trapezoid spans a flat piece.
  std::vector<CurvePoint> samples;
  samples.reserve(2 * qs.size());
  for (double q : qs) {
    if (q < 0.0 || q > 1.0) continue;
    const auto before = std::lower_bound(steps.begin(), steps.end(), q) - steps.begin();
    const auto after = std::upper_bound(steps.begin(), steps.end(), q) - steps.begin();
    if (before != after && q > 0.0) samples.push_back({q, static_cast<double>(before) / n});
    samples.push_back({q, static_cast<double>(after) / n});
  }

  double area = 0.0;
  for (std::size_t k = 1; k < samples.size(); ++k) {
    area += (samples[k].q - samples[k - 1].q) * (samples[k].captured + samples[k - 1].captured) / 2;
  }
  return area;
}

EvaluationReport pooled_evaluation(const Corpus& corpus, std::span<const ProximityMatrix> matrices,
                                   AgentKind kind, const EvaluationOptions& options) {
  if (matrices.empty()) throw InputError("pooled_evaluation: no matrices given");
  const auto vocabulary = corpus.vocabulary();
  for (const auto& m : matrices) {
    if (!std::equal(m.classes().begin(), m.classes().end(), vocabulary.begin(), vocabulary.end())) {
      throw InputError("matrix " + m.id().id() + " does not share the corpus class vocabulary");
    }
  }
  for (std::size_t a = 0; a < matrices.size(); ++a) {
    for (std::size_t b = a + 1; b < matrices.size(); ++b) {
      if (matrices[a].id() == matrices[b].id()) {
        throw InputError("measure " + matrices[a].id().id() + " given twice");
      }
    }
  }

  EvaluationReport report;
  report.kind = kind;
  report.min_classes = options.min_classes;

  std::vector<EntrySequence> sequences;
  for (const auto& record : corpus.agents()) {
    if (record.agent.kind != kind) continue;
    ++report.agents_total;
    EntrySequence seq = entry_sequence(corpus, record.agent);
    if (seq.entries.size() < options.min_classes) {
      ++report.agents_below_min_classes;
      continue;
    }
    if (seq.events.empty()) {
      ++report.agents_without_events;
      continue;
    }
    report.events_skipped += seq.skipped;
    report.events_scored += seq.events.size();
    sequences.push_back(std::move(seq));
  }
  report.agents_included = sequences.size();
  if (sequences.empty()) {
    throw ComputationError("no " + std::string(to_string(kind)) + " has entered at least " +
                           std::to_string(options.min_classes) +
                           " classes with a scorable entry (min_classes threshold)");
  }

  const std::vector<double> grid = uniform_grid(options.grid_points);
  const std::size_t num_measures = matrices.size();
  const std::size_t num_points = grid.size();

  // Optimal-measure tie-break visits measures in id order.
  std::vector<std::size_t> by_id(num_measures);
  for (std::size_t m = 0; m < num_measures; ++m) by_id[m] = m;
  std::sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) {
    return matrices[a].id().id() < matrices[b].id().id();
  });

  std::vector<double> pooled_sum(num_measures, 0.0);
  std::vector<double> agent_auc_sum(num_measures, 0.0);
  std::vector<std::uint64_t> pooled_hits(num_measures * (num_points + 1), 0);
  std::vector<double> agent_curve_sum(num_measures * num_points, 0.0);
  std::vector<std::size_t> optimal_count(num_measures, 0);

  // Agents are processed in fixed-size chunks: parallel inside a chunk, then a
  // serial reduction in agent order, so floating-point sums never depend on
  // the schedule.
  constexpr std::size_t kChunk = 256;
  struct AgentSlot {
    std::vector<double> sums;
    std::vector<std::uint32_t> hits;  // per measure, per grid index
  };
  std::vector<AgentSlot> slots(kChunk);
  const int threads = options.workers > 0 ? options.workers : omp_get_max_threads();

  for (std::size_t start = 0; start < sequences.size(); start += kChunk) {
    const std::size_t count = std::min(kChunk, sequences.size() - start);
#pragma omp parallel num_threads(threads)
    {
      Scratch scratch;
      std::vector<double> percentiles;
#pragma omp for schedule(dynamic, 1)
      for (std::int64_t k = 0; k < static_cast<std::int64_t>(count); ++k) {
        const EntrySequence& seq = sequences[start + static_cast<std::size_t>(k)];
        AgentSlot& slot = slots[static_cast<std::size_t>(k)];
        slot.sums.assign(num_measures, 0.0);
        slot.hits.assign(num_measures * (num_points + 1), 0);
        for (std::size_t m = 0; m < num_measures; ++m) {
          score_events(matrices[m], seq, scratch, percentiles);
          double s = 0.0;
          for (double x : percentiles) {
            s += x;
            ++slot.hits[m * (num_points + 1) + first_capturing_index(grid, x)];
          }
          slot.sums[m] = s;
        }
      }
    }

    for (std::size_t k = 0; k < count; ++k) {
      const EntrySequence& seq = sequences[start + k];
      const AgentSlot& slot = slots[k];
      const double n_events = static_cast<double>(seq.events.size());
      AgentOutcome outcome;
      outcome.agent = seq.agent;
      outcome.events = seq.events.size();
      outcome.aucs.resize(num_measures);
      for (std::size_t m = 0; m < num_measures; ++m) {
        pooled_sum[m] += slot.sums[m];
        outcome.aucs[m] = slot.sums[m] / n_events;
        agent_auc_sum[m] += outcome.aucs[m];
        std::uint32_t captured = 0;
        for (std::size_t g = 0; g < num_points; ++g) {
          const std::uint32_t h = slot.hits[m * (num_points + 1) + g];
          pooled_hits[m * (num_points + 1) + g] += h;
          captured += h;
          agent_curve_sum[m * num_points + g] += static_cast<double>(captured) / n_events;
        }
      }
      std::size_t best = by_id[0];
      for (std::size_t m : by_id) {
        if (outcome.aucs[m] > outcome.aucs[best]) best = m;
      }
      outcome.optimal = best;
      ++optimal_count[best];
      report.agents.push_back(std::move(outcome));
    }
  }

  const double agents = static_cast<double>(report.agents_included);
  const double events = static_cast<double>(report.events_scored);
  for (std::size_t m = 0; m < num_measures; ++m) {
    MeasureSummary s;
    s.id = matrices[m].id();
    s.pooled_auc = pooled_sum[m] / events;
    s.mean_agent_auc = agent_auc_sum[m] / agents;
    std::uint64_t captured = 0;
    for (std::size_t g = 0; g < num_points; ++g) {
      captured += pooled_hits[m * (num_points + 1) + g];
      s.pooled_curve.push_back({grid[g], static_cast<double>(captured) / events});
      s.agent_mean_curve.push_back({grid[g], agent_curve_sum[m * num_points + g] / agents});
    }
    s.optimal_agents = optimal_count[m];
    s.proportion = static_cast<double>(optimal_count[m]) / agents;
    report.measures.push_back(std::move(s));
  }
  return report;
}

}  // namespace techspace
