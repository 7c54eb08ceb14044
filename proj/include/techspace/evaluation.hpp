#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "techspace/corpus.hpp"
#include "techspace/measures.hpp"
#include "techspace/types.hpp"

namespace techspace {

/// One first entry of an agent into a class that had a non-empty portfolio
/// before it. The portfolio before the event is the first `prior_count`
/// entries of the owning sequence (strictly earlier dates).
struct EntryEvent {
  ClassIndex cls = 0;
  Date entry_date;
  std::size_t prior_count = 0;
  std::size_t candidate_count = 0;  // vocabulary size - prior_count
  double percentile = std::numeric_limits<double>::quiet_NaN();
};

struct EntrySequence {
  AgentId agent;
  std::vector<PortfolioEntry> entries;  // date order, ties by class code
  std::vector<EntryEvent> events;       // scorable entries only
  std::size_t skipped = 0;              // entries with an empty prior portfolio

  std::span<const PortfolioEntry> portfolio_before(const EntryEvent& event) const {
    return std::span<const PortfolioEntry>(entries).first(event.prior_count);
  }
};

/// Turns an ordered portfolio into entry events. Entries sharing a date see
/// the same (strictly earlier) portfolio and are mutual candidates. Entries
/// whose prior portfolio is empty are skipped.
EntrySequence entry_sequence(AgentId agent, std::vector<PortfolioEntry> entries,
                             std::size_t vocabulary_size);

EntrySequence entry_sequence(const Corpus& corpus, const AgentId& agent);

/// Sum of matrix scores between `candidate` and every portfolio class, added
/// in portfolio order. Throws InputError if the candidate is in the
/// portfolio or the portfolio is empty.
double portfolio_proximity(const ProximityMatrix& matrix, ClassIndex candidate,
                           std::span<const ClassIndex> portfolio);

/// Ascending mid-rank of scores[target] among all scores, divided by the
/// number of scores. Ties share the average of their positions, so the
/// result lies in (0, 1].
double rank_percentile(std::span<const double> scores, std::size_t target);

struct AgentEvaluation {
  AgentId agent;
  MeasureId measure;
  std::vector<EntryEvent> events;  // with percentiles filled in
  double auc = 0.0;                // mean event percentile
};

/// Scores every event of the sequence against the full vocabulary minus the
/// prior portfolio. Throws ComputationError if the sequence has no events.
AgentEvaluation evaluate_agent(const ProximityMatrix& matrix, const EntrySequence& sequence);

struct CurvePoint {
  double q = 0.0;
  double captured = 0.0;
};

/// q_g = g / (points - 1) for g = 0..points-1.
std::vector<double> uniform_grid(std::size_t points);

/// Share of events whose percentile is at least 1 - q, i.e. captured by the
/// top-q most proximate candidates. Throws InputError on empty input.
std::vector<CurvePoint> cumulative_curve(std::span<const double> percentiles,
                                         std::span<const double> grid);

/// Trapezoidal area under the capture curve, sampled on a dense grid plus
/// both sides of every step. Equals the mean percentile up to rounding.
double explanatory_power(std::span<const double> percentiles);

struct EvaluationOptions {
  std::size_t min_classes = 10;  // distinct classes an agent must have entered
  std::size_t grid_points = 101;
  int workers = 0;
};

struct MeasureSummary {
  MeasureId id;
  double pooled_auc = 0.0;      // mean over all events of all agents
  double mean_agent_auc = 0.0;  // mean of per-agent AUCs
  std::vector<CurvePoint> pooled_curve;
  std::vector<CurvePoint> agent_mean_curve;
  std::size_t optimal_agents = 0;
  double proportion = 0.0;
};

struct AgentOutcome {
  AgentId agent;
  std::size_t events = 0;
  std::vector<double> aucs;  // parallel to EvaluationReport::measures
  std::size_t optimal = 0;   // index into EvaluationReport::measures
};

struct EvaluationReport {
  AgentKind kind = AgentKind::Inventor;
  std::size_t min_classes = 0;
  std::size_t agents_total = 0;
  std::size_t agents_below_min_classes = 0;
  std::size_t agents_without_events = 0;
  std::size_t agents_included = 0;
  std::size_t events_scored = 0;
  std::size_t events_skipped = 0;
  std::vector<MeasureSummary> measures;  // input matrix order
  std::vector<AgentOutcome> agents;      // agent id order
};

/// Evaluates every agent of `kind` with at least `min_classes` entered
/// classes under each matrix. The optimal measure of an agent is the one with
/// the highest AUC, ties going to the lexicographically smallest measure id.
/// Results are identical for any worker count. Throws ComputationError when
/// no agent qualifies and InputError when a matrix vocabulary differs from
/// the corpus.
EvaluationReport pooled_evaluation(const Corpus& corpus, std::span<const ProximityMatrix> matrices,
                                   AgentKind kind, const EvaluationOptions& options = {});

}  // namespace techspace
