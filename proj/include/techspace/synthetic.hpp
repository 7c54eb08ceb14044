#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "techspace/corpus.hpp"
#include "techspace/measures.hpp"

namespace techspace::synthetic {

/// A valid CPC class (3 chars) or subclass (4 chars) code for index i.
std::string class_code(std::size_t index, ClassLevel level);

/// Corpus with latent structure: classes sit on a ring, patents pick extra
/// classes and cite earlier patents near their primary class, so every data
/// choice sees the same neighbourhoods.
struct CorpusSpec {
  std::size_t num_classes = 40;
  std::size_t num_patents = 2000;
  ClassLevel level = ClassLevel::Cpc4;
  double extra_class_rate = 0.6;   // mean of the geometric extra-class count
  double mean_references = 6.0;
  double external_share = 0.1;     // share of references to out-of-corpus ids
  double locality = 2.0;           // std-dev of class offsets along the ring
  double popularity_skew = 0.0;    // Zipf exponent of primary-class sizes, 0 = uniform
  std::size_t num_agents = 0;      // agents linked to existing patents
  std::size_t patents_per_agent = 20;
  std::uint64_t seed = 1;
};

CorpusRows generate_corpus_rows(const CorpusSpec& spec);

/// Agents whose classes are entered one per filing date. The first class is
/// uniform; each later one is drawn from the unentered classes with
/// probability proportional to (s - min(0, s_min))^beta, where s is the
/// class's summed score to the portfolio and s_min the lowest finite s among
/// eligible classes. Non-finite sums get no weight; all-zero weights fall
/// back to uniform. beta = 0 gives uniform
/// entry. Each entry adds a new single-class patent without references, so
/// reference-based and class-to-class features of the base corpus are
/// unchanged. With `reuse_patents`, an entry instead links the agent to the
/// earliest single-class base patent of that class filed after its previous
/// entry, leaving every feature unchanged; classes without such a patent are
/// not eligible, and an agent with no eligible class stops early.
struct PlantedAgentsSpec {
  std::size_t num_agents = 100;
  std::size_t min_entries = 10;
  std::size_t max_entries = 15;
  double beta = 2.0;
  AgentKind kind = AgentKind::Inventor;
  std::string id_prefix = "agent";
  bool reuse_patents = false;
  std::uint64_t seed = 7;
};

void plant_agents(CorpusRows& rows, const Corpus& base, const ProximityMatrix& preference,
                  const PlantedAgentsSpec& spec);

}  // namespace techspace::synthetic
