// Serial reference kernel vs the OpenMP kernel on one synthetic corpus.
//
//   bench_kernels --benchmark_filter=CoPat

#include <benchmark/benchmark.h>

#include <map>

#include "techspace/corpus.hpp"
#include "techspace/features.hpp"
#include "techspace/kernels.hpp"
#include "techspace/synthetic.hpp"

using namespace techspace;

namespace {

const Corpus& corpus() {
  static const Corpus c = [] {
    synthetic::CorpusSpec spec;
    spec.num_patents = 20000;
    spec.num_classes = 300;
    spec.popularity_skew = 1.0;
    spec.seed = 3;
    return build_corpus(synthetic::generate_corpus_rows(spec), {}).corpus;
  }();
  return c;
}

const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> v(corpus().vocabulary().begin(), corpus().vocabulary().end());
  return v;
}

const FeatureSet& features(DataChoice data) {
  static std::map<DataChoice, FeatureSet> cache;
  auto it = cache.find(data);
  if (it == cache.end()) it = cache.emplace(data, build_features(corpus(), data)).first;
  return it->second;
}

void serial(benchmark::State& state, DataChoice data, MeasureKind measure) {
  const FeatureSet& f = features(data);
  for (auto _ : state) {
    ProximityMatrix m(vocabulary(), {data, measure});
    kernels::score_pairs_serial(f, measure, kDefaultEpsilon, m);
    benchmark::DoNotOptimize(m);
  }
}

void parallel(benchmark::State& state, DataChoice data, MeasureKind measure) {
  const FeatureSet& f = features(data);
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    ProximityMatrix m(vocabulary(), {data, measure});
    kernels::score_pairs_parallel(f, measure, kDefaultEpsilon, m, workers);
    benchmark::DoNotOptimize(m);
  }
}

int register_all() {
  for (DataChoice d : kAllDataChoices) {
    for (MeasureKind m : kAllMeasures) {
      const std::string name = MeasureId{d, m}.id();
      benchmark::RegisterBenchmark(("serial/" + name).c_str(), serial, d, m)
          ->Unit(benchmark::kMillisecond);
      benchmark::RegisterBenchmark(("parallel/" + name).c_str(), parallel, d, m)
          ->Arg(1)
          ->Arg(4)
          ->Unit(benchmark::kMillisecond);
    }
  }
  return 0;
}

const int registered = register_all();

}  // namespace

BENCHMARK_MAIN();
