#include "cli.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "techspace/corpus.hpp"
#include "techspace/digest.hpp"
#include "techspace/errors.hpp"
#include "techspace/evaluation.hpp"
#include "techspace/io.hpp"
#include "techspace/mapping.hpp"
#include "techspace/matrix_io.hpp"
#include "techspace/measures.hpp"
#include "techspace/report_io.hpp"
#include "techspace/synthetic.hpp"

namespace techspace::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr std::string_view kCacheMagic = "TECHSPACE-CORPUS 1\n";

struct RunConfig {
  fs::path out_dir = "techspace_out";
  fs::path input_dir;
  fs::path patents, classes, citations, agents;
  std::string level_text = "cpc4";
  std::size_t min_class_patents = 0;
  std::string data_text = "RefPat,RefClass,CoPat,CoClass";
  std::string measures_text = "jaccard,cosine,pearson,entropy";
  double epsilon = kDefaultEpsilon;
  std::size_t min_classes = 10;
  std::string agent_kinds_text = "inventor,assignee";
  std::size_t grid_points = 101;
  std::size_t extra_edges = 0;
  std::string formats_text = "graphml,dot,edge-csv,json";
  std::uint64_t seed = 0;
  int workers = 0;
  bool force = false;
  bool json_output = false;

  std::size_t synth_patents = 5000;
  std::size_t synth_classes = 120;
  std::size_t synth_agents = 400;
  std::size_t synth_patents_per_agent = 20;

  // Filled by validate().
  ClassLevel level = ClassLevel::Cpc4;
  std::vector<DataChoice> data;
  std::vector<MeasureKind> measures;
  std::vector<AgentKind> kinds;
  std::vector<GraphFormat> formats;
};

template <class T, class Parse>
std::vector<T> parse_list(const std::string& text, Parse parse, const char* what) {
  std::vector<T> out;
  for (auto item : split(text, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const T value = parse(item);
    if (std::find(out.begin(), out.end(), value) == out.end()) out.push_back(value);
  }
  if (out.empty()) throw InputError(std::string("empty ") + what + " list");
  std::sort(out.begin(), out.end());
  return out;
}

void validate(RunConfig& cfg) {
  cfg.level = parse_class_level(cfg.level_text);
  cfg.data = parse_list<DataChoice>(cfg.data_text, parse_data_choice, "data choice");
  cfg.measures = parse_list<MeasureKind>(cfg.measures_text, parse_measure_kind, "measure");
  cfg.kinds = parse_list<AgentKind>(cfg.agent_kinds_text, parse_agent_kind, "agent kind");
  cfg.formats = parse_list<GraphFormat>(cfg.formats_text, parse_graph_format, "graph format");
  if (!(cfg.epsilon > 0.0)) throw InputError("--epsilon must be positive");
  if (cfg.grid_points < 2) throw InputError("--grid-points must be at least 2");
}

// Settings that determine output content. Worker count and paths are left
// out so that outputs do not depend on them.
Json config_json(const RunConfig& cfg) {
  auto names = [](const auto& values) {
    Json arr = Json::array();
    for (auto v : values) arr.push_back(std::string(to_string(v)));
    return arr;
  };
  Json j;
  j["level"] = to_string(cfg.level);
  j["min_class_patents"] = cfg.min_class_patents;
  j["data_choices"] = names(cfg.data);
  j["measures"] = names(cfg.measures);
  j["epsilon"] = format_double(cfg.epsilon);
  j["min_classes"] = cfg.min_classes;
  j["agent_kinds"] = names(cfg.kinds);
  j["grid_points"] = cfg.grid_points;
  j["extra_edges"] = cfg.extra_edges;
  j["formats"] = names(cfg.formats);
  j["seed"] = cfg.seed;
  return j;
}

std::string config_digest(const RunConfig& cfg) { return sha256_hex(config_json(cfg).dump()); }

std::optional<CorpusPaths> input_paths(const RunConfig& cfg) {
  if (cfg.input_dir.empty() && cfg.patents.empty() && cfg.classes.empty() &&
      cfg.citations.empty() && cfg.agents.empty()) {
    return std::nullopt;
  }
  CorpusPaths paths = CorpusPaths::in_directory(cfg.input_dir);
  if (!cfg.patents.empty()) paths.patents = cfg.patents;
  if (!cfg.classes.empty()) paths.classes = cfg.classes;
  if (!cfg.citations.empty()) paths.citations = cfg.citations;
  if (!cfg.agents.empty()) paths.agents = cfg.agents;
  return paths;
}

std::string source_digest(const CorpusPaths& paths, const RunConfig& cfg) {
  Json j;
  j["level"] = to_string(cfg.level);
  j["min_class_patents"] = cfg.min_class_patents;
  j["patents"] = sha256_file(paths.patents);
  j["patent_classes"] = sha256_file(paths.classes);
  j["citations"] = sha256_file(paths.citations);
  j["patent_agents"] = sha256_file(paths.agents);
  return sha256_hex(j.dump());
}

fs::path cache_path(const RunConfig& cfg) {
  return cfg.out_dir / ("corpus_" + std::string(to_string(cfg.level)) + ".cache");
}

fs::path matrix_base(const RunConfig& cfg, MeasureId id) {
  return cfg.out_dir / "matrices" / std::string(to_string(cfg.level)) / id.id();
}

fs::path evaluation_dir(const RunConfig& cfg, AgentKind kind) {
  return cfg.out_dir / "evaluation" / std::string(to_string(cfg.level)) /
         std::string(to_string(kind));
}

fs::path map_base(const RunConfig& cfg, MeasureId id) {
  return cfg.out_dir / "maps" / std::string(to_string(cfg.level)) /
         (id.id() + ".k" + std::to_string(cfg.extra_edges));
}

struct CachedCorpus {
  Corpus corpus;
  std::string corpus_digest;
};

CachedCorpus read_cache(const RunConfig& cfg) {
  const fs::path path = cache_path(cfg);
  if (!fs::exists(path)) {
    throw InputError("no corpus cache at " + path.string() + "; run `techspace ingest` first");
  }
  const std::string bytes = read_text_file(path);
  if (!bytes.starts_with(kCacheMagic)) throw InputError(path.string() + " is not a corpus cache");
  const auto header_end = bytes.find('\n', kCacheMagic.size());
  if (header_end == std::string::npos) throw InputError(path.string() + ": truncated cache");
  const Json header = Json::parse(bytes.substr(kCacheMagic.size(), header_end - kCacheMagic.size()));
  const std::string_view payload = std::string_view(bytes).substr(header_end + 1);

  CachedCorpus cached;
  cached.corpus_digest = header.at("corpus_digest").get<std::string>();
  if (sha256_hex(payload) != cached.corpus_digest) {
    throw InputError("corpus cache " + path.string() +
                     " does not match its digest; re-run `techspace ingest`");
  }

  // Compare against the inputs: explicitly given ones, else those recorded.
  CorpusPaths paths;
  if (auto given = input_paths(cfg)) {
    paths = *given;
  } else {
    const auto& files = header.at("inputs");
    paths = {files.at("patents").get<std::string>(), files.at("patent_classes").get<std::string>(),
             files.at("citations").get<std::string>(), files.at("patent_agents").get<std::string>()};
  }
  const bool inputs_present = fs::exists(paths.patents) && fs::exists(paths.classes) &&
                              fs::exists(paths.citations) && fs::exists(paths.agents);
  if (inputs_present && source_digest(paths, cfg) != header.at("source_digest").get<std::string>()) {
    throw InputError("corpus cache " + path.string() +
                     " is stale (input files or ingest settings changed); re-run `techspace ingest`");
  }
  cached.corpus = Corpus::from_bytes(payload);
  return cached;
}

ProximityMatrix load_matrix(const RunConfig& cfg, MeasureId id, const std::string& corpus_digest) {
  const fs::path base = matrix_base(cfg, id);
  const fs::path csv = fs::path(base.string() + ".csv");
  const fs::path sidecar = fs::path(base.string() + ".json");
  if (!fs::exists(csv) || !fs::exists(sidecar)) {
    throw InputError("matrix " + id.id() + " not found under " + base.parent_path().string() +
                     "; run `techspace proximity` first");
  }
  const Json meta = Json::parse(read_text_file(sidecar));
  if (meta.at("corpus_digest").get<std::string>() != corpus_digest) {
    throw InputError("matrix " + id.id() +
                     " was computed from a different corpus; re-run `techspace proximity`");
  }
  return read_matrix_csv(read_text_file(csv), id,
                         parse_double(meta.at("epsilon").get<std::string>()));
}

// ---------------------------------------------------------------------------

int cmd_ingest(const RunConfig& cfg, std::ostream& out) {
  const auto paths = input_paths(cfg);
  if (!paths) throw InputError("no input files; pass --input-dir or the four file options");
  const IngestResult result =
      load_corpus(*paths, IngestOptions{cfg.level, cfg.min_class_patents});
  const std::string payload = result.corpus.to_bytes();
  const std::string digest = sha256_hex(payload);

  Json header;
  header["corpus_digest"] = digest;
  header["source_digest"] = source_digest(*paths, cfg);
  header["level"] = to_string(cfg.level);
  header["inputs"] = {{"patents", fs::absolute(paths->patents).string()},
                      {"patent_classes", fs::absolute(paths->classes).string()},
                      {"citations", fs::absolute(paths->citations).string()},
                      {"patent_agents", fs::absolute(paths->agents).string()}};
  std::string cache(kCacheMagic);
  cache += header.dump();
  cache += '\n';
  cache += payload;
  write_text_file(cache_path(cfg), cache);

  Json summary = Json::parse(result.summary.to_json());
  summary["level"] = to_string(cfg.level);
  summary["vocabulary_size"] = result.corpus.num_classes();
  summary["corpus_digest"] = digest;
  summary["config_digest"] = config_digest(cfg);
  summary["seed"] = cfg.seed;
  const std::string text = summary.dump(2) + "\n";
  write_text_file(cfg.out_dir / ("ingest_" + std::string(to_string(cfg.level)) + ".json"), text);
  out << text;
  return kSuccess;
}

int cmd_proximity(const RunConfig& cfg, std::ostream& out) {
  const CachedCorpus cached = read_cache(cfg);
  const std::string cfg_digest = config_digest(cfg);
  const ProximityOptions options{cfg.epsilon, cfg.workers};

  for (DataChoice data : cfg.data) {
    std::optional<FeatureSet> features;
    for (MeasureKind measure : cfg.measures) {
      const MeasureId id{data, measure};
      const fs::path base = matrix_base(cfg, id);
      const fs::path csv = fs::path(base.string() + ".csv");
      const fs::path sidecar = fs::path(base.string() + ".json");
      if (!cfg.force && fs::exists(csv) && fs::exists(sidecar)) {
        const Json meta = Json::parse(read_text_file(sidecar));
        if (meta.value("corpus_digest", "") == cached.corpus_digest &&
            meta.value("epsilon", "") == format_double(cfg.epsilon)) {
          out << id.id() << ": up to date\n";
          continue;
        }
      }
      if (!features) features = build_features(cached.corpus, data, cfg.workers);
      const ProximityMatrix m =
          build_proximity_matrix(*features, cached.corpus.vocabulary(), measure, options);
      write_text_file(csv, write_matrix_csv(m));
      Json meta;
      meta["data_choice"] = to_string(data);
      meta["measure"] = to_string(measure);
      meta["orientation"] = "higher_is_closer";
      meta["stored_score"] = measure == MeasureKind::Entropy ? "negated_distance" : "similarity";
      meta["level"] = to_string(cfg.level);
      meta["classes"] = m.size();
      meta["epsilon"] = format_double(cfg.epsilon);
      meta["corpus_digest"] = cached.corpus_digest;
      meta["config_digest"] = cfg_digest;
      meta["seed"] = cfg.seed;
      write_text_file(sidecar, meta.dump(2) + "\n");
      out << id.id() << ": wrote " << csv.string() << "\n";
    }
  }
  return kSuccess;
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
  const CachedCorpus cached = read_cache(cfg);
  std::vector<ProximityMatrix> matrices;
  for (DataChoice data : cfg.data) {
    for (MeasureKind measure : cfg.measures) {
      matrices.push_back(load_matrix(cfg, MeasureId{data, measure}, cached.corpus_digest));
    }
  }
  Json context = config_json(cfg);
  context["corpus_digest"] = cached.corpus_digest;
  context["config_digest"] = config_digest(cfg);

  const EvaluationOptions options{cfg.min_classes, cfg.grid_points, cfg.workers};
  for (AgentKind kind : cfg.kinds) {
    const EvaluationReport report = pooled_evaluation(cached.corpus, matrices, kind, options);
    const fs::path dir = evaluation_dir(cfg, kind);
    write_text_file(dir / "curves.csv", pooled_curves_csv(report));
    write_text_file(dir / "curves_agent_mean.csv", agent_mean_curves_csv(report));
    write_text_file(dir / "auc_table.csv", auc_table_csv(report));
    write_text_file(dir / "optima.csv", optima_csv(report));
    write_text_file(dir / "report.json", report_json(report, context.dump()));

    out << to_string(kind) << ": " << report.agents_included << " agents, "
        << report.events_scored << " scored entries\n";
    out << auc_table_csv(report);
  }
  return kSuccess;
}

int cmd_map(const RunConfig& cfg, std::ostream& out) {
  const CachedCorpus cached = read_cache(cfg);
  const std::string cfg_digest = config_digest(cfg);
  for (DataChoice data : cfg.data) {
    for (MeasureKind measure : cfg.measures) {
      const MeasureId id{data, measure};
      const ProximityMatrix m = load_matrix(cfg, id, cached.corpus_digest);
      const BackboneNetwork net = extract_backbone(m, cfg.extra_edges);
      const GraphAttributes attrs{{"corpus_digest", cached.corpus_digest},
                                  {"config_digest", cfg_digest},
                                  {"measure", id.id()},
                                  {"seed", std::to_string(cfg.seed)}};
      const fs::path base = map_base(cfg, id);
      for (GraphFormat format : cfg.formats) {
        write_text_file(fs::path(base.string() + std::string(file_extension(format))),
                        export_graph(net, format, attrs));
      }
      Json report;
      report["measure"] = id.id();
      report["nodes"] = net.nodes.size();
      report["tree_edges"] = net.tree_edges.size();
      report["components"] = net.nodes.size() - net.tree_edges.size();
      report["extra_edges"] = net.extra_edges.size();
      report["requested_extra_edges"] = net.requested_extra;
      report["shortfall"] = net.shortfall;
      report["corpus_digest"] = cached.corpus_digest;
      report["config_digest"] = cfg_digest;
      report["seed"] = cfg.seed;
      write_text_file(fs::path(base.string() + ".map.json"), report.dump(2) + "\n");
      out << id.id() << ": " << net.tree_edges.size() << " tree + " << net.extra_edges.size()
          << " extra edges";
      if (net.shortfall > 0) out << " (shortfall " << net.shortfall << ")";
      out << "\n";
    }
  }
  return kSuccess;
}

std::string percent(double share) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", share * 100.0);
  return buf;
}

int cmd_report(const RunConfig& cfg, std::ostream& out) {
  const std::string level(to_string(cfg.level));
  Json summary;
  const fs::path ingest = cfg.out_dir / ("ingest_" + level + ".json");
  if (!fs::exists(ingest)) {
    throw InputError("nothing to report in " + cfg.out_dir.string() + "; run `techspace ingest`");
  }
  const Json corpus = Json::parse(read_text_file(ingest));
  summary["corpus"] = {{"level", level},
                       {"patents", corpus["retained"]["patents"]},
                       {"classes", corpus["retained"]["classes"]},
                       {"digest", corpus["corpus_digest"]}};
  summary["matrices"] = Json::array();
  for (DataChoice d : kAllDataChoices) {
    for (MeasureKind m : kAllMeasures) {
      const MeasureId id{d, m};
      if (fs::exists(fs::path(matrix_base(cfg, id).string() + ".json"))) {
        summary["matrices"].push_back(id.id());
      }
    }
  }
  summary["evaluation"] = Json::object();
  for (AgentKind kind : {AgentKind::Inventor, AgentKind::Assignee}) {
    const fs::path path = evaluation_dir(cfg, kind) / "report.json";
    if (!fs::exists(path)) continue;
    const Json r = Json::parse(read_text_file(path));
    Json entry;
    entry["agents_included"] = r["agents"]["included"];
    std::string best;
    double best_auc = -1.0;
    for (const auto& m : r["measures"]) {
      entry["pooled_auc"][m["id"].get<std::string>()] = m["pooled_auc"];
      entry["optimal_share"][m["id"].get<std::string>()] = m["proportion"];
      if (m["pooled_auc"].get<double>() > best_auc) {
        best_auc = m["pooled_auc"].get<double>();
        best = m["id"].get<std::string>();
      }
    }
    entry["best_pooled"] = best;
    summary["evaluation"][std::string(to_string(kind))] = entry;
  }

  if (cfg.json_output) {
    out << summary.dump(2) << "\n";
    return kSuccess;
  }
  out << "corpus (" << level << "): " << summary["corpus"]["patents"] << " patents, "
      << summary["corpus"]["classes"] << " classes\n";
  out << "  digest " << summary["corpus"]["digest"].get<std::string>() << "\n";
  out << "matrices: " << summary["matrices"].size() << "\n";
  for (const auto& [kind, entry] : summary["evaluation"].items()) {
    out << kind << " evaluation: " << entry["agents_included"] << " agents\n";
    for (const auto& [id, auc] : entry["pooled_auc"].items()) {
      out << "  " << id << "  pooled AUC " << format_double(auc.get<double>()) << "  optimal for "
          << percent(entry["optimal_share"][id].get<double>()) << " of agents\n";
    }
    out << "  highest pooled AUC: " << entry["best_pooled"].get<std::string>() << "\n";
  }
  return kSuccess;
}

int cmd_synth(const RunConfig& cfg, std::ostream& out) {
  if (cfg.input_dir.empty()) throw InputError("synth needs --input-dir to write the TSV files to");
  synthetic::CorpusSpec spec;
  spec.num_classes = cfg.synth_classes;
  spec.num_patents = cfg.synth_patents;
  spec.level = cfg.level;
  spec.num_agents = cfg.synth_agents;
  spec.patents_per_agent = cfg.synth_patents_per_agent;
  spec.seed = cfg.seed;
  const CorpusRows rows = synthetic::generate_corpus_rows(spec);
  write_corpus_rows(rows, CorpusPaths::in_directory(cfg.input_dir));
  out << "wrote " << rows.patents.size() << " patents, " << rows.classes.size()
      << " class rows, " << rows.citations.size() << " citations, " << rows.agents.size()
      << " agent links to " << cfg.input_dir.string() << "\n";
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Knowledge-proximity networks between patent classes", "techspace"};
  app.set_config("--config", "", "Key-value config file; command-line flags take precedence");
  app.fallthrough();
  app.require_subcommand(1);

  app.add_option("--out", cfg.out_dir, "Output directory")
      ->envname("TECHSPACE_OUT")
      ->capture_default_str();
  app.add_option("--input-dir", cfg.input_dir,
                 "Directory holding patents.tsv, patent_classes.tsv, citations.tsv, patent_agents.tsv");
  app.add_option("--patents", cfg.patents, "patents.tsv override");
  app.add_option("--classes", cfg.classes, "patent_classes.tsv override");
  app.add_option("--citations", cfg.citations, "citations.tsv override");
  app.add_option("--agents", cfg.agents, "patent_agents.tsv override");
  app.add_option("--level", cfg.level_text, "cpc3 or cpc4")->capture_default_str();
  app.add_option("--min-class-patents", cfg.min_class_patents,
                 "Drop classes with fewer patents (0 = keep all)")
      ->capture_default_str();
  app.add_option("--data", cfg.data_text, "Data choices: RefPat,RefClass,CoPat,CoClass")
      ->capture_default_str();
  app.add_option("--measures", cfg.measures_text, "Measures: jaccard,cosine,pearson,entropy")
      ->capture_default_str();
  app.add_option("--epsilon", cfg.epsilon, "Entropy smoothing constant")->capture_default_str();
  app.add_option("--min-classes", cfg.min_classes, "Minimum classes entered per agent")
      ->capture_default_str();
  app.add_option("--agent-kinds", cfg.agent_kinds_text, "inventor,assignee")->capture_default_str();
  app.add_option("--grid-points", cfg.grid_points, "Samples per capture curve")
      ->capture_default_str();
  app.add_option("-k,--extra-edges", cfg.extra_edges, "Strongest non-tree edges kept in maps")
      ->capture_default_str();
  app.add_option("--formats", cfg.formats_text, "graphml,dot,edge-csv,json")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Random seed (recorded in every output)")
      ->capture_default_str();
  app.add_option("--workers", cfg.workers, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_flag("--force", cfg.force, "Recompute outputs that are up to date");
  app.add_flag("--json", cfg.json_output, "report: print JSON");

  auto* ingest = app.add_subcommand("ingest", "Load the TSV tables into a corpus cache");
  auto* proximity = app.add_subcommand("proximity", "Compute proximity matrices");
  auto* evaluate = app.add_subcommand("evaluate", "Score measures against agent diversification");
  auto* map = app.add_subcommand("map", "Extract and export backbone networks");
  auto* report = app.add_subcommand("report", "Summarize an output directory");
  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus as TSV tables");
  synth->add_option("--synth-patents", cfg.synth_patents)->capture_default_str();
  synth->add_option("--synth-classes", cfg.synth_classes)->capture_default_str();
  synth->add_option("--synth-agents", cfg.synth_agents)->capture_default_str();
  synth->add_option("--synth-patents-per-agent", cfg.synth_patents_per_agent)
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    validate(cfg);
    if (ingest->parsed()) return cmd_ingest(cfg, out);
    if (proximity->parsed()) return cmd_proximity(cfg, out);
    if (evaluate->parsed()) return cmd_evaluate(cfg, out);
    if (map->parsed()) return cmd_map(cfg, out);
    if (report->parsed()) return cmd_report(cfg, out);
    if (synth->parsed()) return cmd_synth(cfg, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ComputationError& e) {
    err << "error: " << e.what() << "\n";
    return kComputationError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kUsageError;
}

}  // namespace techspace::cli
