#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "topicalign/delineation.hpp"
#include "topicalign/geometry.hpp"

namespace topicalign {

struct CorpusSettings {
  std::filesystem::path corpus;
  int topics = 20;
  std::optional<double> alpha;  // defaults to 50/K
  double beta = 0.01;
  int iterations = 1000;
  std::uint64_t seed = 1;
  std::size_t min_df = 100;
  std::string label_prefix = "S";
  double characteristic_threshold = 0.85;
};

struct ZoomSettings {
  bool enabled = false;
  std::set<int> topics;  // 1-based labels in the config file, 0-based here
  double threshold = 0.25;
  int refit_topics = 10;
  int iterations = 1000;
  std::uint64_t seed = 7;
  std::optional<std::size_t> min_df;  // defaults to the supply setting
  double characteristic_threshold = 0.9;
  std::string label_prefix = "U";
};

struct PipelineConfig {
  std::filesystem::path config_dir;
  std::filesystem::path output;
  CorpusSettings supply;
  CorpusSettings demand;
  std::optional<std::filesystem::path> clusters;
  std::optional<std::filesystem::path> stoplist;
  std::optional<std::filesystem::path> seed_ids;
  std::optional<std::filesystem::path> category_groups;
  std::string seed_pattern = "obes*";
  DelineationConfig delineation;
  RelevanceConfig relevance;
  double align_threshold = 0.5;
  std::optional<int> align_top_n;
  double cooccurrence_threshold = 0.25;
  double core_threshold = 0.5;
  double high_threshold = 0.75;
  ZoomSettings zoom;
  bool emit_svg = true;
  bool emit_html = true;

  /// Range checks on every threshold and count. Throws ConfigError.
  void validate() const;
  /// Input files must exist. Throws ConfigError naming the missing path.
  void check_inputs() const;
};

/// Parses a JSON configuration; relative paths resolve against the file's
/// directory. Throws ConfigError.
PipelineConfig load_config(const std::filesystem::path& path);

enum class Stage { ingest, delineate, fit, map, align, zoom, report };

const std::vector<Stage>& all_stages();
std::string stage_name(Stage stage);
std::optional<Stage> parse_stage(const std::string& name);

struct ManifestEntry {
  std::string path;  // relative to the output directory
  std::string stage;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct Manifest {
  std::string status = "OK";  // OK or FAILED
  std::string failed_stage;
  std::string error;
  std::vector<ManifestEntry> entries;
};

using ProgressLog = std::function<void(const std::string&)>;

/// Runs the requested stages in order. Every stage reads its inputs from the
/// files written by earlier stages under `config.output`. manifest.json is
/// rewritten after each stage. A failing stage marks the manifest FAILED and
/// the exception propagates with the stage name prepended.
Manifest run_pipeline(const PipelineConfig& config, const std::vector<Stage>& stages,
                      const ProgressLog& log = {});

Manifest read_manifest(const std::filesystem::path& path);

}  // namespace topicalign
