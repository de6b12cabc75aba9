// topicalign: map a science corpus and a policy corpus with topic models and
// measure how their topics line up.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "topicalign/error.hpp"
#include "topicalign/pipeline.hpp"
#include "topicalign/synthetic.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kDataError = 3;
constexpr int kNumericError = 4;

constexpr const char* kTokenRule =
    "Text is lowercased and split on every character that is not a letter or digit; tokens shorter than two "
    "characters and purely numeric tokens are dropped. Stopwords are removed when the vocabulary is built.";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic maps and cross-corpus topic alignment for science and policy corpora.\n" +
               std::string(kTokenRule)};
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string stage_opt;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool verbose = false;
  app.add_option("--config", config_path, "Pipeline configuration (JSON)");
  app.add_option("--stage", stage_opt, "Run a single stage: ingest, delineate, fit, map, align, zoom, report");
  app.add_option("--out", out_dir, "Output directory (overrides the config)");
  app.add_option("--seed", seed, "Seed for every model fit (overrides the config)");
  app.add_flag("-v,--verbose", verbose, "Log progress to stderr");

  std::string selected;
  for (const auto stage : topicalign::all_stages()) {
    const auto name = topicalign::stage_name(stage);
    app.add_subcommand(name, "Run the " + name + " stage")->callback([&selected, name] { selected = name; });
  }
  app.add_subcommand("run", "Run every stage in order")->callback([&selected] { selected = "run"; });

  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset with a ready-to-run config");
  topicalign::synthetic::DatasetOptions synth_options;
  std::string synth_dir = "synthetic";
  synth->add_option("--dir", synth_dir, "Destination directory")->capture_default_str();
  synth->add_option("--supply-docs", synth_options.supply_documents)->capture_default_str();
  synth->add_option("--supply-vocab", synth_options.supply_vocab)->capture_default_str();
  synth->add_option("--demand-docs", synth_options.demand_documents)->capture_default_str();
  synth->add_option("--tokens", synth_options.tokens_per_doc, "Tokens per supply abstract")->capture_default_str();
  synth->add_option("--iterations", synth_options.iterations, "Sweeps written into the config")->capture_default_str();
  synth->add_option("--data-seed", synth_options.seed)->capture_default_str();
  synth->callback([&selected] { selected = "synth"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  auto log = [verbose](const std::string& msg) {
    if (verbose) std::cerr << "[topicalign] " << msg << '\n';
  };

  try {
    if (selected == "synth") {
      topicalign::synthetic::write_dataset(synth_options, synth_dir);
      std::cout << "wrote synthetic dataset to " << synth_dir << '\n';
      return kOk;
    }

    if (!stage_opt.empty()) {
      if (!selected.empty() && selected != "run" && selected != stage_opt)
        throw topicalign::ConfigError("--stage " + stage_opt + " conflicts with subcommand " + selected);
      selected = stage_opt;
    }
    if (selected.empty()) selected = "run";

    std::vector<topicalign::Stage> stages;
    if (selected == "run") {
      stages = topicalign::all_stages();
    } else if (const auto stage = topicalign::parse_stage(selected)) {
      stages = {*stage};
    } else {
      throw topicalign::ConfigError("unknown stage '" + selected + "'");
    }

    if (config_path.empty()) throw topicalign::ConfigError("--config is required");
    auto config = topicalign::load_config(config_path);
    if (!out_dir.empty()) config.output = out_dir;
    if (seed) config.supply.seed = config.demand.seed = config.zoom.seed = *seed;

    const auto manifest = topicalign::run_pipeline(config, stages, log);
    std::cout << "status " << manifest.status << ", " << manifest.entries.size() << " files in "
              << (config.output / "manifest.json").string() << '\n';
    return kOk;
  } catch (const topicalign::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const topicalign::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const topicalign::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumericError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
}
