#include "topicalign/pipeline.hpp"

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

#include "text_io.hpp"
#include "topicalign/align.hpp"
#include "topicalign/analytics.hpp"
#include "topicalign/checksum.hpp"
#include "topicalign/corpus.hpp"
#include "topicalign/error.hpp"
#include "topicalign/report.hpp"
#include "topicalign/topicmodel.hpp"
#include "topicalign/vocab.hpp"

namespace topicalign {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Configuration

void PipelineConfig::validate() const {
  for (const auto* side : {&supply, &demand}) {
    if (side->topics < 2) throw ConfigError("topics must be at least 2");
    if (side->iterations < 1) throw ConfigError("iterations must be at least 1");
    if (side->min_df < 1) throw ConfigError("min_df must be at least 1");
    if (side->alpha && !(*side->alpha > 0.0)) throw ConfigError("Dirichlet alpha must be positive");
    if (!(side->beta > 0.0)) throw ConfigError("Dirichlet beta must be positive");
    if (!(side->characteristic_threshold > 0.0 && side->characteristic_threshold < 1.0))
      throw ConfigError("characteristic_threshold must lie in (0, 1)");
  }
  delineation.validate();
  relevance.validate();
  if (!(align_threshold >= 0.0 && align_threshold <= 1.0)) throw ConfigError("alignment threshold must lie in [0, 1]");
  if (align_top_n && *align_top_n < 1) throw ConfigError("alignment top_n must be at least 1");
  for (const double t : {cooccurrence_threshold, core_threshold, high_threshold})
    if (!(t > 0.0 && t < 1.0)) throw ConfigError("analytics thresholds must lie in (0, 1)");
  if (zoom.enabled) {
    if (zoom.topics.empty()) throw ConfigError("zoom.topics must not be empty");
    for (const int k : zoom.topics)
      if (k < 0 || k >= supply.topics) throw ConfigError("zoom.topics refers to a topic the supply model lacks");
    if (!(zoom.threshold > 0.0 && zoom.threshold < 1.0)) throw ConfigError("zoom.threshold must lie in (0, 1)");
    if (!(zoom.characteristic_threshold > 0.0 && zoom.characteristic_threshold < 1.0))
      throw ConfigError("zoom.characteristic_threshold must lie in (0, 1)");
    if (zoom.refit_topics < 2) throw ConfigError("zoom.topics_refit must be at least 2");
    if (zoom.iterations < 1) throw ConfigError("zoom.iterations must be at least 1");
  }
  if (output.empty()) throw ConfigError("output directory not set");
}

void PipelineConfig::check_inputs() const {
  auto require = [](const fs::path& p, const char* what) {
    if (!fs::exists(p)) throw ConfigError(std::string(what) + " not found: " + p.string());
  };
  require(supply.corpus, "supply corpus");
  require(demand.corpus, "demand corpus");
  if (clusters) require(*clusters, "cluster assignment");
  if (stoplist) require(*stoplist, "stoplist");
  if (seed_ids) require(*seed_ids, "seed-id file");
  if (category_groups) require(*category_groups, "category grouping");
}

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return it->get<T>();
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::optional<fs::path> optional_path(const json& j, const char* key, const fs::path& base) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return resolve(base, it->get<std::string>());
}

CorpusSettings parse_side(const json& j, const fs::path& base, CorpusSettings s) {
  if (!j.contains("corpus")) throw ConfigError("corpus path missing");
  s.corpus = resolve(base, j.at("corpus").get<std::string>());
  s.topics = get_or(j, "topics", s.topics);
  if (j.contains("alpha") && !j.at("alpha").is_null()) s.alpha = j.at("alpha").get<double>();
  s.beta = get_or(j, "beta", s.beta);
  s.iterations = get_or(j, "iterations", s.iterations);
  s.seed = get_or<std::uint64_t>(j, "seed", s.seed);
  s.min_df = get_or<std::size_t>(j, "min_df", s.min_df);
  s.label_prefix = get_or<std::string>(j, "label_prefix", s.label_prefix);
  s.characteristic_threshold = get_or(j, "characteristic_threshold", s.characteristic_threshold);
  return s;
}

}  // namespace

PipelineConfig load_config(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
  PipelineConfig c;
  c.config_dir = fs::absolute(path).parent_path();
  try {
    const auto j = json::parse(io::read_file(path));
    const auto& base = c.config_dir;
    c.output = resolve(base, get_or<std::string>(j, "output", "out"));

    CorpusSettings demand_defaults;
    demand_defaults.topics = 30;
    demand_defaults.label_prefix = "Q";
    c.supply = parse_side(j.at("supply"), base, CorpusSettings{});
    c.demand = parse_side(j.at("demand"), base, demand_defaults);

    c.clusters = optional_path(j, "clusters", base);
    c.stoplist = optional_path(j, "stoplist", base);
    c.seed_ids = optional_path(j, "seed_ids", base);
    c.category_groups = optional_path(j, "category_groups", base);
    c.seed_pattern = get_or<std::string>(j, "seed_pattern", c.seed_pattern);

    if (const auto it = j.find("delineation"); it != j.end()) {
      c.delineation.alpha = get_or(*it, "alpha", c.delineation.alpha);
      c.delineation.keep_seed_documents = get_or(*it, "keep_seed_documents", c.delineation.keep_seed_documents);
    }
    if (const auto it = j.find("relevance"); it != j.end()) {
      c.relevance.lambda = get_or(*it, "lambda", c.relevance.lambda);
      c.relevance.top_n = get_or(*it, "top_n", c.relevance.top_n);
    }
    if (const auto it = j.find("alignment"); it != j.end()) {
      c.align_threshold = get_or(*it, "threshold", c.align_threshold);
      if (it->contains("top_n") && !it->at("top_n").is_null()) c.align_top_n = it->at("top_n").get<int>();
    }
    if (const auto it = j.find("analytics"); it != j.end()) {
      c.cooccurrence_threshold = get_or(*it, "cooccurrence_threshold", c.cooccurrence_threshold);
      c.core_threshold = get_or(*it, "core_threshold", c.core_threshold);
      c.high_threshold = get_or(*it, "high_threshold", c.high_threshold);
    }
    if (const auto it = j.find("zoom"); it != j.end() && !it->is_null()) {
      c.zoom.enabled = get_or(*it, "enabled", true);
      for (const int label : get_or<std::vector<int>>(*it, "topics", {})) c.zoom.topics.insert(label - 1);
      c.zoom.threshold = get_or(*it, "threshold", c.zoom.threshold);
      c.zoom.refit_topics = get_or(*it, "topics_refit", c.zoom.refit_topics);
      c.zoom.iterations = get_or(*it, "iterations", c.zoom.iterations);
      c.zoom.seed = get_or<std::uint64_t>(*it, "seed", c.zoom.seed);
      if (it->contains("min_df") && !it->at("min_df").is_null()) c.zoom.min_df = it->at("min_df").get<std::size_t>();
      c.zoom.characteristic_threshold = get_or(*it, "characteristic_threshold", c.zoom.characteristic_threshold);
      c.zoom.label_prefix = get_or<std::string>(*it, "label_prefix", c.zoom.label_prefix);
    }
    if (const auto it = j.find("reports"); it != j.end()) {
      c.emit_svg = get_or(*it, "svg", c.emit_svg);
      c.emit_html = get_or(*it, "html", c.emit_html);
    }
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return c;
}

// ---------------------------------------------------------------------------
// Stages

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> stages{Stage::ingest, Stage::delineate, Stage::fit, Stage::map,
                                         Stage::align,  Stage::zoom,      Stage::report};
  return stages;
}

std::string stage_name(Stage stage) {
  switch (stage) {
    case Stage::ingest: return "ingest";
    case Stage::delineate: return "delineate";
    case Stage::fit: return "fit";
    case Stage::map: return "map";
    case Stage::align: return "align";
    case Stage::zoom: return "zoom";
    case Stage::report: return "report";
  }
  return "unknown";
}

std::optional<Stage> parse_stage(const std::string& name) {
  for (const auto s : all_stages())
    if (stage_name(s) == name) return s;
  return std::nullopt;
}

namespace {

struct Side {
  const CorpusSettings* settings;
  std::string name;  // "supply" or "demand"
};

// Everything the later stages need about one fitted corpus, read back from disk.
struct FittedCorpus {
  Corpus corpus;
  Vocabulary vocab;
  DocTermMatrix matrix;
  TopicModel model;
  std::vector<std::string> labels;
};

Stoplist load_stoplist(const PipelineConfig& c) { return c.stoplist ? read_stoplist(*c.stoplist) : default_stoplist(); }

void write_json(const fs::path& path, const json& j) { io::write_file(path, j.dump(2) + '\n'); }

void fit_corpus(const Corpus& corpus, const Stoplist& stoplist, std::size_t min_df, int topics,
                std::optional<double> alpha, double beta, int iterations, std::uint64_t seed, const fs::path& dir,
                const ProgressLog& log) {
  const auto vocab = build_vocabulary(corpus, stoplist, min_df);
  const auto matrix = count_matrix(corpus, vocab);
  write_vocabulary(vocab, dir / "vocab.tsv");
  write_matrix(matrix, dir / "matrix.tsv", dir / "doc_ids.txt");
  std::string empty;
  for (const auto d : matrix.empty_rows()) empty += matrix.doc_ids[d] + '\n';
  io::write_file(dir / "empty_rows.txt", empty);

  FitOptions options;
  options.topics = topics;
  options.priors = {alpha.value_or(50.0 / topics), beta};
  options.iterations = iterations;
  options.seed = seed;
  options.vocab_checksum = vocab.checksum();
  if (log)
    log("fitting " + std::to_string(topics) + " topics on " + std::to_string(matrix.documents()) + " documents, " +
        std::to_string(vocab.size()) + " terms, " + std::to_string(matrix.total_tokens()) + " tokens");
  const auto model = fit(matrix, options);
  if (max_row_sum_error(model.phi) > 1e-9 || max_row_sum_error(model.theta) > 1e-9)
    throw NumericError("fitted distributions are not normalized");
  save_model(model, dir / "model");
}

FittedCorpus load_fitted(const fs::path& corpus_path, const fs::path& dir, const std::string& prefix) {
  FittedCorpus f;
  f.corpus = parse_documents(corpus_path);
  f.vocab = read_vocabulary(dir / "vocab.tsv");
  f.matrix = read_matrix(dir / "matrix.tsv", dir / "doc_ids.txt", f.vocab.size());
  f.model = load_model(dir / "model");
  if (f.model.vocab_checksum != f.vocab.checksum())
    throw DataError(dir.string() + ": model was fitted on a different vocabulary");
  if (f.model.documents() != f.matrix.documents() || f.matrix.documents() != f.corpus.size())
    throw DataError(dir.string() + ": model, matrix and corpus disagree on the number of documents");
  f.labels = topic_labels(prefix, f.model.phi.rows());
  return f;
}

void write_relevance(const std::vector<std::vector<RankedTerm>>& terms, const std::vector<std::string>& labels,
                     const fs::path& path) {
  std::string out = "topic\trank\tterm\tscore\n";
  for (std::size_t k = 0; k < terms.size(); ++k)
    for (std::size_t r = 0; r < terms[k].size(); ++r)
      out += labels[k] + '\t' + std::to_string(r + 1) + '\t' + terms[k][r].term + '\t' + io::fmt(terms[k][r].score) + '\n';
  io::write_file(path, out);
}

std::vector<std::vector<RankedTerm>> read_relevance(const fs::path& path, const std::vector<std::string>& labels) {
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < labels.size(); ++k) index[labels[k]] = k;
  std::vector<std::vector<RankedTerm>> out(labels.size());
  const auto all = io::lines(io::read_file(path));
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i].empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    const auto f = io::split(all[i], '\t');
    if (f.size() != 4) throw DataError(where + ": expected 4 columns");
    const auto it = index.find(std::string(f[0]));
    if (it == index.end()) throw DataError(where + ": unknown topic label");
    out[it->second].push_back({0, std::string(f[2]), io::parse_double(f[3], where)});
  }
  return out;
}

// Geometry and analytics for one fitted corpus.
void map_corpus(const FittedCorpus& f, const PipelineConfig& c, double characteristic_t, const fs::path& dir,
                const std::optional<ClusterAssignment>& clusters, const CategoryGrouping& grouping) {
  const auto weights = corpus_topic_weights(f.model, f.matrix);
  {
    std::string out = "topic\tweight\n";
    for (Eigen::Index k = 0; k < weights.size(); ++k)
      out += f.labels[static_cast<std::size_t>(k)] + '\t' + io::fmt(weights(k)) + '\n';
    io::write_file(dir / "weights.tsv", out);
  }

  auto distances = topic_distance_matrix(f.model);
  distances.row_labels = distances.col_labels = f.labels;
  write_distance_matrix(distances, dir / "distances.tsv");
  const auto layout = pcoa_layout(distances, weights);
  write_layout(layout, f.labels, dir / "layout.tsv");
  write_json(dir / "layout_stats.json",
             {{"stress", layout.stress},
              {"eigenvalues", std::vector<double>(layout.eigenvalues.data(),
                                                  layout.eigenvalues.data() + layout.eigenvalues.size())}});

  std::vector<std::vector<RankedTerm>> terms;
  for (int k = 0; k < f.model.topics; ++k) terms.push_back(relevant_terms(f.model, f.matrix, f.vocab, k, c.relevance));
  write_relevance(terms, f.labels, dir / "relevance.tsv");

  const std::span<const int> lengths(f.matrix.doc_lengths);
  write_cooccurrence(cooccurrence_graph(f.model.theta, c.cooccurrence_threshold, lengths), dir / "cooccurrence.tsv");

  const auto stats = specialization_stats(f.model.theta, lengths, c.high_threshold, c.core_threshold);
  write_json(dir / "specialization.json", {{"documents", stats.documents},
                                           {"high_threshold", c.high_threshold},
                                           {"core_threshold", c.core_threshold},
                                           {"fraction_above_high", stats.frac_above_high},
                                           {"fraction_above_core", stats.frac_above_core},
                                           {"core_sizes", stats.core_sizes}});

  const auto chars = characteristic_documents(f.model.theta, characteristic_t, lengths);
  write_characteristic(chars, f.corpus, f.labels, dir / "characteristic.tsv");
  write_json(dir / "characteristic_summary.json", {{"threshold", characteristic_t}, {"coverage", chars.coverage}});

  std::vector<std::optional<int>> years;
  std::vector<std::vector<std::string>> categories;
  for (const auto& d : f.corpus.documents) {
    years.push_back(d.year);
    categories.push_back(d.categories);
  }
  if (std::any_of(years.begin(), years.end(), [](const auto& y) { return y.has_value(); }))
    write_trends(temporal_trends(f.model.theta, lengths, years), dir / "trends.tsv");
  write_profiles(category_profiles(f.model.theta, lengths, categories, grouping), f.labels, dir / "profiles.tsv");

  if (clusters && !clusters->empty()) {
    const auto pseudo = cluster_pseudo_topics(f.corpus, *clusters, f.vocab);
    UnionVocab self = union_vocabulary(f.vocab, f.vocab);
    auto cross = cross_distances(pseudo.as_model(), f.model, self);
    cross.row_labels = pseudo.clusters;
    cross.col_labels = f.labels;
    write_distance_matrix(cross, dir / "pseudo_topic_distances.tsv");
  }
}

std::vector<ManifestEntry> collect_files(const fs::path& root, const fs::path& dir, const std::string& stage) {
  std::vector<ManifestEntry> out;
  if (!fs::exists(dir)) return out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    out.push_back({fs::relative(e.path(), root).generic_string(), stage, sha256_file(e.path()), e.file_size()});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
  return out;
}

void write_manifest(const Manifest& m, const fs::path& path) {
  json j;
  j["status"] = m.status;
  if (!m.failed_stage.empty()) {
    j["failed_stage"] = m.failed_stage;
    j["error"] = m.error;
  }
  json files = json::array();
  for (const auto& e : m.entries)
    files.push_back({{"path", e.path}, {"stage", e.stage}, {"sha256", e.sha256}, {"bytes", e.bytes}});
  j["files"] = files;
  write_json(path, j);
}

class Runner {
 public:
  Runner(const PipelineConfig& c, const ProgressLog& log) : c_(c), log_(log), out_(c.output) {}

  void run(Stage stage) {
    switch (stage) {
      case Stage::ingest: ingest(); break;
      case Stage::delineate: delineate(); break;
      case Stage::fit: fit_stage(); break;
      case Stage::map: map(); break;
      case Stage::align: align(); break;
      case Stage::zoom: zoom(); break;
      case Stage::report: report(); break;
    }
  }

 private:
  void say(const std::string& msg) const {
    if (log_) log_(msg);
  }

  std::optional<ClusterAssignment> clusters() const {
    if (!c_.clusters) return std::nullopt;
    return read_cluster_assignment(*c_.clusters);
  }

  CategoryGrouping grouping() const {
    return c_.category_groups ? read_category_grouping(*c_.category_groups) : CategoryGrouping{};
  }

  void ingest() {
    const auto dir = out_ / "ingest";
    auto supply = parse_documents(c_.supply.corpus);
    const auto demand = parse_documents(c_.demand.corpus);
    const auto seeds = c_.seed_ids ? read_seed_ids(*c_.seed_ids) : match_seed(supply, c_.seed_pattern);
    supply = mark_seeds(std::move(supply), seeds);
    write_documents(supply, dir / "supply.jsonl");
    write_documents(demand, dir / "demand.jsonl");
    write_seed_ids(seeds, dir / "seeds.txt");
    write_json(dir / "summary.json",
               {{"supply_documents", supply.size()},
                {"supply_with_text", filter_with_text(supply).size()},
                {"demand_documents", demand.size()},
                {"seed_documents", seeds.size()},
                {"seed_source", c_.seed_ids ? "seed-id file" : "pattern " + c_.seed_pattern}});
    say("ingested " + std::to_string(supply.size()) + " supply and " + std::to_string(demand.size()) +
        " demand documents; " + std::to_string(seeds.size()) + " seeds");
  }

  void delineate() {
    const auto dir = out_ / "delineate";
    const auto supply = parse_documents(out_ / "ingest" / "supply.jsonl");
    const auto demand = parse_documents(out_ / "ingest" / "demand.jsonl");
    const auto seeds = read_seed_ids(out_ / "ingest" / "seeds.txt");

    Corpus selected;
    json summary;
    if (const auto assignment = clusters()) {
      const auto fractions = cluster_seed_fractions(*assignment, seeds);
      std::string tsv = "cluster\tmembers\tseed_fraction\n";
      for (const auto& [cluster, fraction] : fractions)
        tsv += cluster + '\t' + std::to_string(assignment->cluster_sizes().at(cluster)) + '\t' + io::fmt(fraction) + '\n';
      io::write_file(dir / "cluster_fractions.tsv", tsv);
      auto result = expand_corpus(supply, seeds, *assignment, c_.delineation);
      summary["mode"] = "cluster expansion";
      summary["alpha"] = c_.delineation.alpha;
      summary["clusters_included"] = result.included_clusters.size();
      selected = std::move(result.corpus);
    } else if (!seeds.empty()) {
      selected.name = supply.name;
      for (const auto& d : supply.documents)
        if (seeds.contains(d.id)) selected.documents.push_back(d);
      selected = filter_with_text(selected);
      selected.provenance_note = "seed documents with text";
      summary["mode"] = "seed documents";
    } else {
      selected = filter_with_text(supply);
      selected.provenance_note = "all documents with text";
      summary["mode"] = "whole corpus";
    }
    if (selected.documents.empty()) throw DataError("delineated supply corpus is empty");
    summary["documents"] = selected.size();
    summary["provenance"] = selected.provenance_note;
    write_documents(selected, dir / "supply.jsonl");
    write_documents(filter_with_text(demand), dir / "demand.jsonl");
    write_json(dir / "summary.json", summary);
    say("delineated supply corpus: " + std::to_string(selected.size()) + " documents");
  }

  void fit_stage() {
    const auto stoplist = load_stoplist(c_);
    for (const Side& side : {Side{&c_.supply, "supply"}, Side{&c_.demand, "demand"}}) {
      const auto& s = *side.settings;
      const auto corpus = parse_documents(out_ / "delineate" / (side.name + ".jsonl"));
      fit_corpus(corpus, stoplist, s.min_df, s.topics, s.alpha, s.beta, s.iterations, s.seed, out_ / "fit" / side.name,
                 log_);
    }
  }

  FittedCorpus fitted(const std::string& side, const std::string& prefix) const {
    return load_fitted(out_ / "delineate" / (side + ".jsonl"), out_ / "fit" / side, prefix);
  }

  void map() {
    const auto assignment = clusters();
    const auto groups = grouping();
    map_corpus(fitted("supply", c_.supply.label_prefix), c_, c_.supply.characteristic_threshold, out_ / "map" / "supply",
               assignment, groups);
    map_corpus(fitted("demand", c_.demand.label_prefix), c_, c_.demand.characteristic_threshold, out_ / "map" / "demand",
               std::nullopt, groups);
  }

  void align() {
    const auto dir = out_ / "align";
    const auto a = fitted("supply", c_.supply.label_prefix);
    const auto b = fitted("demand", c_.demand.label_prefix);
    const auto uv = union_vocabulary(a.vocab, b.vocab);
    write_union_vocab(uv, dir / "union_vocab.tsv");
    const auto cross = cross_distances(a.model, b.model, uv, c_.supply.label_prefix, c_.demand.label_prefix);
    write_distance_matrix(cross, dir / "cross_distances.tsv");
    const auto result = alignment_summary(cross, {c_.align_threshold, c_.align_top_n});
    write_alignment_json(result, dir / "alignment.json");
    write_alignment_tsv(result, dir / "alignment_matrix.tsv");
    write_json(dir / "summary.json", {{"union_terms", uv.size()},
                                      {"supply_terms", uv.map_a.size()},
                                      {"demand_terms", uv.map_b.size()},
                                      {"shared_terms", uv.shared_count},
                                      {"pairs", result.pairs.size()},
                                      {"grand_mean", result.grand_mean}});
    say("aligned " + std::to_string(cross.rows()) + " x " + std::to_string(cross.cols()) + " topics; " +
        std::to_string(uv.shared_count) + " shared terms");
  }

  void zoom() {
    const auto dir = out_ / "zoom";
    if (!c_.zoom.enabled) {
      write_json(dir / "summary.json", {{"enabled", false}});
      return;
    }
    const auto parent = fitted("supply", c_.supply.label_prefix);
    auto sub = extract_subcorpus(parent.corpus, parent.model.theta, c_.zoom.topics, c_.zoom.threshold);
    write_documents(sub, dir / "corpus.jsonl");
    json summary = {{"enabled", true},
                    {"documents", sub.size()},
                    {"parent_documents", parent.corpus.size()},
                    {"fraction", parent.corpus.size() ? static_cast<double>(sub.size()) / parent.corpus.size() : 0.0},
                    {"provenance", sub.provenance_note}};
    if (sub.documents.empty()) {
      say("warning: zoom sub-corpus is empty; skipping refit");
      summary["warning"] = "empty sub-corpus";
      write_json(dir / "summary.json", summary);
      return;
    }
    write_json(dir / "summary.json", summary);
    fit_corpus(sub, load_stoplist(c_), c_.zoom.min_df.value_or(c_.supply.min_df), c_.zoom.refit_topics, std::nullopt,
               c_.supply.beta, c_.zoom.iterations, c_.zoom.seed, dir / "fit", log_);
    const auto f = load_fitted(dir / "corpus.jsonl", dir / "fit", c_.zoom.label_prefix);
    map_corpus(f, c_, c_.zoom.characteristic_threshold, dir / "map", std::nullopt, grouping());
  }

  void report_map(const fs::path& map_dir, const std::string& title, const fs::path& stem) {
    auto layout = read_layout(map_dir / "layout.tsv");
    std::vector<std::string> labels;
    const auto all = io::lines(io::read_file(map_dir / "layout.tsv"));
    for (std::size_t i = 1; i < all.size(); ++i)
      if (!all[i].empty()) labels.emplace_back(io::split(all[i], '\t')[0]);
    const auto terms = read_relevance(map_dir / "relevance.tsv", labels);
    emit_map(layout, labels, terms, stem, title);
  }

  void report() {
    const auto dir = out_ / "report";
    report_map(out_ / "map" / "supply", "Supply topics", dir / "supply_map");
    report_map(out_ / "map" / "demand", "Demand topics", dir / "demand_map");
    if (fs::exists(out_ / "zoom" / "map" / "layout.tsv"))
      report_map(out_ / "zoom" / "map", "Zoomed supply topics", dir / "zoom_map");

    const auto result = read_alignment_json(out_ / "align" / "alignment.json");
    const auto la = read_layout(out_ / "map" / "supply" / "layout.tsv");
    const auto lb = read_layout(out_ / "map" / "demand" / "layout.tsv");
    emit_alignment_report(result, la, lb, result.cross.row_labels, result.cross.col_labels, dir);

    if (!c_.emit_svg)
      for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".svg") fs::remove(e.path());
    if (!c_.emit_html)
      for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".html") fs::remove(e.path());
  }

  const PipelineConfig& c_;
  const ProgressLog& log_;
  fs::path out_;
};

template <typename E>
[[noreturn]] void rethrow_in_stage(const std::string& stage, const E& e) {
  throw E("stage " + stage + ": " + e.what());
}

}  // namespace

Manifest read_manifest(const fs::path& path) {
  Manifest m;
  try {
    const auto j = json::parse(io::read_file(path));
    m.status = j.at("status").get<std::string>();
    m.failed_stage = get_or<std::string>(j, "failed_stage", "");
    m.error = get_or<std::string>(j, "error", "");
    for (const auto& e : j.at("files"))
      m.entries.push_back({e.at("path").get<std::string>(), e.at("stage").get<std::string>(),
                           e.at("sha256").get<std::string>(), e.at("bytes").get<std::uintmax_t>()});
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return m;
}

Manifest run_pipeline(const PipelineConfig& config, const std::vector<Stage>& stages, const ProgressLog& log) {
  config.validate();
  config.check_inputs();
  fs::create_directories(config.output);
  const auto manifest_path = config.output / "manifest.json";

  Manifest manifest;
  if (fs::exists(manifest_path)) {
    manifest = read_manifest(manifest_path);
    manifest.status = "OK";
    manifest.failed_stage.clear();
    manifest.error.clear();
  }

  Runner runner(config, log);
  for (const auto stage : stages) {
    const auto name = stage_name(stage);
    const auto stage_dir = config.output / name;
    if (fs::exists(stage_dir)) fs::remove_all(stage_dir);
    std::erase_if(manifest.entries, [&](const ManifestEntry& e) { return e.stage == name; });
    if (log) log("stage " + name);

    auto fail = [&](const std::exception& e) {
      auto partial = collect_files(config.output, stage_dir, name);
      manifest.entries.insert(manifest.entries.end(), partial.begin(), partial.end());
      manifest.status = "FAILED";
      manifest.failed_stage = name;
      manifest.error = e.what();
      write_manifest(manifest, manifest_path);
    };
    try {
      runner.run(stage);
    } catch (const ConfigError& e) {
      fail(e);
      rethrow_in_stage(name, e);
    } catch (const DataError& e) {
      fail(e);
      rethrow_in_stage(name, e);
    } catch (const NumericError& e) {
      fail(e);
      rethrow_in_stage(name, e);
    } catch (const std::exception& e) {
      fail(e);
      throw std::runtime_error("stage " + name + ": " + e.what());
    }

    auto files = collect_files(config.output, stage_dir, name);
    manifest.entries.insert(manifest.entries.end(), files.begin(), files.end());
    std::sort(manifest.entries.begin(), manifest.entries.end(),
              [](const auto& a, const auto& b) { return a.path < b.path; });
    write_manifest(manifest, manifest_path);
  }
  return manifest;
}

}  // namespace topicalign
