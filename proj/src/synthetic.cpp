#include "topicalign/synthetic.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "text_io.hpp"
#include "topicalign/error.hpp"

namespace topicalign::synthetic {

namespace {

double standard_normal(Rng& rng) {
  // Box-Muller; 1 - u keeps the log argument positive.
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int categorical(const VectorXd& p, Rng& rng) {
  double u = rng.uniform() * p.sum();
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    u -= p(i);
    if (u < 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(p.size() - 1);
}

}  // namespace

double log_gamma_variate(double shape, Rng& rng) {
  if (shape < 1.0) {
    const double u = 1.0 - rng.uniform();
    return log_gamma_variate(shape + 1.0, rng) + std::log(u) / shape;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x = 0.0, v = 0.0;
    do {
      x = standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = 1.0 - rng.uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return std::log(d * v);
  }
}

VectorXd dirichlet(int dim, double concentration, Rng& rng) {
  VectorXd logs(dim);
  for (int i = 0; i < dim; ++i) logs(i) = log_gamma_variate(concentration, rng);
  VectorXd p = (logs.array() - logs.maxCoeff()).exp();
  return p / p.sum();
}

std::string pseudo_word(std::size_t index) {
  static const char* kOnsets[] = {"b", "c", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "pr"};
  static const char* kVowels[] = {"a", "e", "i", "o", "u", "ai"};
  // Three syllables cover 16^3 * 6^3 indices; a numeric-free suffix keeps
  // larger indices distinct.
  std::string word;
  std::size_t n = index;
  for (int s = 0; s < 3; ++s) {
    word += kOnsets[n % 16];
    n /= 16;
    word += kVowels[n % 6];
    n /= 6;
  }
  while (n > 0) {
    word += kOnsets[n % 16];
    word += "x";
    n /= 16;
  }
  return word;
}

PlantedCorpus planted_lda(int topics, int vocab, int documents, int tokens_per_doc, double alpha, double beta,
                          std::uint64_t seed) {
  Rng rng(seed);
  PlantedCorpus out;
  out.phi.resize(topics, vocab);
  for (int k = 0; k < topics; ++k) out.phi.row(k) = dirichlet(vocab, beta, rng).transpose();
  out.theta.resize(documents, topics);
  for (int d = 0; d < documents; ++d) out.theta.row(d) = dirichlet(topics, alpha, rng).transpose();
  for (int w = 0; w < vocab; ++w) out.words.push_back(pseudo_word(static_cast<std::size_t>(w)));

  out.corpus.name = "planted";
  for (int d = 0; d < documents; ++d) {
    Document doc;
    doc.id = "p" + std::to_string(d);
    for (int n = 0; n < tokens_per_doc; ++n) {
      const int k = categorical(out.theta.row(d).transpose(), rng);
      const int w = categorical(out.phi.row(k).transpose(), rng);
      if (n) doc.abstract_or_body += ' ';
      doc.abstract_or_body += out.words[static_cast<std::size_t>(w)];
    }
    out.corpus.documents.push_back(std::move(doc));
  }
  return out;
}

namespace {

using json = nlohmann::ordered_json;

const char* kFiller[] = {"the", "and", "of", "in", "with", "for", "was", "were", "this", "these"};

struct CategorySpec {
  const char* category;
  const char* group;
};

const CategorySpec kCategories[] = {
    {"Biochemistry & Molecular Biology", "Biology"},
    {"Genetics & Heredity", "Biology"},
    {"Physiology", "Biology"},
    {"Endocrinology & Metabolism", "Medical Research"},
    {"Cardiac & Cardiovascular Systems", "Medical Research"},
    {"Surgery", "Medical Research"},
    {"Public, Environmental & Occupational Health", "Public Health"},
    {"Nutrition & Dietetics", "Public Health"},
    {"Pediatrics", "Public Health"},
    {"Economics", "Social"},
    {"Sociology", "Social"},
    {"Psychology, Clinical", "Psychology"},
    {"Behavioral Sciences", "Psychology"},
};

std::string sample_text(const VectorXd& theta, const RowMatrixXd& phi, const std::vector<std::string>& words,
                        int tokens, Rng& rng) {
  std::string text;
  for (int n = 0; n < tokens; ++n) {
    if (rng.uniform() < 0.15) {
      text += kFiller[rng.below(static_cast<int>(std::size(kFiller)))];
      text += ' ';
    }
    const int k = categorical(theta, rng);
    const int w = categorical(phi.row(k).transpose(), rng);
    text += words[static_cast<std::size_t>(w)];
    text += n + 1 < tokens ? " " : ".";
  }
  return text;
}

}  // namespace

void write_dataset(const DatasetOptions& o, const std::filesystem::path& dir) {
  if (o.supply_topics < 2 || o.demand_topics < 2 || o.supply_documents < 1 || o.demand_documents < 1 ||
      o.supply_vocab < 10 || o.demand_vocab < 10 || o.clusters < 1)
    throw ConfigError("synthetic dataset: sizes too small");
  Rng rng(o.seed);
  std::filesystem::create_directories(dir);

  // Supply: topics over pseudo-words; the first third of the topics carry the
  // seed vocabulary ("obesity", "obese").
  std::vector<std::string> supply_words;
  for (int w = 0; w < o.supply_vocab; ++w) supply_words.push_back(pseudo_word(static_cast<std::size_t>(w)));
  RowMatrixXd supply_phi(o.supply_topics, o.supply_vocab);
  for (int k = 0; k < o.supply_topics; ++k) supply_phi.row(k) = dirichlet(o.supply_vocab, 0.05, rng).transpose();

  const int full_docs = o.supply_documents + o.supply_documents / 5;
  const int seed_topics = std::max(1, o.supply_topics / 3);
  const int per_topic_clusters = std::max(1, o.clusters / o.supply_topics);
  Corpus supply{"supply", {}, "synthetic"};
  std::string clusters_tsv;
  for (int d = 0; d < full_docs; ++d) {
    const VectorXd theta = dirichlet(o.supply_topics, 0.08, rng);
    Eigen::Index dominant = 0;
    theta.maxCoeff(&dominant);

    Document doc;
    doc.id = "W" + std::to_string(100000 + d);
    doc.title = sample_text(theta, supply_phi, supply_words, 6, rng);
    if (rng.uniform() > 0.03) doc.abstract_or_body = sample_text(theta, supply_phi, supply_words, o.tokens_per_doc, rng);
    const double seed_mass = theta.head(seed_topics).sum();
    if (rng.uniform() < 0.9 * seed_mass) doc.abstract_or_body += rng.uniform() < 0.5 ? " obesity" : " obese adults";
    if (rng.uniform() < 0.1) doc.abstract_or_body += " (" + std::to_string(1990 + rng.below(30)) + ")";

    // Later years favour the upper half of the topics.
    const double drift = dominant >= o.supply_topics / 2 ? 0.6 : 0.0;
    doc.year = 2000 + std::min(14, static_cast<int>(15.0 * std::pow(rng.uniform(), 1.0 - drift)));

    const int first = static_cast<int>(dominant) % static_cast<int>(std::size(kCategories));
    doc.categories.push_back(kCategories[first].category);
    if (rng.uniform() < 0.35)
      doc.categories.push_back(kCategories[rng.below(static_cast<int>(std::size(kCategories)))].category);
    if (doc.categories.size() == 2 && doc.categories[0] == doc.categories[1]) doc.categories.pop_back();

    const int cluster = rng.uniform() < 0.8
                            ? static_cast<int>(dominant) * per_topic_clusters + rng.below(per_topic_clusters)
                            : rng.below(o.supply_topics * per_topic_clusters);
    doc.cluster_id = "c" + std::to_string(cluster);
    clusters_tsv += doc.id + "\tc" + std::to_string(cluster) + '\n';
    supply.documents.push_back(std::move(doc));
  }
  write_documents(supply, dir / "supply.jsonl");
  io::write_file(dir / "clusters.tsv", clusters_tsv);

  // Demand: half of its vocabulary is shared with the supply side.
  std::vector<std::string> demand_words;
  for (int w = 0; w < o.demand_vocab; ++w)
    demand_words.push_back(w < o.demand_vocab / 2 ? supply_words[static_cast<std::size_t>(w)]
                                                  : pseudo_word(static_cast<std::size_t>(o.supply_vocab + w)));
  RowMatrixXd demand_phi(o.demand_topics, o.demand_vocab);
  // Every other demand topic echoes a supply topic on the shared terms.
  const int shared = o.demand_vocab / 2;
  for (int k = 0; k < o.demand_topics; ++k) {
    VectorXd own = dirichlet(o.demand_vocab, 0.05, rng);
    if (k % 2 == 0) {
      VectorXd echo = VectorXd::Zero(o.demand_vocab);
      echo.head(shared) = supply_phi.row((k / 2) % o.supply_topics).head(shared).transpose();
      if (echo.sum() > 0) own = 0.3 * own + 0.7 * echo / echo.sum();
    }
    demand_phi.row(k) = own.transpose();
  }
  Corpus demand{"demand", {}, "synthetic"};
  for (int d = 0; d < o.demand_documents; ++d) {
    const VectorXd theta = dirichlet(o.demand_topics, 0.003, rng);
    Document doc;
    doc.id = "Q" + std::to_string(d + 1);
    doc.title = "Question on " + sample_text(theta, demand_phi, demand_words, 4, rng);
    doc.abstract_or_body = sample_text(theta, demand_phi, demand_words, o.tokens_per_doc * 3 / 4, rng);
    if (rng.uniform() < 0.5) doc.abstract_or_body += " obesity";
    doc.year = 2009 + rng.below(6);
    demand.documents.push_back(std::move(doc));
  }
  write_documents(demand, dir / "demand.jsonl");

  std::string groups;
  for (const auto& c : kCategories) groups += std::string(c.category) + '\t' + c.group + '\n';
  io::write_file(dir / "category_groups.tsv", groups);

  json config;
  config["output"] = "out";
  config["supply"] = {{"corpus", "supply.jsonl"}, {"topics", o.supply_topics}, {"iterations", o.iterations},
                      {"seed", 11}, {"alpha", 0.1}, {"beta", 0.01}, {"min_df", o.min_df}, {"label_prefix", "S"}, {"characteristic_threshold", 0.85}};
  config["demand"] = {{"corpus", "demand.jsonl"}, {"topics", o.demand_topics}, {"iterations", o.iterations},
                      {"seed", 23}, {"alpha", 0.05}, {"beta", 0.01}, {"min_df", 3}, {"label_prefix", "Q"}, {"characteristic_threshold", 0.85}};
  config["clusters"] = "clusters.tsv";
  config["category_groups"] = "category_groups.tsv";
  config["seed_pattern"] = "obes*";
  config["delineation"] = {{"alpha", 0.1}, {"keep_seed_documents", true}};
  config["relevance"] = {{"lambda", 0.6}, {"top_n", 20}};
  config["alignment"] = {{"threshold", 0.5}, {"top_n", 23}};
  config["analytics"] = {{"cooccurrence_threshold", 0.25}, {"core_threshold", 0.5}, {"high_threshold", 0.75}};
  config["zoom"] = {{"topics", {1, 2}}, {"threshold", 0.25}, {"topics_refit", 10}, {"iterations", o.iterations},
                    {"characteristic_threshold", 0.9}, {"label_prefix", "U"}};
  config["reports"] = {{"svg", true}, {"html", true}};
  io::write_file(dir / "config.json", config.dump(2) + '\n');
}

}  // namespace topicalign::synthetic
