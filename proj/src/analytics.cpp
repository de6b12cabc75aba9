#include "topicalign/analytics.hpp"

#include <algorithm>
#include <sstream>

#include "text_io.hpp"
#include "topicalign/error.hpp"

namespace topicalign {

namespace {

bool counted(std::span<const int> lengths, Eigen::Index d) {
  return lengths.empty() || lengths[static_cast<std::size_t>(d)] > 0;
}

void check_lengths(const RowMatrixXd& theta, std::span<const int> lengths, const char* who) {
  if (!lengths.empty() && static_cast<Eigen::Index>(lengths.size()) != theta.rows())
    throw DataError(std::string(who) + ": document lengths do not match theta rows");
}

void check_open_unit(double t, const char* who) {
  if (!(t > 0.0 && t < 1.0)) throw ConfigError(std::string(who) + ": threshold must lie in (0, 1)");
}

}  // namespace

CooccurrenceGraph cooccurrence_graph(const RowMatrixXd& theta, double t, std::span<const int> doc_lengths) {
  check_open_unit(t, "cooccurrence_graph");
  check_lengths(theta, doc_lengths, "cooccurrence_graph");
  const auto K = theta.cols();
  std::vector<long long> counts(static_cast<std::size_t>(K * K), 0);
  std::vector<Eigen::Index> members;
  for (Eigen::Index d = 0; d < theta.rows(); ++d) {
    if (!counted(doc_lengths, d)) continue;
    members.clear();
    for (Eigen::Index k = 0; k < K; ++k)
      if (theta(d, k) >= t) members.push_back(k);
    for (std::size_t x = 0; x < members.size(); ++x)
      for (std::size_t y = x + 1; y < members.size(); ++y) ++counts[static_cast<std::size_t>(members[x] * K + members[y])];
  }
  CooccurrenceGraph g;
  g.topics = static_cast<int>(K);
  g.threshold = t;
  for (Eigen::Index i = 0; i < K; ++i)
    for (Eigen::Index j = i + 1; j < K; ++j)
      if (const auto c = counts[static_cast<std::size_t>(i * K + j)]; c > 0)
        g.edges.push_back({static_cast<int>(i), static_cast<int>(j), c});
  return g;
}

SpecializationStats specialization_stats(const RowMatrixXd& theta, std::span<const int> doc_lengths, double high,
                                         double core) {
  check_lengths(theta, doc_lengths, "specialization_stats");
  SpecializationStats s;
  s.core_sizes.assign(static_cast<std::size_t>(theta.cols()), 0);
  std::size_t above_high = 0, above_core = 0;
  for (Eigen::Index d = 0; d < theta.rows(); ++d) {
    if (!counted(doc_lengths, d)) continue;
    ++s.documents;
    const double top = theta.row(d).maxCoeff();
    if (top > high) ++above_high;
    if (top > core) ++above_core;
    for (Eigen::Index k = 0; k < theta.cols(); ++k)
      if (theta(d, k) > core) ++s.core_sizes[static_cast<std::size_t>(k)];
  }
  if (s.documents > 0) {
    s.frac_above_high = static_cast<double>(above_high) / static_cast<double>(s.documents);
    s.frac_above_core = static_cast<double>(above_core) / static_cast<double>(s.documents);
  }
  return s;
}

CharacteristicDocuments characteristic_documents(const RowMatrixXd& theta, double t, std::span<const int> doc_lengths) {
  check_open_unit(t, "characteristic_documents");
  check_lengths(theta, doc_lengths, "characteristic_documents");
  CharacteristicDocuments out;
  out.threshold = t;
  out.per_topic.resize(static_cast<std::size_t>(theta.cols()));
  std::size_t considered = 0, covered = 0;
  for (Eigen::Index d = 0; d < theta.rows(); ++d) {
    if (!counted(doc_lengths, d)) continue;
    ++considered;
    bool any = false;
    for (Eigen::Index k = 0; k < theta.cols(); ++k)
      if (theta(d, k) > t) {
        out.per_topic[static_cast<std::size_t>(k)].push_back({static_cast<std::size_t>(d), theta(d, k)});
        any = true;
      }
    if (any) ++covered;
  }
  for (auto& list : out.per_topic)
    std::stable_sort(list.begin(), list.end(),
                     [](const CharacteristicEntry& a, const CharacteristicEntry& b) { return a.weight > b.weight; });
  out.coverage = considered ? static_cast<double>(covered) / static_cast<double>(considered) : 0.0;
  return out;
}

TrendTable temporal_trends(const RowMatrixXd& theta, std::span<const int> doc_lengths,
                           const std::vector<std::optional<int>>& years, TrendWeighting weighting) {
  if (static_cast<Eigen::Index>(years.size()) != theta.rows() ||
      static_cast<Eigen::Index>(doc_lengths.size()) != theta.rows())
    throw DataError("temporal_trends: years, lengths and theta rows differ in count");

  std::map<int, std::pair<VectorXd, double>> by_year;
  TrendTable table;
  for (Eigen::Index d = 0; d < theta.rows(); ++d) {
    const auto n = doc_lengths[static_cast<std::size_t>(d)];
    const auto& y = years[static_cast<std::size_t>(d)];
    if (!y || n <= 0) {
      ++table.excluded;
      continue;
    }
    const double w = weighting == TrendWeighting::tokens ? static_cast<double>(n) : 1.0;
    auto [it, inserted] = by_year.try_emplace(*y, VectorXd::Zero(theta.cols()), 0.0);
    it->second.first += w * theta.row(d).transpose();
    it->second.second += w;
  }
  if (by_year.empty()) throw DataError("temporal_trends: no document carries a year");

  const auto Y = static_cast<Eigen::Index>(by_year.size());
  table.weights.resize(Y, theta.cols());
  Eigen::Index row = 0;
  for (const auto& [year, acc] : by_year) {
    table.years.push_back(year);
    table.totals.push_back(acc.second);
    table.weights.row(row++) = acc.first.transpose() / acc.second;
  }
  table.relative_change = (table.weights.rowwise() - table.weights.row(0)).array().rowwise() /
                          table.weights.row(0).array();
  return table;
}

CategoryGrouping read_category_grouping(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw DataError("category grouping not found: " + path.string());
  CategoryGrouping g;
  const auto all = io::lines(io::read_file(path));
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i].empty() || all[i].starts_with('#')) continue;
    const auto f = io::split(all[i], '\t');
    if (f.size() != 2) throw DataError(path.string() + ":" + std::to_string(i + 1) + ": expected 'category<TAB>group'");
    g[std::string(f[0])] = std::string(f[1]);
  }
  return g;
}

ProfileMatrix category_profiles(const RowMatrixXd& theta, std::span<const int> doc_lengths,
                                const std::vector<std::vector<std::string>>& doc_categories,
                                const CategoryGrouping& grouping) {
  if (static_cast<Eigen::Index>(doc_categories.size()) != theta.rows() ||
      static_cast<Eigen::Index>(doc_lengths.size()) != theta.rows())
    throw DataError("category_profiles: categories, lengths and theta rows differ in count");

  auto group_of = [&](const std::string& category) -> std::string {
    if (grouping.empty()) return category;
    const auto it = grouping.find(category);
    return it == grouping.end() ? kUnclassified : it->second;
  };

  std::set<std::string> names;
  for (const auto& cats : doc_categories) {
    if (cats.empty()) names.insert(kUnclassified);
    for (const auto& c : cats) names.insert(group_of(c));
  }
  ProfileMatrix p;
  p.groups.assign(names.begin(), names.end());
  std::map<std::string, Eigen::Index> column;
  for (std::size_t g = 0; g < p.groups.size(); ++g) column[p.groups[g]] = static_cast<Eigen::Index>(g);

  RowMatrixXd mass = RowMatrixXd::Zero(theta.cols(), static_cast<Eigen::Index>(p.groups.size()));
  for (Eigen::Index d = 0; d < theta.rows(); ++d) {
    const double n = doc_lengths[static_cast<std::size_t>(d)];
    if (n <= 0) continue;
    const auto& cats = doc_categories[static_cast<std::size_t>(d)];
    if (cats.empty()) {
      mass.col(column.at(kUnclassified)) += n * theta.row(d).transpose();
      continue;
    }
    const double share = n / static_cast<double>(cats.size());
    for (const auto& c : cats) mass.col(column.at(group_of(c))) += share * theta.row(d).transpose();
  }
  const VectorXd topic_totals = mass.rowwise().sum();
  if ((topic_totals.array() <= 0.0).any()) throw DataError("category_profiles: corpus has no tokens");
  p.weights = mass.array().colwise() / topic_totals.array();
  p.overall = mass.colwise().sum().transpose() / mass.sum();
  return p;
}

Corpus extract_subcorpus(const Corpus& corpus, const RowMatrixXd& theta, const std::set<int>& topics, double t) {
  check_open_unit(t, "extract_subcorpus");
  if (topics.empty()) throw ConfigError("extract_subcorpus: no topics selected");
  if (static_cast<Eigen::Index>(corpus.size()) != theta.rows())
    throw DataError("extract_subcorpus: corpus and theta differ in document count");
  for (const int k : topics)
    if (k < 0 || k >= theta.cols()) throw ConfigError("extract_subcorpus: topic index out of range");

  Corpus out{corpus.name + "-sub", {}, {}};
  for (Eigen::Index d = 0; d < theta.rows(); ++d)
    if (std::any_of(topics.begin(), topics.end(), [&](int k) { return theta(d, k) > t; }))
      out.documents.push_back(corpus.documents[static_cast<std::size_t>(d)]);

  std::ostringstream note;
  note << "subcorpus topics=";
  bool first = true;
  for (const int k : topics) {
    note << (first ? "" : ",") << k;
    first = false;
  }
  note << " threshold=" << io::fmt(t) << " documents=" << out.size() << " fraction="
       << io::fmt(corpus.size() ? static_cast<double>(out.size()) / static_cast<double>(corpus.size()) : 0.0);
  if (out.documents.empty()) note << " (empty)";
  out.provenance_note = note.str();
  return out;
}

TopicModel PseudoTopics::as_model() const {
  TopicModel m;
  m.topics = static_cast<int>(phi.rows());
  m.phi = phi;
  m.vocab_checksum = vocab_checksum;
  return m;
}

PseudoTopics cluster_pseudo_topics(const Corpus& corpus, const ClusterAssignment& assignment,
                                   const Vocabulary& vocab) {
  const auto matrix = count_matrix(corpus, vocab);
  std::map<std::string, VectorXd> sums;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    const auto it = assignment.membership().find(corpus.documents[d].id);
    if (it == assignment.membership().end()) continue;
    auto [acc, inserted] = sums.try_emplace(it->second, VectorXd::Zero(static_cast<Eigen::Index>(vocab.size())));
    for (const auto& [t, c] : matrix.rows[d]) acc->second(static_cast<Eigen::Index>(t)) += c;
  }

  PseudoTopics out;
  out.vocab_checksum = vocab.checksum();
  std::vector<VectorXd> rows;
  for (const auto& [cluster, size] : assignment.cluster_sizes()) {
    const auto it = sums.find(cluster);
    if (it == sums.end() || it->second.sum() <= 0.0) {
      out.omitted.push_back(cluster);
      continue;
    }
    out.clusters.push_back(cluster);
    rows.push_back(it->second / it->second.sum());
  }
  if (rows.empty()) throw DataError("cluster_pseudo_topics: no cluster has in-vocabulary tokens");
  out.phi.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(vocab.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out.phi.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return out;
}

void write_cooccurrence(const CooccurrenceGraph& graph, const std::filesystem::path& path) {
  std::string out = "topic_a\ttopic_b\tdocuments\n";
  for (const auto& e : graph.edges)
    out += std::to_string(e.a) + '\t' + std::to_string(e.b) + '\t' + std::to_string(e.documents) + '\n';
  io::write_file(path, out);
}

void write_trends(const TrendTable& table, const std::filesystem::path& path) {
  std::string out = "year\ttotal";
  for (Eigen::Index k = 0; k < table.weights.cols(); ++k) out += "\tw" + std::to_string(k);
  for (Eigen::Index k = 0; k < table.weights.cols(); ++k) out += "\tchange" + std::to_string(k);
  out += '\n';
  for (std::size_t y = 0; y < table.years.size(); ++y) {
    const auto r = static_cast<Eigen::Index>(y);
    out += std::to_string(table.years[y]) + '\t' + io::fmt(table.totals[y]);
    for (Eigen::Index k = 0; k < table.weights.cols(); ++k) out += '\t' + io::fmt(table.weights(r, k));
    for (Eigen::Index k = 0; k < table.weights.cols(); ++k) out += '\t' + io::fmt(table.relative_change(r, k));
    out += '\n';
  }
  io::write_file(path, out);
}

void write_profiles(const ProfileMatrix& profiles, const std::vector<std::string>& labels,
                    const std::filesystem::path& path) {
  std::string out = "topic";
  for (const auto& g : profiles.groups) out += '\t' + g;
  out += '\n';
  for (Eigen::Index k = 0; k < profiles.weights.rows(); ++k) {
    out += labels.at(static_cast<std::size_t>(k));
    for (Eigen::Index g = 0; g < profiles.weights.cols(); ++g) out += '\t' + io::fmt(profiles.weights(k, g));
    out += '\n';
  }
  out += "all";
  for (Eigen::Index g = 0; g < profiles.overall.size(); ++g) out += '\t' + io::fmt(profiles.overall(g));
  out += '\n';
  io::write_file(path, out);
}

void write_characteristic(const CharacteristicDocuments& docs, const Corpus& corpus,
                          const std::vector<std::string>& labels, const std::filesystem::path& path) {
  std::string out = "topic\tdoc_id\tweight\ttitle\n";
  for (std::size_t k = 0; k < docs.per_topic.size(); ++k)
    for (const auto& e : docs.per_topic[k]) {
      std::string title = corpus.documents.at(e.doc).title;
      std::replace_if(title.begin(), title.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
      out += labels.at(k) + '\t' + corpus.documents[e.doc].id + '\t' + io::fmt(e.weight) + '\t' + title + '\n';
    }
  io::write_file(path, out);
}

}  // namespace topicalign
