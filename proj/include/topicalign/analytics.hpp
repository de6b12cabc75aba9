#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "topicalign/corpus.hpp"
#include "topicalign/delineation.hpp"
#include "topicalign/topicmodel.hpp"
#include "topicalign/types.hpp"
#include "topicalign/vocab.hpp"

namespace topicalign {

// Several functions take optional per-document token counts. When given,
// documents with zero in-vocabulary tokens are ignored (their theta rows are
// the uninformative uniform prior). When empty, every row counts.

struct CooccurrenceEdge {
  int a = 0;  // a < b
  int b = 0;
  long long documents = 0;

  bool operator==(const CooccurrenceEdge&) const = default;
};

struct CooccurrenceGraph {
  int topics = 0;
  double threshold = 0.0;
  std::vector<CooccurrenceEdge> edges;  // ordered by (a, b)
};

/// Edge (i, j) counts the documents with theta_di >= t and theta_dj >= t.
CooccurrenceGraph cooccurrence_graph(const RowMatrixXd& theta, double t, std::span<const int> doc_lengths = {});

struct SpecializationStats {
  std::size_t documents = 0;
  double frac_above_high = 0.0;  // max weight > high threshold (0.75)
  double frac_above_core = 0.0;  // max weight > core threshold (0.5)
  std::vector<long long> core_sizes;  // per topic, weight > core threshold
};

SpecializationStats specialization_stats(const RowMatrixXd& theta, std::span<const int> doc_lengths = {},
                                         double high = 0.75, double core = 0.5);

struct CharacteristicEntry {
  std::size_t doc = 0;
  double weight = 0.0;

  bool operator==(const CharacteristicEntry&) const = default;
};

struct CharacteristicDocuments {
  double threshold = 0.0;
  std::vector<std::vector<CharacteristicEntry>> per_topic;  // descending weight, ties by doc index
  double coverage = 0.0;  // share of considered documents listed under some topic
};

/// Documents with theta_dk > t, listed per topic.
CharacteristicDocuments characteristic_documents(const RowMatrixXd& theta, double t,
                                                 std::span<const int> doc_lengths = {});

enum class TrendWeighting { tokens, documents };

struct TrendTable {
  std::vector<int> years;           // ascending
  RowMatrixXd weights;              // years x K, rows sum to one
  RowMatrixXd relative_change;      // (w_y - w_first) / w_first
  std::vector<double> totals;       // tokens (or documents) per year
  std::size_t excluded = 0;         // documents without a year or with no tokens
};

/// Per-year topic weights. Throws DataError when no document carries a year.
TrendTable temporal_trends(const RowMatrixXd& theta, std::span<const int> doc_lengths,
                           const std::vector<std::optional<int>>& years,
                           TrendWeighting weighting = TrendWeighting::tokens);

inline const std::string kUnclassified = "unclassified";

/// category -> group; categories without an entry fall into "unclassified".
using CategoryGrouping = std::map<std::string, std::string>;

/// Two-column TSV `category<TAB>group`, no header.
CategoryGrouping read_category_grouping(const std::filesystem::path& path);

struct ProfileMatrix {
  std::vector<std::string> groups;  // sorted
  RowMatrixXd weights;              // K x groups, rows sum to one
  VectorXd overall;                 // whole-corpus profile
};

/// Fractional counting: document d with m categories adds n_d * theta_dk / m
/// to cell (k, group(category)). An empty grouping maps each category to itself.
ProfileMatrix category_profiles(const RowMatrixXd& theta, std::span<const int> doc_lengths,
                                const std::vector<std::vector<std::string>>& doc_categories,
                                const CategoryGrouping& grouping);

/// Documents with theta_dk > t for any k in `topics`. The result's
/// provenance note records the topics, t and the fraction retained; an empty
/// result is returned as an empty corpus.
Corpus extract_subcorpus(const Corpus& corpus, const RowMatrixXd& theta, const std::set<int>& topics, double t);

struct PseudoTopics {
  std::vector<std::string> clusters;  // sorted cluster ids, one per row
  RowMatrixXd phi;                    // rows sum to one
  std::vector<std::string> omitted;   // clusters with no in-vocabulary tokens
  std::string vocab_checksum;

  /// The pseudo-topics as a model with phi only, for cross_distances.
  TopicModel as_model() const;
};

/// Normalized aggregate term counts of each cluster's member documents.
/// Throws DataError when no cluster yields a row.
PseudoTopics cluster_pseudo_topics(const Corpus& corpus, const ClusterAssignment& assignment,
                                   const Vocabulary& vocab);

void write_cooccurrence(const CooccurrenceGraph& graph, const std::filesystem::path& path);
void write_trends(const TrendTable& table, const std::filesystem::path& path);
void write_profiles(const ProfileMatrix& profiles, const std::vector<std::string>& labels,
                    const std::filesystem::path& path);
void write_characteristic(const CharacteristicDocuments& docs, const Corpus& corpus,
                          const std::vector<std::string>& labels, const std::filesystem::path& path);

}  // namespace topicalign
