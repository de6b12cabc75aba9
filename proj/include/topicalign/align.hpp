#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "topicalign/geometry.hpp"
#include "topicalign/topicmodel.hpp"
#include "topicalign/vocab.hpp"

namespace topicalign {

/// Concatenated vocabulary of two corpora with maps from each source index
/// into the union.
struct UnionVocab {
  std::vector<std::string> terms;
  std::vector<std::size_t> map_a;
  std::vector<std::size_t> map_b;
  std::size_t shared_count = 0;
  std::string checksum_a;
  std::string checksum_b;

  std::size_t size() const { return terms.size(); }
};

UnionVocab union_vocabulary(const Vocabulary& vocab_a, const Vocabulary& vocab_b);

/// Places the mass of a source distribution at its union indices.
VectorXd embed_topic(const Eigen::Ref<const VectorXd>& phi_row, const std::vector<std::size_t>& map,
                     std::size_t union_size);

/// K_A x K_B JSD matrix between topics embedded in the union vocabulary.
/// Throws DataError when a model's vocabulary checksum differs from the one
/// the union was built from.
DistanceMatrix cross_distances(const TopicModel& model_a, const TopicModel& model_b, const UnionVocab& uv,
                               const std::string& prefix_a = "A", const std::string& prefix_b = "B");

struct TopicPair {
  int topic_a = 0;
  int topic_b = 0;
  double distance = 0.0;

  bool operator==(const TopicPair&) const = default;
};

/// How the edges between the two topic maps are chosen.
struct PairSelection {
  double threshold = 0.5;
  /// When set, the `top_n` smallest entries are selected and threshold is ignored.
  std::optional<int> top_n;
};

struct AlignmentResult {
  DistanceMatrix cross;
  VectorXd row_means;
  VectorXd col_means;
  double grand_mean = 0.0;
  PairSelection selection;
  std::vector<TopicPair> pairs;  // ascending distance, ties by (row, col)
  std::vector<bool> echo_a;
  std::vector<bool> echo_b;
};

/// Marginal means, selected pairs and echo flags (a topic echoes when its
/// marginal mean is below the grand mean).
AlignmentResult alignment_summary(const DistanceMatrix& cross, const PairSelection& selection);

/// JSON with matrix, marginals, grand mean, pairs and echo flags.
void write_alignment_json(const AlignmentResult& result, const std::filesystem::path& path);
AlignmentResult read_alignment_json(const std::filesystem::path& path);
/// Matrix TSV with a trailing `mean` column and a final `mean` row.
void write_alignment_tsv(const AlignmentResult& result, const std::filesystem::path& path);
/// Union vocabulary as TSV `index<TAB>term<TAB>in_a<TAB>in_b`.
void write_union_vocab(const UnionVocab& uv, const std::filesystem::path& path);

}  // namespace topicalign
