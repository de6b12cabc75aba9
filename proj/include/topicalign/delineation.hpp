#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>

#include "topicalign/corpus.hpp"

namespace topicalign {

/// Document to micro-cluster membership, consumed from a precomputed
/// citation clustering.
class ClusterAssignment {
 public:
  ClusterAssignment() = default;

  /// Throws DataError if `doc_id` is already assigned to a different cluster.
  void assign(const std::string& doc_id, const std::string& cluster_id);

  const std::map<std::string, std::string>& membership() const { return membership_; }
  const std::map<std::string, std::size_t>& cluster_sizes() const { return sizes_; }
  std::map<std::string, std::vector<std::string>> members() const;

  bool empty() const { return membership_.empty(); }
  std::size_t document_count() const { return membership_.size(); }
  std::size_t cluster_count() const { return sizes_.size(); }

  /// Builds an assignment from each document's optional cluster field.
  static ClusterAssignment from_corpus(const Corpus& corpus);

 private:
  std::map<std::string, std::string> membership_;
  std::map<std::string, std::size_t> sizes_;
};

/// Two-column TSV `doc_id<TAB>cluster_id`, no header.
ClusterAssignment read_cluster_assignment(const std::filesystem::path& path);
void write_cluster_assignment(const ClusterAssignment& assignment, const std::filesystem::path& path);

struct DelineationConfig {
  double alpha = 0.1;
  bool keep_seed_documents = true;

  void validate() const;
};

/// Fraction of each cluster's members that are seeds. Throws DataError on an
/// empty assignment.
std::map<std::string, double> cluster_seed_fractions(const ClusterAssignment& assignment,
                                                     const std::set<std::string>& seeds);

struct Delineation {
  Corpus corpus;
  std::set<std::string> included_clusters;
};

/// Seeds (optionally) plus every cluster whose seed fraction is at least
/// alpha, restricted to documents with text. Output keeps the order of
/// `full_corpus`. Seed ids absent from `full_corpus` are ignored; absent
/// cluster members raise DataError listing them.
Delineation expand_corpus(const Corpus& full_corpus, const std::set<std::string>& seeds,
                          const ClusterAssignment& assignment, const DelineationConfig& config);

}  // namespace topicalign
