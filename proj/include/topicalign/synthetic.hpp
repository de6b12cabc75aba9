#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "topicalign/corpus.hpp"
#include "topicalign/delineation.hpp"
#include "topicalign/topicmodel.hpp"
#include "topicalign/types.hpp"

namespace topicalign::synthetic {

/// Gamma(shape, 1) via Marsaglia-Tsang; shapes below one use the boost
/// U^(1/shape). Returns the logarithm so tiny shapes do not underflow.
double log_gamma_variate(double shape, Rng& rng);

/// Draws from a symmetric Dirichlet of the given dimension.
VectorXd dirichlet(int dim, double concentration, Rng& rng);

/// Corpus sampled from the LDA generative process with known parameters.
struct PlantedCorpus {
  RowMatrixXd phi;    // K x V
  RowMatrixXd theta;  // D x K
  Corpus corpus;      // one pseudo-word token per vocabulary index
  std::vector<std::string> words;
};

PlantedCorpus planted_lda(int topics, int vocab, int documents, int tokens_per_doc, double alpha,
                          double beta, std::uint64_t seed);

/// Pronounceable pseudo-word for an index; distinct indices give distinct words.
std::string pseudo_word(std::size_t index);

struct DatasetOptions {
  int supply_documents = 2000;
  int supply_vocab = 2000;
  int supply_topics = 20;
  int demand_documents = 222;
  int demand_vocab = 600;
  int demand_topics = 30;
  int tokens_per_doc = 80;
  int clusters = 120;
  std::uint64_t seed = 2017;
  /// Fit settings written into the generated config.
  int iterations = 1000;
  int min_df = 5;
};

/// Writes supply.jsonl, demand.jsonl, clusters.tsv, category_groups.tsv and
/// config.json (a ready-to-run pipeline configuration) into `dir`.
void write_dataset(const DatasetOptions& options, const std::filesystem::path& dir);

}  // namespace topicalign::synthetic
