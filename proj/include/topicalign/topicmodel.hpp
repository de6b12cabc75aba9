#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "topicalign/types.hpp"
#include "topicalign/vocab.hpp"

namespace topicalign {

/// Symmetric Dirichlet concentrations for document:topic (alpha) and
/// topic:term (beta) distributions.
struct Priors {
  double alpha = 0.0;
  double beta = 0.01;

  /// alpha = 50/K, beta = 0.01.
  static Priors defaults(int topics) { return {50.0 / topics, 0.01}; }
  void validate() const;
};

struct FitOptions {
  int topics = 20;
  Priors priors = Priors::defaults(20);
  int iterations = 1000;
  std::uint64_t seed = 1;
  /// The corpus log-likelihood is recorded at sweep 0 and every `record_every` sweeps.
  int record_every = 10;
  bool keep_assignments = false;
  std::string vocab_checksum;
};

struct LogLikelihoodRecord {
  int sweep = 0;
  double value = 0.0;

  bool operator==(const LogLikelihoodRecord&) const = default;
};

/// Fitted LDA model. phi is K x V (rows are topic:term distributions), theta
/// is D x K (rows are document:topic distributions).
struct TopicModel {
  int topics = 0;
  std::string vocab_checksum;
  RowMatrixXd phi;
  RowMatrixXd theta;
  Priors priors;
  std::uint64_t seed = 0;
  int iterations = 0;
  std::vector<LogLikelihoodRecord> loglik_trace;
  /// Final topic of every token, per document, when requested.
  std::optional<std::vector<std::vector<int>>> assignments;

  std::size_t vocab_size() const { return static_cast<std::size_t>(phi.cols()); }
  std::size_t documents() const { return static_cast<std::size_t>(theta.rows()); }
};

/// Deterministic 64-bit generator (splitmix64) with a platform-independent
/// uniform double in [0, 1).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, n).
  int below(int n) { return static_cast<int>(uniform() * n); }

 private:
  std::uint64_t state_;
};

/// Collapsed Gibbs sampling for LDA. Identical inputs give a bit-identical
/// model. Throws DataError/ConfigError on invalid arguments and NumericError
/// if the likelihood becomes non-finite.
TopicModel fit(const DocTermMatrix& matrix, const FitOptions& options);

/// Token-weighted corpus share of each topic.
VectorXd corpus_topic_weights(const TopicModel& model, const DocTermMatrix& matrix);

/// Sum over tokens of log(sum_k theta_dk * phi_kw).
double log_likelihood(const TopicModel& model, const DocTermMatrix& matrix);
double log_likelihood(const RowMatrixXd& theta, const RowMatrixXd& phi, const DocTermMatrix& matrix);

/// Largest deviation of any row sum from one.
double max_row_sum_error(const RowMatrixXd& m);

/// Writes phi.tsv, theta.tsv and meta.json into `dir` (created if needed).
/// Values are printed with 9 significant digits.
void save_model(const TopicModel& model, const std::filesystem::path& dir);
/// Reads a model directory. Rows are renormalized after parsing to absorb
/// the rounding of the text format.
TopicModel load_model(const std::filesystem::path& dir);

}  // namespace topicalign
