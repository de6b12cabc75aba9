#include "topicalign/topicmodel.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "text_io.hpp"
#include "topicalign/error.hpp"

namespace topicalign {

using json = nlohmann::ordered_json;

void Priors::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("Dirichlet alpha must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("Dirichlet beta must be positive");
}

namespace {

// Sufficient statistics of the collapsed sampler.
struct GibbsState {
  int topics;
  std::size_t vocab;
  std::vector<int> doc_topic;   // D x K
  std::vector<int> word_topic;  // V x K
  std::vector<int> topic_total; // K
  std::vector<std::size_t> doc_offset;  // token range per document
  std::vector<std::size_t> words;
  std::vector<int> z;

  GibbsState(const DocTermMatrix& m, int k)
      : topics(k),
        vocab(m.vocab_size),
        doc_topic(m.documents() * static_cast<std::size_t>(k), 0),
        word_topic(m.vocab_size * static_cast<std::size_t>(k), 0),
        topic_total(static_cast<std::size_t>(k), 0) {
    doc_offset.reserve(m.documents() + 1);
    doc_offset.push_back(0);
    for (const auto& row : m.rows) {
      for (const auto& [t, c] : row) words.insert(words.end(), static_cast<std::size_t>(c), t);
      doc_offset.push_back(words.size());
    }
    z.assign(words.size(), 0);
  }

  std::size_t documents() const { return doc_offset.size() - 1; }

  void add(std::size_t d, std::size_t i, int k, int delta) {
    doc_topic[d * topics + k] += delta;
    word_topic[words[i] * topics + k] += delta;
    topic_total[k] += delta;
  }

  RowMatrixXd phi(double beta) const {
    RowMatrixXd out(topics, static_cast<Eigen::Index>(vocab));
    const double vbeta = static_cast<double>(vocab) * beta;
    for (int k = 0; k < topics; ++k) {
      const double denom = topic_total[k] + vbeta;
      for (std::size_t w = 0; w < vocab; ++w)
        out(k, static_cast<Eigen::Index>(w)) = (word_topic[w * topics + k] + beta) / denom;
    }
    return out;
  }

  RowMatrixXd theta(double alpha) const {
    const auto docs = documents();
    RowMatrixXd out(static_cast<Eigen::Index>(docs), topics);
    for (std::size_t d = 0; d < docs; ++d) {
      const auto n = static_cast<double>(doc_offset[d + 1] - doc_offset[d]);
      if (n == 0) {
        out.row(static_cast<Eigen::Index>(d)).setConstant(1.0 / topics);
        continue;
      }
      const double denom = n + topics * alpha;
      for (int k = 0; k < topics; ++k)
        out(static_cast<Eigen::Index>(d), k) = (doc_topic[d * topics + k] + alpha) / denom;
    }
    return out;
  }
};

}  // namespace

TopicModel fit(const DocTermMatrix& matrix, const FitOptions& options) {
  const int K = options.topics;
  if (K < 1) throw ConfigError("number of topics must be at least 1");
  if (options.iterations < 1) throw ConfigError("iterations must be at least 1");
  if (options.record_every < 1) throw ConfigError("record_every must be at least 1");
  options.priors.validate();
  matrix.validate();
  if (matrix.total_tokens() == 0) throw DataError("document-term matrix has no tokens");

  const double alpha = options.priors.alpha;
  const double beta = options.priors.beta;
  const double vbeta = static_cast<double>(matrix.vocab_size) * beta;

  GibbsState state(matrix, K);
  Rng rng(options.seed);
  for (std::size_t d = 0; d < state.documents(); ++d)
    for (std::size_t i = state.doc_offset[d]; i < state.doc_offset[d + 1]; ++i) {
      state.z[i] = rng.below(K);
      state.add(d, i, state.z[i], +1);
    }

  TopicModel model;
  model.topics = K;
  model.vocab_checksum = options.vocab_checksum;
  model.priors = options.priors;
  model.seed = options.seed;
  model.iterations = options.iterations;

  auto record = [&](int sweep) {
    const double ll = log_likelihood(state.theta(alpha), state.phi(beta), matrix);
    if (!std::isfinite(ll)) throw NumericError("log-likelihood is not finite at sweep " + std::to_string(sweep));
    model.loglik_trace.push_back({sweep, ll});
  };
  record(0);

  std::vector<double> cumulative(static_cast<std::size_t>(K));
  for (int sweep = 1; sweep <= options.iterations; ++sweep) {
    for (std::size_t d = 0; d < state.documents(); ++d) {
      const int* nd = &state.doc_topic[d * K];
      for (std::size_t i = state.doc_offset[d]; i < state.doc_offset[d + 1]; ++i) {
        state.add(d, i, state.z[i], -1);
        const int* nw = &state.word_topic[state.words[i] * K];
        double total = 0.0;
        for (int k = 0; k < K; ++k) {
          total += (nd[k] + alpha) * (nw[k] + beta) / (state.topic_total[k] + vbeta);
          cumulative[k] = total;
        }
        const double u = rng.uniform() * total;
        int k = 0;
        while (k < K - 1 && cumulative[k] <= u) ++k;
        state.z[i] = k;
        state.add(d, i, k, +1);
      }
    }
    if (sweep % options.record_every == 0 || sweep == options.iterations) record(sweep);
  }

  model.phi = state.phi(beta);
  model.theta = state.theta(alpha);
  if (options.keep_assignments) {
    std::vector<std::vector<int>> z(state.documents());
    for (std::size_t d = 0; d < state.documents(); ++d)
      z[d].assign(state.z.begin() + static_cast<std::ptrdiff_t>(state.doc_offset[d]),
                  state.z.begin() + static_cast<std::ptrdiff_t>(state.doc_offset[d + 1]));
    model.assignments = std::move(z);
  }
  return model;
}

VectorXd corpus_topic_weights(const TopicModel& model, const DocTermMatrix& matrix) {
  if (model.documents() != matrix.documents())
    throw DataError("corpus_topic_weights: model has " + std::to_string(model.documents()) + " documents, matrix has " +
                    std::to_string(matrix.documents()));
  VectorXd lengths(static_cast<Eigen::Index>(matrix.documents()));
  for (std::size_t d = 0; d < matrix.documents(); ++d) lengths(static_cast<Eigen::Index>(d)) = matrix.doc_lengths[d];
  const double total = lengths.sum();
  if (total <= 0) throw DataError("corpus_topic_weights: matrix has no tokens");
  return model.theta.transpose() * lengths / total;
}

double log_likelihood(const RowMatrixXd& theta, const RowMatrixXd& phi, const DocTermMatrix& matrix) {
  if (static_cast<std::size_t>(theta.rows()) != matrix.documents() || theta.cols() != phi.rows() ||
      static_cast<std::size_t>(phi.cols()) != matrix.vocab_size)
    throw DataError("log_likelihood: model and matrix dimensions differ");
  double ll = 0.0;
  for (std::size_t d = 0; d < matrix.documents(); ++d) {
    const auto row = theta.row(static_cast<Eigen::Index>(d));
    for (const auto& [t, c] : matrix.rows[d])
      ll += c * std::log(row.dot(phi.col(static_cast<Eigen::Index>(t))));
  }
  return ll;
}

double log_likelihood(const TopicModel& model, const DocTermMatrix& matrix) {
  return log_likelihood(model.theta, model.phi, matrix);
}

double max_row_sum_error(const RowMatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  return (m.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

namespace {

std::string matrix_tsv(const RowMatrixXd& m, const std::string& row_name) {
  std::string out = row_name;
  for (Eigen::Index j = 0; j < m.cols(); ++j) out += '\t' + std::to_string(j);
  out += '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += std::to_string(i);
    for (Eigen::Index j = 0; j < m.cols(); ++j) out += '\t' + io::fmt(m(i, j));
    out += '\n';
  }
  return out;
}

RowMatrixXd read_matrix_tsv(const std::filesystem::path& path) {
  const auto all = io::lines(io::read_file(path));
  if (all.empty()) throw DataError(path.string() + ": empty file");
  const auto cols = io::split(all[0], '\t').size() - 1;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i].empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    const auto f = io::split(all[i], '\t');
    if (f.size() != cols + 1) throw DataError(where + ": expected " + std::to_string(cols + 1) + " columns");
    std::vector<double> row(cols);
    for (std::size_t j = 0; j < cols; ++j) row[j] = io::parse_double(f[j + 1], where);
    rows.push_back(std::move(row));
  }
  RowMatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

}  // namespace

void save_model(const TopicModel& model, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  io::write_file(dir / "phi.tsv", matrix_tsv(model.phi, "topic"));
  io::write_file(dir / "theta.tsv", matrix_tsv(model.theta, "doc"));

  json meta;
  meta["topics"] = model.topics;
  meta["vocab_size"] = model.vocab_size();
  meta["documents"] = model.documents();
  meta["priors"] = {{"alpha", model.priors.alpha}, {"beta", model.priors.beta}};
  meta["seed"] = model.seed;
  meta["iterations"] = model.iterations;
  meta["vocab_checksum"] = model.vocab_checksum;
  json trace = json::array();
  for (const auto& r : model.loglik_trace) trace.push_back({{"sweep", r.sweep}, {"loglik", r.value}});
  meta["loglik_trace"] = trace;
  io::write_file(dir / "meta.json", meta.dump(2) + '\n');

  if (model.assignments) {
    std::string out = "doc_index\ttopics\n";
    for (std::size_t d = 0; d < model.assignments->size(); ++d) {
      out += std::to_string(d) + '\t';
      const auto& z = (*model.assignments)[d];
      for (std::size_t i = 0; i < z.size(); ++i) out += (i ? " " : "") + std::to_string(z[i]);
      out += '\n';
    }
    io::write_file(dir / "assignments.tsv", out);
  }
}

TopicModel load_model(const std::filesystem::path& dir) {
  TopicModel model;
  json meta;
  try {
    meta = json::parse(io::read_file(dir / "meta.json"));
    model.topics = meta.at("topics").get<int>();
    model.priors.alpha = meta.at("priors").at("alpha").get<double>();
    model.priors.beta = meta.at("priors").at("beta").get<double>();
    model.seed = meta.at("seed").get<std::uint64_t>();
    model.iterations = meta.at("iterations").get<int>();
    model.vocab_checksum = meta.at("vocab_checksum").get<std::string>();
    for (const auto& r : meta.at("loglik_trace"))
      model.loglik_trace.push_back({r.at("sweep").get<int>(), r.at("loglik").get<double>()});
  } catch (const json::exception& e) {
    throw DataError((dir / "meta.json").string() + ": " + e.what());
  }
  model.phi = read_matrix_tsv(dir / "phi.tsv");
  model.theta = read_matrix_tsv(dir / "theta.tsv");
  if (model.phi.rows() != model.topics || model.theta.cols() != model.topics)
    throw DataError(dir.string() + ": phi/theta shapes disagree with meta.json");
  // Undo the rounding of the 9-digit text format.
  model.phi.array().colwise() /= model.phi.rowwise().sum().array();
  model.theta.array().colwise() /= model.theta.rowwise().sum().array();
  return model;
}

}  // namespace topicalign
