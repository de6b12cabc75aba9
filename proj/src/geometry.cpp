#include "topicalign/geometry.hpp"

#include <numeric>

#include "text_io.hpp"

namespace topicalign {

std::vector<std::string> topic_labels(const std::string& prefix, Eigen::Index count) {
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i + 1));
  return out;
}

DistanceMatrix topic_distance_matrix(const TopicModel& model, const std::string& label_prefix) {
  const Eigen::Index K = model.phi.rows();
  if (K < 2) throw DataError("topic_distance_matrix: need at least two topics");
  DistanceMatrix out;
  out.kind = DistanceKind::square_intra;
  out.values = RowMatrixXd::Zero(K, K);
  for (Eigen::Index i = 0; i < K; ++i)
    for (Eigen::Index j = i + 1; j < K; ++j)
      out.values(i, j) = out.values(j, i) = js_divergence(model.phi.row(i).transpose(), model.phi.row(j).transpose());
  out.row_labels = out.col_labels = topic_labels(label_prefix, K);
  return out;
}

Layout pcoa_layout(const DistanceMatrix& dist, const VectorXd& sizes) {
  const Eigen::Index n = dist.rows();
  if (dist.cols() != n) throw DataError("pcoa_layout: distance matrix is not square");
  if (sizes.size() != n) throw DataError("pcoa_layout: sizes do not match the number of points");
  if (((dist.values - dist.values.transpose()).array().abs() > 1e-12).any())
    throw DataError("pcoa_layout: distance matrix is not symmetric");
  if ((dist.values.diagonal().array().abs() > 1e-12).any())
    throw DataError("pcoa_layout: distance matrix diagonal is not zero");
  if ((sizes.array() <= 0.0).any()) throw DataError("pcoa_layout: sizes must be positive");

  const Eigen::MatrixXd squared = dist.values.array().square();
  const Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  Eigen::MatrixXd b = -0.5 * centering * squared * centering;
  b = 0.5 * (b + b.transpose()).eval();

  const auto eig = jacobi_eigen(b);
  Layout layout;
  layout.eigenvalues = eig.values;
  layout.sizes = sizes;
  layout.coords = RowMatrixXd::Zero(n, 2);
  for (Eigen::Index axis = 0; axis < std::min<Eigen::Index>(2, n); ++axis) {
    const double lambda = eig.values(axis);
    if (!(lambda > 0.0)) continue;
    VectorXd col = eig.vectors.col(axis) * std::sqrt(lambda);
    Eigen::Index largest = 0;
    for (Eigen::Index i = 1; i < n; ++i)
      if (std::abs(col(i)) > std::abs(col(largest)) + 1e-12) largest = i;
    if (col(largest) < 0) col = -col;
    layout.coords.col(axis) = col;
  }

  double stress = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = (layout.coords.row(i) - layout.coords.row(j)).norm();
      stress += (dist.values(i, j) - d) * (dist.values(i, j) - d);
    }
  layout.stress = std::sqrt(stress);
  if (!layout.coords.allFinite()) throw NumericError("pcoa_layout: non-finite coordinates");
  return layout;
}

void RelevanceConfig::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("relevance lambda must lie in [0, 1]");
  if (top_n < 1) throw ConfigError("relevance top_n must be at least 1");
}

std::vector<RankedTerm> relevant_terms(const TopicModel& model, const DocTermMatrix& matrix, const Vocabulary& vocab,
                                       int k, const RelevanceConfig& config) {
  config.validate();
  if (k < 0 || k >= model.phi.rows())
    throw DataError("relevant_terms: topic index " + std::to_string(k) + " out of range");
  if (static_cast<std::size_t>(model.phi.cols()) != vocab.size() || matrix.vocab_size != vocab.size())
    throw DataError("relevant_terms: model, matrix and vocabulary sizes differ");

  const auto totals = matrix.term_totals();
  const double all = static_cast<double>(std::accumulate(totals.begin(), totals.end(), 0LL));
  const double lambda = config.lambda;

  std::vector<RankedTerm> ranked;
  ranked.reserve(vocab.size());
  for (std::size_t w = 0; w < vocab.size(); ++w) {
    const double log_phi = std::log(model.phi(k, static_cast<Eigen::Index>(w)));
    double score = log_phi;
    if (lambda < 1.0) {
      if (totals[w] == 0) continue;
      const double log_p = std::log(static_cast<double>(totals[w]) / all);
      score = lambda * log_phi + (1.0 - lambda) * (log_phi - log_p);
    }
    ranked.push_back({w, vocab.term(w), score});
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const RankedTerm& a, const RankedTerm& b) {
    return a.score > b.score || (a.score == b.score && a.term_index < b.term_index);
  });
  if (ranked.size() > static_cast<std::size_t>(config.top_n)) ranked.resize(static_cast<std::size_t>(config.top_n));
  return ranked;
}

void write_distance_matrix(const DistanceMatrix& dist, const std::filesystem::path& path) {
  std::string out = "topic";
  for (const auto& l : dist.col_labels) out += '\t' + l;
  out += '\n';
  for (Eigen::Index i = 0; i < dist.rows(); ++i) {
    out += dist.row_labels.at(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < dist.cols(); ++j) out += '\t' + io::fmt(dist.values(i, j));
    out += '\n';
  }
  io::write_file(path, out);
}

DistanceMatrix read_distance_matrix(const std::filesystem::path& path, DistanceKind kind) {
  const auto all = io::lines(io::read_file(path));
  if (all.empty()) throw DataError(path.string() + ": empty file");
  DistanceMatrix out;
  out.kind = kind;
  const auto header = io::split(all[0], '\t');
  for (std::size_t j = 1; j < header.size(); ++j) out.col_labels.emplace_back(header[j]);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i].empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    const auto f = io::split(all[i], '\t');
    if (f.size() != header.size()) throw DataError(where + ": wrong column count");
    out.row_labels.emplace_back(f[0]);
    std::vector<double> row;
    for (std::size_t j = 1; j < f.size(); ++j) row.push_back(io::parse_double(f[j], where));
    rows.push_back(std::move(row));
  }
  out.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(out.col_labels.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return out;
}

void write_layout(const Layout& layout, const std::vector<std::string>& labels, const std::filesystem::path& path) {
  std::string out = "topic\tx\ty\tsize\n";
  for (Eigen::Index i = 0; i < layout.points(); ++i)
    out += labels.at(static_cast<std::size_t>(i)) + '\t' + io::fmt(layout.coords(i, 0)) + '\t' +
           io::fmt(layout.coords(i, 1)) + '\t' + io::fmt(layout.sizes(i)) + '\n';
  io::write_file(path, out);
}

Layout read_layout(const std::filesystem::path& path) {
  const auto all = io::lines(io::read_file(path));
  std::vector<std::array<double, 3>> rows;
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i].empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    const auto f = io::split(all[i], '\t');
    if (f.size() != 4) throw DataError(where + ": expected 4 columns");
    rows.push_back({io::parse_double(f[1], where), io::parse_double(f[2], where), io::parse_double(f[3], where)});
  }
  Layout layout;
  const auto n = static_cast<Eigen::Index>(rows.size());
  layout.coords.resize(n, 2);
  layout.sizes.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    layout.coords(i, 0) = rows[static_cast<std::size_t>(i)][0];
    layout.coords(i, 1) = rows[static_cast<std::size_t>(i)][1];
    layout.sizes(i) = rows[static_cast<std::size_t>(i)][2];
  }
  return layout;
}

}  // namespace topicalign
