#include "topicalign/align.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "text_io.hpp"
#include "topicalign/error.hpp"

namespace topicalign {

using json = nlohmann::ordered_json;

UnionVocab union_vocabulary(const Vocabulary& vocab_a, const Vocabulary& vocab_b) {
  const auto& a = vocab_a.terms();
  const auto& b = vocab_b.terms();
  UnionVocab uv;
  uv.checksum_a = vocab_a.checksum();
  uv.checksum_b = vocab_b.checksum();
  uv.map_a.resize(a.size());
  uv.map_b.resize(b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    const std::size_t u = uv.terms.size();
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      uv.terms.push_back(a[i]);
      uv.map_a[i++] = u;
    } else if (i == a.size() || b[j] < a[i]) {
      uv.terms.push_back(b[j]);
      uv.map_b[j++] = u;
    } else {
      uv.terms.push_back(a[i]);
      uv.map_a[i++] = u;
      uv.map_b[j++] = u;
      ++uv.shared_count;
    }
  }
  return uv;
}

VectorXd embed_topic(const Eigen::Ref<const VectorXd>& phi_row, const std::vector<std::size_t>& map,
                     std::size_t union_size) {
  if (static_cast<std::size_t>(phi_row.size()) != map.size())
    throw DataError("embed_topic: distribution and index map differ in length");
  VectorXd out = VectorXd::Zero(static_cast<Eigen::Index>(union_size));
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map[i] >= union_size) throw DataError("embed_topic: index map exceeds union size");
    out(static_cast<Eigen::Index>(map[i])) += phi_row(static_cast<Eigen::Index>(i));
  }
  return out;
}

DistanceMatrix cross_distances(const TopicModel& model_a, const TopicModel& model_b, const UnionVocab& uv,
                               const std::string& prefix_a, const std::string& prefix_b) {
  if (model_a.vocab_checksum != uv.checksum_a || model_b.vocab_checksum != uv.checksum_b)
    throw DataError("cross_distances: model vocabulary checksum does not match the union's sources");
  if (model_a.vocab_size() != uv.map_a.size() || model_b.vocab_size() != uv.map_b.size())
    throw DataError("cross_distances: model vocabulary size does not match the union's sources");

  std::vector<VectorXd> ea, eb;
  for (Eigen::Index i = 0; i < model_a.phi.rows(); ++i)
    ea.push_back(embed_topic(model_a.phi.row(i).transpose(), uv.map_a, uv.size()));
  for (Eigen::Index j = 0; j < model_b.phi.rows(); ++j)
    eb.push_back(embed_topic(model_b.phi.row(j).transpose(), uv.map_b, uv.size()));

  DistanceMatrix out;
  out.kind = DistanceKind::rect_cross;
  out.values.resize(model_a.phi.rows(), model_b.phi.rows());
  for (std::size_t i = 0; i < ea.size(); ++i)
    for (std::size_t j = 0; j < eb.size(); ++j)
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = js_divergence(ea[i], eb[j]);
  out.row_labels = topic_labels(prefix_a, model_a.phi.rows());
  out.col_labels = topic_labels(prefix_b, model_b.phi.rows());
  return out;
}

AlignmentResult alignment_summary(const DistanceMatrix& cross, const PairSelection& selection) {
  if (!(selection.threshold >= 0.0 && selection.threshold <= 1.0))
    throw ConfigError("alignment threshold must lie in [0, 1]");
  if (selection.top_n && *selection.top_n < 0) throw ConfigError("alignment top_n must be nonnegative");
  if (cross.rows() == 0 || cross.cols() == 0) throw DataError("alignment_summary: empty matrix");

  AlignmentResult r;
  r.cross = cross;
  r.selection = selection;
  r.row_means = cross.values.rowwise().mean();
  r.col_means = cross.values.colwise().mean().transpose();
  r.grand_mean = cross.values.mean();

  std::vector<TopicPair> all;
  for (Eigen::Index i = 0; i < cross.rows(); ++i)
    for (Eigen::Index j = 0; j < cross.cols(); ++j)
      all.push_back({static_cast<int>(i), static_cast<int>(j), cross.values(i, j)});
  std::stable_sort(all.begin(), all.end(),
                   [](const TopicPair& x, const TopicPair& y) { return x.distance < y.distance; });
  if (selection.top_n) {
    all.resize(std::min(all.size(), static_cast<std::size_t>(*selection.top_n)));
    r.pairs = std::move(all);
  } else {
    for (const auto& p : all)
      if (p.distance < selection.threshold) r.pairs.push_back(p);
  }

  for (Eigen::Index i = 0; i < r.row_means.size(); ++i) r.echo_a.push_back(r.row_means(i) < r.grand_mean);
  for (Eigen::Index j = 0; j < r.col_means.size(); ++j) r.echo_b.push_back(r.col_means(j) < r.grand_mean);
  return r;
}

void write_alignment_json(const AlignmentResult& r, const std::filesystem::path& path) {
  json out;
  out["note"] =
      "Cross-corpus distances compare raw topic:term distributions; corpus sizes are not reweighted and "
      "closeness does not imply influence in either direction.";
  out["row_labels"] = r.cross.row_labels;
  out["col_labels"] = r.cross.col_labels;
  json matrix = json::array();
  for (Eigen::Index i = 0; i < r.cross.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < r.cross.cols(); ++j) row.push_back(r.cross.values(i, j));
    matrix.push_back(row);
  }
  out["matrix"] = matrix;
  out["row_means"] = std::vector<double>(r.row_means.data(), r.row_means.data() + r.row_means.size());
  out["col_means"] = std::vector<double>(r.col_means.data(), r.col_means.data() + r.col_means.size());
  out["grand_mean"] = r.grand_mean;
  out["selection"] = {{"threshold", r.selection.threshold},
                      {"top_n", r.selection.top_n ? json(*r.selection.top_n) : json(nullptr)}};
  json pairs = json::array();
  for (const auto& p : r.pairs) pairs.push_back({{"topic_a", p.topic_a}, {"topic_b", p.topic_b}, {"distance", p.distance}});
  out["pairs"] = pairs;
  out["echo_a"] = r.echo_a;
  out["echo_b"] = r.echo_b;
  io::write_file(path, out.dump(2) + '\n');
}

AlignmentResult read_alignment_json(const std::filesystem::path& path) {
  AlignmentResult r;
  try {
    const auto in = json::parse(io::read_file(path));
    r.cross.kind = DistanceKind::rect_cross;
    r.cross.row_labels = in.at("row_labels").get<std::vector<std::string>>();
    r.cross.col_labels = in.at("col_labels").get<std::vector<std::string>>();
    const auto& m = in.at("matrix");
    r.cross.values.resize(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(r.cross.col_labels.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m[i].size(); ++j)
        r.cross.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m[i][j].get<double>();
    const auto rm = in.at("row_means").get<std::vector<double>>();
    const auto cm = in.at("col_means").get<std::vector<double>>();
    r.row_means = Eigen::Map<const VectorXd>(rm.data(), static_cast<Eigen::Index>(rm.size()));
    r.col_means = Eigen::Map<const VectorXd>(cm.data(), static_cast<Eigen::Index>(cm.size()));
    r.grand_mean = in.at("grand_mean").get<double>();
    r.selection.threshold = in.at("selection").at("threshold").get<double>();
    if (!in.at("selection").at("top_n").is_null()) r.selection.top_n = in.at("selection").at("top_n").get<int>();
    for (const auto& p : in.at("pairs"))
      r.pairs.push_back({p.at("topic_a").get<int>(), p.at("topic_b").get<int>(), p.at("distance").get<double>()});
    r.echo_a = in.at("echo_a").get<std::vector<bool>>();
    r.echo_b = in.at("echo_b").get<std::vector<bool>>();
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return r;
}

void write_alignment_tsv(const AlignmentResult& r, const std::filesystem::path& path) {
  std::string out = "topic";
  for (const auto& l : r.cross.col_labels) out += '\t' + l;
  out += "\tmean\n";
  for (Eigen::Index i = 0; i < r.cross.rows(); ++i) {
    out += r.cross.row_labels.at(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < r.cross.cols(); ++j) out += '\t' + io::fmt(r.cross.values(i, j));
    out += '\t' + io::fmt(r.row_means(i)) + '\n';
  }
  out += "mean";
  for (Eigen::Index j = 0; j < r.cross.cols(); ++j) out += '\t' + io::fmt(r.col_means(j));
  out += '\t' + io::fmt(r.grand_mean) + '\n';
  io::write_file(path, out);
}

void write_union_vocab(const UnionVocab& uv, const std::filesystem::path& path) {
  std::vector<char> in_a(uv.size(), 0), in_b(uv.size(), 0);
  for (const auto u : uv.map_a) in_a[u] = 1;
  for (const auto u : uv.map_b) in_b[u] = 1;
  std::string out = "index\tterm\tin_a\tin_b\n";
  for (std::size_t u = 0; u < uv.size(); ++u)
    out += std::to_string(u) + '\t' + uv.terms[u] + '\t' + (in_a[u] ? "1" : "0") + '\t' + (in_b[u] ? "1" : "0") + '\n';
  io::write_file(path, out);
}

}  // namespace topicalign
