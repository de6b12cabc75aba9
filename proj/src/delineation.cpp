#include "topicalign/delineation.hpp"

#include <sstream>

#include "text_io.hpp"
#include "topicalign/error.hpp"

namespace topicalign {

void ClusterAssignment::assign(const std::string& doc_id, const std::string& cluster_id) {
  const auto [it, inserted] = membership_.emplace(doc_id, cluster_id);
  if (!inserted) {
    if (it->second != cluster_id)
      throw DataError("document '" + doc_id + "' assigned to clusters '" + it->second + "' and '" + cluster_id + "'");
    return;
  }
  ++sizes_[cluster_id];
}

std::map<std::string, std::vector<std::string>> ClusterAssignment::members() const {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& [doc, cluster] : membership_) out[cluster].push_back(doc);
  return out;
}

ClusterAssignment ClusterAssignment::from_corpus(const Corpus& corpus) {
  ClusterAssignment a;
  for (const auto& d : corpus.documents)
    if (d.cluster_id) a.assign(d.id, *d.cluster_id);
  return a;
}

ClusterAssignment read_cluster_assignment(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw DataError("cluster assignment file not found: " + path.string());
  ClusterAssignment a;
  const auto all = io::lines(io::read_file(path));
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i].empty()) continue;
    const auto fields = io::split(all[i], '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
      throw DataError(path.string() + ":" + std::to_string(i + 1) + ": expected 'doc_id<TAB>cluster_id'");
    a.assign(std::string(fields[0]), std::string(fields[1]));
  }
  return a;
}

void write_cluster_assignment(const ClusterAssignment& assignment, const std::filesystem::path& path) {
  std::string out;
  for (const auto& [doc, cluster] : assignment.membership()) out += doc + '\t' + cluster + '\n';
  io::write_file(path, out);
}

void DelineationConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("delineation alpha must lie in (0, 1]");
}

std::map<std::string, double> cluster_seed_fractions(const ClusterAssignment& assignment,
                                                     const std::set<std::string>& seeds) {
  if (assignment.empty()) throw DataError("cluster assignment is empty");
  std::map<std::string, std::size_t> seeded;
  for (const auto& id : seeds) {
    const auto it = assignment.membership().find(id);
    if (it != assignment.membership().end()) ++seeded[it->second];
  }
  std::map<std::string, double> out;
  for (const auto& [cluster, size] : assignment.cluster_sizes()) {
    const auto it = seeded.find(cluster);
    out[cluster] = it == seeded.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(size);
  }
  return out;
}

Delineation expand_corpus(const Corpus& full_corpus, const std::set<std::string>& seeds,
                          const ClusterAssignment& assignment, const DelineationConfig& config) {
  config.validate();
  const auto fractions = cluster_seed_fractions(assignment, seeds);

  Delineation out;
  for (const auto& [cluster, fraction] : fractions)
    if (fraction >= config.alpha) out.included_clusters.insert(cluster);

  std::set<std::string> wanted;
  if (config.keep_seed_documents) wanted = seeds;
  for (const auto& [doc, cluster] : assignment.membership())
    if (out.included_clusters.contains(cluster)) wanted.insert(doc);

  const auto present = full_corpus.ids();
  std::vector<std::string> missing;
  for (const auto& [doc, cluster] : assignment.membership())
    if (out.included_clusters.contains(cluster) && !present.contains(doc)) missing.push_back(doc);
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size(); ++i) list += (i ? ", " : "") + missing[i];
    throw DataError("cluster members missing from corpus: " + list);
  }

  Corpus selected{full_corpus.name, {}, {}};
  for (const auto& d : full_corpus.documents)
    if (wanted.contains(d.id)) selected.documents.push_back(d);
  out.corpus = filter_with_text(selected);

  std::ostringstream note;
  note << "delineation alpha=" << io::fmt(config.alpha) << " clusters_included=" << out.included_clusters.size()
       << " keep_seed_documents=" << (config.keep_seed_documents ? "true" : "false")
       << " documents=" << out.corpus.size();
  out.corpus.provenance_note = note.str();
  return out;
}

}  // namespace topicalign
