#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "topicalign/corpus.hpp"

namespace topicalign {

using Stoplist = std::set<std::string>;

/// The English stopword list bundled with the tool.
const Stoplist& default_stoplist();

/// One term per line; '#' starts a comment line.
Stoplist read_stoplist(const std::filesystem::path& path);

/// Order-independent fingerprint of a stoplist.
std::string stoplist_checksum(const Stoplist& stoplist);

/// Modeling vocabulary. Terms are kept in lexicographic order so indices are
/// canonical.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> doc_freq, std::size_t min_df,
             std::string stoplist_hash);

  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::string& term(std::size_t i) const { return terms_[i]; }
  const std::vector<std::size_t>& doc_freq() const { return doc_freq_; }
  std::size_t min_df() const { return min_df_; }
  const std::string& stoplist_hash() const { return stoplist_hash_; }

  /// Index of `term`, or -1 if absent.
  std::ptrdiff_t find(const std::string& term) const;

  /// Fingerprint of the ordered term list; models record it to tie phi
  /// columns to this vocabulary.
  std::string checksum() const;

 private:
  std::vector<std::string> terms_;
  std::vector<std::size_t> doc_freq_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t min_df_ = 1;
  std::string stoplist_hash_;
};

/// Terms that are not stopwords and occur in at least `min_df` documents.
/// Throws DataError if nothing survives.
Vocabulary build_vocabulary(const Corpus& corpus, const Stoplist& stoplist, std::size_t min_df);

/// Sparse document-term counts, one sorted (term, count) list per document.
struct DocTermMatrix {
  using Entry = std::pair<std::size_t, int>;

  std::size_t vocab_size = 0;
  std::vector<std::string> doc_ids;
  std::vector<std::vector<Entry>> rows;
  std::vector<int> doc_lengths;

  std::size_t documents() const { return rows.size(); }
  long long total_tokens() const;
  /// Indices of rows with no in-vocabulary tokens.
  std::vector<std::size_t> empty_rows() const;
  /// Token counts per term summed over documents.
  std::vector<long long> term_totals() const;

  /// Checks positivity, bounds, sorted columns and length consistency.
  void validate() const;
};

DocTermMatrix count_matrix(const Corpus& corpus, const Vocabulary& vocab);

/// TSV `index<TAB>term<TAB>doc_freq` with header. The stoplist hash and
/// min_df travel in a `# ` comment line before the header.
void write_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path);
Vocabulary read_vocabulary(const std::filesystem::path& path);

/// Sparse TSV triples `doc_index<TAB>term_index<TAB>count` with header plus a
/// sidecar with one document id per line.
void write_matrix(const DocTermMatrix& matrix, const std::filesystem::path& triples,
                  const std::filesystem::path& doc_ids);
DocTermMatrix read_matrix(const std::filesystem::path& triples, const std::filesystem::path& doc_ids,
                          std::size_t vocab_size);

}  // namespace topicalign
