#include "topicalign/vocab.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_set>

#include "text_io.hpp"
#include "topicalign/checksum.hpp"
#include "topicalign/error.hpp"

namespace topicalign {

// Generated from data/stopwords_en.txt at build time.
extern const char* const kDefaultStoplistText;

namespace {

Stoplist parse_stoplist(std::string_view text) {
  Stoplist out;
  for (auto line : io::lines(text)) {
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto end = line.find_last_not_of(" \t");
    std::string term = line.substr(start, end - start + 1);
    std::transform(term.begin(), term.end(), term.begin(), [](unsigned char c) {
      return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
    });
    out.insert(std::move(term));
  }
  return out;
}

}  // namespace

const Stoplist& default_stoplist() {
  static const Stoplist list = parse_stoplist(kDefaultStoplistText);
  return list;
}

Stoplist read_stoplist(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw DataError("stoplist not found: " + path.string());
  return parse_stoplist(io::read_file(path));
}

std::string stoplist_checksum(const Stoplist& stoplist) {
  std::string joined;
  for (const auto& t : stoplist) joined += t + '\n';
  return fnv1a_hex(joined);
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> doc_freq, std::size_t min_df,
                       std::string stoplist_hash)
    : terms_(std::move(terms)),
      doc_freq_(std::move(doc_freq)),
      min_df_(min_df),
      stoplist_hash_(std::move(stoplist_hash)) {
  if (terms_.size() != doc_freq_.size()) throw DataError("vocabulary: terms and doc_freq differ in length");
  if (!std::is_sorted(terms_.begin(), terms_.end())) throw DataError("vocabulary: terms not in canonical order");
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (!index_.emplace(terms_[i], i).second) throw DataError("vocabulary: duplicate term '" + terms_[i] + "'");
}

std::ptrdiff_t Vocabulary::find(const std::string& term) const {
  const auto it = index_.find(term);
  return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

std::string Vocabulary::checksum() const {
  std::string joined;
  for (const auto& t : terms_) joined += t + '\n';
  return fnv1a_hex(joined);
}

Vocabulary build_vocabulary(const Corpus& corpus, const Stoplist& stoplist, std::size_t min_df) {
  if (min_df < 1) throw ConfigError("min_df must be at least 1");
  std::map<std::string, std::size_t> df;
  for (const auto& d : corpus.documents) {
    auto tokens = tokenize(d.full_text());
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (auto& t : tokens)
      if (!stoplist.contains(t)) ++df[t];
  }
  std::vector<std::string> terms;
  std::vector<std::size_t> freq;
  for (const auto& [term, count] : df) {
    if (count < min_df) continue;
    terms.push_back(term);
    freq.push_back(count);
  }
  if (terms.empty())
    throw DataError("vocabulary is empty with min_df=" + std::to_string(min_df) + "; try a smaller min_df");
  return Vocabulary(std::move(terms), std::move(freq), min_df, stoplist_checksum(stoplist));
}

long long DocTermMatrix::total_tokens() const {
  return std::accumulate(doc_lengths.begin(), doc_lengths.end(), 0LL);
}

std::vector<std::size_t> DocTermMatrix::empty_rows() const {
  std::vector<std::size_t> out;
  for (std::size_t d = 0; d < rows.size(); ++d)
    if (rows[d].empty()) out.push_back(d);
  return out;
}

std::vector<long long> DocTermMatrix::term_totals() const {
  std::vector<long long> out(vocab_size, 0);
  for (const auto& row : rows)
    for (const auto& [t, c] : row) out[t] += c;
  return out;
}

void DocTermMatrix::validate() const {
  if (doc_ids.size() != rows.size() || doc_lengths.size() != rows.size())
    throw DataError("document-term matrix: row metadata misaligned");
  for (std::size_t d = 0; d < rows.size(); ++d) {
    long long sum = 0;
    for (std::size_t i = 0; i < rows[d].size(); ++i) {
      const auto [t, c] = rows[d][i];
      if (t >= vocab_size) throw DataError("document-term matrix: term index out of range");
      if (c <= 0) throw DataError("document-term matrix: nonpositive count");
      if (i > 0 && rows[d][i - 1].first >= t) throw DataError("document-term matrix: row not sorted");
      sum += c;
    }
    if (sum != doc_lengths[d]) throw DataError("document-term matrix: length mismatch in row " + std::to_string(d));
  }
}

DocTermMatrix count_matrix(const Corpus& corpus, const Vocabulary& vocab) {
  DocTermMatrix m;
  m.vocab_size = vocab.size();
  m.rows.reserve(corpus.size());
  for (const auto& d : corpus.documents) {
    std::map<std::size_t, int> counts;
    for (const auto& t : tokenize(d.full_text()))
      if (const auto idx = vocab.find(t); idx >= 0) ++counts[static_cast<std::size_t>(idx)];
    std::vector<DocTermMatrix::Entry> row(counts.begin(), counts.end());
    int length = 0;
    for (const auto& e : row) length += e.second;
    m.doc_ids.push_back(d.id);
    m.rows.push_back(std::move(row));
    m.doc_lengths.push_back(length);
  }
  return m;
}

void write_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path) {
  std::string out = "# min_df=" + std::to_string(vocab.min_df()) + " stoplist=" + vocab.stoplist_hash() + '\n';
  out += "index\tterm\tdoc_freq\n";
  for (std::size_t i = 0; i < vocab.size(); ++i)
    out += std::to_string(i) + '\t' + vocab.term(i) + '\t' + std::to_string(vocab.doc_freq()[i]) + '\n';
  io::write_file(path, out);
}

Vocabulary read_vocabulary(const std::filesystem::path& path) {
  std::size_t min_df = 1;
  std::string stoplist_hash;
  std::vector<std::string> terms;
  std::vector<std::size_t> freq;
  bool header = false;
  const auto all = io::lines(io::read_file(path));
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& line = all[i];
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    if (line.empty()) continue;
    if (line.starts_with("# ")) {
      for (const auto part : io::split(std::string_view(line).substr(2), ' ')) {
        if (part.starts_with("min_df=")) min_df = static_cast<std::size_t>(io::parse_integer(part.substr(7), where));
        if (part.starts_with("stoplist=")) stoplist_hash = std::string(part.substr(9));
      }
      continue;
    }
    if (!header) {
      header = true;
      continue;
    }
    const auto f = io::split(line, '\t');
    if (f.size() != 3) throw DataError(where + ": expected 3 columns");
    if (static_cast<std::size_t>(io::parse_integer(f[0], where)) != terms.size())
      throw DataError(where + ": vocabulary indices must be 0..V-1 in order");
    terms.emplace_back(f[1]);
    freq.push_back(static_cast<std::size_t>(io::parse_integer(f[2], where)));
  }
  return Vocabulary(std::move(terms), std::move(freq), min_df, std::move(stoplist_hash));
}

void write_matrix(const DocTermMatrix& matrix, const std::filesystem::path& triples,
                  const std::filesystem::path& doc_ids) {
  std::string out = "doc_index\tterm_index\tcount\n";
  for (std::size_t d = 0; d < matrix.rows.size(); ++d)
    for (const auto& [t, c] : matrix.rows[d])
      out += std::to_string(d) + '\t' + std::to_string(t) + '\t' + std::to_string(c) + '\n';
  io::write_file(triples, out);

  std::string ids;
  for (const auto& id : matrix.doc_ids) ids += id + '\n';
  io::write_file(doc_ids, ids);
}

DocTermMatrix read_matrix(const std::filesystem::path& triples, const std::filesystem::path& doc_ids,
                          std::size_t vocab_size) {
  DocTermMatrix m;
  m.vocab_size = vocab_size;
  for (const auto& line : io::lines(io::read_file(doc_ids)))
    if (!line.empty()) m.doc_ids.push_back(line);
  m.rows.resize(m.doc_ids.size());
  m.doc_lengths.assign(m.doc_ids.size(), 0);

  const auto all = io::lines(io::read_file(triples));
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i].empty()) continue;
    const std::string where = triples.string() + ":" + std::to_string(i + 1);
    const auto f = io::split(all[i], '\t');
    if (f.size() != 3) throw DataError(where + ": expected 3 columns");
    const auto d = io::parse_integer(f[0], where);
    const auto t = io::parse_integer(f[1], where);
    const auto c = io::parse_integer(f[2], where);
    if (d < 0 || static_cast<std::size_t>(d) >= m.rows.size()) throw DataError(where + ": document index out of range");
    if (t < 0) throw DataError(where + ": negative term index");
    m.rows[static_cast<std::size_t>(d)].emplace_back(static_cast<std::size_t>(t), static_cast<int>(c));
    m.doc_lengths[static_cast<std::size_t>(d)] += static_cast<int>(c);
  }
  m.validate();
  return m;
}

}  // namespace topicalign
