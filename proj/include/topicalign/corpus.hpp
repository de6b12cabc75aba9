#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace topicalign {

struct Document {
  std::string id;
  std::string title;
  std::string abstract_or_body;
  std::optional<int> year;
  std::vector<std::string> categories;
  std::optional<std::string> cluster_id;
  bool seed_flag = false;

  /// True when both title and abstract/body are empty.
  bool empty_text() const { return title.empty() && abstract_or_body.empty(); }

  /// Title and abstract joined by a single space; the text that is tokenized.
  std::string full_text() const;

  bool operator==(const Document&) const = default;
};

struct Corpus {
  std::string name;
  std::vector<Document> documents;  // insertion order
  std::string provenance_note;

  std::size_t size() const { return documents.size(); }
  std::set<std::string> ids() const;
};

using TokenStream = std::vector<std::string>;

/// Input formats accepted by parse_documents.
enum class DocumentFormat { jsonl };

/// Reads one JSON object per line. Recognized fields: id (required), title,
/// abstract (alias body), year (integer or numeric string), categories
/// (array of strings), cluster, seed. Blank lines are skipped. Throws
/// DataError naming the line on malformed input and naming both lines on a
/// duplicate id.
Corpus parse_documents(const std::filesystem::path& path, DocumentFormat format = DocumentFormat::jsonl);

/// Parses JSONL from an in-memory buffer; `source` is used in error messages.
Corpus parse_documents_text(std::string_view text, std::string_view source = "<memory>");

/// Writes the corpus in the same JSONL schema parse_documents reads.
void write_documents(const Corpus& corpus, const std::filesystem::path& path);
std::string serialize_documents(const Corpus& corpus);

/// Lowercases ASCII, splits on every character that is not an ASCII letter,
/// digit or a non-ASCII (UTF-8) byte, then drops tokens shorter than two
/// bytes and tokens made only of digits.
TokenStream tokenize(std::string_view text);

/// Ids of documents having a title or abstract token that starts with the
/// pattern's prefix. Only a single trailing '*' is supported.
std::set<std::string> match_seed(const Corpus& corpus, std::string_view pattern);

/// Copy of `corpus` with seed_flag set exactly on documents whose id is in `seeds`.
Corpus mark_seeds(Corpus corpus, const std::set<std::string>& seeds);

/// Reads a plain-text seed list, one id per line; blank lines and lines
/// starting with '#' are ignored.
std::set<std::string> read_seed_ids(const std::filesystem::path& path);
void write_seed_ids(const std::set<std::string>& seeds, const std::filesystem::path& path);

/// Keeps documents with a nonempty abstract/body, order preserved.
Corpus filter_with_text(const Corpus& corpus);

}  // namespace topicalign
