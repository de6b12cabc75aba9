#include "topicalign/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "text_io.hpp"
#include "topicalign/error.hpp"

namespace topicalign {

using json = nlohmann::ordered_json;

std::string Document::full_text() const {
  if (title.empty()) return abstract_or_body;
  if (abstract_or_body.empty()) return title;
  return title + " " + abstract_or_body;
}

std::set<std::string> Corpus::ids() const {
  std::set<std::string> out;
  for (const auto& d : documents) out.insert(d.id);
  return out;
}

namespace {

std::string as_id(const json& value, const std::string& where) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  throw DataError(where + ": 'id' must be a string");
}

std::string as_text(const json& record, const char* key, const std::string& where) {
  const auto it = record.find(key);
  if (it == record.end() || it->is_null()) return {};
  if (!it->is_string()) throw DataError(where + ": '" + key + "' must be a string");
  return it->get<std::string>();
}

std::optional<int> as_year(const json& record, const std::string& where) {
  const auto it = record.find("year");
  if (it == record.end() || it->is_null()) return std::nullopt;
  long long year = 0;
  if (it->is_number_integer()) {
    year = it->get<long long>();
  } else if (it->is_string()) {
    const auto s = it->get<std::string>();
    if (s.empty()) return std::nullopt;
    year = io::parse_integer(s, where + ": year");
  } else {
    throw DataError(where + ": 'year' must be an integer");
  }
  if (year < 1900 || year > 2100) throw DataError(where + ": year " + std::to_string(year) + " outside [1900, 2100]");
  return static_cast<int>(year);
}

Document parse_record(const json& record, const std::string& where) {
  if (!record.is_object()) throw DataError(where + ": record is not a JSON object");
  const auto id_it = record.find("id");
  if (id_it == record.end()) throw DataError(where + ": missing 'id'");

  Document doc;
  doc.id = as_id(*id_it, where);
  if (doc.id.empty()) throw DataError(where + ": empty 'id'");
  doc.title = as_text(record, "title", where);
  doc.abstract_or_body = as_text(record, "abstract", where);
  if (doc.abstract_or_body.empty()) doc.abstract_or_body = as_text(record, "body", where);
  doc.year = as_year(record, where);

  if (const auto it = record.find("categories"); it != record.end() && !it->is_null()) {
    if (!it->is_array()) throw DataError(where + ": 'categories' must be an array");
    for (const auto& c : *it) {
      if (!c.is_string()) throw DataError(where + ": category entries must be strings");
      doc.categories.push_back(c.get<std::string>());
    }
  }
  if (const auto it = record.find("cluster"); it != record.end() && !it->is_null()) {
    if (it->is_string())
      doc.cluster_id = it->get<std::string>();
    else if (it->is_number_integer())
      doc.cluster_id = std::to_string(it->get<long long>());
    else
      throw DataError(where + ": 'cluster' must be a string");
  }
  if (const auto it = record.find("seed"); it != record.end() && it->is_boolean()) doc.seed_flag = it->get<bool>();
  return doc;
}

}  // namespace

Corpus parse_documents_text(std::string_view text, std::string_view source) {
  Corpus corpus;
  corpus.name = std::string(source);
  std::map<std::string, std::size_t> first_line;

  const auto all = io::lines(text);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& line = all[i];
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    const std::size_t line_no = i + 1;
    const std::string where = std::string(source) + ":" + std::to_string(line_no);

    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(where + ": malformed JSON (" + e.what() + ")");
    }
    Document doc = parse_record(record, where);
    if (const auto [it, inserted] = first_line.emplace(doc.id, line_no); !inserted) {
      throw DataError(std::string(source) + ": duplicate id '" + doc.id + "' on lines " + std::to_string(it->second) +
                      " and " + std::to_string(line_no));
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

Corpus parse_documents(const std::filesystem::path& path, DocumentFormat format) {
  if (format != DocumentFormat::jsonl) throw DataError("unsupported document format");
  if (!std::filesystem::exists(path)) throw DataError("corpus file not found: " + path.string());
  Corpus corpus = parse_documents_text(io::read_file(path), path.string());
  corpus.name = path.stem().string();
  return corpus;
}

std::string serialize_documents(const Corpus& corpus) {
  std::string out;
  for (const auto& d : corpus.documents) {
    json record;
    record["id"] = d.id;
    record["title"] = d.title;
    record["abstract"] = d.abstract_or_body;
    if (d.year) record["year"] = *d.year;
    record["categories"] = d.categories;
    if (d.cluster_id) record["cluster"] = *d.cluster_id;
    if (d.seed_flag) record["seed"] = true;
    out += record.dump();
    out += '\n';
  }
  return out;
}

void write_documents(const Corpus& corpus, const std::filesystem::path& path) {
  io::write_file(path, serialize_documents(corpus));
}

TokenStream tokenize(std::string_view text) {
  TokenStream tokens;
  std::string current;
  bool all_digits = true;

  auto flush = [&] {
    if (current.size() >= 2 && !all_digits) tokens.push_back(current);
    current.clear();
    all_digits = true;
  };

  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c >= 0x80 || std::isalnum(c)) {
      current.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
      if (!std::isdigit(c)) all_digits = false;
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::set<std::string> match_seed(const Corpus& corpus, std::string_view pattern) {
  if (pattern.size() < 2 || pattern.back() != '*' || pattern.find('*') != pattern.size() - 1)
    throw DataError("unsupported seed pattern '" + std::string(pattern) + "': only 'prefix*' is supported");
  std::string prefix(pattern.substr(0, pattern.size() - 1));
  for (auto& ch : prefix) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 0x80 && !std::isalnum(c))
      throw DataError("unsupported seed pattern '" + std::string(pattern) + "': prefix must be alphanumeric");
    if (c < 0x80) ch = static_cast<char>(std::tolower(c));
  }

  std::set<std::string> out;
  for (const auto& d : corpus.documents) {
    auto hit = [&](const std::string& text) {
      const auto tokens = tokenize(text);
      return std::any_of(tokens.begin(), tokens.end(), [&](const std::string& t) { return t.starts_with(prefix); });
    };
    if (hit(d.title) || hit(d.abstract_or_body)) out.insert(d.id);
  }
  return out;
}

Corpus mark_seeds(Corpus corpus, const std::set<std::string>& seeds) {
  for (auto& d : corpus.documents) d.seed_flag = seeds.contains(d.id);
  return corpus;
}

std::set<std::string> read_seed_ids(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw DataError("seed-id file not found: " + path.string());
  std::set<std::string> out;
  for (auto line : io::lines(io::read_file(path))) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    out.insert(line.substr(start));
  }
  return out;
}

void write_seed_ids(const std::set<std::string>& seeds, const std::filesystem::path& path) {
  std::string out;
  for (const auto& id : seeds) out += id + '\n';
  io::write_file(path, out);
}

Corpus filter_with_text(const Corpus& corpus) {
  Corpus out{corpus.name, {}, corpus.provenance_note};
  std::copy_if(corpus.documents.begin(), corpus.documents.end(), std::back_inserter(out.documents),
               [](const Document& d) { return !d.abstract_or_body.empty(); });
  return out;
}

}  // namespace topicalign
