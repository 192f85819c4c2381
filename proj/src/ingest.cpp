#include "vmplda/ingest.hpp"

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_map>

namespace vmplda::ingest {

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

std::size_t code_points(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::string_view trim(std::string_view s) {
  const auto* ws = " \t";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

// Parses whitespace-separated integers; fails on anything else.
bool parse_ints(std::string_view s, std::span<long long> out) {
  std::size_t pos = 0;
  for (auto& value : out) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    const char* first = s.data() + pos;
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first) return false;
    pos = static_cast<std::size_t>(ptr - s.data());
  }
  return trim(s.substr(pos)).empty();
}

long long header_value(std::istream& in, std::size_t& line_no, const char* name) {
  std::string line;
  ++line_no;
  if (!read_line(in, line)) {
    throw parse_error(std::string("truncated header: missing ") + name, line_no);
  }
  long long value = 0;
  if (!parse_ints(line, {&value, 1}) || value < 0) {
    throw parse_error(std::string("invalid ") + name + " '" + line + "'", line_no);
  }
  return value;
}

}  // namespace

parse_error::parse_error(const std::string& what, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (code_points(current) >= 2) tokens.push_back(current);
    current.clear();
  };
  for (unsigned char c : line) {
    if (is_word_byte(c)) {
      current.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a')
                                              : static_cast<char>(c));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

Vocabulary build_vocab(std::span<const std::vector<std::string>> token_streams, int min_count) {
  if (min_count < 1) throw contract_error("build_vocab: min_count must be >= 1");
  std::vector<std::string> order;
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& stream : token_streams) {
    for (const auto& t : stream) {
      if (counts[t]++ == 0) order.push_back(t);
    }
  }
  Vocabulary vocab;
  for (const auto& t : order) {
    if (counts[t] >= static_cast<std::size_t>(min_count)) vocab.add(t);
  }
  if (vocab.empty()) throw std::runtime_error("build_vocab: vocabulary is empty after filtering");
  return vocab;
}

PlaintextCorpus read_plaintext(std::istream& in, int min_count) {
  std::vector<std::vector<std::string>> streams;
  std::string line;
  while (read_line(in, line)) streams.push_back(tokenize(line));

  std::size_t dropped = 0;
  std::vector<std::vector<std::string>> kept;
  for (auto& s : streams) {
    if (s.empty()) {
      ++dropped;
    } else {
      kept.push_back(std::move(s));
    }
  }
  if (kept.empty()) throw std::runtime_error("read_plaintext: no non-empty documents");

  auto vocab = build_vocab(kept, min_count);
  std::vector<Document> docs;
  for (const auto& s : kept) {
    Document d;
    for (const auto& t : s) {
      if (auto id = vocab.find(t)) d.tokens.push_back(*id);
    }
    if (d.tokens.empty()) {
      ++dropped;
    } else {
      docs.push_back(std::move(d));
    }
  }
  return {Corpus(std::move(docs), std::move(vocab)), dropped};
}

Corpus read_bow(std::istream& docword, std::istream& vocab_in) {
  std::size_t line_no = 0;
  const long long M = header_value(docword, line_no, "document count");
  const long long V = header_value(docword, line_no, "vocabulary size");
  const long long nnz = header_value(docword, line_no, "entry count");

  // doc -> word -> count; ordered maps give the by-word-id token order.
  std::map<long long, std::map<long long, long long>> entries;
  std::string line;
  for (long long i = 0; i < nnz; ++i) {
    ++line_no;
    if (!read_line(docword, line)) {
      throw parse_error("truncated stream: expected " + std::to_string(nnz) + " entries, got " +
                            std::to_string(i),
                        line_no);
    }
    long long triple[3];
    if (!parse_ints(line, triple)) throw parse_error("malformed entry '" + line + "'", line_no);
    const auto [doc, word, count] = triple;
    if (doc < 1 || doc > M) {
      throw parse_error("document id " + std::to_string(doc) + " out of range 1.." +
                            std::to_string(M),
                        line_no);
    }
    if (word < 1 || word > V) {
      throw parse_error("word id " + std::to_string(word) + " out of range 1.." + std::to_string(V),
                        line_no);
    }
    if (count <= 0) throw parse_error("non-positive count " + std::to_string(count), line_no);
    entries[doc - 1][word - 1] += count;
  }

  std::vector<std::string> terms;
  std::size_t vocab_line = 0;
  while (static_cast<long long>(terms.size()) < V) {
    ++vocab_line;
    if (!read_line(vocab_in, line)) {
      throw parse_error("vocabulary has " + std::to_string(terms.size()) + " terms, header says " +
                            std::to_string(V),
                        vocab_line);
    }
    terms.push_back(line);
  }
  Vocabulary vocab;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (vocab.add(terms[i]) != i) {
      throw parse_error("duplicate vocabulary term '" + terms[i] + "'", i + 1);
    }
  }

  std::vector<Document> docs;
  for (const auto& [doc, words] : entries) {
    Document d;
    for (const auto& [word, count] : words) {
      d.tokens.insert(d.tokens.end(), static_cast<std::size_t>(count), static_cast<TermId>(word));
    }
    docs.push_back(std::move(d));
  }
  if (docs.empty()) throw parse_error("no document has any entries", 0);
  return Corpus(std::move(docs), std::move(vocab));
}

void write_bow(const Corpus& corpus, std::ostream& docword, std::ostream& vocab) {
  std::vector<std::map<TermId, std::size_t>> counts(corpus.num_documents());
  std::size_t nnz = 0;
  for (std::size_t m = 0; m < corpus.num_documents(); ++m) {
    for (TermId v : corpus.document(m).tokens) {
      if (counts[m][v]++ == 0) ++nnz;
    }
  }
  docword << corpus.num_documents() << '\n' << corpus.vocab_size() << '\n' << nnz << '\n';
  for (std::size_t m = 0; m < counts.size(); ++m) {
    for (const auto& [v, c] : counts[m]) docword << m + 1 << ' ' << v + 1 << ' ' << c << '\n';
  }
  for (const auto& t : corpus.vocab().terms()) vocab << t << '\n';
}

}  // namespace vmplda::ingest
