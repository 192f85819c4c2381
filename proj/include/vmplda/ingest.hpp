#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vmplda/model.hpp"

namespace vmplda::ingest {

/// Malformed input file. `line()` is 1-based, 0 when not tied to a line.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, std::size_t line);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Lowercases ASCII letters, splits on runs of non-alphanumeric characters
/// and drops tokens shorter than two characters. Bytes >= 0x80 are treated
/// as word characters so UTF-8 words stay intact; length is counted in code
/// points.
std::vector<std::string> tokenize(std::string_view line);

/// Terms occurring at least min_count times across all streams, ids in
/// first-occurrence order. Throws contract_error if min_count < 1 and
/// std::runtime_error if nothing survives.
Vocabulary build_vocab(std::span<const std::vector<std::string>> token_streams, int min_count = 1);

struct PlaintextCorpus {
  Corpus corpus;
  std::size_t dropped_documents = 0;
};

/// One document per line. Tokens of terms below min_count are removed and
/// documents left empty are dropped (and counted). Throws std::runtime_error
/// if no document survives.
PlaintextCorpus read_plaintext(std::istream& in, int min_count = 1);

/// UCI bag-of-words: M, V, NNZ header lines followed by NNZ "docId wordId
/// count" lines with 1-based ids; `vocab` holds V terms, one per line.
/// Counts expand into repeated tokens ordered by word id. Documents without
/// entries are dropped.
Corpus read_bow(std::istream& docword, std::istream& vocab);

/// Writes `corpus` in the layout read_bow accepts.
void write_bow(const Corpus& corpus, std::ostream& docword, std::ostream& vocab);

}  // namespace vmplda::ingest
