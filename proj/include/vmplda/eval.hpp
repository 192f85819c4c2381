#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vmplda/ef_core.hpp"
#include "vmplda/model.hpp"

namespace vmplda::eval {

/// Dense-matrix reference implementation of one epoch, written
/// independently of messages/engine (its own digamma, no log-space message
/// types). Snapshot semantics match engine::run_epoch.
VariationalState vb_oracle_epoch(const VariationalState& state, const Corpus& corpus,
                                 const Hyperparameters& hyper);

struct SyntheticTruth {
  Matrix true_topic_word;  // K x V, rows normalized
  Matrix true_doc_topic;   // M x K, rows normalized
  Corpus corpus;
};

/// Samples phi_k ~ Dir(topic_priors[k]), theta_m ~ Dir(alpha_prior),
/// z ~ Cat(theta_m), w ~ Cat(phi_z). One prior per topic allows planted,
/// well-separated topics. Terms are named "w0", "w1", ...
SyntheticTruth generate_synthetic(std::size_t num_topics, std::size_t vocab_size,
                                  std::size_t num_documents, std::size_t tokens_per_doc,
                                  const DirichletParams& alpha_prior,
                                  const std::vector<DirichletParams>& topic_priors,
                                  std::uint64_t seed);

/// Same, with one beta prior shared by every topic.
SyntheticTruth generate_synthetic(std::size_t num_topics, std::size_t vocab_size,
                                  std::size_t num_documents, std::size_t tokens_per_doc,
                                  const DirichletParams& alpha_prior,
                                  const DirichletParams& beta_prior, std::uint64_t seed);

struct TopicMatch {
  /// permutation[i] is the truth row matched to estimated row i.
  std::vector<std::size_t> permutation;
  double mean_cosine = 0.0;
};

/// Greedy matching: repeatedly takes the unmatched (estimated, truth) pair
/// with the highest cosine similarity, ties going to the lower estimated
/// then truth index.
TopicMatch match_topics(const Matrix& estimated, const Matrix& truth);

struct WordProb {
  std::string term;
  double p;
  friend bool operator==(const WordProb&, const WordProb&) = default;
};

struct TopicReportRow {
  std::size_t topic;
  std::vector<WordProb> words;
  friend bool operator==(const TopicReportRow&, const TopicReportRow&) = default;
};

/// n most probable terms of topic k under the Dirichlet mean
/// beta_{k,v} / sum_v beta_{k,v}; ties go to the lower vocabulary id.
TopicReportRow top_words(const Matrix& topic_word, const Vocabulary& vocab, std::size_t k,
                         std::size_t n);
TopicReportRow top_words(const VariationalState& state, const Vocabulary& vocab, std::size_t k,
                         std::size_t n);

std::vector<TopicReportRow> topic_report(const Matrix& topic_word, const Vocabulary& vocab,
                                         std::size_t n);

/// [{"topic": k, "words": [{"term": ..., "p": ...}, ...]}, ...]
std::string report_to_json(const std::vector<TopicReportRow>& report);

}  // namespace vmplda::eval
