#include "vmplda/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace vmplda {

Vocabulary::Vocabulary(std::vector<std::string> terms) {
  for (auto& t : terms) {
    if (index_.count(t)) throw contract_error("Vocabulary: duplicate term '" + t + "'");
    add(t);
  }
}

TermId Vocabulary::add(std::string_view term) {
  std::string key(term);
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  const auto id = static_cast<TermId>(terms_.size());
  terms_.push_back(key);
  index_.emplace(std::move(key), id);
  return id;
}

std::optional<TermId> Vocabulary::find(std::string_view term) const {
  if (auto it = index_.find(std::string(term)); it != index_.end()) return it->second;
  return std::nullopt;
}

Corpus::Corpus(std::vector<Document> documents, Vocabulary vocab)
    : documents_(std::move(documents)), vocab_(std::move(vocab)) {
  if (documents_.empty()) throw contract_error("Corpus: no documents");
  for (std::size_t m = 0; m < documents_.size(); ++m) {
    if (documents_[m].tokens.empty()) {
      throw contract_error("Corpus: document " + std::to_string(m) + " is empty");
    }
    for (TermId v : documents_[m].tokens) {
      if (v >= vocab_.size()) {
        throw contract_error("Corpus: document " + std::to_string(m) + " has token id " +
                             std::to_string(v) + " outside vocabulary of size " +
                             std::to_string(vocab_.size()));
      }
    }
  }
}

std::size_t total_tokens(const Corpus& corpus) {
  std::size_t n = 0;
  for (const auto& d : corpus.documents()) n += d.size();
  return n;
}

Hyperparameters::Hyperparameters(DirichletParams alpha, DirichletParams beta)
    : alpha_prior(std::move(alpha)), beta_prior(std::move(beta)) {
  if (alpha_prior.size() < 2) throw contract_error("Hyperparameters: need at least 2 topics");
}

Hyperparameters Hyperparameters::symmetric(std::size_t num_topics, std::size_t vocab_size,
                                           double alpha, double beta) {
  return {DirichletParams::symmetric(num_topics, alpha), DirichletParams::symmetric(vocab_size, beta)};
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw contract_error("max_abs_diff: shape mismatch");
  }
  double d = 0.0;
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

DirichletParams VariationalState::doc_params(std::size_t m) const {
  auto r = doc_topic.row(m);
  return DirichletParams({r.begin(), r.end()});
}

DirichletParams VariationalState::topic_params(std::size_t k) const {
  auto r = topic_word.row(k);
  return DirichletParams({r.begin(), r.end()});
}

VariationalState init_state(const Corpus& corpus, const Hyperparameters& hyper, std::uint64_t seed,
                            double amplitude) {
  const std::size_t M = corpus.num_documents();
  const std::size_t K = hyper.num_topics();
  const std::size_t V = hyper.vocab_size();
  if (corpus.vocab_size() != V) {
    throw contract_error("init_state: beta_prior length " + std::to_string(V) +
                         " does not match vocabulary size " + std::to_string(corpus.vocab_size()));
  }

  VariationalState s;
  s.doc_topic = Matrix(M, K);
  for (std::size_t m = 0; m < M; ++m) {
    std::copy(hyper.alpha_prior.pseudocounts().begin(), hyper.alpha_prior.pseudocounts().end(),
              s.doc_topic.row(m).begin());
  }

  const double upper = amplitude * hyper.beta_prior.total() / static_cast<double>(V);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(0.0, upper);
  s.topic_word = Matrix(K, V);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t v = 0; v < V; ++v) {
      s.topic_word(k, v) = hyper.beta_prior[v] + (upper > 0.0 ? noise(rng) : 0.0);
    }
  }

  const auto uniform = ProbVector::uniform(K);
  s.responsibilities.resize(M);
  for (std::size_t m = 0; m < M; ++m) {
    s.responsibilities[m].assign(corpus.document(m).size(), uniform);
  }
  return s;
}

void check_dimensions(const VariationalState& state, const Corpus& corpus,
                      const Hyperparameters& hyper) {
  const std::size_t K = hyper.num_topics();
  std::ostringstream err;
  if (state.doc_topic.rows() != corpus.num_documents() || state.doc_topic.cols() != K) {
    err << "doc_topic is " << state.doc_topic.rows() << "x" << state.doc_topic.cols()
        << ", expected " << corpus.num_documents() << "x" << K;
  } else if (state.topic_word.rows() != K || state.topic_word.cols() != hyper.vocab_size() ||
             hyper.vocab_size() != corpus.vocab_size()) {
    err << "topic_word is " << state.topic_word.rows() << "x" << state.topic_word.cols()
        << ", expected " << K << "x" << corpus.vocab_size();
  } else if (state.responsibilities.size() != corpus.num_documents()) {
    err << "responsibilities cover " << state.responsibilities.size() << " documents, expected "
        << corpus.num_documents();
  } else {
    for (std::size_t m = 0; m < corpus.num_documents(); ++m) {
      if (state.responsibilities[m].size() != corpus.document(m).size()) {
        err << "document " << m << " has " << state.responsibilities[m].size()
            << " responsibilities for " << corpus.document(m).size() << " tokens";
        break;
      }
    }
  }
  if (!err.str().empty()) throw contract_error("dimension mismatch: " + err.str());
}

std::optional<std::string> check_state_invariants(const VariationalState& state,
                                                  const Corpus& corpus,
                                                  const Hyperparameters& hyper, double alpha_tol,
                                                  double beta_tol) {
  try {
    check_dimensions(state, corpus, hyper);
  } catch (const contract_error& e) {
    return e.what();
  }
  std::ostringstream err;
  err.precision(17);
  for (double x : state.doc_topic.data()) {
    if (!(x > 0.0)) return "doc_topic has a non-positive entry";
  }
  for (double x : state.topic_word.data()) {
    if (!(x > 0.0)) return "topic_word has a non-positive entry";
  }
  for (const auto& doc : state.responsibilities) {
    for (const auto& r : doc) {
      double s = 0.0;
      for (double p : r) s += p;
      if (std::abs(s - 1.0) > kNormalizationTol) return "responsibility vector not normalized";
    }
  }
  for (std::size_t m = 0; m < state.num_documents(); ++m) {
    double added = 0.0;
    for (std::size_t k = 0; k < state.num_topics(); ++k) {
      added += state.doc_topic(m, k) - hyper.alpha_prior[k];
    }
    const double n = static_cast<double>(corpus.document(m).size());
    if (std::abs(added - n) > alpha_tol) {
      err << "document " << m << ": alpha mass " << added << " != " << n;
      return err.str();
    }
  }
  double added = 0.0;
  for (std::size_t k = 0; k < state.num_topics(); ++k) {
    for (std::size_t v = 0; v < state.vocab_size(); ++v) {
      added += state.topic_word(k, v) - hyper.beta_prior[v];
    }
  }
  const double total = static_cast<double>(total_tokens(corpus));
  if (std::abs(added - total) > beta_tol) {
    err << "beta mass " << added << " != " << total;
    return err.str();
  }
  return std::nullopt;
}

}  // namespace vmplda
