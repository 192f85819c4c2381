#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vmplda/ef_core.hpp"

namespace vmplda {

using TermId = std::uint32_t;

/// Bijection between terms and ids 0..V-1, ids in insertion order.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> terms);

  /// Returns the id of `term`, adding it if absent.
  TermId add(std::string_view term);
  std::optional<TermId> find(std::string_view term) const;

  const std::string& term(TermId id) const { return terms_.at(id); }
  const std::vector<std::string>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.terms_ == b.terms_; }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, TermId> index_;
};

struct Document {
  std::vector<TermId> tokens;

  std::size_t size() const { return tokens.size(); }
  friend bool operator==(const Document&, const Document&) = default;
};

/// A validated collection of non-empty documents over a vocabulary.
class Corpus {
 public:
  /// Throws contract_error if there are no documents, a document is empty,
  /// or a token id is >= vocab.size().
  Corpus(std::vector<Document> documents, Vocabulary vocab);

  const std::vector<Document>& documents() const { return documents_; }
  const Document& document(std::size_t m) const { return documents_[m]; }
  const Vocabulary& vocab() const { return vocab_; }
  std::size_t num_documents() const { return documents_.size(); }
  std::size_t vocab_size() const { return vocab_.size(); }

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  std::vector<Document> documents_;
  Vocabulary vocab_;
};

std::size_t total_tokens(const Corpus& corpus);

/// Shared priors: one alpha vector for every document, one beta vector for
/// every topic.
struct Hyperparameters {
  DirichletParams alpha_prior;  // length K
  DirichletParams beta_prior;   // length V

  Hyperparameters(DirichletParams alpha, DirichletParams beta);
  static Hyperparameters symmetric(std::size_t num_topics, std::size_t vocab_size, double alpha,
                                   double beta);

  std::size_t num_topics() const { return alpha_prior.size(); }
  std::size_t vocab_size() const { return beta_prior.size(); }
};

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Largest absolute elementwise difference. Throws contract_error on shape mismatch.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Variational posterior: Dirichlet parameters for every theta_m (doc_topic,
/// M x K) and phi_k (topic_word, K x V), plus the per-occurrence topic
/// responsibilities r_{m,n,.}.
struct VariationalState {
  Matrix doc_topic;
  Matrix topic_word;
  std::vector<std::vector<ProbVector>> responsibilities;

  std::size_t num_documents() const { return doc_topic.rows(); }
  std::size_t num_topics() const { return doc_topic.cols(); }
  std::size_t vocab_size() const { return topic_word.cols(); }

  DirichletParams doc_params(std::size_t m) const;
  DirichletParams topic_params(std::size_t k) const;
};

/// Perturbation scale applied to the topic-word rows at initialization,
/// relative to mean(beta_prior).
inline constexpr double kInitPerturbation = 0.1;

/// doc_topic rows = alpha_prior; topic_word rows = beta_prior + U[0, amplitude
/// * mean(beta_prior)] noise from a generator seeded with `seed`;
/// responsibilities uniform.
VariationalState init_state(const Corpus& corpus, const Hyperparameters& hyper, std::uint64_t seed,
                            double amplitude = kInitPerturbation);

/// Throws contract_error unless state dimensions agree with corpus and hyper.
void check_dimensions(const VariationalState& state, const Corpus& corpus,
                      const Hyperparameters& hyper);

/// Checks every VariationalState invariant: positive parameters, normalized
/// responsibilities and pseudocount conservation for both Dirichlet sides.
/// Returns a description of the first violation, or nullopt.
std::optional<std::string> check_state_invariants(const VariationalState& state,
                                                  const Corpus& corpus,
                                                  const Hyperparameters& hyper,
                                                  double alpha_tol = 1e-9,
                                                  double beta_tol = 1e-6);

}  // namespace vmplda
