#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "vmplda/ef_core.hpp"
#include "vmplda/model.hpp"

namespace vmplda::engine {

struct FitOptions {
  int max_epochs = 100;
  /// Stop once the L-infinity change of (doc_topic, topic_word) over one
  /// epoch falls below tol. +inf stops after the first epoch.
  double tol = 1e-4;
  std::uint64_t seed = 0;
  bool parallel_documents = false;
  /// Worker count when parallel_documents is set; 0 picks hardware concurrency.
  std::size_t threads = 0;

  /// Throws contract_error if max_epochs < 1 or tol is not > 0.
  void validate() const;
  std::size_t worker_count() const;
};

struct FitDiagnostics {
  int epochs_run = 0;
  std::vector<double> deltas;
  bool converged = false;
};

struct FitResult {
  VariationalState state;
  FitDiagnostics diagnostics;
};

/// Called after every epoch with the 1-based epoch index, its delta and the new state.
using EpochObserver = std::function<void(int epoch, double delta, const VariationalState&)>;

/// One pass of the fixed message-passing schedule over the whole corpus.
/// Output is bitwise identical for every num_threads value.
VariationalState run_epoch(const VariationalState& state, const Corpus& corpus,
                           const Hyperparameters& hyper, std::size_t num_threads = 1);

/// L-infinity distance over doc_topic and topic_word.
double parameter_delta(const VariationalState& a, const VariationalState& b);

/// init_state followed by run_epoch until the parameter delta drops below
/// opts.tol or opts.max_epochs epochs have run.
FitResult fit(const Corpus& corpus, const Hyperparameters& hyper, const FitOptions& opts,
              const EpochObserver& observer = {});

/// Thrown when a document references ids outside the trained vocabulary.
class out_of_vocabulary_error : public std::out_of_range {
 public:
  out_of_vocabulary_error(std::vector<TermId> ids, std::size_t vocab_size);
  const std::vector<TermId>& ids() const { return ids_; }

 private:
  std::vector<TermId> ids_;
};

/// Fold-in inference: iterates the per-document part of the schedule for a
/// new document with topic_word held fixed, until the document's alpha moves
/// less than opts.tol or opts.max_epochs passes have run.
DirichletParams infer_document(const Matrix& topic_word, const Document& doc,
                               const Hyperparameters& hyper, const FitOptions& opts);
DirichletParams infer_document(const VariationalState& state, const Document& doc,
                               const Hyperparameters& hyper, const FitOptions& opts);

}  // namespace vmplda::engine
