#include "vmplda/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "vmplda/messages.hpp"

namespace vmplda::engine {

namespace {

// Runs fn(begin, end) over contiguous blocks of [0, n), one block per worker.
template <typename Fn>
void for_each_block(std::size_t n, std::size_t workers, Fn&& fn) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(n, w * chunk);
      const std::size_t end = std::min(n, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          fn(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<LogProbVector> expected_log_topics(const Matrix& topic_word) {
  std::vector<LogProbVector> lambda;
  lambda.reserve(topic_word.rows());
  for (std::size_t k = 0; k < topic_word.rows(); ++k) {
    auto row = topic_word.row(k);
    lambda.push_back(messages::msg_phi_to_w(DirichletParams({row.begin(), row.end()})));
  }
  return lambda;
}

// First word loop plus the theta update for one document: every token sees
// the same theta message, so the per-word Z -> theta sends are batched into
// a single update_alpha.
DirichletParams document_pass(const Document& doc, const LogProbVector& theta_msg,
                              std::span<const LogProbVector> lambda,
                              const DirichletParams& alpha_prior, std::vector<ProbVector>& resp) {
  resp.resize(doc.size());
  for (std::size_t n = 0; n < doc.size(); ++n) {
    const auto w_msg = messages::msg_w_to_z(lambda, doc.tokens[n]);
    resp[n] = messages::compute_responsibility(theta_msg, w_msg);
  }
  return messages::update_alpha(alpha_prior, resp);
}

}  // namespace

void FitOptions::validate() const {
  if (max_epochs < 1) throw contract_error("FitOptions: max_epochs must be >= 1");
  if (!(tol > 0.0)) throw contract_error("FitOptions: tol must be > 0");
}

std::size_t FitOptions::worker_count() const {
  if (!parallel_documents) return 1;
  if (threads > 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

VariationalState run_epoch(const VariationalState& state, const Corpus& corpus,
                           const Hyperparameters& hyper, std::size_t num_threads) {
  check_dimensions(state, corpus, hyper);
  const std::size_t M = corpus.num_documents();
  const std::size_t K = hyper.num_topics();

  // phi_k -> W_{m,n}. The same K messages reach every word node, so they are
  // computed once from the epoch-start topic_word and shared read-only.
  const auto lambda = expected_log_topics(state.topic_word);

  VariationalState next;
  next.doc_topic = Matrix(M, K);
  next.responsibilities.resize(M);

  for_each_block(M, num_threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      // theta_m -> Z_{m,n} as left by the previous epoch's second word loop
      // (theta -> Z, Z -> W), which is a function of the stored alpha_m.
      // On the first epoch this is the initial alpha_m.
      const auto theta_msg = messages::msg_z_to_w_log(state.doc_params(m));

      // First word loop: phi -> W, observe, W -> Z, Z -> theta.
      const auto alpha = document_pass(corpus.document(m), theta_msg, lambda, hyper.alpha_prior,
                                       next.responsibilities[m]);
      std::copy(alpha.pseudocounts().begin(), alpha.pseudocounts().end(),
                next.doc_topic.row(m).begin());
      // Second word loop (theta -> Z, Z -> W) produces msg_z_to_w(alpha'_m);
      // it is consumed at the start of the next epoch above.
    }
  });

  // W_{m,n} -> phi_k for every word in every document, reduced in document
  // order on a single thread.
  std::vector<messages::WordContribution> contributions;
  contributions.reserve(total_tokens(corpus));
  for (std::size_t m = 0; m < M; ++m) {
    const auto& doc = corpus.document(m);
    for (std::size_t n = 0; n < doc.size(); ++n) {
      contributions.push_back(
          messages::msg_w_to_phi(next.responsibilities[m][n], doc.tokens[n], hyper.vocab_size()));
    }
  }
  next.topic_word = messages::update_beta(hyper.beta_prior, contributions, K);
  return next;
}

double parameter_delta(const VariationalState& a, const VariationalState& b) {
  return std::max(max_abs_diff(a.doc_topic, b.doc_topic), max_abs_diff(a.topic_word, b.topic_word));
}

FitResult fit(const Corpus& corpus, const Hyperparameters& hyper, const FitOptions& opts,
              const EpochObserver& observer) {
  opts.validate();
  FitResult result{init_state(corpus, hyper, opts.seed), {}};
  const std::size_t workers = opts.worker_count();
  for (int epoch = 1; epoch <= opts.max_epochs; ++epoch) {
    auto next = run_epoch(result.state, corpus, hyper, workers);
    const double delta = parameter_delta(result.state, next);
    result.state = std::move(next);
    result.diagnostics.epochs_run = epoch;
    result.diagnostics.deltas.push_back(delta);
    if (observer) observer(epoch, delta, result.state);
    if (delta < opts.tol) {
      result.diagnostics.converged = true;
      break;
    }
  }
  return result;
}

out_of_vocabulary_error::out_of_vocabulary_error(std::vector<TermId> ids, std::size_t vocab_size)
    : std::out_of_range([&] {
        std::ostringstream msg;
        msg << "token ids outside vocabulary of size " << vocab_size << ":";
        for (TermId id : ids) msg << ' ' << id;
        return msg.str();
      }()),
      ids_(std::move(ids)) {}

DirichletParams infer_document(const Matrix& topic_word, const Document& doc,
                               const Hyperparameters& hyper, const FitOptions& opts) {
  opts.validate();
  if (topic_word.rows() != hyper.num_topics() || topic_word.cols() != hyper.vocab_size()) {
    throw contract_error("infer_document: topic_word shape does not match hyperparameters");
  }
  if (doc.tokens.empty()) throw contract_error("infer_document: empty document");
  std::vector<TermId> bad;
  for (TermId v : doc.tokens) {
    if (v >= topic_word.cols() && std::find(bad.begin(), bad.end(), v) == bad.end()) {
      bad.push_back(v);
    }
  }
  if (!bad.empty()) throw out_of_vocabulary_error(std::move(bad), topic_word.cols());

  const auto lambda = expected_log_topics(topic_word);
  DirichletParams alpha = hyper.alpha_prior;
  std::vector<ProbVector> resp;
  for (int pass = 0; pass < opts.max_epochs; ++pass) {
    auto next = document_pass(doc, messages::msg_z_to_w_log(alpha), lambda, hyper.alpha_prior, resp);
    double delta = 0.0;
    for (std::size_t k = 0; k < next.size(); ++k) {
      delta = std::max(delta, std::abs(next[k] - alpha[k]));
    }
    alpha = std::move(next);
    if (delta < opts.tol) break;
  }
  return alpha;
}

DirichletParams infer_document(const VariationalState& state, const Document& doc,
                               const Hyperparameters& hyper, const FitOptions& opts) {
  return infer_document(state.topic_word, doc, hyper, opts);
}

}  // namespace vmplda::engine
