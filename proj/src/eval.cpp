#include "vmplda/eval.hpp"

#include <algorithm>
#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace vmplda::eval {

namespace {

// E[ln x_j] under Dir(row) for every row of a matrix.
Matrix expected_log_rows(const Matrix& params) {
  Matrix out(params.rows(), params.cols());
  for (std::size_t i = 0; i < params.rows(); ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < params.cols(); ++j) total += params(i, j);
    const double psi_total = boost::math::digamma(total);
    for (std::size_t j = 0; j < params.cols(); ++j) {
      out(i, j) = boost::math::digamma(params(i, j)) - psi_total;
    }
  }
  return out;
}

std::vector<double> sample_dirichlet(std::span<const double> alpha, std::mt19937_64& rng) {
  std::vector<double> x(alpha.size());
  double total = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    x[i] = std::gamma_distribution<double>(alpha[i], 1.0)(rng);
    total += x[i];
  }
  if (!(total > 0.0)) {
    // Every gamma draw underflowed; fall back to the prior mean.
    const double a = std::accumulate(alpha.begin(), alpha.end(), 0.0);
    for (std::size_t i = 0; i < alpha.size(); ++i) x[i] = alpha[i] / a;
    return x;
  }
  for (double& v : x) v /= total;
  return x;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

VariationalState vb_oracle_epoch(const VariationalState& state, const Corpus& corpus,
                                 const Hyperparameters& hyper) {
  check_dimensions(state, corpus, hyper);
  const std::size_t M = corpus.num_documents();
  const std::size_t K = hyper.num_topics();
  const std::size_t V = hyper.vocab_size();

  const Matrix elog_theta = expected_log_rows(state.doc_topic);  // M x K
  const Matrix elog_phi = expected_log_rows(state.topic_word);   // K x V

  VariationalState next;
  next.doc_topic = Matrix(M, K);
  next.topic_word = Matrix(K, V);
  next.responsibilities.resize(M);
  Matrix word_counts(K, V, 0.0);

  std::vector<double> score(K);
  for (std::size_t m = 0; m < M; ++m) {
    std::vector<double> doc_counts(K, 0.0);
    for (TermId w : corpus.document(m).tokens) {
      double best = -INFINITY;
      for (std::size_t k = 0; k < K; ++k) {
        score[k] = elog_theta(m, k) + elog_phi(k, w);
        best = std::max(best, score[k]);
      }
      double z = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        score[k] = std::exp(score[k] - best);
        z += score[k];
      }
      for (std::size_t k = 0; k < K; ++k) {
        score[k] /= z;
        doc_counts[k] += score[k];
        word_counts(k, w) += score[k];
      }
      next.responsibilities[m].emplace_back(score);
    }
    for (std::size_t k = 0; k < K; ++k) next.doc_topic(m, k) = hyper.alpha_prior[k] + doc_counts[k];
  }
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t v = 0; v < V; ++v) next.topic_word(k, v) = hyper.beta_prior[v] + word_counts(k, v);
  }
  return next;
}

SyntheticTruth generate_synthetic(std::size_t num_topics, std::size_t vocab_size,
                                  std::size_t num_documents, std::size_t tokens_per_doc,
                                  const DirichletParams& alpha_prior,
                                  const std::vector<DirichletParams>& topic_priors,
                                  std::uint64_t seed) {
  if (num_topics < 2) throw contract_error("generate_synthetic: need K >= 2");
  if (vocab_size < num_topics) throw contract_error("generate_synthetic: need V >= K");
  if (num_documents < 1 || tokens_per_doc < 1) {
    throw contract_error("generate_synthetic: need M >= 1 and N >= 1");
  }
  if (alpha_prior.size() != num_topics) throw contract_error("generate_synthetic: alpha length != K");
  if (topic_priors.size() != num_topics) throw contract_error("generate_synthetic: need K beta priors");
  for (const auto& b : topic_priors) {
    if (b.size() != vocab_size) throw contract_error("generate_synthetic: beta length != V");
  }

  std::mt19937_64 rng(seed);
  Matrix phi(num_topics, vocab_size);
  for (std::size_t k = 0; k < num_topics; ++k) {
    auto row = sample_dirichlet(topic_priors[k].pseudocounts(), rng);
    std::copy(row.begin(), row.end(), phi.row(k).begin());
  }

  std::vector<std::discrete_distribution<std::size_t>> word_dist;
  for (std::size_t k = 0; k < num_topics; ++k) {
    auto row = phi.row(k);
    word_dist.emplace_back(row.begin(), row.end());
  }

  Matrix theta(num_documents, num_topics);
  std::vector<Document> docs(num_documents);
  for (std::size_t m = 0; m < num_documents; ++m) {
    auto row = sample_dirichlet(alpha_prior.pseudocounts(), rng);
    std::copy(row.begin(), row.end(), theta.row(m).begin());
    std::discrete_distribution<std::size_t> topic_dist(row.begin(), row.end());
    docs[m].tokens.reserve(tokens_per_doc);
    for (std::size_t n = 0; n < tokens_per_doc; ++n) {
      const std::size_t z = topic_dist(rng);
      docs[m].tokens.push_back(static_cast<TermId>(word_dist[z](rng)));
    }
  }

  std::vector<std::string> terms;
  for (std::size_t v = 0; v < vocab_size; ++v) terms.push_back("w" + std::to_string(v));
  return {std::move(phi), std::move(theta), Corpus(std::move(docs), Vocabulary(std::move(terms)))};
}

SyntheticTruth generate_synthetic(std::size_t num_topics, std::size_t vocab_size,
                                  std::size_t num_documents, std::size_t tokens_per_doc,
                                  const DirichletParams& alpha_prior,
                                  const DirichletParams& beta_prior, std::uint64_t seed) {
  return generate_synthetic(num_topics, vocab_size, num_documents, tokens_per_doc, alpha_prior,
                            std::vector<DirichletParams>(num_topics, beta_prior), seed);
}

TopicMatch match_topics(const Matrix& estimated, const Matrix& truth) {
  if (estimated.rows() != truth.rows() || estimated.cols() != truth.cols()) {
    throw contract_error("match_topics: shape mismatch");
  }
  const std::size_t K = truth.rows();
  Matrix sim(K, K);
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = 0; j < K; ++j) sim(i, j) = cosine(estimated.row(i), truth.row(j));
  }

  TopicMatch out;
  out.permutation.assign(K, 0);
  std::vector<bool> est_used(K, false), truth_used(K, false);
  double total = 0.0;
  for (std::size_t pick = 0; pick < K; ++pick) {
    std::size_t bi = 0, bj = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < K; ++i) {
      if (est_used[i]) continue;
      for (std::size_t j = 0; j < K; ++j) {
        if (truth_used[j]) continue;
        if (sim(i, j) > best) {
          best = sim(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    est_used[bi] = truth_used[bj] = true;
    out.permutation[bi] = bj;
    total += best;
  }
  out.mean_cosine = K ? total / static_cast<double>(K) : 0.0;
  return out;
}

TopicReportRow top_words(const Matrix& topic_word, const Vocabulary& vocab, std::size_t k,
                         std::size_t n) {
  if (k >= topic_word.rows()) {
    throw std::out_of_range("top_words: topic " + std::to_string(k) + " out of range");
  }
  if (n < 1) throw contract_error("top_words: n must be >= 1");
  if (vocab.size() != topic_word.cols()) throw contract_error("top_words: vocabulary size mismatch");

  const auto row = topic_word.row(k);
  const double total = std::accumulate(row.begin(), row.end(), 0.0);
  std::vector<std::size_t> ids(row.size());
  std::iota(ids.begin(), ids.end(), 0);
  n = std::min(n, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n), ids.end(),
                    [&](std::size_t a, std::size_t b) {
                      return row[a] != row[b] ? row[a] > row[b] : a < b;
                    });
  TopicReportRow out{k, {}};
  for (std::size_t i = 0; i < n; ++i) {
    out.words.push_back({vocab.term(static_cast<TermId>(ids[i])), row[ids[i]] / total});
  }
  return out;
}

TopicReportRow top_words(const VariationalState& state, const Vocabulary& vocab, std::size_t k,
                         std::size_t n) {
  return top_words(state.topic_word, vocab, k, n);
}

std::vector<TopicReportRow> topic_report(const Matrix& topic_word, const Vocabulary& vocab,
                                         std::size_t n) {
  std::vector<TopicReportRow> out;
  for (std::size_t k = 0; k < topic_word.rows(); ++k) out.push_back(top_words(topic_word, vocab, k, n));
  return out;
}

std::string report_to_json(const std::vector<TopicReportRow>& report) {
  auto arr = nlohmann::json::array();
  for (const auto& row : report) {
    auto words = nlohmann::json::array();
    for (const auto& w : row.words) words.push_back({{"term", w.term}, {"p", w.p}});
    arr.push_back({{"topic", row.topic}, {"words", std::move(words)}});
  }
  return arr.dump(2);
}

}  // namespace vmplda::eval
