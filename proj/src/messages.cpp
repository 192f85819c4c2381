#include "vmplda/messages.hpp"

#include <stdexcept>
#include <string>

namespace vmplda::messages {

LogProbVector msg_theta_to_z(const DirichletParams& alpha_m) {
  return ef::dirichlet_expected_log(alpha_m);
}

LogProbVector msg_phi_to_w(const DirichletParams& beta_k) {
  return ef::dirichlet_expected_log(beta_k);
}

LogProbVector msg_w_to_z(std::span<const LogProbVector> expected_log_phi, TermId observed) {
  if (expected_log_phi.empty()) throw contract_error("msg_w_to_z: no topics");
  std::vector<double> slice(expected_log_phi.size());
  for (std::size_t k = 0; k < expected_log_phi.size(); ++k) {
    if (observed >= expected_log_phi[k].size()) {
      throw std::out_of_range("msg_w_to_z: word id " + std::to_string(observed) +
                              " outside vocabulary of size " +
                              std::to_string(expected_log_phi[k].size()));
    }
    slice[k] = expected_log_phi[k][observed];
  }
  // The raw slice is not a distribution; normalize across topics.
  return ef::log_normalized(LogProbVector(std::move(slice)));
}

ProbVector compute_responsibility(const LogProbVector& theta_msg, const LogProbVector& w_msg) {
  if (theta_msg.size() != w_msg.size()) {
    throw contract_error("compute_responsibility: message lengths differ");
  }
  std::vector<double> eta(theta_msg.size());
  for (std::size_t k = 0; k < eta.size(); ++k) eta[k] = theta_msg[k] + w_msg[k];
  return ef::log_normalize(eta);
}

std::vector<double> msg_z_to_theta(const ProbVector& r) { return {r.begin(), r.end()}; }

DirichletParams update_alpha(const DirichletParams& alpha_prior,
                             std::span<const ProbVector> doc_responsibilities) {
  const std::size_t K = alpha_prior.size();
  std::vector<double> counts(K, 0.0);
  for (const auto& r : doc_responsibilities) {
    if (r.size() != K) throw contract_error("update_alpha: responsibility length mismatch");
    const auto msg = msg_z_to_theta(r);
    for (std::size_t k = 0; k < K; ++k) counts[k] += msg[k];
  }
  for (std::size_t k = 0; k < K; ++k) counts[k] += alpha_prior[k];
  return DirichletParams(std::move(counts));
}

ProbVector msg_z_to_w(const DirichletParams& alpha_m_updated) {
  return ef::log_normalize(msg_theta_to_z(alpha_m_updated));
}

LogProbVector msg_z_to_w_log(const DirichletParams& alpha_m_updated) {
  return ef::log_normalized(msg_theta_to_z(alpha_m_updated));
}

WordContribution msg_w_to_phi(const ProbVector& r, TermId observed, std::size_t vocab_size) {
  if (observed >= vocab_size) {
    throw std::out_of_range("msg_w_to_phi: word id " + std::to_string(observed) +
                            " outside vocabulary of size " + std::to_string(vocab_size));
  }
  return {observed, r.entries()};
}

Matrix update_beta(const DirichletParams& beta_prior, std::span<const WordContribution> contributions,
                   std::size_t num_topics) {
  const std::size_t V = beta_prior.size();
  Matrix counts(num_topics, V, 0.0);
  for (const auto& c : contributions) {
    if (c.observed >= V) throw std::out_of_range("update_beta: word id outside vocabulary");
    if (c.r.size() != num_topics) throw contract_error("update_beta: responsibility length mismatch");
    for (std::size_t k = 0; k < num_topics; ++k) counts(k, c.observed) += c.r[k];
  }
  for (std::size_t k = 0; k < num_topics; ++k) {
    for (std::size_t v = 0; v < V; ++v) counts(k, v) += beta_prior[v];
  }
  return counts;
}

}  // namespace vmplda::messages
