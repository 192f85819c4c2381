#pragma once

// Variational messages on the smoothed LDA graph
//
//   alpha -> theta_m -> Z_{m,n} -> W_{m,n} <- phi_k <- beta
//
// Each function computes one message or one conjugate parameter update and
// is a pure function of its arguments. Categorical messages are carried in
// log space (LogProbVector) until they are turned into responsibilities.

#include <span>
#include <vector>

#include "vmplda/ef_core.hpp"
#include "vmplda/model.hpp"

namespace vmplda::messages {

/// theta_m -> Z_{m,n}: expected sufficient statistics <ln theta_m>.
LogProbVector msg_theta_to_z(const DirichletParams& alpha_m);

/// phi_k -> W_{m,n}: expected log word distribution <ln phi_k> (length V).
LogProbVector msg_phi_to_w(const DirichletParams& beta_k);

/// W_{m,n} -> Z_{m,n}: the slice <ln phi_{k,observed}> over k, normalized
/// over topics in the log domain. Throws std::out_of_range if `observed` is
/// outside any topic's vector.
LogProbVector msg_w_to_z(std::span<const LogProbVector> expected_log_phi, TermId observed);

/// r_{m,n,.} = normalize(exp(theta_msg + w_msg)): the Z node's posterior
/// after it has absorbed both the parent and the child message.
ProbVector compute_responsibility(const LogProbVector& theta_msg, const LogProbVector& w_msg);

/// Z_{m,n} -> theta_m: the expected indicator vector <[Z = k]>, i.e. r itself.
std::vector<double> msg_z_to_theta(const ProbVector& r);

/// alpha'_k = alpha_prior_k + sum_n r_{n,k}.
DirichletParams update_alpha(const DirichletParams& alpha_prior,
                             std::span<const ProbVector> doc_responsibilities);

/// Z_{m,n} -> W_{m,n}: theta*_m, the normalized exp(<ln theta_m>) under the
/// updated document parameters.
ProbVector msg_z_to_w(const DirichletParams& alpha_m_updated);

/// Log-domain form of msg_z_to_w: ln theta*_m.
LogProbVector msg_z_to_w_log(const DirichletParams& alpha_m_updated);

/// Sparse K x V contribution of a single observed word: column `observed`
/// holds `r`, every other column is zero. Non-owning view of `r`.
struct WordContribution {
  TermId observed;
  std::span<const double> r;
};

/// W_{m,n} -> phi_k for all k. Throws std::out_of_range if observed >= V.
WordContribution msg_w_to_phi(const ProbVector& r, TermId observed, std::size_t vocab_size);

/// beta'_{k,v} = beta_prior_v + sum of r_k over contributions observing v.
/// Contributions are accumulated in the order given.
Matrix update_beta(const DirichletParams& beta_prior, std::span<const WordContribution> contributions,
                   std::size_t num_topics);

}  // namespace vmplda::messages
