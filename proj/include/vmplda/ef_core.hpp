#pragma once

// Exponential-family primitives shared by every message computation:
// digamma, log-space normalization and Dirichlet expected log moments.

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vmplda {

// Numeric tolerances reused across modules.
inline constexpr double kNormalizationTol = 1e-12;
inline constexpr double kDigammaTol = 1e-10;

/// Input violates a function's mathematical domain (e.g. digamma(x <= 0)).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input carries no usable mass (e.g. every log-probability is -inf).
class degenerate_input_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched dimensions or violated precondition between collaborating objects.
class contract_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Natural-log-domain vector. Entries are finite and there is at least one.
class LogProbVector {
 public:
  LogProbVector() = default;
  explicit LogProbVector(std::vector<double> entries);

  std::size_t size() const { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  std::span<const double> entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const LogProbVector&, const LogProbVector&) = default;

 private:
  std::vector<double> entries_;
};

/// Probability vector: entries in [0, 1] summing to one within kNormalizationTol.
class ProbVector {
 public:
  ProbVector() = default;
  explicit ProbVector(std::vector<double> entries);

  static ProbVector uniform(std::size_t n);

  std::size_t size() const { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  std::span<const double> entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const ProbVector&, const ProbVector&) = default;

 private:
  std::vector<double> entries_;
};

/// Dirichlet pseudocounts; every entry strictly positive. The natural
/// parameters of the distribution are pseudocounts - 1.
class DirichletParams {
 public:
  DirichletParams() = default;
  explicit DirichletParams(std::vector<double> pseudocounts);

  static DirichletParams symmetric(std::size_t n, double value);

  std::size_t size() const { return pseudocounts_.size(); }
  double operator[](std::size_t i) const { return pseudocounts_[i]; }
  std::span<const double> pseudocounts() const { return pseudocounts_; }
  std::vector<double> natural_parameters() const;
  double total() const;

  friend bool operator==(const DirichletParams&, const DirichletParams&) = default;

 private:
  std::vector<double> pseudocounts_;
};

namespace ef {

/// Digamma function psi(x) = d/dx ln Gamma(x). Absolute error <= 1e-10 on
/// [1e-3, 1e6]. Throws domain_error for x <= 0, NaN or infinity.
double digamma(double x);

/// log(sum(exp(v))) with the max-shift. Entries may be -inf; throws
/// degenerate_input_error if all of them are.
double log_sum_exp(std::span<const double> v);

/// exp(v_i - logsumexp(v)).
ProbVector log_normalize(const LogProbVector& v);
ProbVector log_normalize(std::span<const double> v);

/// v_i - logsumexp(v), i.e. the logarithm of log_normalize(v), computed
/// without leaving the log domain.
LogProbVector log_normalized(const LogProbVector& v);

/// Expected sufficient statistics of a Dirichlet: <ln theta_k> =
/// psi(a_k) - psi(sum_j a_j).
LogProbVector dirichlet_expected_log(const DirichletParams& d);

}  // namespace ef
}  // namespace vmplda
