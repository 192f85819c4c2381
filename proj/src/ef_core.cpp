#include "vmplda/ef_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace vmplda {

LogProbVector::LogProbVector(std::vector<double> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw contract_error("LogProbVector: empty");
  for (double e : entries_) {
    if (!std::isfinite(e)) throw domain_error("LogProbVector: non-finite entry");
  }
}

ProbVector::ProbVector(std::vector<double> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw contract_error("ProbVector: empty");
  double sum = 0.0;
  for (double e : entries_) {
    if (!(e >= 0.0 && e <= 1.0)) throw domain_error("ProbVector: entry outside [0, 1]");
    sum += e;
  }
  if (std::abs(sum - 1.0) > kNormalizationTol) {
    throw domain_error("ProbVector: entries sum to " + std::to_string(sum));
  }
}

ProbVector ProbVector::uniform(std::size_t n) {
  if (n == 0) throw contract_error("ProbVector: empty");
  return ProbVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

DirichletParams::DirichletParams(std::vector<double> pseudocounts)
    : pseudocounts_(std::move(pseudocounts)) {
  if (pseudocounts_.empty()) throw contract_error("DirichletParams: empty");
  for (double a : pseudocounts_) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw domain_error("DirichletParams: pseudocounts must be positive and finite");
    }
  }
}

DirichletParams DirichletParams::symmetric(std::size_t n, double value) {
  return DirichletParams(std::vector<double>(n, value));
}

std::vector<double> DirichletParams::natural_parameters() const {
  std::vector<double> eta(pseudocounts_.size());
  std::transform(pseudocounts_.begin(), pseudocounts_.end(), eta.begin(),
                 [](double a) { return a - 1.0; });
  return eta;
}

double DirichletParams::total() const {
  return std::accumulate(pseudocounts_.begin(), pseudocounts_.end(), 0.0);
}

namespace ef {

double digamma(double x) {
  if (!std::isfinite(x) || !(x > 0.0)) {
    throw domain_error("digamma: argument must be positive and finite");
  }
  // psi(x) = psi(x + n) - sum_{i<n} 1/(x + i)
  double shift = 0.0;
  while (x < 10.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  // Asymptotic expansion in 1/x^2 with Bernoulli coefficients B_2k / 2k.
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv2 * (1.0 / 12 -
      inv2 * (1.0 / 120 -
      inv2 * (1.0 / 252 -
      inv2 * (1.0 / 240 -
      inv2 * (1.0 / 132 -
      inv2 * (691.0 / 32760 -
      inv2 * (1.0 / 12)))))));
  return shift + std::log(x) - 0.5 * inv - series;
}

double log_sum_exp(std::span<const double> v) {
  if (v.empty()) throw contract_error("log_sum_exp: empty input");
  const double m = *std::max_element(v.begin(), v.end());
  if (m == -std::numeric_limits<double>::infinity()) {
    throw degenerate_input_error("log_sum_exp: all entries are -inf");
  }
  if (std::isnan(m) || std::isinf(m)) throw domain_error("log_sum_exp: non-finite maximum");
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

ProbVector log_normalize(std::span<const double> v) {
  if (v.empty()) throw contract_error("log_normalize: empty input");
  const double m = *std::max_element(v.begin(), v.end());
  if (m == -std::numeric_limits<double>::infinity()) {
    throw degenerate_input_error("log_normalize: all entries are -inf");
  }
  if (!std::isfinite(m)) throw domain_error("log_normalize: non-finite entry");
  std::vector<double> out(v.size());
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::isnan(v[i])) throw domain_error("log_normalize: NaN entry");
    out[i] = std::exp(v[i] - m);
    s += out[i];
  }
  for (double& p : out) p /= s;
  return ProbVector(std::move(out));
}

ProbVector log_normalize(const LogProbVector& v) { return log_normalize(v.entries()); }

LogProbVector log_normalized(const LogProbVector& v) {
  const double lse = log_sum_exp(v.entries());
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x -= lse;
  return LogProbVector(std::move(out));
}

LogProbVector dirichlet_expected_log(const DirichletParams& d) {
  const double psi_total = digamma(d.total());
  std::vector<double> out(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) out[k] = digamma(d[k]) - psi_total;
  return LogProbVector(std::move(out));
}

}  // namespace ef
}  // namespace vmplda
