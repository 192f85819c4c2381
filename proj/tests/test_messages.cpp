#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "vmplda/messages.hpp"

using namespace vmplda;
using namespace vmplda::messages;

namespace {

std::vector<ProbVector> three_responsibilities() {
  return {ProbVector({0.8, 0.2}), ProbVector({0.5, 0.5}), ProbVector({0.2, 0.8})};
}

ProbVector random_prob(std::size_t K, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-5, 5);
  std::vector<double> v(K);
  for (double& x : v) x = u(rng);
  return ef::log_normalize(v);
}

}  // namespace

TEST_CASE("msg_theta_to_z") {
  const auto a = msg_theta_to_z(DirichletParams({1, 1, 1}));
  for (double x : a) CHECK(std::abs(x - -1.5) < 1e-14);
  const auto s = msg_theta_to_z(DirichletParams::symmetric(4, 2.5));
  for (double x : s) CHECK(x == s[0]);
  const auto b = msg_theta_to_z(DirichletParams({2, 1}));
  CHECK(std::abs(b[0] - -0.5) < 1e-14);
  CHECK(std::abs(b[1] - -1.5) < 1e-14);
}

TEST_CASE("msg_phi_to_w") {
  const auto a = msg_phi_to_w(DirichletParams({1, 1}));
  CHECK(std::abs(a[0] - -1.0) < 1e-14);
  CHECK(std::abs(a[1] - -1.0) < 1e-14);
  const auto s = msg_phi_to_w(DirichletParams::symmetric(50, 0.01));
  for (double x : s) CHECK(x == s[0]);
  const auto b = msg_phi_to_w(DirichletParams({3, 1}));
  CHECK(std::abs(b[0] - -1.0 / 3) < 1e-14);
  CHECK(std::abs(b[1] - -11.0 / 6) < 1e-14);
}

TEST_CASE("msg_w_to_z") {
  SUBCASE("identical topics give a uniform message") {
    const LogProbVector row({-1.0, -2.0, -3.0});
    const std::vector<LogProbVector> lambda(4, row);
    const auto p = ef::log_normalize(msg_w_to_z(lambda, 1));
    for (double x : p) CHECK(std::abs(x - 0.25) < 1e-15);
  }
  SUBCASE("normalizes the slice over topics") {
    const std::vector<LogProbVector> lambda{LogProbVector({-7.0, std::log(0.8)}),
                                            LogProbVector({-1.0, std::log(0.2)})};
    const auto m = msg_w_to_z(lambda, 1);
    CHECK(std::abs(m[0] - std::log(0.8)) < 1e-15);
    CHECK(std::abs(m[1] - std::log(0.2)) < 1e-15);
  }
  SUBCASE("shifting one topic's vector shifts only its slice") {
    const std::vector<LogProbVector> lambda{LogProbVector({-1.0, -2.0}), LogProbVector({-3.0, -0.5})};
    const double c = 2.75;
    const std::vector<LogProbVector> shifted{LogProbVector({-1.0 + c, -2.0 + c}), lambda[1]};
    for (TermId w : {0u, 1u}) {
      const auto a = msg_w_to_z(lambda, w);
      const auto b = msg_w_to_z(shifted, w);
      CHECK(std::abs((b[0] - b[1]) - (a[0] - a[1]) - c) < 1e-14);
    }
  }
  SUBCASE("index error") {
    const std::vector<LogProbVector> lambda(2, LogProbVector({-1.0, -1.0}));
    CHECK_THROWS_AS(msg_w_to_z(lambda, 2), std::out_of_range);
  }
}

TEST_CASE("compute_responsibility") {
  const LogProbVector uniform_theta({-0.7, -0.7});
  const LogProbVector w({std::log(0.8), std::log(0.2)});
  const auto r = compute_responsibility(uniform_theta, w);
  CHECK(std::abs(r[0] - 0.8) < 1e-15);
  CHECK(std::abs(r[1] - 0.2) < 1e-15);

  const LogProbVector theta({-0.2, -1.9, -3.3});
  const auto id = compute_responsibility(theta, LogProbVector({-4.0, -4.0, -4.0}));
  const auto expect = ef::log_normalize(theta);
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(id[k] - expect[k]) < 1e-15);

  const LogProbVector w3({-0.1, -2.0, -0.4});
  const LogProbVector w3c({-0.1 + 13.0, -2.0 + 13.0, -0.4 + 13.0});
  const auto a = compute_responsibility(theta, w3);
  const auto b = compute_responsibility(theta, w3c);
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-12);

  CHECK_THROWS_AS(compute_responsibility(theta, w), contract_error);
}

TEST_CASE("compute_responsibility scaling invariance, randomized") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> entry(-30, 0), shift(-50, 50);
  std::uniform_int_distribution<int> kdist(2, 12);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto K = static_cast<std::size_t>(kdist(rng));
    std::vector<double> t(K), w(K), wc(K);
    for (auto& x : t) x = entry(rng);
    for (auto& x : w) x = entry(rng);
    const double c = shift(rng);
    for (std::size_t k = 0; k < K; ++k) wc[k] = w[k] + c;
    const auto a = compute_responsibility(LogProbVector(t), LogProbVector(w));
    const auto b = compute_responsibility(LogProbVector(t), LogProbVector(wc));
    for (std::size_t k = 0; k < K; ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-12);
  }
}

TEST_CASE("msg_z_to_theta") {
  CHECK(msg_z_to_theta(ProbVector({0.8, 0.2})) == std::vector<double>{0.8, 0.2});
  CHECK(msg_z_to_theta(ProbVector({0.0, 1.0, 0.0})) == std::vector<double>{0.0, 1.0, 0.0});
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto m = msg_z_to_theta(random_prob(5, rng));
    CHECK(std::abs(std::accumulate(m.begin(), m.end(), 0.0) - 1.0) <= 1e-12);
  }
}

TEST_CASE("update_alpha") {
  const DirichletParams prior({0.1, 0.1});
  const auto rs = three_responsibilities();
  const auto a = update_alpha(prior, rs);
  CHECK(std::abs(a[0] - 1.6) < 1e-15);
  CHECK(std::abs(a[1] - 1.6) < 1e-15);

  CHECK(update_alpha(prior, {}) == prior);

  const std::vector<ProbVector> hot(7, ProbVector({0.0, 1.0}));
  const auto h = update_alpha(prior, hot);
  CHECK(h[0] == 0.1);
  CHECK(h[1] == 0.1 + 7.0);

  std::mt19937_64 rng(2);
  std::vector<ProbVector> many;
  for (int i = 0; i < 57; ++i) many.push_back(random_prob(4, rng));
  const DirichletParams p4({0.3, 0.01, 2.0, 0.5});
  const auto u = update_alpha(p4, many);
  double added = 0.0;
  for (std::size_t k = 0; k < 4; ++k) added += u[k] - p4[k];
  CHECK(std::abs(added - 57.0) <= 1e-12);

  CHECK_THROWS_AS(update_alpha(p4, rs), contract_error);
}

TEST_CASE("msg_z_to_w") {
  const auto u = msg_z_to_w(DirichletParams::symmetric(5, 0.7));
  for (double x : u) CHECK(std::abs(x - 0.2) < 1e-15);

  const auto p = msg_z_to_w(DirichletParams({2, 1}));
  const double logistic1 = 1.0 / (1.0 + std::exp(-1.0));
  CHECK(std::abs(p[0] - logistic1) < 1e-14);
  CHECK(std::abs(p[1] - (1.0 - logistic1)) < 1e-14);
  CHECK(std::abs(p[0] - 0.7311) < 1e-4);
  CHECK(std::abs(p[0] + p[1] - 1.0) <= 1e-12);

  const auto lp = msg_z_to_w_log(DirichletParams({2, 1}));
  CHECK(std::abs(std::exp(lp[0]) - p[0]) < 1e-15);
}

TEST_CASE("msg_w_to_phi") {
  const ProbVector r({0.8, 0.2});
  const auto c = msg_w_to_phi(r, 3, 5);
  CHECK(c.observed == 3);
  CHECK(c.r[0] == 0.8);
  CHECK(c.r[1] == 0.2);
  CHECK(std::abs(c.r[0] + c.r[1] - 1.0) < 1e-15);
  CHECK_THROWS_AS(msg_w_to_phi(r, 5, 5), std::out_of_range);

  const auto dense = update_beta(DirichletParams::symmetric(5, 1e-300), std::vector{c}, 2);
  for (std::size_t v = 0; v < 5; ++v) {
    if (v == 3) continue;
    CHECK(dense(0, v) == 1e-300);
    CHECK(dense(1, v) == 1e-300);
  }

  const ProbVector r2({0.3, 0.7});
  const auto twice = update_beta(DirichletParams::symmetric(5, 1.0),
                                 std::vector{msg_w_to_phi(r, 2, 5), msg_w_to_phi(r2, 2, 5)}, 2);
  CHECK(std::abs(twice(0, 2) - (1.0 + 0.8 + 0.3)) < 1e-15);
  CHECK(std::abs(twice(1, 2) - (1.0 + 0.2 + 0.7)) < 1e-15);
}

TEST_CASE("update_beta") {
  const auto rs = three_responsibilities();
  const std::vector<TermId> tokens{0, 0, 1};
  std::vector<WordContribution> contributions;
  for (std::size_t n = 0; n < 3; ++n) contributions.push_back(msg_w_to_phi(rs[n], tokens[n], 2));
  const auto b = update_beta(DirichletParams::symmetric(2, 0.01), contributions, 2);
  CHECK(std::abs(b(0, 0) - 1.31) < 1e-14);
  CHECK(std::abs(b(1, 0) - 0.71) < 1e-14);
  CHECK(std::abs(b(0, 1) - 0.21) < 1e-14);
  CHECK(std::abs(b(1, 1) - 0.81) < 1e-14);

  const DirichletParams prior({0.1, 0.2, 0.3});
  const auto none = update_beta(prior, {}, 4);
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t v = 0; v < 3; ++v) CHECK(none(k, v) == prior[v]);
  }

  const auto uni = ProbVector::uniform(3);
  std::vector<WordContribution> u;
  for (TermId w : {0u, 2u, 2u, 1u}) u.push_back(msg_w_to_phi(uni, w, 3));
  const auto ub = update_beta(prior, u, 3);
  for (std::size_t k = 1; k < 3; ++k) {
    for (std::size_t v = 0; v < 3; ++v) CHECK(ub(k, v) == ub(0, v));
  }
  double added = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t v = 0; v < 3; ++v) {
      CHECK(ub(k, v) >= prior[v]);
      added += ub(k, v) - prior[v];
    }
  }
  CHECK(std::abs(added - 4.0) <= 1e-9);
}

TEST_CASE("messages are equivariant under topic permutation") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> pc(0.05, 5.0);
  const std::size_t K = 4, V = 6;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> perm(K);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);

    std::vector<double> alpha(K), alpha_p(K);
    for (auto& x : alpha) x = pc(rng);
    for (std::size_t k = 0; k < K; ++k) alpha_p[k] = alpha[perm[k]];

    std::vector<LogProbVector> lambda, lambda_p(K);
    for (std::size_t k = 0; k < K; ++k) {
      std::vector<double> beta(V);
      for (auto& x : beta) x = pc(rng);
      lambda.push_back(msg_phi_to_w(DirichletParams(beta)));
    }
    for (std::size_t k = 0; k < K; ++k) lambda_p[k] = lambda[perm[k]];

    const TermId w = static_cast<TermId>(trial % V);
    const auto r = compute_responsibility(msg_theta_to_z(DirichletParams(alpha)), msg_w_to_z(lambda, w));
    const auto rp =
        compute_responsibility(msg_theta_to_z(DirichletParams(alpha_p)), msg_w_to_z(lambda_p, w));
    for (std::size_t k = 0; k < K; ++k) CHECK(std::abs(rp[k] - r[perm[k]]) <= 1e-15);

    const auto a = update_alpha(DirichletParams(alpha), std::vector{r});
    const auto ap = update_alpha(DirichletParams(alpha_p), std::vector{rp});
    for (std::size_t k = 0; k < K; ++k) CHECK(std::abs(ap[k] - a[perm[k]]) <= 1e-15);
  }
}
