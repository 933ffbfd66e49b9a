// Copyright 2026 The scanrig Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "place/cma_es.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "common/error.hpp"

namespace scanrig {
namespace {

constexpr double kTolFun = 1e-12;
constexpr double kTolX = 1e-12;
constexpr double kMaxCondition = 1e14;

}  // namespace

void CmaConfig::validate() const {
  if (population != 0 && population < 4) {
    throwInvalid("CMA-ES population must be at least 4");
  }
  if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) {
    throwInvalid("CMA-ES initial step size must be positive");
  }
  if (max_generations < 1 || restarts < 0) {
    throwInvalid("CMA-ES generation and restart counts must be positive");
  }
}

CmaResult cmaMinimize(const Objective& objective, const VecX& x0, const CmaConfig& cfg) {
  cfg.validate();
  const int n = static_cast<int>(x0.size());
  if (n < 1) {
    throwInvalid("CMA-ES needs at least one variable");
  }
  CmaResult result;
  result.x_best = x0;
  result.f_best = objective(x0);
  result.evaluations = 1;
  if (!std::isfinite(result.f_best)) {
    throw Error(ErrorCode::kNumerical, "objective is not finite at the initial point");
  }
  if (result.f_best <= cfg.target) {
    result.reached_target = true;
    return result;
  }

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double chi_n = std::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));
  int lambda = cfg.population > 0 ? cfg.population : 4 + static_cast<int>(std::floor(3.0 * std::log(n)));

  for (int run = 0; run <= cfg.restarts; ++run, lambda *= 2) {
    ++result.runs;
    const int mu = lambda / 2;
    VecX weights(mu);
    for (int i = 0; i < mu; ++i) weights[i] = std::log(mu + 0.5) - std::log(i + 1.0);
    weights /= weights.sum();
    const double mu_eff = 1.0 / weights.squaredNorm();

    const double c_sigma = (mu_eff + 2.0) / (n + mu_eff + 5.0);
    const double d_sigma = 1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (n + 1.0)) - 1.0) + c_sigma;
    const double c_c = (4.0 + mu_eff / n) / (n + 4.0 + 2.0 * mu_eff / n);
    const double c_1 = 2.0 / ((n + 1.3) * (n + 1.3) + mu_eff);
    const double c_mu = std::min(1.0 - c_1, 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((n + 2.0) * (n + 2.0) + mu_eff));

    VecX mean = x0;
    double sigma = cfg.sigma0;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(n, n);
    VecX scales = VecX::Ones(n);
    VecX p_sigma = VecX::Zero(n);
    VecX p_c = VecX::Zero(n);
    std::vector<double> history;  // best value per generation

    for (int gen = 0; gen < cfg.max_generations; ++gen) {
      Eigen::MatrixXd z(n, lambda);
      for (int k = 0; k < lambda; ++k) {
        for (int i = 0; i < n; ++i) z(i, k) = normal(rng);
      }
      const Eigen::MatrixXd y = basis * scales.asDiagonal() * z;
      std::vector<double> f(lambda);
      for (int k = 0; k < lambda; ++k) {
        const VecX x = mean + sigma * y.col(k);
        const double v = objective(x);
        f[k] = std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
        ++result.evaluations;
        if (f[k] < result.f_best) {
          result.f_best = f[k];
          result.x_best = x;
        }
      }
      ++result.generations;

      std::vector<int> rank(lambda);
      std::iota(rank.begin(), rank.end(), 0);
      std::stable_sort(rank.begin(), rank.end(), [&](int a, int b) { return f[a] < f[b]; });

      VecX y_w = VecX::Zero(n);
      VecX z_w = VecX::Zero(n);
      for (int i = 0; i < mu; ++i) {
        y_w += weights[i] * y.col(rank[i]);
        z_w += weights[i] * z.col(rank[i]);
      }
      mean += sigma * y_w;

      // C^{-1/2} y_w = B z_w.
      p_sigma = (1.0 - c_sigma) * p_sigma + std::sqrt(c_sigma * (2.0 - c_sigma) * mu_eff) * (basis * z_w);
      const double ps_norm = p_sigma.norm();
      const bool h_sigma = ps_norm / std::sqrt(1.0 - std::pow(1.0 - c_sigma, 2.0 * (gen + 1))) <
                           (1.4 + 2.0 / (n + 1.0)) * chi_n;
      p_c = (1.0 - c_c) * p_c + (h_sigma ? std::sqrt(c_c * (2.0 - c_c) * mu_eff) : 0.0) * y_w;

      Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < mu; ++i) {
        rank_mu += weights[i] * y.col(rank[i]) * y.col(rank[i]).transpose();
      }
      const double delta_h = h_sigma ? 0.0 : c_c * (2.0 - c_c);
      cov = (1.0 - c_1 - c_mu) * cov + c_1 * (p_c * p_c.transpose() + delta_h * cov) + c_mu * rank_mu;
      cov = 0.5 * (cov + cov.transpose());
      sigma *= std::exp((c_sigma / d_sigma) * (ps_norm / chi_n - 1.0));
      result.sigma_history.push_back(sigma);

      if (result.f_best <= cfg.target) {
        result.reached_target = true;
        return result;
      }

      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
      if (eig.info() != Eigen::Success || !eig.eigenvalues().allFinite() || !std::isfinite(sigma)) {
        break;
      }
      const VecX ev = eig.eigenvalues().cwiseMax(0.0);
      basis = eig.eigenvectors();
      scales = ev.cwiseSqrt();

      // Restart triggers: flat recent history, vanishing steps, or a
      // degenerate covariance.
      history.push_back(f[rank[0]]);
      const int window = 10 + static_cast<int>(std::ceil(30.0 * n / lambda));
      if (static_cast<int>(history.size()) >= window) {
        const auto [lo, hi] = std::minmax_element(history.end() - window, history.end());
        if (std::isfinite(*hi) && *hi - *lo < kTolFun) break;
      }
      if (sigma * scales.maxCoeff() < kTolX * cfg.sigma0) break;
      if (ev.maxCoeff() > kMaxCondition * std::max(ev.minCoeff(), 1e-300)) break;
    }
  }
  return result;
}

}  // namespace scanrig
