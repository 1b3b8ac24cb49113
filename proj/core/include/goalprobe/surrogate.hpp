// Copyright 2026 The goalprobe Authors
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

#ifndef GOALPROBE_SURROGATE_HPP_
#define GOALPROBE_SURROGATE_HPP_

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <iosfwd>
#include <span>
#include <vector>

namespace goalprobe {

enum class MaternNu { kThreeHalves, kFiveHalves };

/// Parses 1.5 / 2.5; throws std::invalid_argument otherwise.
MaternNu matern_nu_from(double nu);
double matern_nu_value(MaternNu nu);

inline constexpr double kNoiseFloor = 1e-8;

struct KernelParams {
  double signal_variance = 1.0;
  std::vector<double> length_scales{1.0, 1.0};  // ARD, one per input dimension
  double noise_variance = kNoiseFloor;
  MaternNu nu = MaternNu::kFiveHalves;
};

/// Matern kernel; the name reflects the default smoothness, `params.nu`
/// selects 3/2 when requested.
double matern52(std::span<const double> a, std::span<const double> b, const KernelParams& params);

/// Noise-free covariance matrix over the rows of `inputs`.
Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& inputs, const KernelParams& params);

struct LogLikelihood {
  double value = 0.0;
  /// d/d(log l_1..log l_D, log sigma_f, log sigma_n).
  Eigen::VectorXd gradient;
};

/// log p(y | X, theta) for already-standardized targets.
LogLikelihood log_marginal_likelihood(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                                      const KernelParams& params);

struct FitOptions {
  MaternNu nu = MaternNu::kFiveHalves;
  int restarts = 8;
  int max_iterations = 80;
  double min_length_scale = 0.05;
  double max_length_scale = 2.0;
};

struct Posterior {
  double mean = 0.0;
  double variance = 0.0;
};

/// Exact GP regression on standardized targets. Immutable once built.
class GpModel {
 public:
  /// Maximum-likelihood hyperparameters (multi-start projected gradient
  /// ascent in log space). Requires >= 2 rows and finite targets.
  static GpModel fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, const FitOptions& options = {});

  /// Conditions on the data with fixed hyperparameters. With
  /// `standardize == false` the params act on raw targets.
  static GpModel condition(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets, const KernelParams& params,
                           bool standardize = true);

  Posterior posterior(std::span<const double> x) const;
  /// Row-wise posterior over `points` (m x D).
  std::vector<Posterior> posterior(const Eigen::MatrixXd& points) const;

  /// Prior variance in target units.
  double prior_variance() const { return scale_ * scale_ * params_.signal_variance; }

  const KernelParams& params() const { return params_; }
  const Eigen::MatrixXd& inputs() const { return inputs_; }
  const Eigen::VectorXd& targets() const { return targets_; }
  /// Lower Cholesky factor of K + sigma_n^2 I (standardized units).
  Eigen::MatrixXd chol() const { return llt_.matrixL(); }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  double target_offset() const { return offset_; }
  double target_scale() const { return scale_; }
  std::size_t dim() const { return static_cast<std::size_t>(inputs_.cols()); }
  std::size_t size() const { return static_cast<std::size_t>(inputs_.rows()); }

 private:
  GpModel() = default;

  Eigen::MatrixXd inputs_;
  Eigen::VectorXd targets_;
  KernelParams params_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
  double offset_ = 0.0;
  double scale_ = 1.0;
};

struct GridCell {
  double u1 = 0.0;
  double u2 = 0.0;
  Posterior value;
};

/// resolution x resolution evaluation over [0,1]^2, row-major with u2 as the
/// row index: cell (i, j) sits at (j / (r - 1), i / (r - 1)).
std::vector<GridCell> posterior_grid(const GpModel& model, int resolution);

/// `u1,u2,mean,variance`, 6 significant digits.
void write_grid_csv(std::ostream& out, const std::vector<GridCell>& grid);

}  // namespace goalprobe

#endif  // GOALPROBE_SURROGATE_HPP_
