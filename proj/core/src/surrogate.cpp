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

#include "goalprobe/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "goalprobe/sobol.hpp"

namespace goalprobe {

MaternNu matern_nu_from(double nu) {
  if (nu == 1.5) return MaternNu::kThreeHalves;
  if (nu == 2.5) return MaternNu::kFiveHalves;
  throw std::invalid_argument("unsupported Matern smoothness " + std::to_string(nu) + " (use 1.5 or 2.5)");
}

double matern_nu_value(MaternNu nu) { return nu == MaternNu::kThreeHalves ? 1.5 : 2.5; }

namespace {

constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kSqrt5 = 2.23606797749979;

// Kernel value and the common factor c with dk/dlog(l_d) = c * q_d, where
// q_d = ((a_d - b_d) / l_d)^2 and r^2 = sum_d q_d.
struct KernelTerms {
  double value;
  double length_factor;
};

KernelTerms kernel_terms(double r, double signal_variance, MaternNu nu) {
  if (nu == MaternNu::kThreeHalves) {
    const double e = std::exp(-kSqrt3 * r);
    return {signal_variance * (1.0 + kSqrt3 * r) * e, signal_variance * 3.0 * e};
  }
  const double e = std::exp(-kSqrt5 * r);
  return {signal_variance * (1.0 + kSqrt5 * r + 5.0 * r * r / 3.0) * e,
          signal_variance * (5.0 / 3.0) * (1.0 + kSqrt5 * r) * e};
}

double scaled_sq_distance(const double* a, const double* b, std::size_t ai, std::size_t bi,
                          const std::vector<double>& ls, std::size_t dim) {
  double r2 = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    const double q = (a[d * ai] - b[d * bi]) / ls[d];
    r2 += q * q;
  }
  return r2;
}

void check_params(const KernelParams& p, std::size_t dim) {
  if (p.length_scales.size() != dim) {
    throw std::invalid_argument("kernel has " + std::to_string(p.length_scales.size()) + " length scales for a " +
                                std::to_string(dim) + "-d input");
  }
  if (!(p.signal_variance > 0.0)) throw std::invalid_argument("signal variance must be > 0");
  for (double l : p.length_scales) {
    if (!(l > 0.0)) throw std::invalid_argument("length scales must be > 0");
  }
  if (!(p.noise_variance >= kNoiseFloor * (1.0 - 1e-12))) {
    throw std::invalid_argument("noise variance below the jitter floor");
  }
}

// Factorizes K + noise*I; on failure the diagonal term is raised by factors
// of three up to 1e-4. Returns the noise actually used.
double factorize(Eigen::MatrixXd k, double noise, Eigen::LLT<Eigen::MatrixXd>& llt) {
  const Eigen::Index n = k.rows();
  double used = std::max(noise, kNoiseFloor);
  double jitter = kNoiseFloor;
  for (;;) {
    Eigen::MatrixXd a = k;
    a.diagonal().array() += used;
    llt.compute(a);
    if (llt.info() == Eigen::Success || n == 0) return used;
    jitter *= 3.0;
    if (jitter > 1e-4) throw std::runtime_error("covariance matrix is not positive definite");
    used = std::max(noise, jitter);
  }
}

}  // namespace

double matern52(std::span<const double> a, std::span<const double> b, const KernelParams& params) {
  if (a.size() != b.size()) throw std::invalid_argument("kernel inputs differ in dimension");
  check_params(params, a.size());
  const double r = std::sqrt(scaled_sq_distance(a.data(), b.data(), 1, 1, params.length_scales, a.size()));
  return kernel_terms(r, params.signal_variance, params.nu).value;
}

Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& x, const KernelParams& params) {
  const auto n = x.rows();
  const auto dim = static_cast<std::size_t>(x.cols());
  check_params(params, dim);
  Eigen::MatrixXd k(n, n);
  const auto stride = static_cast<std::size_t>(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = params.signal_variance;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double r = std::sqrt(scaled_sq_distance(&x(i, 0), &x(j, 0), stride, stride, params.length_scales, dim));
      k(i, j) = k(j, i) = kernel_terms(r, params.signal_variance, params.nu).value;
    }
  }
  return k;
}

LogLikelihood log_marginal_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const KernelParams& params) {
  const auto n = x.rows();
  const auto dim = static_cast<std::size_t>(x.cols());
  check_params(params, dim);
  if (y.size() != n) throw std::invalid_argument("inputs and targets differ in length");

  Eigen::MatrixXd k(n, n);
  // q(i, j, d) is needed again for the gradient; store it packed.
  std::vector<double> q(static_cast<std::size_t>(n * n) * dim, 0.0);
  auto qat = [&](Eigen::Index i, Eigen::Index j, std::size_t d) -> double& {
    return q[(static_cast<std::size_t>(i * n + j)) * dim + d];
  };
  Eigen::MatrixXd length_factor = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      double r2 = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const double t =
            (x(i, static_cast<Eigen::Index>(d)) - x(j, static_cast<Eigen::Index>(d))) / params.length_scales[d];
        qat(i, j, d) = t * t;
        r2 += t * t;
      }
      const auto terms = kernel_terms(std::sqrt(r2), params.signal_variance, params.nu);
      k(i, j) = k(j, i) = terms.value;
      length_factor(i, j) = length_factor(j, i) = terms.length_factor;
    }
  }

  Eigen::LLT<Eigen::MatrixXd> llt;
  const double noise = factorize(k, params.noise_variance, llt);
  const Eigen::VectorXd alpha = llt.solve(y);
  const Eigen::MatrixXd lower = llt.matrixL();

  LogLikelihood out;
  out.value = -0.5 * y.dot(alpha) - lower.diagonal().array().log().sum() -
              0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);

  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
  const Eigen::MatrixXd w = alpha * alpha.transpose() - inv;
  out.gradient = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim) + 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double weight = (i == j ? 0.5 : 1.0) * w(i, j);  // symmetric pair counted once
      for (std::size_t d = 0; d < dim; ++d) {
        out.gradient(static_cast<Eigen::Index>(d)) += weight * length_factor(i, j) * qat(i, j, d);
      }
      out.gradient(static_cast<Eigen::Index>(dim)) += weight * 2.0 * k(i, j);
    }
  }
  out.gradient(static_cast<Eigen::Index>(dim) + 1) = noise * w.trace();
  return out;
}

namespace {

struct Standardized {
  Eigen::VectorXd values;
  double offset = 0.0;
  double scale = 1.0;
};

Standardized standardize(const Eigen::VectorXd& y) {
  Standardized s;
  const auto n = y.size();
  if (n == 0) {
    s.values = y;
    return s;
  }
  s.offset = y.mean();
  const double var = (y.array() - s.offset).square().sum() / static_cast<double>(n);
  const double sd = std::sqrt(var);
  // Constant data: keep unit scale so the model collapses to the mean.
  s.scale = sd > 1e-12 * (1.0 + std::abs(s.offset)) ? sd : 1.0;
  s.values = (y.array() - s.offset) / s.scale;
  return s;
}

KernelParams unpack(const Eigen::VectorXd& theta, std::size_t dim, MaternNu nu) {
  KernelParams p;
  p.nu = nu;
  p.length_scales.resize(dim);
  for (std::size_t d = 0; d < dim; ++d) p.length_scales[d] = std::exp(theta(static_cast<Eigen::Index>(d)));
  p.signal_variance = std::exp(2.0 * theta(static_cast<Eigen::Index>(dim)));
  p.noise_variance = std::max(kNoiseFloor, std::exp(2.0 * theta(static_cast<Eigen::Index>(dim) + 1)));
  return p;
}

void check_data(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) throw std::invalid_argument("inputs and targets differ in length");
  if (!y.allFinite()) throw std::invalid_argument("targets must be finite");
  if (!x.allFinite()) throw std::invalid_argument("inputs must be finite");
}

}  // namespace

GpModel GpModel::condition(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const KernelParams& params,
                           bool standardize_targets) {
  check_data(x, y);
  check_params(params, static_cast<std::size_t>(x.cols()));
  GpModel m;
  m.inputs_ = x;
  m.targets_ = y;
  m.params_ = params;
  Eigen::VectorXd ys = y;
  if (standardize_targets) {
    auto s = standardize(y);
    ys = std::move(s.values);
    m.offset_ = s.offset;
    m.scale_ = s.scale;
  }
  m.params_.noise_variance = factorize(gram_matrix(x, params), params.noise_variance, m.llt_);
  m.alpha_ = x.rows() > 0 ? Eigen::VectorXd(m.llt_.solve(ys)) : Eigen::VectorXd();
  return m;
}

GpModel GpModel::fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const FitOptions& options) {
  check_data(x, y);
  if (x.rows() < 2) throw std::invalid_argument("GP fit needs at least 2 observations");
  const auto dim = static_cast<std::size_t>(x.cols());
  const auto s = standardize(y);
  const auto np = static_cast<Eigen::Index>(dim) + 2;

  Eigen::VectorXd lo(np);
  Eigen::VectorXd hi(np);
  for (std::size_t d = 0; d < dim; ++d) {
    lo(static_cast<Eigen::Index>(d)) = std::log(options.min_length_scale);
    hi(static_cast<Eigen::Index>(d)) = std::log(options.max_length_scale);
  }
  // Standardized targets have unit spread, so std(y) = 1 in these bounds.
  lo(np - 2) = std::log(0.1);
  hi(np - 2) = std::log(10.0);
  lo(np - 1) = std::log(1e-4);
  hi(np - 1) = 0.0;

  const auto objective = [&](const Eigen::VectorXd& theta, Eigen::VectorXd* grad) {
    try {
      auto r = log_marginal_likelihood(x, s.values, unpack(theta, dim, options.nu));
      if (grad) *grad = std::move(r.gradient);
      return std::isfinite(r.value) ? r.value : -std::numeric_limits<double>::infinity();
    } catch (const std::runtime_error&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  const SobolSequence starts(static_cast<unsigned>(np));
  Eigen::VectorXd best_theta = 0.5 * (lo + hi);
  double best_value = -std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < options.restarts; ++restart) {
    const auto u = starts.point(static_cast<std::uint64_t>(restart) + 1);
    Eigen::VectorXd theta(np);
    for (Eigen::Index i = 0; i < np; ++i) theta(i) = lo(i) + u[static_cast<std::size_t>(i)] * (hi(i) - lo(i));

    Eigen::VectorXd grad;
    double value = objective(theta, &grad);
    double step = 0.5;
    for (int it = 0; it < options.max_iterations && std::isfinite(value); ++it) {
      const double norm = grad.norm();
      if (!(norm > 1e-10)) break;
      const Eigen::VectorXd trial = (theta + (step / std::max(1.0, norm)) * grad).cwiseMax(lo).cwiseMin(hi);
      if ((trial - theta).norm() < 1e-9) break;
      Eigen::VectorXd trial_grad;
      const double trial_value = objective(trial, &trial_grad);
      if (trial_value > value) {
        const double gain = trial_value - value;
        theta = trial;
        grad = std::move(trial_grad);
        value = trial_value;
        step = std::min(step * 1.5, 2.0);
        if (gain < 1e-7) break;
      } else {
        step *= 0.5;
        if (step < 1e-5) break;
      }
    }
    if (value > best_value) {
      best_value = value;
      best_theta = theta;
    }
  }

  GpModel m = condition(x, y, unpack(best_theta, dim, options.nu), true);
  return m;
}

Posterior GpModel::posterior(std::span<const double> point) const {
  Eigen::MatrixXd row(1, static_cast<Eigen::Index>(point.size()));
  for (std::size_t d = 0; d < point.size(); ++d) row(0, static_cast<Eigen::Index>(d)) = point[d];
  return posterior(row).front();
}

std::vector<Posterior> GpModel::posterior(const Eigen::MatrixXd& points) const {
  if (points.cols() != inputs_.cols()) throw std::invalid_argument("query dimension does not match the model");
  const auto m = points.rows();
  const auto n = inputs_.rows();
  const auto dim = static_cast<std::size_t>(inputs_.cols());
  std::vector<Posterior> out(static_cast<std::size_t>(m));
  if (n == 0) {
    for (auto& p : out) p = {offset_, prior_variance()};
    return out;
  }
  Eigen::MatrixXd cross(n, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double r2 = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const auto di = static_cast<Eigen::Index>(d);
        const double t = (inputs_(i, di) - points(j, di)) / params_.length_scales[d];
        r2 += t * t;
      }
      cross(i, j) = kernel_terms(std::sqrt(r2), params_.signal_variance, params_.nu).value;
    }
  }
  const Eigen::VectorXd mean = cross.transpose() * alpha_;
  const Eigen::MatrixXd v = llt_.matrixL().solve(cross);
  const Eigen::VectorXd reduction = v.colwise().squaredNorm().transpose();
  for (Eigen::Index j = 0; j < m; ++j) {
    const double var = std::max(0.0, params_.signal_variance - reduction(j));
    out[static_cast<std::size_t>(j)] = {offset_ + scale_ * mean(j), scale_ * scale_ * var};
  }
  return out;
}

std::vector<GridCell> posterior_grid(const GpModel& model, int resolution) {
  if (resolution < 2) throw std::invalid_argument("grid resolution must be >= 2");
  if (model.dim() != 2) throw std::invalid_argument("posterior grid needs a 2-d model");
  const auto r = static_cast<Eigen::Index>(resolution);
  Eigen::MatrixXd pts(r * r, 2);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < r; ++j) {
      pts(i * r + j, 0) = static_cast<double>(j) / static_cast<double>(r - 1);
      pts(i * r + j, 1) = static_cast<double>(i) / static_cast<double>(r - 1);
    }
  }
  const auto post = model.posterior(pts);
  std::vector<GridCell> grid(post.size());
  for (std::size_t k = 0; k < post.size(); ++k) {
    grid[k] = {pts(static_cast<Eigen::Index>(k), 0), pts(static_cast<Eigen::Index>(k), 1), post[k]};
  }
  return grid;
}

void write_grid_csv(std::ostream& out, const std::vector<GridCell>& grid) {
  out << "u1,u2,mean,variance\n";
  char line[128];
  for (const auto& c : grid) {
    std::snprintf(line, sizeof line, "%.6g,%.6g,%.6g,%.6g\n", c.u1, c.u2, c.value.mean, c.value.variance);
    out << line;
  }
}

}  // namespace goalprobe
