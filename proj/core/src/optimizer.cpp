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

#include "goalprobe/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>

#include "goalprobe/sobol.hpp"

namespace goalprobe {

SamplerKind sampler_kind_from(const std::string& name) {
  if (name == "bo") return SamplerKind::kBo;
  if (name == "sobol") return SamplerKind::kSobol;
  throw std::invalid_argument("unknown sampler '" + name + "' (use bo or sobol)");
}

const char* sampler_kind_name(SamplerKind kind) { return kind == SamplerKind::kBo ? "bo" : "sobol"; }

void validate(const SamplerConfig& cfg) {
  if (cfg.budget < 1) throw std::invalid_argument("budget must be >= 1");
  if (cfg.candidates < 16) throw std::invalid_argument("candidates must be >= 16");
  if (!(cfg.beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  if (cfg.dim < 1 || cfg.dim > SobolSequence::kMaxDim) throw std::invalid_argument("unsupported prompt dimension");
}

double ucb(double mean, double variance, double beta) { return mean + beta * std::sqrt(std::max(0.0, variance)); }

namespace {

// Named substreams keep the candidate shift independent of any other use of
// the seed.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

constexpr std::uint64_t kCandidateStream = 0x63616e6469646174ull;  // "candidat"

double unit_from_bits(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<Prompt> acquisition_candidates(std::span<const Observation> history, const SamplerConfig& cfg) {
  auto rng = substream(cfg.seed, kCandidateStream);
  std::vector<double> shift(cfg.dim);
  for (auto& s : shift) s = unit_from_bits(rng());

  const SobolSequence seq(cfg.dim);
  std::vector<Prompt> out;
  out.reserve(static_cast<std::size_t>(cfg.candidates) + history.size() * 2 * cfg.dim);
  for (int i = 1; i <= cfg.candidates; ++i) {
    Prompt p = seq.point(static_cast<std::uint64_t>(i));
    for (unsigned d = 0; d < cfg.dim; ++d) {
      p[d] += shift[d];
      if (p[d] >= 1.0) p[d] -= 1.0;
    }
    out.push_back(std::move(p));
  }
  for (const auto& obs : history) {
    for (unsigned d = 0; d < cfg.dim; ++d) {
      for (double sign : {-1.0, 1.0}) {
        Prompt p = obs.prompt;
        p[d] = std::clamp(p[d] + sign * cfg.perturbation, 0.0, 1.0);
        out.push_back(std::move(p));
      }
    }
  }
  return out;
}

std::optional<GpModel> fit_surrogate(std::span<const Observation> history, const SamplerConfig& cfg) {
  std::vector<const Observation*> ok;
  for (const auto& o : history) {
    if (o.ok()) ok.push_back(&o);
  }
  if (ok.size() < 2) return std::nullopt;
  const auto n = static_cast<Eigen::Index>(ok.size());
  Eigen::MatrixXd x(n, cfg.dim);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& o = *ok[static_cast<std::size_t>(i)];
    if (o.prompt.size() != cfg.dim) throw std::invalid_argument("observation prompt has the wrong dimension");
    for (unsigned d = 0; d < cfg.dim; ++d) x(i, d) = o.prompt[d];
    y(i) = o.score;
  }
  if (cfg.fixed_kernel) return GpModel::condition(x, y, *cfg.fixed_kernel, true);
  FitOptions fo = cfg.gp;
  return GpModel::fit(x, y, fo);
}

Prompt suggest_next(std::span<const Observation> history, const SamplerConfig& cfg) {
  validate(cfg);
  if (history.size() >= static_cast<std::size_t>(cfg.budget)) throw BudgetExhausted();
  const auto next_sobol = [&] { return SobolSequence(cfg.dim).point(history.size() + 1); };
  if (cfg.kind == SamplerKind::kSobol) return next_sobol();

  const auto model = fit_surrogate(history, cfg);
  if (!model) return next_sobol();

  auto cands = acquisition_candidates(history, cfg);
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(cands.size()), cfg.dim);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    for (unsigned d = 0; d < cfg.dim; ++d) pts(static_cast<Eigen::Index>(i), d) = cands[i][d];
  }
  const auto post = model->posterior(pts);
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < post.size(); ++i) {
    const double a = ucb(post[i].mean, post[i].variance, cfg.beta);
    if (a > best_value) {
      best_value = a;
      best = i;
    }
  }
  return cands[best];
}

std::vector<Observation> optimize(const Objective& objective, const SamplerConfig& cfg) {
  validate(cfg);
  std::vector<Observation> history;
  history.reserve(static_cast<std::size_t>(cfg.budget));
  for (int it = 0; it < cfg.budget; ++it) {
    Observation obs;
    obs.prompt = suggest_next(history, cfg);
    obs.episode_id = static_cast<std::size_t>(it);
    try {
      obs.score = objective(obs.prompt);
      if (!std::isfinite(obs.score)) obs.score = -std::numeric_limits<double>::infinity();
    } catch (const std::exception&) {
      obs.score = -std::numeric_limits<double>::infinity();
    }
    history.push_back(std::move(obs));
  }
  return history;
}

}  // namespace goalprobe
