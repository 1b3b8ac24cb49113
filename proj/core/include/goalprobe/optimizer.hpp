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

#ifndef GOALPROBE_OPTIMIZER_HPP_
#define GOALPROBE_OPTIMIZER_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "goalprobe/surrogate.hpp"

namespace goalprobe {

/// Point of the unit prompt cube [0,1]^D.
using Prompt = std::vector<double>;

struct Observation {
  Prompt prompt;
  double score = 0.0;  // -inf marks a failed evaluation
  std::size_t episode_id = 0;

  bool ok() const { return score > -std::numeric_limits<double>::infinity() && score == score; }
};

enum class SamplerKind { kBo, kSobol };

SamplerKind sampler_kind_from(const std::string& name);
const char* sampler_kind_name(SamplerKind kind);

struct SamplerConfig {
  SamplerKind kind = SamplerKind::kBo;
  int budget = 75;
  double beta = 2.0;
  int candidates = 1024;
  std::uint64_t seed = 0;
  unsigned dim = 2;
  double perturbation = 0.02;
  FitOptions gp;
  /// Skip hyperparameter fitting and condition on these instead.
  std::optional<KernelParams> fixed_kernel;
};

/// Throws std::invalid_argument on budget < 1, candidates < 16, beta < 0.
void validate(const SamplerConfig& cfg);

class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted() : std::runtime_error("sampling budget exhausted") {}
};

double ucb(double mean, double variance, double beta);

/// Acquisition candidates for a BO step: `candidates` Sobol points under a
/// seed-derived Cranley-Patterson shift, then each past prompt nudged by
/// +/- perturbation along every axis (clamped to the cube).
std::vector<Prompt> acquisition_candidates(std::span<const Observation> history, const SamplerConfig& cfg);

/// Next prompt: Sobol index |history|+1 for the baseline and for BO until two
/// successful observations exist; otherwise the UCB argmax over
/// acquisition_candidates (lowest index on ties).
Prompt suggest_next(std::span<const Observation> history, const SamplerConfig& cfg);

/// Fits (or conditions, with fixed_kernel) the surrogate on the successful
/// observations. Returns nullopt with fewer than two.
std::optional<GpModel> fit_surrogate(std::span<const Observation> history, const SamplerConfig& cfg);

using Objective = std::function<double(const Prompt&)>;

/// Sequential suggest/evaluate loop over `cfg.budget` iterations. Objective
/// exceptions are recorded as failed observations.
std::vector<Observation> optimize(const Objective& objective, const SamplerConfig& cfg);

}  // namespace goalprobe

#endif  // GOALPROBE_OPTIMIZER_HPP_
