// Copyright 2026 The ESS Games Authors.
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

#include "ess/train_config.hpp"

namespace ess {

// Project-wide hyperparameter defaults. The acceptance suite runs with these
// values unchanged.
TrainConfig DefaultTrainConfig(Algorithm algorithm) {
  TrainConfig c;
  c.algorithm = algorithm;
  switch (algorithm) {
    case Algorithm::kValueLearner:
      c.learning_rate = 1e-3;
      break;
    case Algorithm::kPolicyGrad:
      c.learning_rate = 3e-4;
      c.rollout_steps = 1024;
      c.epochs_per_batch = 4;
      c.minibatch_size = 128;
      c.clip_ratio = 0.2;
      c.entropy_coef = 0.01;
      break;
    case Algorithm::kActorCritic:
      c.learning_rate = 7e-4;
      c.rollout_steps = 32;
      c.entropy_coef = 0.01;
      break;
    case Algorithm::kRandomSearch:
      c.arch = nn::Arch::kLinear;
      c.learning_rate = 0.02;
      c.perturb_std = 0.05;
      c.num_directions = 8;
      c.top_fraction = 0.5;
      c.episodes_per_direction = 10;
      break;
  }
  return c;
}

}  // namespace ess
