// Copyright 2026 The Quadloco Authors.
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

#include "quadloco/env/curriculum.hpp"

#include <algorithm>

namespace quadloco::env {

CurriculumState advance_curriculum(const CurriculumState& state,
                                   double epoch_reward,
                                   const CurriculumConfig& config) {
  CurriculumState next = state;
  if (!next.ema_initialized) {
    next.reward_ema = epoch_reward;
    next.ema_initialized = true;
  } else {
    next.reward_ema += config.alpha * (epoch_reward - next.reward_ema);
  }
  if (!config.enabled || next.terrain_index >= kLastTerrainIndex) {
    return next;
  }
  next.epochs_above = next.reward_ema > config.threshold ? next.epochs_above + 1 : 0;
  if (next.epochs_above >= config.patience) {
    next.terrain_index = std::min(next.terrain_index + 1, kLastTerrainIndex);
    next.epochs_above = 0;
  }
  return next;
}

}  // namespace quadloco::env
